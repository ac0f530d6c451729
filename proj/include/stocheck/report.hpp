#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "stocheck/detectability.hpp"
#include "stocheck/lyapunov.hpp"
#include "stocheck/stability.hpp"

namespace stocheck {

/// Insertion-ordered JSON value with a deterministic text form: objects keep
/// field order, floating-point numbers are written with 17 significant digits.
class JsonValue {
 public:
  using Array = std::vector<JsonValue>;
  using Object = std::vector<std::pair<std::string, JsonValue>>;

  JsonValue() : value_(nullptr) {}
  JsonValue(std::nullptr_t) : value_(nullptr) {}
  JsonValue(bool b) : value_(b) {}
  JsonValue(double d) : value_(d) {}
  JsonValue(int i) : value_(static_cast<std::int64_t>(i)) {}
  JsonValue(long i) : value_(static_cast<std::int64_t>(i)) {}
  JsonValue(long long i) : value_(static_cast<std::int64_t>(i)) {}
  JsonValue(unsigned long long i) : value_(static_cast<std::int64_t>(i)) {}
  JsonValue(const char* s) : value_(std::string(s)) {}
  JsonValue(std::string s) : value_(std::move(s)) {}

  static JsonValue array() {
    JsonValue v;
    v.value_ = Array{};
    return v;
  }
  static JsonValue object() {
    JsonValue v;
    v.value_ = Object{};
    return v;
  }

  void push_back(JsonValue v) { std::get<Array>(value_).push_back(std::move(v)); }

  /// Object field access; inserts at the end on first use.
  JsonValue& operator[](const std::string& key);

  std::string dump() const;

 private:
  void dump_to(std::string& out) const;

  std::variant<std::nullptr_t, bool, std::int64_t, double, std::string, Array, Object>
      value_;
};

JsonValue matrix_json(const Matrix& m);
JsonValue vector_json(const Vector& v);
JsonValue vector_json(const std::vector<double>& v);

JsonValue verdict_json(const DetectabilityVerdict& v);
JsonValue certificate_json(const EsmsCertificate& c);
JsonValue estimate_json(const SimulationEstimate& e);
JsonValue gle_json(const GleSolution& s);
JsonValue glo_json(const GloSpectrum& s);
JsonValue lyapunov_json(const LyapunovVerdict& v);

/// 64-bit FNV-1a content digest, hex encoded.
std::string fnv1a_hex(const std::string& bytes);

struct AnalysisReport {
  std::string input_digest;
  std::vector<std::string> command;
  JsonValue results = JsonValue::object();
  double wall_time_seconds = 0.0;
};

std::string render_report(const AnalysisReport& report);

}  // namespace stocheck
