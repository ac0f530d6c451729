#include "stocheck/system.hpp"

#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace stocheck {

namespace {

void check_dims(const Matrix& a, Eigen::Index rows, Eigen::Index cols,
                const std::string& name, Index k) {
  if (a.rows() != rows || a.cols() != cols) {
    std::ostringstream os;
    os << name << " at step " << k << " is " << a.rows() << "x" << a.cols()
       << ", expected " << rows << "x" << cols;
    throw DimensionMismatch(os.str());
  }
}

}  // namespace

SystemSchedule::SystemSchedule(int n, int m, int p,
                               std::vector<StepCoefficients> entries, Tail tail)
    : n_(n), m_(m), p_(p), entries_(std::move(entries)), tail_(tail) {
  if (n_ <= 0 || m_ <= 0 || p_ < 0)
    throw DimensionMismatch("dimensions must satisfy n > 0, m > 0, p >= 0");
  if (entries_.empty()) throw DimensionMismatch("schedule needs at least one entry");
  if (tail_.kind == TailKind::Periodic) {
    if (tail_.period < 1) throw DimensionMismatch("periodic tail needs period >= 1");
    if (tail_.period != length())
      throw DimensionMismatch("periodic tail requires entry count == period");
  }
  for (Index k = 0; k < length(); ++k) {
    const auto& e = entries_[static_cast<std::size_t>(k)];
    check_dims(e.F, n_, n_, "F", k);
    check_dims(e.G, n_, n_, "G", k);
    check_dims(e.H, m_, n_, "H", k);
    if (p_ > 0) {
      if (!e.M || !e.N)
        throw DimensionMismatch("p > 0 requires M and N at every step");
      check_dims(*e.M, n_, p_, "M", k);
      check_dims(*e.N, n_, p_, "N", k);
    }
  }
}

const StepCoefficients& SystemSchedule::coeff(Index k) const {
  if (k < 0) throw IndexBeyondSchedule("negative time index");
  switch (tail_.kind) {
    case TailKind::Constant:
      return entries_[static_cast<std::size_t>(std::min(k, length() - 1))];
    case TailKind::Periodic:
      return entries_[static_cast<std::size_t>(k % tail_.period)];
    case TailKind::FiniteOnly:
      if (k >= length()) {
        std::ostringstream os;
        os << "index " << k << " beyond finite schedule of length " << length();
        throw IndexBeyondSchedule(os.str());
      }
      return entries_[static_cast<std::size_t>(k)];
  }
  throw IndexBeyondSchedule("unreachable");
}

void SystemSchedule::require_window(Index k, Index l) const {
  if (k < 0 || l < k) throw IndexBeyondSchedule("window requires 0 <= k <= l");
  if (!window_valid(k, l)) {
    std::ostringstream os;
    os << "window [" << k << ", " << l << "] beyond finite schedule of length "
       << length();
    throw IndexBeyondSchedule(os.str());
  }
}

bool SystemSchedule::dynamics_time_invariant() const {
  const auto& f0 = entries_.front().F;
  const auto& g0 = entries_.front().G;
  for (const auto& e : entries_) {
    if (e.F != f0 || e.G != g0) return false;
  }
  return true;
}

FeedbackSchedule::FeedbackSchedule(int p, int m, std::vector<Matrix> gains, Tail tail)
    : p_(p), m_(m), gains_(std::move(gains)), tail_(tail) {
  if (p_ <= 0) throw NoControlChannel("feedback schedule requires p > 0");
  if (gains_.empty()) throw DimensionMismatch("feedback schedule needs at least one gain");
  if (tail_.kind == TailKind::Periodic && tail_.period != length())
    throw DimensionMismatch("periodic tail requires gain count == period");
  for (Index k = 0; k < length(); ++k)
    check_dims(gains_[static_cast<std::size_t>(k)], p_, m_, "K", k);
}

const Matrix& FeedbackSchedule::gain(Index k) const {
  if (k < 0) throw IndexBeyondSchedule("negative time index");
  switch (tail_.kind) {
    case TailKind::Constant:
      return gains_[static_cast<std::size_t>(std::min(k, length() - 1))];
    case TailKind::Periodic:
      return gains_[static_cast<std::size_t>(k % tail_.period)];
    case TailKind::FiniteOnly:
      if (k >= length()) throw IndexBeyondSchedule("gain index beyond finite schedule");
      return gains_[static_cast<std::size_t>(k)];
  }
  throw IndexBeyondSchedule("unreachable");
}

namespace {

// Normal form of a tail: transient prefix length plus cycle length.
// Constant(L) has prefix L-1 and cycle 1; Periodic(tau) has prefix 0, cycle tau.
struct TailShape {
  bool finite;
  Index valid_len;  // for finite
  Index prefix;
  Index cycle;
};

TailShape shape_of(TailKind kind, Index period, Index len) {
  switch (kind) {
    case TailKind::Constant:
      return {false, 0, len - 1, 1};
    case TailKind::Periodic:
      return {false, 0, 0, period};
    case TailKind::FiniteOnly:
      return {true, len, 0, 0};
  }
  return {true, 0, 0, 0};
}

struct CombinedTail {
  Tail tail;
  Index entry_count;
};

// Exact combination when representable in the Constant/Periodic/FiniteOnly
// vocabulary; otherwise a FiniteOnly description covering both transients
// plus two full cycles.
CombinedTail combine_tails(const TailShape& a, const TailShape& b) {
  if (a.finite || b.finite) {
    Index len = std::min(a.finite ? a.valid_len : std::numeric_limits<Index>::max(),
                         b.finite ? b.valid_len : std::numeric_limits<Index>::max());
    return {Tail::finite_only(), len};
  }
  const Index prefix = std::max(a.prefix, b.prefix);
  const Index cycle = std::lcm(a.cycle, b.cycle);
  if (cycle == 1) return {Tail::constant(), prefix + 1};
  if (prefix == 0) return {Tail::periodic(cycle), cycle};
  return {Tail::finite_only(), prefix + 2 * cycle};
}

}  // namespace

SystemSchedule closed_loop(const SystemSchedule& sys, const FeedbackSchedule& fb) {
  if (sys.p() == 0) throw NoControlChannel("closed_loop requires p > 0");
  if (fb.p() != sys.p() || fb.m() != sys.m())
    throw DimensionMismatch("feedback gains must be p x m");

  const auto combined =
      combine_tails(shape_of(sys.tail().kind, sys.tail().period, sys.length()),
                    shape_of(fb.tail().kind, fb.tail().period, fb.length()));

  std::vector<StepCoefficients> entries;
  entries.reserve(static_cast<std::size_t>(combined.entry_count));
  for (Index k = 0; k < combined.entry_count; ++k) {
    const auto& c = sys.coeff(k);
    const Matrix& kk = fb.gain(k);
    StepCoefficients e;
    e.F = c.F + *c.M * kk * c.H;
    e.G = c.G + *c.N * kk * c.H;
    e.H = c.H;
    entries.push_back(std::move(e));
  }
  return SystemSchedule(sys.n(), sys.m(), 0, std::move(entries), combined.tail);
}

SystemSchedule output_injection_loop(const SystemSchedule& sys,
                                     const std::vector<Matrix>& gains, Tail tail) {
  if (gains.empty()) throw DimensionMismatch("need at least one injection gain");
  for (const auto& k : gains)
    if (k.rows() != sys.n() || k.cols() != sys.m())
      throw DimensionMismatch("injection gains must be n x m");
  const Index gains_len = static_cast<Index>(gains.size());
  if (tail.kind == TailKind::Periodic && tail.period != gains_len)
    throw DimensionMismatch("periodic tail requires gain count == period");

  auto gain_at = [&](Index k) -> const Matrix& {
    switch (tail.kind) {
      case TailKind::Constant:
        return gains[static_cast<std::size_t>(std::min(k, gains_len - 1))];
      case TailKind::Periodic:
        return gains[static_cast<std::size_t>(k % tail.period)];
      case TailKind::FiniteOnly:
        if (k >= gains_len) throw IndexBeyondSchedule("gain index beyond schedule");
        return gains[static_cast<std::size_t>(k)];
    }
    throw IndexBeyondSchedule("unreachable");
  };

  TailShape gain_shape = shape_of(tail.kind, tail.period, gains_len);
  const auto combined = combine_tails(
      shape_of(sys.tail().kind, sys.tail().period, sys.length()), gain_shape);

  std::vector<StepCoefficients> entries;
  entries.reserve(static_cast<std::size_t>(combined.entry_count));
  for (Index k = 0; k < combined.entry_count; ++k) {
    const auto& c = sys.coeff(k);
    StepCoefficients e;
    e.F = c.F + gain_at(k) * c.H;
    e.G = c.G;
    e.H = c.H;
    entries.push_back(std::move(e));
  }
  return SystemSchedule(sys.n(), sys.m(), 0, std::move(entries), combined.tail);
}

namespace {

using nlohmann::json;

Matrix parse_matrix(const json& j, const std::string& name) {
  if (!j.is_array() || j.empty())
    throw InputError(name + ": expected a non-empty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty())
    throw InputError(name + ": rows must be non-empty arrays");
  const std::size_t cols = j[0].size();
  Matrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      throw InputError(name + ": ragged rows");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[i][c].is_number())
        throw InputError(name + ": entries must be finite numbers");
      const double v = j[i][c].get<double>();
      if (!std::isfinite(v)) throw InputError(name + ": non-finite entry");
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = v;
    }
  }
  return out;
}

}  // namespace

SystemSchedule parse_system_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("system file is not valid JSON: ") + e.what());
  }
  try {
    if (!j.is_object()) throw InputError("system file must be a JSON object");
    for (const auto& key : {"n", "m", "p", "tail", "entries"})
      if (!j.contains(key)) throw InputError(std::string("missing field: ") + key);

    const int n = j.at("n").get<int>();
    const int m = j.at("m").get<int>();
    const int p = j.at("p").get<int>();

    const json& jt = j.at("tail");
    if (!jt.is_object() || !jt.contains("kind"))
      throw InputError("tail must be an object with a kind");
    const std::string kind = jt.at("kind").get<std::string>();
    Tail tail;
    if (kind == "constant") {
      tail = Tail::constant();
    } else if (kind == "periodic") {
      if (!jt.contains("period")) throw InputError("periodic tail needs a period");
      tail = Tail::periodic(jt.at("period").get<Index>());
    } else if (kind == "finite") {
      tail = Tail::finite_only();
    } else {
      throw InputError("unknown tail kind: " + kind);
    }

    std::vector<StepCoefficients> entries;
    for (const auto& je : j.at("entries")) {
      StepCoefficients e;
      e.F = parse_matrix(je.at("F"), "F");
      e.G = parse_matrix(je.at("G"), "G");
      e.H = parse_matrix(je.at("H"), "H");
      if (je.contains("M")) e.M = parse_matrix(je.at("M"), "M");
      if (je.contains("N")) e.N = parse_matrix(je.at("N"), "N");
      entries.push_back(std::move(e));
    }
    return SystemSchedule(n, m, p, std::move(entries), tail);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed system file: ") + e.what());
  } catch (const DimensionMismatch& e) {
    throw InputError(std::string("inconsistent system file: ") + e.what());
  }
}

SystemSchedule load_system_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open system file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_system_json(buf.str());
}

}  // namespace stocheck
