#include "stocheck/report.hpp"

#include <cinttypes>
#include <cstdio>

#include "stocheck/version.hpp"

namespace stocheck {

JsonValue& JsonValue::operator[](const std::string& key) {
  if (!std::holds_alternative<Object>(value_)) value_ = Object{};
  auto& obj = std::get<Object>(value_);
  for (auto& [k, v] : obj)
    if (k == key) return v;
  obj.emplace_back(key, JsonValue());
  return obj.back().second;
}

namespace {

void append_escaped(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void append_double(std::string& out, double d) {
  if (std::isnan(d)) {
    out += "\"nan\"";
    return;
  }
  if (std::isinf(d)) {
    out += d > 0 ? "\"inf\"" : "\"-inf\"";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", d);
  out += buf;
}

}  // namespace

void JsonValue::dump_to(std::string& out) const {
  if (std::holds_alternative<std::nullptr_t>(value_)) {
    out += "null";
  } else if (std::holds_alternative<bool>(value_)) {
    out += std::get<bool>(value_) ? "true" : "false";
  } else if (std::holds_alternative<std::int64_t>(value_)) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%" PRId64, std::get<std::int64_t>(value_));
    out += buf;
  } else if (std::holds_alternative<double>(value_)) {
    append_double(out, std::get<double>(value_));
  } else if (std::holds_alternative<std::string>(value_)) {
    append_escaped(out, std::get<std::string>(value_));
  } else if (std::holds_alternative<Array>(value_)) {
    out += '[';
    const auto& arr = std::get<Array>(value_);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (i) out += ',';
      arr[i].dump_to(out);
    }
    out += ']';
  } else {
    out += '{';
    const auto& obj = std::get<Object>(value_);
    for (std::size_t i = 0; i < obj.size(); ++i) {
      if (i) out += ',';
      append_escaped(out, obj[i].first);
      out += ':';
      obj[i].second.dump_to(out);
    }
    out += '}';
  }
}

std::string JsonValue::dump() const {
  std::string out;
  dump_to(out);
  return out;
}

JsonValue matrix_json(const Matrix& m) {
  JsonValue rows = JsonValue::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    JsonValue row = JsonValue::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

JsonValue vector_json(const Vector& v) {
  JsonValue arr = JsonValue::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

JsonValue vector_json(const std::vector<double>& v) {
  JsonValue arr = JsonValue::array();
  for (double d : v) arr.push_back(d);
  return arr;
}

namespace {

const char* holds_name(Holds h) {
  switch (h) {
    case Holds::Yes: return "yes";
    case Holds::No: return "no";
    case Holds::Undecided: return "undecided";
  }
  return "?";
}

const char* verdict_name(StabilityVerdict v) {
  switch (v) {
    case StabilityVerdict::Esms: return "ESMS";
    case StabilityVerdict::NotEsms: return "NotESMS";
    case StabilityVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

const char* conclusion_name(TheoremConclusion c) {
  switch (c) {
    case TheoremConclusion::Esms: return "ESMS";
    case TheoremConclusion::SolutionExistsPsd: return "SolutionExistsPSD";
    case TheoremConclusion::NotApplicable: return "NotApplicable";
  }
  return "?";
}

}  // namespace

JsonValue verdict_json(const DetectabilityVerdict& v) {
  JsonValue j = JsonValue::object();
  j["notion"] = v.notion;
  j["holds"] = holds_name(v.holds);
  j["k_lo"] = v.k_range.lo;
  j["k_hi"] = v.k_range.hi;
  j["range_limited"] = v.range_limited;
  j["checked"] = v.checked;
  j["vacuous"] = v.vacuous;
  JsonValue wits = JsonValue::array();
  for (const auto& w : v.witnesses) {
    JsonValue jw = JsonValue::object();
    jw["k"] = w.k;
    jw["x"] = vector_json(w.x);
    jw["note"] = w.note;
    wits.push_back(std::move(jw));
  }
  j["witnesses"] = std::move(wits);
  return j;
}

JsonValue certificate_json(const EsmsCertificate& c) {
  JsonValue j = JsonValue::object();
  j["verdict"] = verdict_name(c.verdict);
  j["beta"] = c.beta;
  j["lambda"] = c.lambda;
  JsonValue ev = JsonValue::object();
  switch (c.evidence.kind) {
    case EsmsEvidenceKind::SpectralRadius:
      ev["kind"] = "spectral-radius";
      ev["rho"] = c.evidence.rho;
      ev["operator_dim"] = c.evidence.operator_dim;
      break;
    case EsmsEvidenceKind::Monodromy:
      ev["kind"] = "monodromy";
      ev["rho"] = c.evidence.rho;
      ev["operator_dim"] = c.evidence.operator_dim;
      ev["period"] = c.evidence.period;
      break;
    case EsmsEvidenceKind::EmpiricalFit:
      ev["kind"] = "empirical-fit";
      ev["horizon"] = c.evidence.horizon;
      ev["fitted_rate"] = c.evidence.fitted_rate;
      ev["residual"] = c.evidence.residual;
      ev["diverged"] = c.evidence.diverged;
      break;
  }
  j["evidence"] = std::move(ev);
  return j;
}

JsonValue estimate_json(const SimulationEstimate& e) {
  JsonValue j = JsonValue::object();
  j["k0"] = e.k0;
  j["horizon"] = e.horizon;
  j["paths"] = e.paths;
  j["seed"] = static_cast<long long>(e.seed);
  j["noise"] = e.law == NoiseLaw::Rademacher ? "rademacher" : "gaussian";
  j["mean_sq_state"] = vector_json(e.mean_sq_state);
  j["stderr_state"] = vector_json(e.stderr_state);
  j["mean_sq_output"] = vector_json(e.mean_sq_output);
  j["stderr_output"] = vector_json(e.stderr_output);
  return j;
}

JsonValue gle_json(const GleSolution& s) {
  JsonValue j = JsonValue::object();
  j["k0"] = s.k0;
  j["horizon_used"] = s.horizon_used;
  j["final_gap"] = s.final_gap;
  JsonValue ps = JsonValue::array();
  for (const auto& p : s.P) ps.push_back(matrix_json(p));
  j["P"] = std::move(ps);
  j["residuals"] = vector_json(s.residuals);
  return j;
}

JsonValue glo_json(const GloSpectrum& s) {
  JsonValue j = JsonValue::object();
  JsonValue evs = JsonValue::array();
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
    JsonValue ev = JsonValue::object();
    ev["re"] = s.eigenvalues(i).real();
    ev["im"] = s.eigenvalues(i).imag();
    evs.push_back(std::move(ev));
  }
  j["eigenvalues"] = std::move(evs);
  j["beta"] = s.beta;
  if (s.psd_witness) {
    j["psd_witness"] = matrix_json(*s.psd_witness);
    j["witness_residual"] = s.witness_residual;
  } else {
    j["psd_witness"] = nullptr;
  }
  return j;
}

JsonValue lyapunov_json(const LyapunovVerdict& v) {
  JsonValue j = JsonValue::object();
  j["theorem"] = theorem_tag_name(v.tag);
  JsonValue checks = JsonValue::array();
  for (const auto& c : v.checks) {
    JsonValue jc = JsonValue::object();
    jc["name"] = c.name;
    jc["passed"] = c.passed;
    jc["detail"] = c.detail;
    checks.push_back(std::move(jc));
  }
  j["hypotheses"] = std::move(checks);
  j["conclusion"] = conclusion_name(v.conclusion);
  JsonValue metrics = JsonValue::object();
  for (const auto& [k, val] : v.metrics) metrics[k] = val;
  j["metrics"] = std::move(metrics);
  if (v.solution) j["solution"] = gle_json(*v.solution);
  return j;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return std::string("fnv1a64:") + buf;
}

std::string render_report(const AnalysisReport& report) {
  JsonValue j = JsonValue::object();
  j["schema"] = "stocheck-report-v1";
  j["tool_version"] = kVersion;
  j["input_digest"] = report.input_digest;
  JsonValue cmd = JsonValue::array();
  for (const auto& c : report.command) cmd.push_back(c);
  j["command"] = std::move(cmd);
  j["results"] = report.results;
  j["wall_time_seconds"] = report.wall_time_seconds;
  return j.dump() + "\n";
}

}  // namespace stocheck
