#include "stocheck/cli.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "stocheck/gramians.hpp"
#include "stocheck/report.hpp"
#include "stocheck/system.hpp"

namespace stocheck {

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open system file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Vector parse_x0(const std::string& raw, int n) {
  if (raw.empty()) return Vector::Ones(n);
  std::vector<double> vals;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      vals.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw InputError("cannot parse --x0 entry: " + item);
    }
  }
  if (static_cast<int>(vals.size()) != n)
    throw InputError("--x0 needs exactly n entries");
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = vals[static_cast<std::size_t>(i)];
  return v;
}

void write_csv(const std::string& path, const SimulationEstimate& est) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open CSV output: " + path);
  out << "k,mean_sq_state,stderr_state,mean_sq_output,stderr_output\n";
  char buf[200];
  for (std::size_t j = 0; j < est.mean_sq_state.size(); ++j) {
    std::snprintf(buf, sizeof(buf), "%lld,%.17g,%.17g,%.17g,%.17g\n",
                  static_cast<long long>(est.k0 + static_cast<Index>(j)),
                  est.mean_sq_state[j], est.stderr_state[j], est.mean_sq_output[j],
                  est.stderr_output[j]);
    out << buf;
  }
}

struct CommonArgs {
  std::string file;
  Index k_from = 0;
  Index k_to = 0;
};

JsonValue run_gramian(const SystemSchedule& sys, const std::string& kind, Index k,
                      Index l, Index stack_cap) {
  JsonValue res = JsonValue::object();
  res["analysis"] = "gramian";
  res["kind"] = kind;
  res["k"] = k;
  res["l"] = l;
  if (kind == "transition") {
    const TransitionGramian g = transition_gramian(sys, k, l);
    res["matrix"] = matrix_json(g.M);
    res["lambda_min"] = lambda_min(g.M);
  } else if (kind == "observability") {
    const ObservabilityGramian g = observability_gramian(sys, k, l);
    res["matrix"] = matrix_json(g.O);
    res["lambda_min"] = lambda_min(g.O);
  } else if (kind == "stacked") {
    const StackedMap phi = stacked_transition(sys, k, l, stack_cap);
    const StackedMap hs = stacked_output_map(sys, k, l, stack_cap);
    res["transition_stack"] = matrix_json(phi.rows);
    res["output_stack"] = matrix_json(hs.rows);
    res["crosscheck_discrepancy"] = gramian_crosscheck(sys, k, l, stack_cap);
  } else {
    throw InputError("unknown gramian kind: " + kind);
  }
  return res;
}

JsonValue run_detect(const SystemSchedule& sys, const std::string& notion,
                     const CommonArgs& common, Index s, Index t, double d, double b,
                     Index n_window, const std::string& mode_name, Index cap,
                     Index s_cap, bool grid) {
  const KRange kr{common.k_from, common.k_to};
  JsonValue res = JsonValue::object();
  res["analysis"] = "detect";
  res["notion"] = notion;

  auto decay_mode = [&]() -> DecayMode {
    if (mode_name == "periodic") return DecayMode::PeriodicExact;
    if (mode_name == "ti") return DecayMode::TimeInvariantExact;
    if (mode_name == "empirical") return DecayMode::Empirical;
    throw InputError("unknown decay mode: " + mode_name);
  };

  if (notion == "uniform") {
    if (grid) {
      const GridSearchResult g = uniform_detectability_grid_search(sys, kr);
      res["grid_search"] = true;
      res["found"] = g.found;
      JsonValue w = JsonValue::object();
      w["s"] = g.window.s;
      w["t"] = g.window.t;
      w["d"] = g.window.d;
      w["b"] = g.window.b;
      res["window"] = std::move(w);
      res["best_pass_fraction"] = g.best_pass_fraction;
      res["verdict"] = verdict_json(g.verdict);
    } else {
      res["verdict"] = verdict_json(
          uniform_detectability_check(sys, DetectabilityWindow{s, t, d, b}, kr));
    }
  } else if (notion == "uniform-obs") {
    res["verdict"] = verdict_json(uniform_observability_check(sys, s, b, kr));
  } else if (notion == "kN") {
    res["N"] = n_window;
    res["verdict"] =
        verdict_json(exact_detectability_kN(sys, n_window, kr, decay_mode()));
  } else if (notion == "kN-obs") {
    res["N"] = n_window;
    res["verdict"] = verdict_json(exact_observability_kN(sys, n_window, kr));
  } else if (notion == "kinf") {
    res["cap"] = cap;
    res["verdict"] = verdict_json(exact_detectability_kinf(sys, kr, cap));
  } else if (notion == "kwft") {
    const WftProbe probe = exact_detectability_kwft_probe(sys, kr, s_cap, decay_mode());
    JsonValue ks = JsonValue::array();
    JsonValue ss = JsonValue::array();
    for (std::size_t i = 0; i < probe.k.size(); ++i) {
      ks.push_back(probe.k[i]);
      ss.push_back(probe.s_min[i]);
    }
    res["k"] = std::move(ks);
    res["s_min"] = std::move(ss);
    res["unbounded_trend"] = probe.unbounded_trend;
  } else {
    throw InputError("unknown notion: " + notion);
  }
  return res;
}

}  // namespace

CliResult run_cli(const std::vector<std::string>& args) {
  CLI::App app{"stocheck: stability, detectability and Lyapunov analysis of "
               "linear discrete-time stochastic systems with multiplicative noise"};
  app.require_subcommand(1);

  CommonArgs common;

  // gramian
  auto* cmd_gramian = app.add_subcommand("gramian", "Gramians and stacked maps");
  std::string gr_kind = "observability";
  Index gr_k = 0, gr_l = 0, gr_cap = kDefaultStackCap;
  cmd_gramian->add_option("file", common.file)->required();
  cmd_gramian->add_option("--kind", gr_kind, "transition|observability|stacked");
  cmd_gramian->add_option("--k", gr_k)->required();
  cmd_gramian->add_option("--l", gr_l)->required();
  cmd_gramian->add_option("--stack-cap", gr_cap);

  // detect
  auto* cmd_detect = app.add_subcommand("detect", "Detectability and observability");
  std::string dt_notion = "uniform";
  Index dt_s = 0, dt_t = 0, dt_N = 0, dt_cap = 200, dt_scap = 40;
  double dt_d = 0.5, dt_b = 0.5;
  std::string dt_mode = "empirical";
  bool dt_grid = false;
  cmd_detect->add_option("file", common.file)->required();
  cmd_detect->add_option("--notion", dt_notion,
                         "uniform|uniform-obs|kN|kN-obs|kinf|kwft");
  cmd_detect->add_option("--s", dt_s);
  cmd_detect->add_option("--t", dt_t);
  cmd_detect->add_option("--d", dt_d);
  cmd_detect->add_option("--b", dt_b);
  cmd_detect->add_option("--N", dt_N);
  cmd_detect->add_option("--mode", dt_mode, "periodic|ti|empirical");
  cmd_detect->add_option("--cap", dt_cap);
  cmd_detect->add_option("--s-cap", dt_scap);
  cmd_detect->add_flag("--grid", dt_grid, "search the (s,t,d,b) grid");
  cmd_detect->add_option("--k-from", common.k_from);
  cmd_detect->add_option("--k-to", common.k_to);

  // gle
  auto* cmd_gle = app.add_subcommand("gle", "Generalized Lyapunov equation solvers");
  std::string gle_mode = "backward";
  Index gle_k0 = 0, gle_T = 10, gle_tmax = Index{1} << 15;
  double gle_tol = 1e-10;
  cmd_gle->add_option("file", common.file)->required();
  cmd_gle->add_option("--mode", gle_mode, "backward|limit|periodic");
  cmd_gle->add_option("--k0", gle_k0);
  cmd_gle->add_option("--T", gle_T);
  cmd_gle->add_option("--tol", gle_tol);
  cmd_gle->add_option("--T-max", gle_tmax);
  cmd_gle->add_option("--k-from", common.k_from);
  cmd_gle->add_option("--k-to", common.k_to);

  // stability
  auto* cmd_stab = app.add_subcommand("stability", "ESMS certificates and simulation");
  std::string st_method = "spectral";
  Index st_k0 = 0, st_horizon = 50, st_paths = 10000;
  unsigned long long st_seed = 0;
  std::string st_noise = "rademacher";
  std::string st_x0;
  std::string st_csv;
  cmd_stab->add_option("file", common.file)->required();
  cmd_stab->add_option("--method", st_method, "spectral|monodromy|empirical|simulate");
  cmd_stab->add_option("--k0", st_k0);
  cmd_stab->add_option("--horizon", st_horizon);
  cmd_stab->add_option("--paths", st_paths);
  cmd_stab->add_option("--seed", st_seed);
  cmd_stab->add_option("--noise", st_noise, "rademacher|gaussian");
  cmd_stab->add_option("--x0", st_x0, "comma-separated initial state (default: ones)");
  cmd_stab->add_option("--csv", st_csv, "per-step CSV output path");

  // verify
  auto* cmd_verify = app.add_subcommand("verify", "Lyapunov-type theorem checkers");
  std::string vf_theorem;
  Index vf_N = 0, vf_tmax = Index{1} << 15, vf_horizon = 200;
  Index vf_s = 0, vf_t = 0;
  double vf_d = 0.5, vf_b = 0.5, vf_eps = 0.0, vf_tol = 1e-10;
  bool vf_has_N = false, vf_has_window = false;
  cmd_verify->add_option("file", common.file)->required();
  cmd_verify->add_option("--theorem", vf_theorem,
                         "T4.1.1|T4.1.2|C4.1.3|T5.3.1|T5.3.2|T4.2.1|T5.1.2")
      ->required();
  cmd_verify->add_option("--N", vf_N)->each([&](const std::string&) { vf_has_N = true; });
  cmd_verify->add_option("--s", vf_s)->each([&](const std::string&) { vf_has_window = true; });
  cmd_verify->add_option("--t", vf_t)->each([&](const std::string&) { vf_has_window = true; });
  cmd_verify->add_option("--d", vf_d)->each([&](const std::string&) { vf_has_window = true; });
  cmd_verify->add_option("--b", vf_b)->each([&](const std::string&) { vf_has_window = true; });
  cmd_verify->add_option("--eps", vf_eps);
  cmd_verify->add_option("--tol", vf_tol);
  cmd_verify->add_option("--T-max", vf_tmax);
  cmd_verify->add_option("--horizon", vf_horizon);
  cmd_verify->add_option("--k-from", common.k_from);
  cmd_verify->add_option("--k-to", common.k_to);

  CliResult out;
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out.exit_code = 0;
    out.message = app.help();
    return out;
  } catch (const CLI::ParseError& e) {
    out.exit_code = 2;
    out.message = std::string("argument error: ") + e.what();
    return out;
  }

  const auto t_start = std::chrono::steady_clock::now();
  AnalysisReport report;
  report.command = args;

  try {
    const std::string bytes = slurp(common.file);
    report.input_digest = fnv1a_hex(bytes);
    const SystemSchedule sys = parse_system_json(bytes);

    if (app.got_subcommand(cmd_gramian)) {
      report.results = run_gramian(sys, gr_kind, gr_k, gr_l, gr_cap);
    } else if (app.got_subcommand(cmd_detect)) {
      report.results = run_detect(sys, dt_notion, common, dt_s, dt_t, dt_d, dt_b,
                                  dt_N, dt_mode, dt_cap, dt_scap, dt_grid);
    } else if (app.got_subcommand(cmd_gle)) {
      JsonValue res = JsonValue::object();
      res["analysis"] = "gle";
      res["mode"] = gle_mode;
      if (gle_mode == "backward") {
        res["solution"] = gle_json(gle_backward(sys, gle_k0, gle_T));
      } else if (gle_mode == "limit") {
        res["solution"] =
            gle_json(gle_limit(sys, KRange{common.k_from, common.k_to}, gle_tol, gle_tmax));
      } else if (gle_mode == "periodic") {
        res["solution"] = gle_json(gle_periodic_fixed_point(sys));
      } else {
        throw InputError("unknown gle mode: " + gle_mode);
      }
      report.results = std::move(res);
    } else if (app.got_subcommand(cmd_stab)) {
      JsonValue res = JsonValue::object();
      res["analysis"] = "stability";
      res["method"] = st_method;
      if (st_method == "spectral") {
        res["certificate"] = certificate_json(esms_spectral(sys));
      } else if (st_method == "monodromy") {
        res["certificate"] = certificate_json(esms_monodromy(sys));
      } else if (st_method == "empirical") {
        res["certificate"] = certificate_json(esms_empirical(sys, st_k0, st_horizon));
      } else if (st_method == "simulate") {
        NoiseModel noise;
        noise.seed = st_seed;
        if (st_noise == "rademacher")
          noise.law = NoiseLaw::Rademacher;
        else if (st_noise == "gaussian")
          noise.law = NoiseLaw::StandardGaussian;
        else
          throw InputError("unknown noise law: " + st_noise);
        const Vector x0 = parse_x0(st_x0, sys.n());
        const SimulationEstimate est =
            simulate(sys, x0, st_k0, st_horizon, st_paths, noise);
        if (!st_csv.empty()) write_csv(st_csv, est);
        res["estimate"] = estimate_json(est);
      } else {
        throw InputError("unknown stability method: " + st_method);
      }
      report.results = std::move(res);
    } else if (app.got_subcommand(cmd_verify)) {
      const TheoremTag tag = parse_theorem_tag(vf_theorem);
      TheoremInputs inputs;
      if (vf_has_N) inputs.N = vf_N;
      if (vf_has_window) inputs.window = DetectabilityWindow{vf_s, vf_t, vf_d, vf_b};
      inputs.eps = vf_eps;
      inputs.tol = vf_tol;
      inputs.t_max = vf_tmax;
      inputs.horizon = vf_horizon;
      if (common.k_from != 0 || common.k_to != 0)
        inputs.k_range = KRange{common.k_from, common.k_to};
      JsonValue res = JsonValue::object();
      res["analysis"] = "verify";
      res["verdict"] = lyapunov_json(verify_lyapunov_theorem(tag, sys, inputs));
      report.results = std::move(res);
    }
  } catch (const InputError& e) {
    out.exit_code = 2;
    out.message = std::string("input error: ") + e.what();
    return out;
  } catch (const DomainError& e) {
    out.exit_code = 3;
    out.message = std::string("domain error: ") + e.what();
    return out;
  } catch (const NumericalError& e) {
    out.exit_code = 4;
    out.message = std::string("numerical failure: ") + e.what();
    return out;
  }

  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  out.report = render_report(report);
  return out;
}

}  // namespace stocheck
