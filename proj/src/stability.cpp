#include "stocheck/stability.hpp"

#include <cmath>
#include <cstdlib>
#include <thread>

namespace stocheck {

MomentTrajectory propagate_second_moment(const SystemSchedule& sys, const Matrix& x0,
                                         Index k0, Index horizon) {
  if (x0.rows() != sys.n() || x0.cols() != sys.n())
    throw DimensionMismatch("initial moment must be n x n");
  if (horizon < 0) throw IndexBeyondSchedule("horizon must be nonnegative");
  if (horizon > 0) sys.require_window(k0, k0 + horizon - 1);
  else if (k0 < 0) throw IndexBeyondSchedule("negative start time");

  MomentTrajectory traj;
  traj.k0 = k0;
  traj.X.reserve(static_cast<std::size_t>(horizon) + 1);
  traj.X.push_back(symmetrize(x0));
  for (Index j = 0; j < horizon; ++j) {
    const auto& c = sys.coeff(k0 + j);
    const Matrix& x = traj.X.back();
    traj.X.push_back(symmetrize(c.F * x * c.F.transpose() + c.G * x * c.G.transpose()));
  }
  return traj;
}

namespace {

double padded_rate(double rho) {
  // Keep the certificate rate strictly inside (rho, 1).
  return rho + std::min(1e-6, (1.0 - rho) / 2.0);
}

// sup_k ||op^k|| / lambda^k over the first `powers` powers, with the sqrt(n)
// factor relating Frobenius moment norms to traces.
double transient_bound(const std::vector<Matrix>& step_ops, double lambda, int n,
                       int powers = 200) {
  const Index tau = static_cast<Index>(step_ops.size());
  double beta = 1.0;
  const double root_n = std::sqrt(static_cast<double>(n));
  for (Index phase = 0; phase < tau; ++phase) {
    Matrix acc = Matrix::Identity(step_ops[0].rows(), step_ops[0].cols());
    double scale = 1.0;
    for (int j = 1; j <= powers; ++j) {
      acc = step_ops[static_cast<std::size_t>((phase + j - 1) % tau)] * acc;
      scale *= lambda;
      const double norm = acc.operatorNorm();
      beta = std::max(beta, root_n * norm / scale);
      if (norm < 1e-300) break;
    }
  }
  return beta;
}

EsmsCertificate verdict_from_radius(double rho, EsmsEvidence evidence,
                                    const std::vector<Matrix>& step_ops, int n,
                                    double per_step_exponent) {
  EsmsCertificate cert;
  cert.evidence = std::move(evidence);
  if (rho < 1.0 - kVerdictBand) {
    cert.verdict = StabilityVerdict::Esms;
    const double padded = padded_rate(rho);
    cert.lambda = std::pow(padded, per_step_exponent);
    cert.beta = transient_bound(step_ops, cert.lambda, n);
  } else if (rho > 1.0 + kVerdictBand) {
    cert.verdict = StabilityVerdict::NotEsms;
    cert.lambda = std::pow(rho, per_step_exponent);
    cert.beta = 1.0;
  } else {
    cert.verdict = StabilityVerdict::Inconclusive;
    cert.lambda = std::pow(rho, per_step_exponent);
    cert.beta = 1.0;
  }
  return cert;
}

}  // namespace

EsmsCertificate esms_spectral(const SystemSchedule& sys) {
  if (!sys.time_invariant())
    throw NotTimeInvariant("esms_spectral requires a constant tail with one entry");
  const auto& c = sys.coeff(0);
  const Matrix op = moment_operator(c.F, c.G);
  const double rho = spectral_radius(op);

  EsmsEvidence ev;
  ev.kind = EsmsEvidenceKind::SpectralRadius;
  ev.rho = rho;
  ev.operator_dim = op.rows();
  return verdict_from_radius(rho, ev, {op}, sys.n(), 1.0);
}

EsmsCertificate esms_monodromy(const SystemSchedule& sys) {
  if (sys.tail().kind != TailKind::Periodic)
    throw NotPeriodic("esms_monodromy requires a periodic tail");
  const Index tau = sys.tail().period;

  std::vector<Matrix> step_ops;
  step_ops.reserve(static_cast<std::size_t>(tau));
  for (Index k = 0; k < tau; ++k) {
    const auto& c = sys.coeff(k);
    step_ops.push_back(moment_operator(c.F, c.G));
  }
  Matrix period_map = Matrix::Identity(step_ops[0].rows(), step_ops[0].cols());
  for (Index k = 0; k < tau; ++k) period_map = step_ops[static_cast<std::size_t>(k)] * period_map;
  const double rho = spectral_radius(period_map);

  EsmsEvidence ev;
  ev.kind = EsmsEvidenceKind::Monodromy;
  ev.rho = rho;
  ev.operator_dim = period_map.rows();
  ev.period = tau;
  return verdict_from_radius(rho, ev, step_ops, sys.n(), 1.0 / static_cast<double>(tau));
}

EsmsCertificate esms_empirical(const SystemSchedule& sys, Index k0, Index horizon) {
  if (horizon < 10) throw DomainError("esms_empirical needs horizon >= 10");

  EsmsEvidence ev;
  ev.kind = EsmsEvidenceKind::EmpiricalFit;
  ev.horizon = horizon;

  // Propagate step by step so a divergent system can be flagged early.
  Matrix x = Matrix::Identity(sys.n(), sys.n());
  std::vector<double> traces;
  traces.reserve(static_cast<std::size_t>(horizon) + 1);
  traces.push_back(x.trace());
  for (Index j = 0; j < horizon; ++j) {
    const auto& c = sys.coeff(k0 + j);
    x = symmetrize(c.F * x * c.F.transpose() + c.G * x * c.G.transpose());
    const double tr = x.trace();
    traces.push_back(tr);
    if (tr > kDivergenceBound) {
      EsmsCertificate cert;
      ev.diverged = true;
      ev.fitted_rate = traces[traces.size() - 2] > 0.0
                           ? tr / traces[traces.size() - 2]
                           : std::numeric_limits<double>::infinity();
      cert.evidence = ev;
      cert.verdict = StabilityVerdict::NotEsms;
      cert.lambda = ev.fitted_rate;
      return cert;
    }
    if (tr < 1e-300) {
      // Dead moment: everything afterwards is exactly zero.
      EsmsCertificate cert;
      ev.fitted_rate = 0.0;
      cert.evidence = ev;
      cert.verdict = StabilityVerdict::Esms;
      cert.lambda = 1e-15;
      cert.beta = 1.0;
      return cert;
    }
  }

  // Least-squares slope of log trace over the tail half.
  const std::size_t lo = traces.size() / 2;
  const std::size_t count = traces.size() - lo;
  double mean_j = 0.0, mean_v = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    mean_j += static_cast<double>(i);
    mean_v += std::log(traces[lo + i]);
  }
  mean_j /= static_cast<double>(count);
  mean_v /= static_cast<double>(count);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double dj = static_cast<double>(i) - mean_j;
    sxx += dj * dj;
    sxy += dj * (std::log(traces[lo + i]) - mean_v);
  }
  const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  const double rate = std::exp(slope);
  double ss = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double fit = mean_v + slope * (static_cast<double>(i) - mean_j);
    const double r = std::log(traces[lo + i]) - fit;
    ss += r * r;
  }
  const double residual = std::sqrt(ss / static_cast<double>(count));

  ev.fitted_rate = rate;
  ev.residual = residual;

  EsmsCertificate cert;
  cert.evidence = ev;
  if (rate < 0.99 && residual <= 0.05) {
    cert.verdict = StabilityVerdict::Esms;
    cert.lambda = padded_rate(rate);
    double beta = 1.0;
    for (std::size_t i = 1; i < traces.size(); ++i)
      beta = std::max(beta, traces[i] / (traces[0] * std::pow(cert.lambda,
                                                              static_cast<double>(i))));
    cert.beta = beta;
  } else {
    cert.verdict = StabilityVerdict::Inconclusive;
    cert.lambda = rate;
  }
  return cert;
}

namespace {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Counter-based substream: output j of path p depends only on (seed, p, j).
class PathStream {
 public:
  PathStream(std::uint64_t seed, std::uint64_t path)
      : key_(splitmix64(seed ^ splitmix64(path + 0x1D8E4E27C47D124FULL))) {}

  double rademacher() { return (next() >> 63) ? 1.0 : -1.0; }

  double gaussian() {
    const double u1 = to_unit(next());
    const double u2 = to_unit(next());
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

 private:
  std::uint64_t next() { return splitmix64(key_ + 0x9E3779B97F4A7C15ULL * (++counter_)); }
  static double to_unit(std::uint64_t x) {
    return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;  // strictly in (0,1)
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

struct BlockSums {
  std::vector<double> sum_x, sumsq_x, sum_y, sumsq_y;
};

constexpr Index kPathBlock = 4096;

}  // namespace

int resolved_thread_cap() {
  if (const char* env = std::getenv("STOCHECK_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<int>(std::min<long>(v, 256));
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

SimulationEstimate simulate(const SystemSchedule& sys, const Vector& x0, Index k0,
                            Index horizon, Index paths, const NoiseModel& noise) {
  if (paths < 1) throw DomainError("simulate needs paths >= 1");
  if (horizon < 1) throw DomainError("simulate needs horizon >= 1");
  if (x0.size() != sys.n()) throw DimensionMismatch("x0 must have length n");
  sys.require_window(k0, k0 + horizon);

  const std::size_t steps = static_cast<std::size_t>(horizon) + 1;
  std::vector<const StepCoefficients*> cs(steps);
  for (std::size_t j = 0; j < steps; ++j) cs[j] = &sys.coeff(k0 + static_cast<Index>(j));

  const Index nblocks = (paths + kPathBlock - 1) / kPathBlock;
  std::vector<BlockSums> blocks(static_cast<std::size_t>(nblocks));

  auto run_block = [&](Index b) {
    BlockSums& acc = blocks[static_cast<std::size_t>(b)];
    acc.sum_x.assign(steps, 0.0);
    acc.sumsq_x.assign(steps, 0.0);
    acc.sum_y.assign(steps, 0.0);
    acc.sumsq_y.assign(steps, 0.0);
    const Index lo = b * kPathBlock;
    const Index hi = std::min(paths, lo + kPathBlock);
    Vector x(sys.n()), xn(sys.n()), y(sys.m());
    const bool rademacher = noise.law == NoiseLaw::Rademacher;
    for (Index p = lo; p < hi; ++p) {
      PathStream rng(noise.seed, static_cast<std::uint64_t>(p));
      x = x0;
      for (std::size_t j = 0; j < steps; ++j) {
        const double sx = x.squaredNorm();
        y.noalias() = cs[j]->H * x;
        const double sy = y.squaredNorm();
        acc.sum_x[j] += sx;
        acc.sumsq_x[j] += sx * sx;
        acc.sum_y[j] += sy;
        acc.sumsq_y[j] += sy * sy;
        if (j + 1 < steps) {
          const double w = rademacher ? rng.rademacher() : rng.gaussian();
          xn.noalias() = cs[j]->F * x;
          xn.noalias() += w * (cs[j]->G * x);
          x.swap(xn);
        }
      }
    }
  };

  const int workers = std::min<Index>(resolved_thread_cap(), nblocks);
  if (workers <= 1) {
    for (Index b = 0; b < nblocks; ++b) run_block(b);
  } else {
    std::atomic<Index> next_block{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (;;) {
          const Index b = next_block.fetch_add(1);
          if (b >= nblocks) return;
          run_block(b);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  SimulationEstimate est;
  est.k0 = k0;
  est.horizon = horizon;
  est.paths = paths;
  est.seed = noise.seed;
  est.law = noise.law;
  est.mean_sq_state.assign(steps, 0.0);
  est.stderr_state.assign(steps, 0.0);
  est.mean_sq_output.assign(steps, 0.0);
  est.stderr_output.assign(steps, 0.0);

  // Blocks are combined in index order so results do not depend on scheduling.
  std::vector<double> sum_x(steps, 0.0), sumsq_x(steps, 0.0);
  std::vector<double> sum_y(steps, 0.0), sumsq_y(steps, 0.0);
  for (const auto& b : blocks) {
    for (std::size_t j = 0; j < steps; ++j) {
      sum_x[j] += b.sum_x[j];
      sumsq_x[j] += b.sumsq_x[j];
      sum_y[j] += b.sum_y[j];
      sumsq_y[j] += b.sumsq_y[j];
    }
  }
  const double np = static_cast<double>(paths);
  for (std::size_t j = 0; j < steps; ++j) {
    est.mean_sq_state[j] = sum_x[j] / np;
    est.mean_sq_output[j] = sum_y[j] / np;
    if (paths > 1) {
      const double var_x =
          std::max(0.0, (sumsq_x[j] - sum_x[j] * sum_x[j] / np) / (np - 1.0));
      const double var_y =
          std::max(0.0, (sumsq_y[j] - sum_y[j] * sum_y[j] / np) / (np - 1.0));
      est.stderr_state[j] = std::sqrt(var_x / np);
      est.stderr_output[j] = std::sqrt(var_y / np);
    }
  }
  return est;
}

}  // namespace stocheck
