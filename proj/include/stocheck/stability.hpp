#pragma once

#include <vector>

#include "stocheck/system.hpp"

namespace stocheck {

/// Deterministic second-moment trajectory X_k = E[x_k x_k^T] under
/// X_{k+1} = F_k X_k F_k^T + G_k X_k G_k^T.
struct MomentTrajectory {
  Index k0 = 0;
  std::vector<Matrix> X;  // X[j] is the moment at time k0 + j

  double trace_at(std::size_t j) const { return X[j].trace(); }
};

enum class StabilityVerdict { Esms, NotEsms, Inconclusive };

enum class EsmsEvidenceKind { SpectralRadius, Monodromy, EmpiricalFit };

struct EsmsEvidence {
  EsmsEvidenceKind kind = EsmsEvidenceKind::SpectralRadius;
  double rho = 0.0;          // spectral radius (per period map for monodromy)
  Index operator_dim = 0;    // n^2 for the vectorized operator
  Index period = 0;          // monodromy only
  Index horizon = 0;         // empirical only
  double fitted_rate = 0.0;  // empirical per-step rate
  double residual = 0.0;     // empirical fit residual (log scale, RMS)
  bool diverged = false;     // empirical trace blow-up beyond the divergence bound
};

/// Decay certificate E||x_k||^2 <= beta E||x_{k0}||^2 lambda^(k-k0).
struct EsmsCertificate {
  StabilityVerdict verdict = StabilityVerdict::Inconclusive;
  double beta = 1.0;    // >= 1, meaningful when verdict == Esms
  double lambda = 0.0;  // per-step rate in (0,1) when verdict == Esms
  EsmsEvidence evidence;
};

struct SimulationEstimate {
  Index k0 = 0;
  Index horizon = 0;
  Index paths = 0;
  std::uint64_t seed = 0;
  NoiseLaw law = NoiseLaw::Rademacher;
  std::vector<double> mean_sq_state;  // E||x_k||^2 estimates, k = k0..k0+T
  std::vector<double> stderr_state;
  std::vector<double> mean_sq_output;
  std::vector<double> stderr_output;
};

inline constexpr double kVerdictBand = 1e-9;
inline constexpr double kDivergenceBound = 1e12;

MomentTrajectory propagate_second_moment(const SystemSchedule& sys, const Matrix& x0,
                                         Index k0, Index horizon);

/// Spectral-radius test of the vectorized operator F (x) F + G (x) G for a
/// time-invariant schedule (Constant tail with a single entry).
EsmsCertificate esms_spectral(const SystemSchedule& sys);

/// Spectral radius of the product of per-step vectorized moment maps over one
/// period; lambda reported per-step as rho^(1/tau) with padding.
EsmsCertificate esms_monodromy(const SystemSchedule& sys);

/// Least-squares decay fit of log trace X_k over the tail half of the horizon,
/// started from X = I. A finite window cannot refute ESMS, so the verdict is
/// Inconclusive unless the decay margin is clear; trace divergence beyond
/// 1e12 reports NotESMS with the evidence flagged as heuristic.
EsmsCertificate esms_empirical(const SystemSchedule& sys, Index k0, Index horizon);

/// Forward-samples x_{k+1} = F_k x_k + G_k x_k w_k. Reproducible: the result is
/// a function of (inputs, seed) only, independent of thread scheduling; paths
/// use counter-based substreams keyed by (seed, path index). STOCHECK_THREADS
/// caps worker threads.
SimulationEstimate simulate(const SystemSchedule& sys, const Vector& x0, Index k0,
                            Index horizon, Index paths, const NoiseModel& noise);

/// Worker cap resolved from STOCHECK_THREADS (falls back to hardware concurrency).
int resolved_thread_cap();

}  // namespace stocheck
