#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stocheck/detectability.hpp"
#include "stocheck/system.hpp"

namespace stocheck {

/// Solution of the generalized Lyapunov equation
/// -P_k + F_k^T P_{k+1} F_k + G_k^T P_{k+1} G_k + H_k^T H_k = 0.
struct GleSolution {
  Index k0 = 0;  // P[j] is P_{k0 + j}
  std::vector<Matrix> P;
  std::vector<double> residuals;  // GLE residual at k0 + j (where computable)
  Index horizon_used = 0;
  double final_gap = 0.0;  // last monotone increment observed by the limit solver

  double max_residual() const {
    double r = 0.0;
    for (double v : residuals) r = std::max(r, v);
    return r;
  }
};

GleSolution gle_backward(const SystemSchedule& sys, Index k0, Index horizon,
                         const std::optional<Matrix>& terminal = std::nullopt);

/// Monotone-bounded limit of the finite-horizon solutions over a Constant or
/// Periodic tail. Throws NoConvergence when T_max is hit and
/// MonotonicityViolated on a numerical ordering failure.
GleSolution gle_limit(const SystemSchedule& sys, const KRange& kr, double tol,
                      Index t_max);

/// Tau-periodic solution as a linear fixed point in vectorized coordinates.
GleSolution gle_periodic_fixed_point(const SystemSchedule& sys);

/// Spectrum of the generalized Lyapunov operator Z -> F Z F^T + G Z G^T with a
/// positive-semidefinite eigenvector for the spectral radius when one is found.
struct GloSpectrum {
  Eigen::VectorXcd eigenvalues;
  double beta = 0.0;
  std::optional<Matrix> psd_witness;  // Frobenius-normalized
  double witness_residual = 0.0;      // ||L(X) - beta X||_F for the witness
};

GloSpectrum glo_spectrum(const Matrix& f, const Matrix& g);

enum class TheoremTag { T411, T412, C413, T531, T532, T421, T512 };

TheoremTag parse_theorem_tag(const std::string& name);
std::string theorem_tag_name(TheoremTag tag);

struct HypothesisCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

enum class TheoremConclusion { Esms, SolutionExistsPsd, NotApplicable };

struct LyapunovVerdict {
  TheoremTag tag = TheoremTag::T411;
  std::vector<HypothesisCheck> checks;
  TheoremConclusion conclusion = TheoremConclusion::NotApplicable;
  std::optional<GleSolution> solution;
  std::map<std::string, double> metrics;

  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

struct TheoremInputs {
  std::optional<DetectabilityWindow> window;        // T4.1.2
  std::optional<Index> N;                           // K^N hypotheses
  std::optional<std::vector<Matrix>> candidate_P;   // supplied GLE solution
  double eps = 0.0;                                 // C4.1.3; 0 derives it from H
  double tol = 1e-10;
  Index t_max = Index{1} << 15;
  Index horizon = 200;
  std::optional<KRange> k_range;                    // detectability domain override
};

LyapunovVerdict verify_lyapunov_theorem(TheoremTag tag, const SystemSchedule& sys,
                                        const TheoremInputs& inputs);

}  // namespace stocheck
