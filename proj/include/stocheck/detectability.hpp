#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stocheck/gramians.hpp"
#include "stocheck/system.hpp"

namespace stocheck {

/// Window parameters of the uniform detectability implication: whenever the
/// state energy over t steps stays above d^2, the output energy over s steps
/// must exceed b^2 of the state energy.
struct DetectabilityWindow {
  Index s = 0;
  Index t = 0;
  double d = 0.0;  // in [0, 1)
  double b = 1.0;  // > 0
};

struct KRange {
  Index lo = 0;
  Index hi = 0;
};

enum class Holds { Yes, No, Undecided };

struct Witness {
  Index k = 0;
  Vector x;
  std::string note;
};

struct DetectabilityVerdict {
  std::string notion;
  Holds holds = Holds::Undecided;
  std::vector<Witness> witnesses;
  KRange k_range;
  bool range_limited = false;  // Yes over a FiniteOnly schedule
  Index checked = 0;
  Index vacuous = 0;  // k values accepted with an empty premise / trivial kernel
};

/// Orthonormal basis of ker O_{k+N,k}; horizon_capped marks the finite stand-in
/// for an infinite-window subspace.
struct UnobservableSubspace {
  Index k = 0;
  Index N = 0;
  bool horizon_capped = false;
  Matrix basis;
};

/// Decision of "x^T M x >= d^2 ||x||^2 implies x^T O x >= b^2 ||x||^2 for all
/// x != 0" via the two-quadratic-form S-procedure.
struct ImplicationResult {
  bool holds = false;
  bool vacuous = false;  // premise set empty: M - d^2 I negative definite
  double tau = 0.0;      // multiplier attaining the max
  double margin = 0.0;   // max_{tau>=0} lambda_min(O - b^2 I - tau (M - d^2 I))
  std::optional<Vector> witness;
};

ImplicationResult sproc_implication(const Matrix& m_form, const Matrix& o_form,
                                    double d, double b);

DetectabilityVerdict uniform_detectability_check(const SystemSchedule& sys,
                                                 const DetectabilityWindow& w,
                                                 const KRange& kr);

struct GridSpec {
  Index s_max = 4;
  Index t_max = 4;
  std::vector<double> d_grid = {0.0, 0.3, 0.6, 0.9};
  std::vector<double> b_grid = {0.01, 0.03, 0.1, 0.3, 1.0};
};

struct GridSearchResult {
  bool found = false;
  DetectabilityWindow window;       // accepting window, or the best-scoring one
  DetectabilityVerdict verdict;     // verdict under `window`
  double best_pass_fraction = 0.0;  // fraction of k values passing under `window`
};

/// Finite search over the existential (s, t, d, b) of the uniform
/// detectability definition.
GridSearchResult uniform_detectability_grid_search(const SystemSchedule& sys,
                                                   const KRange& kr,
                                                   const GridSpec& grid = {});

DetectabilityVerdict uniform_observability_check(const SystemSchedule& sys, Index s,
                                                 double b, const KRange& kr);

inline constexpr double kKernelRankThreshold = 1e-10;

UnobservableSubspace unobservable_subspace(const SystemSchedule& sys, Index k, Index N);

DetectabilityVerdict exact_observability_kN(const SystemSchedule& sys, Index N,
                                            const KRange& kr);

enum class DecayMode { PeriodicExact, TimeInvariantExact, Empirical };

DetectabilityVerdict exact_detectability_kN(const SystemSchedule& sys, Index N,
                                            const KRange& kr, DecayMode mode,
                                            Index empirical_horizon = 200);

DetectabilityVerdict exact_detectability_kinf(const SystemSchedule& sys,
                                              const KRange& kr, Index horizon_cap);

/// Smallest window s <= s_cap at which each k passes the kernel-decay test;
/// -1 when no window up to the cap clears the obstruction. Unbounded growth
/// across the range is the weak-finite-time pattern.
struct WftProbe {
  std::vector<Index> k;
  std::vector<Index> s_min;
  bool unbounded_trend = false;
};

WftProbe exact_detectability_kwft_probe(const SystemSchedule& sys, const KRange& kr,
                                        Index s_cap, DecayMode mode,
                                        Index empirical_horizon = 200);

struct FeedbackInvarianceReport {
  DetectabilityVerdict open_loop;
  DetectabilityVerdict closed_loop;
  bool regrid_attempted = false;
  bool violation = false;  // open Yes, closed No even after the grid search
  std::optional<DetectabilityWindow> recovered_window;
};

/// Output-feedback invariance harness: checks uniform detectability on the
/// open and closed loops; on closed-loop failure, re-searches (d, b) before
/// declaring a violation.
FeedbackInvarianceReport detectability_feedback_invariance_test(
    const SystemSchedule& sys, const FeedbackSchedule& fb,
    const DetectabilityWindow& w, const KRange& kr);

}  // namespace stocheck
