#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "stocheck/errors.hpp"
#include "stocheck/linalg.hpp"

namespace stocheck {

enum class TailKind { Constant, Periodic, FiniteOnly };

struct Tail {
  TailKind kind = TailKind::Constant;
  Index period = 0;  // only meaningful for Periodic

  static Tail constant() { return {TailKind::Constant, 0}; }
  static Tail periodic(Index tau) { return {TailKind::Periodic, tau}; }
  static Tail finite_only() { return {TailKind::FiniteOnly, 0}; }
};

/// One step of the coefficient schedule: x_{k+1} = F x_k + G x_k w_k, y_k = H x_k,
/// with optional control channel (F x + M u) + (G x + N u) w.
struct StepCoefficients {
  Matrix F;
  Matrix G;
  Matrix H;
  std::optional<Matrix> M;
  std::optional<Matrix> N;
};

/// Finitely described time-varying coefficient schedule. Immutable after
/// construction; safe to share across threads.
class SystemSchedule {
 public:
  SystemSchedule(int n, int m, int p, std::vector<StepCoefficients> entries, Tail tail);

  int n() const { return n_; }
  int m() const { return m_; }
  int p() const { return p_; }
  Index length() const { return static_cast<Index>(entries_.size()); }
  const Tail& tail() const { return tail_; }
  const std::vector<StepCoefficients>& entries() const { return entries_; }

  /// Coefficient lookup under the tail rule. Throws IndexBeyondSchedule for
  /// FiniteOnly schedules queried at k >= length().
  const StepCoefficients& coeff(Index k) const;

  /// First index at which coeff() is undefined (max Index when total).
  Index validity_end() const {
    return tail_.kind == TailKind::FiniteOnly ? length()
                                              : std::numeric_limits<Index>::max();
  }

  /// True when every index in [k, l] is answerable.
  bool window_valid(Index k, Index l) const {
    return k >= 0 && l >= k && l < validity_end();
  }

  void require_window(Index k, Index l) const;

  /// All F_k and G_k identical over the description (time-invariant dynamics;
  /// H may still vary).
  bool dynamics_time_invariant() const;

  bool time_invariant() const {
    return tail_.kind == TailKind::Constant && length() == 1;
  }

 private:
  int n_, m_, p_;
  std::vector<StepCoefficients> entries_;
  Tail tail_;
};

/// Output feedback gain schedule u_k = K_k y_k, same tail vocabulary.
class FeedbackSchedule {
 public:
  FeedbackSchedule(int p, int m, std::vector<Matrix> gains, Tail tail);

  int p() const { return p_; }
  int m() const { return m_; }
  Index length() const { return static_cast<Index>(gains_.size()); }
  const Tail& tail() const { return tail_; }
  const Matrix& gain(Index k) const;

 private:
  int p_, m_;
  std::vector<Matrix> gains_;
  Tail tail_;
};

enum class NoiseLaw { Rademacher, StandardGaussian };

/// The only properties the analysis relies on: E w_k = 0, E[w_k w_j] = delta_kj.
struct NoiseModel {
  NoiseLaw law = NoiseLaw::Rademacher;
  std::uint64_t seed = 0;
};

/// Closed loop under output feedback u_k = K_k y_k:
/// F_k + M_k K_k H_k and G_k + N_k K_k H_k, control channel removed.
SystemSchedule closed_loop(const SystemSchedule& sys, const FeedbackSchedule& fb);

/// Output-injection loop x_{k+1} = (F_k + K_k H_k) x_k + G_k x_k w_k whose ESMS
/// defines stochastic detectability. Gains are n x m with the same tail rules.
SystemSchedule output_injection_loop(const SystemSchedule& sys,
                                     const std::vector<Matrix>& gains, Tail tail);

/// Parse the JSON system file format. Rejects NaN/Inf entries, ragged rows and
/// dimension mismatches.
SystemSchedule parse_system_json(const std::string& text);
SystemSchedule load_system_file(const std::string& path);

}  // namespace stocheck
