#pragma once

#include "stocheck/system.hpp"

namespace stocheck {

/// Quadratic form of the stacked transition map: x^T M x = E||x_l||^2 for
/// trajectories launched from the deterministic state x at time k.
struct TransitionGramian {
  Index k = 0;
  Index l = 0;
  Matrix M;
};

/// x^T O x accumulates the output energy sum_{i=k}^{l} E||y_i||^2.
struct ObservabilityGramian {
  Index k = 0;
  Index l = 0;
  Matrix O;
};

/// Explicit stacked map built by the Kronecker recursions. Exponentially sized;
/// exists for cross-validation at small windows only.
struct StackedMap {
  Index k = 0;
  Index l = 0;
  Matrix rows;
};

inline constexpr Index kDefaultStackCap = 12;

TransitionGramian transition_gramian(const SystemSchedule& sys, Index k, Index l);

ObservabilityGramian observability_gramian(const SystemSchedule& sys, Index k, Index l);

StackedMap stacked_transition(const SystemSchedule& sys, Index k, Index l,
                              Index stack_cap = kDefaultStackCap);

StackedMap stacked_output_map(const SystemSchedule& sys, Index k, Index l,
                              Index stack_cap = kDefaultStackCap);

/// Max elementwise discrepancy between the backward-recursion Gramians and the
/// quadratic forms of the explicit stacks.
double gramian_crosscheck(const SystemSchedule& sys, Index k, Index l,
                          Index stack_cap = kDefaultStackCap);

}  // namespace stocheck
