#include "stocheck/gramians.hpp"

#include <sstream>

namespace stocheck {

TransitionGramian transition_gramian(const SystemSchedule& sys, Index k, Index l) {
  sys.require_window(k, l == k ? k : l - 1);
  Matrix m = Matrix::Identity(sys.n(), sys.n());
  for (Index j = l - 1; j >= k; --j) {
    const auto& c = sys.coeff(j);
    m = symmetrize(c.F.transpose() * m * c.F + c.G.transpose() * m * c.G);
  }
  return {k, l, std::move(m)};
}

ObservabilityGramian observability_gramian(const SystemSchedule& sys, Index k, Index l) {
  sys.require_window(k, l);
  const auto& last = sys.coeff(l);
  Matrix o = symmetrize(last.H.transpose() * last.H);
  for (Index j = l - 1; j >= k; --j) {
    const auto& c = sys.coeff(j);
    o = symmetrize(c.H.transpose() * c.H + c.F.transpose() * o * c.F +
                   c.G.transpose() * o * c.G);
  }
  return {k, l, std::move(o)};
}

namespace {

void require_stack_window(const SystemSchedule& sys, Index k, Index l, Index cap) {
  if (l - k > cap) {
    std::ostringstream os;
    os << "window " << l - k << " exceeds stack cap " << cap;
    throw WindowTooLarge(os.str());
  }
  sys.require_window(k, l);
}

// phi_{j+1,k} = (I (x) [F_j; G_j]) phi_{j,k}: each n-row block B of phi_{j,k}
// expands to [F_j B; G_j B].
Matrix extend_transition(const SystemSchedule& sys, const Matrix& phi, Index j, int n) {
  const auto& c = sys.coeff(j);
  const Eigen::Index blocks = phi.rows() / n;
  Matrix out(2 * phi.rows(), n);
  for (Eigen::Index b = 0; b < blocks; ++b) {
    const auto block = phi.middleRows(b * n, n);
    out.middleRows(2 * b * n, n) = c.F * block;
    out.middleRows((2 * b + 1) * n, n) = c.G * block;
  }
  return out;
}

}  // namespace

StackedMap stacked_transition(const SystemSchedule& sys, Index k, Index l,
                              Index stack_cap) {
  require_stack_window(sys, k, l, stack_cap);
  Matrix phi = Matrix::Identity(sys.n(), sys.n());
  for (Index j = k; j < l; ++j) phi = extend_transition(sys, phi, j, sys.n());
  return {k, l, std::move(phi)};
}

StackedMap stacked_output_map(const SystemSchedule& sys, Index k, Index l,
                              Index stack_cap) {
  require_stack_window(sys, k, l, stack_cap);
  const int n = sys.n();
  const int m = sys.m();

  Eigen::Index total_rows = 0;
  for (Index j = k; j <= l; ++j) total_rows += (Eigen::Index{1} << (j - k)) * m;

  Matrix stack(total_rows, n);
  Matrix phi = Matrix::Identity(n, n);
  Eigen::Index row = 0;
  for (Index j = k; j <= l; ++j) {
    if (j > k) phi = extend_transition(sys, phi, j - 1, n);
    const Matrix& h = sys.coeff(j).H;
    const Eigen::Index blocks = phi.rows() / n;
    for (Eigen::Index b = 0; b < blocks; ++b) {
      stack.middleRows(row, m) = h * phi.middleRows(b * n, n);
      row += m;
    }
  }
  return {k, l, std::move(stack)};
}

double gramian_crosscheck(const SystemSchedule& sys, Index k, Index l,
                          Index stack_cap) {
  const Matrix o = observability_gramian(sys, k, l).O;
  const Matrix m = transition_gramian(sys, k, l).M;
  const Matrix hs = stacked_output_map(sys, k, l, stack_cap).rows;
  const Matrix ps = stacked_transition(sys, k, l, stack_cap).rows;
  const double d_obs = max_abs(hs.transpose() * hs - o);
  const double d_tr = max_abs(ps.transpose() * ps - m);
  return std::max(d_obs, d_tr);
}

}  // namespace stocheck
