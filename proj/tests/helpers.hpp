#pragma once

#include <random>
#include <vector>

#include "stocheck/system.hpp"

namespace testutil {

using stocheck::Index;
using stocheck::Matrix;
using stocheck::StepCoefficients;
using stocheck::SystemSchedule;
using stocheck::Tail;
using stocheck::Vector;

inline Matrix scalar(double v) {
  Matrix m(1, 1);
  m(0, 0) = v;
  return m;
}

inline StepCoefficients scalar_step(double f, double g, double h) {
  StepCoefficients c;
  c.F = scalar(f);
  c.G = scalar(g);
  c.H = scalar(h);
  return c;
}

inline SystemSchedule scalar_ti(double f, double g, double h) {
  return SystemSchedule(1, 1, 0, {scalar_step(f, g, h)}, Tail::constant());
}

inline SystemSchedule scalar_periodic(const std::vector<std::array<double, 3>>& steps) {
  std::vector<StepCoefficients> entries;
  for (const auto& s : steps) entries.push_back(scalar_step(s[0], s[1], s[2]));
  return SystemSchedule(1, 1, 0, std::move(entries),
                        Tail::periodic(static_cast<Index>(steps.size())));
}

inline Matrix random_matrix(std::mt19937_64& rng, int rows, int cols, double scale = 1.0) {
  std::normal_distribution<double> dist(0.0, scale);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = dist(rng);
  return m;
}

/// Random schedule with the requested tail; coefficients scaled so moment
/// dynamics stay comfortably bounded over test windows.
inline SystemSchedule random_system(std::mt19937_64& rng, int n, int m, Index steps,
                                    Tail tail, double scale = 0.5) {
  std::vector<StepCoefficients> entries;
  for (Index k = 0; k < steps; ++k) {
    StepCoefficients c;
    c.F = random_matrix(rng, n, n, scale / std::sqrt(static_cast<double>(n)));
    c.G = random_matrix(rng, n, n, scale / std::sqrt(static_cast<double>(n)));
    c.H = random_matrix(rng, m, n, 1.0);
    entries.push_back(std::move(c));
  }
  return SystemSchedule(n, m, 0, std::move(entries), tail);
}

inline Vector random_unit(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = dist(rng);
  return v.normalized();
}

inline std::string fixture(const char* name) {
  return std::string(STOCHECK_FIXTURE_DIR) + "/" + name;
}

}  // namespace testutil
