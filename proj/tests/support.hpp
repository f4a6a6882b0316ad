#pragma once

#include <cmath>
#include <vector>

#include "qmeas/core.hpp"
#include "qmeas/random.hpp"

namespace testing {

using namespace qmeas;

/// Least-squares slope of log|y| against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double lx = std::log(x[k]);
    const double ly = std::log(std::abs(y[k]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline const std::vector<double>& coupling_decade() {
  static const std::vector<double> g{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  return g;
}

inline Ket qubit(double theta, double phi) {
  return Ket{std::cos(theta / 2.0), std::exp(kI * phi) * std::sin(theta / 2.0)};
}

inline Ket three_box_pre() {
  const double r = 1.0 / std::sqrt(3.0);
  return Ket{r, r, r};
}

inline Ket three_box_post() {
  const double r = 1.0 / std::sqrt(3.0);
  return Ket{r, r, -r};
}

inline Observable box_projector(Index box) {
  RealVector v = RealVector::Zero(3);
  v(box) = 1.0;
  return Observable::diagonal(v);
}

inline ComplexMatrix diag2(complex a, complex b) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace testing
