#include "qmeas/random.hpp"

namespace qmeas {

namespace {

ComplexMatrix ginibre(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = complex(re, im);
    }
  }
  return g;
}

}  // namespace

ComplexMatrix random_unitary(Index dim, Rng& rng) {
  const ComplexMatrix g = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < dim; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0.0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

Ket random_ket(Index dim, Rng& rng) {
  const ComplexVector v = ginibre(dim, 1, rng).col(0);
  return Ket(v / v.norm());
}

DensityMatrix random_density(Index dim, Rng& rng) {
  const ComplexMatrix g = ginibre(dim, dim, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix::from_matrix(hermitian_part(rho));
}

ComplexMatrix random_hermitian(Index dim, Rng& rng) {
  return hermitian_part(ginibre(dim, dim, rng));
}

}  // namespace qmeas
