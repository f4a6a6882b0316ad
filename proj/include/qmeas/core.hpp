#pragma once

// Dense linear algebra and state primitives shared by every measurement model.
//
// Conventions fixed for the whole library:
//  * row-major tensor ordering with the system factor first and the meter
//    (or any auxiliary) factor second: index(a, m) = a * d_M + m;
//  * hbar = 1;
//  * all values are immutable after construction.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qmeas/errors.hpp"
#include "qmeas/numerics.hpp"

namespace qmeas {

using complex = std::complex<double>;
using Index = Eigen::Index;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr complex kI{0.0, 1.0};

/// Pure state vector. Amplitudes are stored as given; use normalized() to
/// obtain a unit vector.
class Ket {
 public:
  Ket() = default;
  explicit Ket(ComplexVector amplitudes, std::vector<std::string> labels = {});
  Ket(std::initializer_list<complex> amplitudes);

  /// |index> in a d-dimensional computational basis.
  static Ket basis(Index dim, Index index);

  Index dim() const { return amplitudes_.size(); }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  complex operator[](Index i) const { return amplitudes_(i); }
  const std::vector<std::string>& labels() const { return labels_; }

  double norm() const { return amplitudes_.norm(); }
  bool is_normalized(double tol) const;
  /// Throws InvalidArgument for the zero vector.
  Ket normalized() const;

  /// <this|other>
  complex inner(const Ket& other) const;

 private:
  ComplexVector amplitudes_;
  std::vector<std::string> labels_;
};

/// Hermitian operator together with its spectral decomposition.
///
/// Eigenvalues closer than Tolerances::degeneracy are merged into a single
/// outcome whose projector spans the whole eigenspace. Outcomes are ordered by
/// ascending eigenvalue.
class Observable {
 public:
  explicit Observable(const ComplexMatrix& matrix, const Tolerances& tol = {});

  /// Diagonal observable in the computational basis; no eigensolver is run.
  static Observable diagonal(const RealVector& values, const Tolerances& tol = {});

  const ComplexMatrix& matrix() const { return matrix_; }
  Index dim() const { return matrix_.rows(); }

  std::size_t outcome_count() const { return values_.size(); }
  const std::vector<double>& eigenvalues() const { return values_; }
  double eigenvalue(std::size_t outcome) const { return values_.at(outcome); }

  /// Orthonormal eigenvectors (columns), grouped by outcome.
  const ComplexMatrix& eigenbasis() const { return vectors_; }
  /// Eigenvalue belonging to each eigenbasis column.
  RealVector basis_eigenvalues() const;
  /// Columns of eigenbasis() spanning the given outcome's eigenspace.
  ComplexMatrix eigenspace(std::size_t outcome) const;
  Index multiplicity(std::size_t outcome) const;
  ComplexMatrix projector(std::size_t outcome) const;

  /// Outcome whose eigenvalue lies within tol of value; throws InvalidArgument.
  std::size_t outcome_index(double value, double tol) const;

 private:
  Observable() = default;
  void group(const RealVector& sorted_values, double tol);

  ComplexMatrix matrix_;
  ComplexMatrix vectors_;
  std::vector<double> values_;
  std::vector<Index> offsets_;  // outcome k owns columns [offsets_[k], offsets_[k+1])
};

/// Trace-one, Hermitian, positive-semidefinite operator.
class DensityMatrix {
 public:
  static DensityMatrix pure(const Ket& state, const Tolerances& tol = {});
  /// Convex combination of pure states; weights must be non-negative and sum
  /// to one, states normalized.
  static DensityMatrix mixture(std::span<const double> weights, std::span<const Ket> states,
                               const Tolerances& tol = {});
  static DensityMatrix maximally_mixed(Index dim);

  /// Full validation: Hermiticity, unit trace and the eigenvalue bound.
  static DensityMatrix from_matrix(const ComplexMatrix& matrix, const Tolerances& tol = {});

  /// For matrices that are positive by construction (image of a valid state
  /// under a completely positive map). Checks Hermiticity and trace only, so
  /// it stays O(d^2) for large meter grids.
  static DensityMatrix assume_positive(const ComplexMatrix& matrix, const Tolerances& tol = {});

  const ComplexMatrix& matrix() const { return matrix_; }
  Index dim() const { return matrix_.rows(); }
  complex operator()(Index i, Index j) const { return matrix_(i, j); }
  double purity() const;
  RealVector eigenvalues() const;

 private:
  explicit DensityMatrix(ComplexMatrix matrix) : matrix_(std::move(matrix)) {}
  ComplexMatrix matrix_;
};

/// Dimensions of a bipartite space, system (first) factor first.
struct Dims {
  Index first;
  Index second;
};

enum class Keep { First, Second };

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector kron(const ComplexVector& a, const ComplexVector& b);
Ket kron(const Ket& a, const Ket& b);

ComplexMatrix partial_trace(const ComplexMatrix& t, Dims dims, Keep keep);
DensityMatrix partial_trace(const DensityMatrix& t, Dims dims, Keep keep,
                            const Tolerances& tol = {});

/// U rho U^dagger; throws InvalidArgument unless U is unitary.
DensityMatrix evolve(const DensityMatrix& rho, const ComplexMatrix& u, const Tolerances& tol = {});

/// exp(-i t H) assembled from the spectral decomposition of H.
ComplexMatrix matexp_hermitian(const Observable& h, double t);

/// Tr(A rho).
complex expectation(const ComplexMatrix& op, const DensityMatrix& rho);
complex expectation(const Observable& obs, const DensityMatrix& rho);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b);

double max_abs(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol);
bool is_unitary(const ComplexMatrix& m, double tol);

/// Hermitian and anti-Hermitian parts, (A + A^dagger)/2 and (A - A^dagger)/2i.
ComplexMatrix hermitian_part(const ComplexMatrix& a);
ComplexMatrix antihermitian_part(const ComplexMatrix& a);

namespace pauli {
ComplexMatrix identity();
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
}  // namespace pauli

}  // namespace qmeas
