#include "qmeas/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qmeas {

namespace {

std::string shape(const ComplexMatrix& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

ComplexMatrix symmetrized(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

// ---------------------------------------------------------------- Ket

Ket::Ket(ComplexVector amplitudes, std::vector<std::string> labels)
    : amplitudes_(std::move(amplitudes)), labels_(std::move(labels)) {
  if (!labels_.empty() && static_cast<Index>(labels_.size()) != amplitudes_.size()) {
    throw DimensionMismatch("Ket: label count does not match dimension");
  }
}

Ket::Ket(std::initializer_list<complex> amplitudes)
    : amplitudes_(static_cast<Index>(amplitudes.size())) {
  Index i = 0;
  for (const auto& a : amplitudes) amplitudes_(i++) = a;
}

Ket Ket::basis(Index dim, Index index) {
  if (index < 0 || index >= dim) throw InvalidArgument("Ket::basis: index out of range");
  ComplexVector v = ComplexVector::Zero(dim);
  v(index) = 1.0;
  return Ket(std::move(v));
}

bool Ket::is_normalized(double tol) const { return std::abs(norm() - 1.0) <= tol; }

Ket Ket::normalized() const {
  const double n = norm();
  if (!(n > 0.0)) throw InvalidArgument("Ket::normalized: zero vector");
  return Ket(amplitudes_ / n, labels_);
}

complex Ket::inner(const Ket& other) const {
  if (dim() != other.dim()) throw DimensionMismatch("Ket::inner: dimension mismatch");
  return amplitudes_.dot(other.amplitudes_);  // conjugates the left operand
}

// ---------------------------------------------------------------- Observable

Observable::Observable(const ComplexMatrix& matrix, const Tolerances& tol) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
    throw DimensionMismatch("Observable: matrix must be square and non-empty, got " + shape(matrix));
  }
  if (!is_hermitian(matrix, tol.hermiticity)) {
    throw InvalidArgument("Observable: matrix is not Hermitian");
  }
  matrix_ = symmetrized(matrix);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(matrix_);
  if (solver.info() != Eigen::Success) throw ContractViolation("Observable: eigensolver failed");
  vectors_ = solver.eigenvectors();
  group(solver.eigenvalues(), tol.degeneracy);
}

Observable Observable::diagonal(const RealVector& values, const Tolerances& tol) {
  if (values.size() == 0) throw DimensionMismatch("Observable::diagonal: empty spectrum");
  const Index n = values.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return values(a) < values(b); });

  Observable obs;
  obs.matrix_ = values.cast<complex>().asDiagonal();
  obs.vectors_ = ComplexMatrix::Zero(n, n);
  RealVector sorted(n);
  for (Index c = 0; c < n; ++c) {
    obs.vectors_(order[static_cast<std::size_t>(c)], c) = 1.0;
    sorted(c) = values(order[static_cast<std::size_t>(c)]);
  }
  obs.group(sorted, tol.degeneracy);
  return obs;
}

void Observable::group(const RealVector& sorted_values, double tol) {
  values_.clear();
  offsets_.clear();
  const Index n = sorted_values.size();
  Index start = 0;
  for (Index i = 1; i <= n; ++i) {
    if (i == n || sorted_values(i) - sorted_values(start) > tol) {
      values_.push_back(sorted_values.segment(start, i - start).mean());
      offsets_.push_back(start);
      start = i;
    }
  }
  offsets_.push_back(n);
}

RealVector Observable::basis_eigenvalues() const {
  RealVector out(vectors_.cols());
  for (std::size_t k = 0; k < values_.size(); ++k) {
    for (Index c = offsets_[k]; c < offsets_[k + 1]; ++c) out(c) = values_[k];
  }
  return out;
}

Index Observable::multiplicity(std::size_t outcome) const {
  return offsets_.at(outcome + 1) - offsets_.at(outcome);
}

ComplexMatrix Observable::eigenspace(std::size_t outcome) const {
  return vectors_.middleCols(offsets_.at(outcome), multiplicity(outcome));
}

ComplexMatrix Observable::projector(std::size_t outcome) const {
  const ComplexMatrix v = eigenspace(outcome);
  return v * v.adjoint();
}

std::size_t Observable::outcome_index(double value, double tol) const {
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (std::abs(values_[k] - value) <= tol) return k;
  }
  std::ostringstream os;
  os << "Observable: " << value << " is not an eigenvalue";
  throw InvalidArgument(os.str());
}

// ---------------------------------------------------------------- DensityMatrix

DensityMatrix DensityMatrix::pure(const Ket& state, const Tolerances& tol) {
  if (!state.is_normalized(tol.normalization)) {
    throw InvalidArgument("DensityMatrix::pure: state is not normalized");
  }
  const ComplexVector v = state.amplitudes() / state.norm();
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::mixture(std::span<const double> weights, std::span<const Ket> states,
                                     const Tolerances& tol) {
  if (weights.size() != states.size() || states.empty()) {
    throw DimensionMismatch("DensityMatrix::mixture: need one weight per state");
  }
  const Index d = states.front().dim();
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  double total = 0.0;
  for (std::size_t a = 0; a < states.size(); ++a) {
    if (weights[a] < 0.0) throw InvalidArgument("DensityMatrix::mixture: negative weight");
    if (states[a].dim() != d) throw DimensionMismatch("DensityMatrix::mixture: mixed dimensions");
    if (!states[a].is_normalized(tol.normalization)) {
      throw InvalidArgument("DensityMatrix::mixture: state is not normalized");
    }
    const ComplexVector v = states[a].amplitudes() / states[a].norm();
    m += weights[a] * (v * v.adjoint());
    total += weights[a];
  }
  if (std::abs(total - 1.0) > tol.trace) {
    throw InvalidArgument("DensityMatrix::mixture: weights do not sum to one");
  }
  return DensityMatrix(symmetrized(m));
}

DensityMatrix DensityMatrix::maximally_mixed(Index dim) {
  if (dim <= 0) throw DimensionMismatch("DensityMatrix::maximally_mixed: dimension must be positive");
  return DensityMatrix(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::from_matrix(const ComplexMatrix& matrix, const Tolerances& tol) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
    throw DimensionMismatch("DensityMatrix: matrix must be square and non-empty, got " + shape(matrix));
  }
  if (!is_hermitian(matrix, tol.hermiticity)) throw InvalidArgument("DensityMatrix: not Hermitian");
  const ComplexMatrix h = symmetrized(matrix);
  if (std::abs(h.trace().real() - 1.0) > tol.trace) {
    throw InvalidArgument("DensityMatrix: trace differs from one");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -tol.positivity) {
    throw InvalidArgument("DensityMatrix: negative eigenvalue");
  }
  return DensityMatrix(h);
}

DensityMatrix DensityMatrix::assume_positive(const ComplexMatrix& matrix, const Tolerances& tol) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
    throw DimensionMismatch("DensityMatrix: matrix must be square and non-empty, got " + shape(matrix));
  }
  if (!is_hermitian(matrix, tol.hermiticity)) {
    throw ContractViolation("DensityMatrix: result lost Hermiticity");
  }
  const ComplexMatrix h = symmetrized(matrix);
  if (std::abs(h.trace().real() - 1.0) > tol.trace) {
    std::ostringstream os;
    os << "DensityMatrix: trace drifted to " << h.trace().real();
    throw ContractViolation(os.str());
  }
  return DensityMatrix(h);
}

double DensityMatrix::purity() const { return (matrix_ * matrix_).trace().real(); }

RealVector DensityMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(matrix_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

// ---------------------------------------------------------------- products and traces

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

Ket kron(const Ket& a, const Ket& b) { return Ket(kron(a.amplitudes(), b.amplitudes())); }

ComplexMatrix partial_trace(const ComplexMatrix& t, Dims dims, Keep keep) {
  const Index d1 = dims.first;
  const Index d2 = dims.second;
  if (d1 <= 0 || d2 <= 0 || t.rows() != d1 * d2 || t.cols() != d1 * d2) {
    std::ostringstream os;
    os << "partial_trace: operator " << shape(t) << " does not match dims " << d1 << "x" << d2;
    throw DimensionMismatch(os.str());
  }
  if (keep == Keep::First) {
    ComplexMatrix out = ComplexMatrix::Zero(d1, d1);
    for (Index a = 0; a < d1; ++a) {
      for (Index b = 0; b < d1; ++b) out(a, b) = t.block(a * d2, b * d2, d2, d2).trace();
    }
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(d2, d2);
  for (Index a = 0; a < d1; ++a) out += t.block(a * d2, a * d2, d2, d2);
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& t, Dims dims, Keep keep, const Tolerances& tol) {
  return DensityMatrix::assume_positive(partial_trace(t.matrix(), dims, keep), tol);
}

DensityMatrix evolve(const DensityMatrix& rho, const ComplexMatrix& u, const Tolerances& tol) {
  if (u.rows() != rho.dim() || u.cols() != rho.dim()) {
    throw DimensionMismatch("evolve: unitary " + shape(u) + " does not match state");
  }
  if (!is_unitary(u, tol.unitarity)) throw InvalidArgument("evolve: operator is not unitary");
  return DensityMatrix::assume_positive(u * rho.matrix() * u.adjoint(), tol);
}

ComplexMatrix matexp_hermitian(const Observable& h, double t) {
  const RealVector lambda = h.basis_eigenvalues();
  ComplexVector phases(lambda.size());
  for (Index i = 0; i < lambda.size(); ++i) phases(i) = std::exp(-kI * t * lambda(i));
  const ComplexMatrix& v = h.eigenbasis();
  return v * phases.asDiagonal() * v.adjoint();
}

complex expectation(const ComplexMatrix& op, const DensityMatrix& rho) {
  if (op.rows() != rho.dim() || op.cols() != rho.dim()) {
    throw DimensionMismatch("expectation: operator " + shape(op) + " does not match state");
  }
  // Tr(A rho) = sum_ij A_ij rho_ji
  return (op.transpose().cwiseProduct(rho.matrix())).sum();
}

complex expectation(const Observable& obs, const DensityMatrix& rho) {
  return expectation(obs.matrix(), rho);
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }
ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b + b * a; }

double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

bool is_hermitian(const ComplexMatrix& m, double tol) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tol;
}

bool is_unitary(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m.adjoint() * m - ComplexMatrix::Identity(m.rows(), m.cols())) <= tol;
}

ComplexMatrix hermitian_part(const ComplexMatrix& a) { return 0.5 * (a + a.adjoint()); }
ComplexMatrix antihermitian_part(const ComplexMatrix& a) { return (a - a.adjoint()) / (2.0 * kI); }

namespace pauli {
ComplexMatrix identity() { return ComplexMatrix::Identity(2, 2); }
ComplexMatrix x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
ComplexMatrix y() {
  ComplexMatrix m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}
ComplexMatrix z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
}  // namespace pauli

}  // namespace qmeas
