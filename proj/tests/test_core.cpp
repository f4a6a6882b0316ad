#include <doctest.h>

#include <numbers>

#include "support.hpp"

using namespace qmeas;
using testing::diag2;

TEST_CASE("kron of identities is the identity") {
  CHECK(max_abs(kron(pauli::identity(), pauli::identity()) - ComplexMatrix::Identity(4, 4)) == 0.0);
}

TEST_CASE("kron trace is multiplicative") {
  const ComplexMatrix k = kron(diag2(1.0, 2.0), diag2(3.0, 4.0));
  CHECK(std::abs(k.trace() - complex(21.0)) < 1e-15);
}

TEST_CASE("kron uses system-first row-major ordering") {
  const ComplexVector v = kron(Ket::basis(2, 1).amplitudes(), Ket::basis(2, 0).amplitudes());
  CHECK(v(2) == complex(1.0));
  const ComplexVector out = kron(pauli::z(), pauli::identity()) * v;
  CHECK((out + v).norm() < 1e-15);
}

TEST_CASE("partial trace of a product state returns the factors") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix s = random_density(3, rng);
    const DensityMatrix m = random_density(4, rng);
    const DensityMatrix t = DensityMatrix::from_matrix(kron(s.matrix(), m.matrix()));
    CHECK(max_abs(partial_trace(t, {3, 4}, Keep::First).matrix() - s.matrix()) < 1e-12);
    CHECK(max_abs(partial_trace(t, {3, 4}, Keep::Second).matrix() - m.matrix()) < 1e-12);
  }
}

TEST_CASE("partial trace of a Bell state is maximally mixed") {
  const double r = 1.0 / std::sqrt(2.0);
  const Ket bell{r, 0.0, 0.0, r};
  const DensityMatrix red = partial_trace(DensityMatrix::pure(bell), {2, 2}, Keep::Second);
  CHECK(max_abs(red.matrix() - 0.5 * pauli::identity()) < 1e-15);
}

TEST_CASE("partial trace of the strong double-qubit joint state") {
  // CNOT on |0>|0> built directly: alpha = 1, theta = 0 leaves |00>.
  ComplexMatrix cnot = ComplexMatrix::Zero(4, 4);
  cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1.0;
  const DensityMatrix tau = evolve(DensityMatrix::pure(Ket{1.0, 0.0, 0.0, 0.0}), cnot);
  const DensityMatrix s = partial_trace(tau, {2, 2}, Keep::First);
  CHECK(max_abs(s.matrix() - diag2(1.0, 0.0)) < 1e-15);
}

TEST_CASE("partial trace rejects inconsistent dimensions") {
  CHECK_THROWS_AS(partial_trace(ComplexMatrix::Identity(6, 6), {4, 2}, Keep::First), DimensionMismatch);
}

TEST_CASE("evolve examples") {
  Rng rng(5);
  const DensityMatrix rho = random_density(3, rng);
  CHECK(max_abs(evolve(rho, ComplexMatrix::Identity(3, 3)).matrix() - rho.matrix()) < 1e-15);
  const DensityMatrix flipped = evolve(DensityMatrix::pure(Ket::basis(2, 0)), pauli::x());
  CHECK(max_abs(flipped.matrix() - diag2(0.0, 1.0)) < 1e-15);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix r = random_density(4, rng);
    const ComplexMatrix u = random_unitary(4, rng);
    CHECK(std::abs(evolve(r, u).matrix().trace() - complex(1.0)) < 1e-12);
  }
  CHECK_THROWS_AS(evolve(rho, 2.0 * ComplexMatrix::Identity(3, 3)), InvalidArgument);
  CHECK_THROWS_AS(evolve(rho, ComplexMatrix::Identity(2, 2)), DimensionMismatch);
}

TEST_CASE("matexp_hermitian closed forms") {
  const double theta = 0.7;
  const ComplexMatrix ez = matexp_hermitian(Observable(pauli::z()), theta);
  CHECK(max_abs(ez - diag2(std::exp(-kI * theta), std::exp(kI * theta))) < 1e-14);
  Rng rng(2);
  const Observable h(random_hermitian(5, rng));
  CHECK(max_abs(matexp_hermitian(h, 0.0) - ComplexMatrix::Identity(5, 5)) < 1e-14);
  const ComplexMatrix ex = matexp_hermitian(Observable(pauli::x()), std::numbers::pi / 2.0);
  CHECK(max_abs(ex - (-kI) * pauli::x()) < 1e-12);
}

TEST_CASE("expectation examples") {
  CHECK(std::abs(expectation(Observable(pauli::z()), DensityMatrix::pure(Ket::basis(2, 0))) - complex(1.0)) < 1e-15);
  CHECK(std::abs(expectation(Observable(pauli::z()), DensityMatrix::maximally_mixed(2))) < 1e-15);
  const complex v = expectation(testing::box_projector(0), DensityMatrix::pure(testing::three_box_pre()));
  CHECK(std::abs(v - complex(1.0 / 3.0)) < 1e-15);
}

TEST_CASE("density matrices from random constructions are valid") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const DensityMatrix r = random_density(1 + trial % 6, rng);
    CHECK(is_hermitian(r.matrix(), 1e-12));
    CHECK(std::abs(r.matrix().trace() - complex(1.0)) < 1e-12);
    CHECK(r.eigenvalues().minCoeff() >= -1e-10);
  }
}

TEST_CASE("density matrix validation errors") {
  ComplexMatrix bad = diag2(0.5, 0.5);
  bad(0, 1) = 0.3;
  CHECK_THROWS_AS(DensityMatrix::from_matrix(bad), InvalidArgument);
  CHECK_THROWS_AS(DensityMatrix::from_matrix(diag2(0.7, 0.7)), InvalidArgument);
  CHECK_THROWS_AS(DensityMatrix::from_matrix(diag2(1.5, -0.5)), InvalidArgument);
  CHECK_THROWS_AS(DensityMatrix::from_matrix(ComplexMatrix::Identity(2, 3)), DimensionMismatch);
  CHECK_THROWS_AS(DensityMatrix::assume_positive(diag2(0.7, 0.7)), ContractViolation);
  CHECK_THROWS_AS(DensityMatrix::pure(Ket{1.0, 1.0}), InvalidArgument);
  Tolerances loose;
  loose.positivity = 1.0;
  CHECK_NOTHROW(DensityMatrix::from_matrix(diag2(1.5, -0.5), loose));
}

TEST_CASE("mixtures") {
  const std::vector<double> w{0.25, 0.75};
  const std::vector<Ket> k{Ket::basis(2, 0), Ket::basis(2, 1)};
  const DensityMatrix m = DensityMatrix::mixture(w, k);
  CHECK(max_abs(m.matrix() - diag2(0.25, 0.75)) < 1e-15);
  CHECK(std::abs(m.purity() - 0.625) < 1e-15);
  const std::vector<double> bad{0.5, 0.6};
  CHECK_THROWS_AS(DensityMatrix::mixture(bad, k), InvalidArgument);
}

TEST_CASE("trace cyclicity on random triples") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix a = random_hermitian(4, rng) + kI * random_hermitian(4, rng);
    const ComplexMatrix b = random_unitary(4, rng);
    const ComplexMatrix c = random_density(4, rng).matrix();
    CHECK(std::abs((a * b * c).trace() - (b * c * a).trace()) < 1e-10);
  }
}

TEST_CASE("partial trace preserves the trace") {
  Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const DensityMatrix t = random_density(6, rng);
    CHECK(std::abs(partial_trace(t, {2, 3}, Keep::First).matrix().trace() - complex(1.0)) < 1e-12);
    CHECK(std::abs(partial_trace(t, {2, 3}, Keep::Second).matrix().trace() - complex(1.0)) < 1e-12);
  }
}

TEST_CASE("spectral round trip") {
  Rng rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const Observable obs(random_hermitian(1 + trial % 7, rng));
    ComplexMatrix rebuilt = ComplexMatrix::Zero(obs.dim(), obs.dim());
    for (std::size_t k = 0; k < obs.outcome_count(); ++k) rebuilt += obs.eigenvalue(k) * obs.projector(k);
    CHECK(max_abs(rebuilt - obs.matrix()) < 1e-10);
  }
}

TEST_CASE("degenerate eigenvalues merge into one outcome") {
  Rng rng(10);
  const ComplexMatrix u = random_unitary(4, rng);
  RealVector v(4);
  v << 1.0, 1.0 + 1e-11, -2.0, 3.0;
  const Observable obs(u * v.cast<complex>().asDiagonal() * u.adjoint());
  REQUIRE(obs.outcome_count() == 3);
  CHECK(obs.multiplicity(obs.outcome_index(1.0, 1e-6)) == 2);
  const ComplexMatrix p = obs.projector(obs.outcome_index(1.0, 1e-6));
  CHECK(max_abs(p * p - p) < 1e-10);
  CHECK(std::abs(p.trace() - complex(2.0)) < 1e-10);
  CHECK(obs.eigenvalues().front() < obs.eigenvalues().back());
}

TEST_CASE("observable rejects non-Hermitian input") {
  ComplexMatrix m = pauli::x();
  m(0, 1) = 2.0;
  CHECK_THROWS_AS(Observable{m}, InvalidArgument);
  CHECK_THROWS_AS(Observable{ComplexMatrix::Zero(2, 3)}, DimensionMismatch);
}

TEST_CASE("ket inner product conjugates the left operand") {
  const Ket a{complex(0.0, 1.0), 0.0};
  const Ket b{1.0, 0.0};
  CHECK(std::abs(a.inner(b) - complex(0.0, -1.0)) < 1e-15);
  CHECK_THROWS_AS(a.inner(Ket::basis(3, 0)), DimensionMismatch);
}

TEST_CASE("Hermitian and anti-Hermitian parts recombine") {
  Rng rng(12);
  const ComplexMatrix a = random_unitary(3, rng);
  CHECK(max_abs(hermitian_part(a) + kI * antihermitian_part(a) - a) < 1e-14);
  CHECK(is_hermitian(hermitian_part(a), 1e-14));
  CHECK(is_hermitian(antihermitian_part(a), 1e-14));
}
