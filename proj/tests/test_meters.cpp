#include <doctest.h>

#include "qmeas/ancilla.hpp"
#include "qmeas/meters.hpp"
#include "qmeas/weakpost.hpp"
#include "support.hpp"

using namespace qmeas;
using namespace testing;

TEST_CASE("zero shift leaves the pointer unchanged") {
  const GaussianPointer m = GaussianPointer::with_default_grid(1.0, 0.5, 1.0);
  CHECK((m.pointer_shift(0.0) - m.initial()).norm() < 1e-15);
}

TEST_CASE("shifted pointer is centred at g s") {
  const GaussianPointer m = GaussianPointer::with_default_grid(1.3, 0.4, 2.0);
  for (double s : {-2.0, -0.5, 1.0, 2.0}) {
    CHECK(std::abs(pointer_moments(m, m.pointer_shift(s)).q - 0.4 * s) < 1e-8);
  }
}

TEST_CASE("Gaussian marker overlap") {
  for (double g : {0.05, 0.3, 1.0, 2.0}) {
    const GaussianPointer m = GaussianPointer::with_default_grid(1.0, g, 1.0);
    CHECK(std::abs(gaussian_overlap(m, g, -g) - std::exp(-g * g / 2.0)) < 1e-6);
  }
}

TEST_CASE("von Neumann joint state is the weighted superposition of shifted packets") {
  const double g = 0.7;
  const GaussianPointer m = GaussianPointer::with_default_grid(1.0, g, 1.0);
  const Observable z(pauli::z());
  const double r = 1.0 / std::sqrt(2.0);
  const Ket s{r, r};
  const ComplexVector joint = premeasure_pure(von_neumann_premeasurement(m, z), s);
  const ComplexVector expected = r * kron(Ket::basis(2, 0).amplitudes(), m.shifted(g)) +
                                 r * kron(Ket::basis(2, 1).amplitudes(), m.shifted(-g));
  CHECK((joint - expected).norm() < 1e-14);
}

TEST_CASE("von Neumann pointer moments") {
  Rng rng(51);
  const Observable z(pauli::z());
  for (double g : {0.1, 0.5, 1.5}) {
    const GaussianPointer m = GaussianPointer::with_default_grid(1.0, g, 1.0);
    const PointerMoments m0 = pointer_moments(m, m.initial());
    for (int trial = 0; trial < 5; ++trial) {
      const DensityMatrix sigma0 = random_density(2, rng);
      const PointerMoments m1 = pointer_moments(m, meter_reduced(von_neumann_premeasurement(m, z), sigma0));
      const double mean = expectation(z, sigma0).real();
      CHECK(std::abs(m1.q - g * mean) < 1e-8);
      CHECK(std::abs(m1.q_variance() - (m0.q_variance() + g * g * (1.0 - mean * mean))) < 1e-8);
    }
  }
}

TEST_CASE("initial Gaussian moments") {
  for (double delta : {0.5, 1.0, 2.0}) {
    const GaussianPointer m = GaussianPointer::with_default_grid(delta, 0.1, 1.0);
    const PointerMoments p = pointer_moments(m, m.initial());
    CHECK(std::abs(p.q) < 1e-12);
    CHECK(std::abs(p.q2 - delta * delta) < 1e-10);
    CHECK(std::abs(p.p2 - 1.0 / (4.0 * delta * delta)) < 1e-10);
    CHECK(std::abs(p.p) < 1e-12);
    CHECK(std::abs(p.qp_anti) < 1e-12);
  }
}

TEST_CASE("double-qubit meter markers") {
  const auto [a0, b0] = QubitMeter{0.0}.markers();
  CHECK((a0.amplitudes() - Ket::basis(2, 0).amplitudes()).norm() < 1e-15);
  CHECK((b0.amplitudes() - Ket::basis(2, 1).amplitudes()).norm() < 1e-15);
  const auto [a1, b1] = QubitMeter{std::numbers::pi / 2.0}.markers();
  CHECK((a1.amplitudes() - b1.amplitudes()).norm() < 1e-15);
  for (double theta : {0.1, 0.7, 1.3, 2.5}) {
    const auto [p, m] = qubit_meter_markers(QubitMeter{theta});
    CHECK(std::abs(p.inner(m) - complex(std::sin(theta))) < 1e-15);
  }
}

TEST_CASE("doubling the grid leaves the moments unchanged") {
  const Observable z(pauli::z());
  const DensityMatrix sigma0 = DensityMatrix::pure(qubit(1.0, 0.4));
  const double g = 0.6, delta = 1.0, half = 10.0 * delta + 10.0 * g;
  const GaussianPointer coarse(delta, g, half, 512);
  const GaussianPointer fine(delta, g, half, 1024);
  REQUIRE(delta >= 10.0 * coarse.dq());
  const PointerMoments a = pointer_moments(coarse, meter_reduced(von_neumann_premeasurement(coarse, z), sigma0));
  const PointerMoments b = pointer_moments(fine, meter_reduced(von_neumann_premeasurement(fine, z), sigma0));
  CHECK(std::abs(a.q - b.q) < 1e-8);
  CHECK(std::abs(a.q_variance() - b.q_variance()) < 1e-8);
}

TEST_CASE("Hamiltonian and marker constructions agree") {
  const double g = 0.8;
  const GaussianPointer m(1.0, g, 10.0 + 10.0 * g, 128);
  const Observable z(pauli::z());
  const PreMeasurement marker = von_neumann_premeasurement(m, z);
  const PreMeasurement ham = PreMeasurement::from_hamiltonian(z, m.meter_model(), momentum_matrix(m), g);
  const std::vector<Ket> spectral = von_neumann_momentum_markers(m, z);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK((spectral[i].amplitudes() - marker.markers()[i].amplitudes()).norm() < 1e-8);
  }
  const DensityMatrix sigma0 = DensityMatrix::pure(qubit(0.9, 1.2));
  const DensityMatrix ta = premeasure(marker, sigma0);
  const DensityMatrix tb = premeasure(ham, sigma0);
  const ComplexMatrix ma = partial_trace(ta, {2, m.size()}, Keep::Second).matrix();
  const ComplexMatrix mb = partial_trace(tb, {2, m.size()}, Keep::Second).matrix();
  const double worst = (ma.diagonal() - mb.diagonal()).cwiseAbs().maxCoeff();
  CHECK(worst < 1e-8);
  CHECK(max_abs(ta.matrix() - tb.matrix()) < 1e-8);
}

TEST_CASE("momentum phase translates the packet") {
  const GaussianPointer m = GaussianPointer::with_default_grid(1.0, 1.0, 1.0);
  for (double lambda : {0.37, -1.21, 2.5}) {
    // exp(i lambda P) phi(q) = phi(q + lambda).
    CHECK((m.momentum_phase(m.initial(), -lambda) - m.shifted(-lambda)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("Fourier grid conventions") {
  const FourierGrid grid(5.0, 64);
  Rng rng(52);
  const ComplexVector psi = random_ket(64, rng).amplitudes();
  const ComplexVector pk = grid.to_momentum(psi);
  CHECK(std::abs(pk.norm() - psi.norm()) < 1e-13);
  CHECK((grid.from_momentum(pk) - psi).norm() < 1e-13);
  CHECK(grid.momenta()(32) == 0.0);
  CHECK(grid.positions()(32) == 0.0);
  CHECK(grid.momenta()(0) < grid.momenta()(63));
}

TEST_CASE("meter construction errors") {
  CHECK_THROWS_AS(GaussianPointer(0.0, 0.1, 10.0, 64), InvalidArgument);
  CHECK_THROWS_AS(FourierGrid(10.0, 7), InvalidArgument);
  const GaussianPointer m(1.0, 0.1, 10.0, 256);
  CHECK_THROWS_AS(m.shifted(6.0), InvalidArgument);
  CHECK_THROWS_AS(qubit_premeasurement(QubitMeter{0.1}, Observable(2.0 * pauli::z())), InvalidArgument);
}
