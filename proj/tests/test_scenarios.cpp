#include <doctest.h>

#include "qmeas/scenarios.hpp"
#include "qmeas/weakpost.hpp"
#include "support.hpp"

using namespace qmeas;
using namespace testing;

TEST_CASE("LGI quantity saturates the classical bound for s = |0>") {
  for (double phi : {0.0, 0.4, 1.7, 3.0, 5.5}) {
    CHECK(std::abs(lgi_qubit(0.0, phi).b_mean - 1.0) < 1e-14);
  }
}

TEST_CASE("LGI optimum over phi follows 1 - 3 beta^2 + |beta|") {
  for (double beta : {-0.5, -1.0 / 6.0, 0.1, 0.3}) {
    double best = -10.0;
    for (int k = 0; k < 20000; ++k) best = std::max(best, lgi_qubit(beta, 2.0 * std::numbers::pi * k / 20000.0).b_mean);
    CHECK(std::abs(best - (1.0 - 3.0 * beta * beta + std::abs(beta))) < 1e-6);
  }
}

TEST_CASE("LGI search finds 13/12 on both branches") {
  const LgiSearch s = lgi_search(400);
  CHECK(std::abs(s.max_b - 13.0 / 12.0) < 1e-6);
  REQUIRE(s.optima.size() == 2);
  for (const auto& o : s.optima) {
    CHECK(std::abs(std::abs(o.beta) - 1.0 / 6.0) < 1e-3);
    CHECK(std::abs(std::cos(o.phi) - 1.0 / 6.0) < 1e-3);
    CHECK(lgi_qubit(o.beta, o.phi).violated);
  }
  CHECK(s.optima[0].beta * s.optima[1].beta < 0.0);
}

TEST_CASE("LGI lower bound is never violated") {
  Rng rng(71);
  for (int trial = 0; trial < 2000; ++trial) {
    const Index d = 2 + trial % 3;
    const ComplexMatrix u = random_unitary(d, rng);
    RealVector ev(d);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (Index i = 0; i < d; ++i) ev(i) = unit(rng);
    const Observable obs(u * ev.cast<complex>().asDiagonal() * u.adjoint());
    const LgiReport r = lgi_value(random_ket(d, rng), obs, random_ket(d, rng));
    CHECK(r.b_mean >= -3.0 - 1e-12);
  }
  CHECK_THROWS_AS(lgi_value(Ket{1.0, 0.0}, Observable(2.0 * pauli::z()), Ket{1.0, 0.0}), InvalidArgument);
}

TEST_CASE("Three-Box canonical values") {
  const ThreeBoxReport r = three_box(three_box_canonical_theta());
  CHECK((r.post.amplitudes() - three_box_post().amplitudes()).norm() < 1e-12);
  CHECK(std::abs(r.abl_a - 1.0) < 1e-12);
  CHECK(std::abs(r.abl_b - 1.0) < 1e-12);
  CHECK(std::abs(r.abl_c - 0.2) < 1e-12);
  CHECK(std::abs(r.weak_a - complex(1.0)) < 1e-12);
  CHECK(std::abs(r.weak_b - complex(1.0)) < 1e-12);
  CHECK(std::abs(r.weak_c - complex(-1.0)) < 1e-12);
  CHECK(std::abs(r.pointer_p_over_g + 1.0) < 1e-3);
}

TEST_CASE("Three-Box weak value of C versus the post-selection angle") {
  CHECK(std::abs(three_box(0.0).weak_c - complex(1.0)) < 1e-12);
  CHECK(std::abs(three_box(std::numbers::pi / 4.0).weak_c.real() - (std::sqrt(2.0) - 1.0)) < 1e-12);
  for (double theta : {0.2, 0.9, 1.3, 2.0, 2.8}) {
    const ThreeBoxReport r = three_box(theta);
    CHECK(std::abs(r.weak_c.real() - 1.0 / (std::sqrt(2.0) * std::tan(theta) + 1.0)) < 1e-10);
    CHECK(std::abs(r.weak_c.real() - r.weak_c_closed_form) < 1e-10);
    CHECK(std::abs(r.weak_a + r.weak_b + r.weak_c - complex(1.0)) < 1e-12);
  }
}

TEST_CASE("Three-Box sum rule for random post-selections") {
  Rng rng(72);
  const Ket s = three_box_pre();
  for (int trial = 0; trial < 200; ++trial) {
    const Ket f = random_ket(3, rng);
    const complex sum = weak_value(s, box_projector(0), f) + weak_value(s, box_projector(1), f) +
                        weak_value(s, box_projector(2), f);
    CHECK(std::abs(sum - complex(1.0)) < 1e-12);
  }
}

TEST_CASE("spin target equal to the mean is reached by f = s") {
  const Ket s{std::cos(0.3), std::sin(0.3)};
  const double mean = std::cos(0.6);
  CHECK(std::abs(weak_value(s, Observable(pauli::z()), s) - complex(mean)) < 1e-15);
  const Ket f = spin_target_post(s, mean);
  CHECK(std::abs(weak_value(s, Observable(pauli::z()), f) - complex(mean)) < 1e-12);
  CHECK(std::abs(std::abs(f.inner(s)) - 1.0) < 1e-12);
}

TEST_CASE("spin target of one hundred") {
  const Ket s{std::cos(0.3), std::sin(0.3)};
  const SpinTargetReport r = spin_target(s, 100.0);
  CHECK(std::abs(weak_value(s, Observable(pauli::z()), r.post) - complex(100.0)) < 1e-9);
  CHECK(std::abs(r.fq_over_g - 100.0) < 1.0);
  CHECK(r.g * 100.0 <= 0.1 * r.delta);
  // Real amplitudes: cos(a + b) / cos(a - b) with f = (cos b, sin b).
  const double b = std::atan2(r.post[1].real(), r.post[0].real());
  CHECK(std::abs(std::cos(0.3 + b) / std::cos(0.3 - b) - 100.0) < 1e-8);
  for (double w : {-40.0, 7.0, 1e3}) {
    CHECK(std::abs(weak_value(s, Observable(pauli::z()), spin_target_post(s, w)) - complex(w)) < 1e-9 * std::abs(w));
  }
  CHECK_THROWS_AS(spin_target_post(Ket{1.0, 0.0}, 100.0), InvalidArgument);
}

TEST_CASE("wave-function reconstruction") {
  const Index d = 8;
  const Ket uniform(ComplexVector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d))));
  const WavefunctionReport u = reconstruct_wavefunction(uniform);
  CHECK((u.weak_values.array() - u.weak_values(0)).abs().maxCoeff() < 1e-14);
  CHECK(std::abs(u.fidelity - 1.0) < 1e-14);

  Rng rng(73);
  for (int trial = 0; trial < 20; ++trial) {
    Ket psi = random_ket(d, rng);
    if (std::abs(psi.amplitudes().sum()) < 1e-3) continue;
    const WavefunctionReport exact = reconstruct_wavefunction(psi);
    CHECK(std::abs(exact.fidelity - 1.0) < 1e-10);
    CHECK((exact.reconstructed - psi.amplitudes()).norm() < 1e-10);
    CHECK(reconstruct_wavefunction_simulated(psi, 1e-3).fidelity > 0.999);
  }
  const double r = 1.0 / std::sqrt(2.0);
  CHECK_THROWS_AS(reconstruct_wavefunction(Ket{r, -r}), ZeroProbability);
}

TEST_CASE("two-slit trajectories follow the density and never cross") {
  TwoSlitConfig c;
  const TwoSlitResult r = two_slit_trajectories(c);
  CHECK(r.ordered_every_step);
  CHECK(r.correlation > 0.9);
  CHECK(r.x.rows() == c.steps + 1);
  CHECK(r.x.cols() == c.trajectories);
}

TEST_CASE("single-slit trajectories fan out symmetrically") {
  TwoSlitConfig c;
  c.single_slit = true;
  c.trajectories = 101;
  const TwoSlitResult r = two_slit_trajectories(c);
  CHECK(r.ordered_every_step);
  const Index last = r.x.rows() - 1;
  const Index n = r.x.cols();
  for (Index j = 0; j < n; ++j) {
    CHECK(std::abs(r.x(last, j) + r.x(last, n - 1 - j)) < 1e-6);
    if (j < n / 2) CHECK((r.x.col(j).array() < 0.0).all());
    if (j > n / 2) CHECK((r.x.col(j).array() > 0.0).all());
  }
  CHECK(std::abs(r.x(last, n - 1)) > std::abs(r.x(0, n - 1)));
}

TEST_CASE("Zeno sweep") {
  std::vector<Index> ns;
  for (Index n = 1; n <= 1024; n *= 2) ns.push_back(n);
  const std::vector<ZenoRow> rows = zeno_sweep(1.0, 1.0, 1.0, ns);
  REQUIRE(rows.size() == ns.size());
  for (std::size_t k = 1; k < rows.size(); ++k) {
    CHECK(rows[k].disturbance < rows[k - 1].disturbance);
  }
  CHECK(rows.back().disturbance < 1e-3);
  for (const auto& r : rows) {
    if (r.n < 4) continue;
    CHECK(std::abs(r.disturbance - r.second_order) <= r.disturbance * r.g * r.g);
    CHECK(std::abs(r.disturbance - r.limit) <= r.disturbance * 1e-6);
  }
}

TEST_CASE("Lindblad integration without channels is unitary") {
  Rng rng(74);
  const Observable h(random_hermitian(3, rng));
  const LindbladModel model{h, {{Observable(random_hermitian(3, rng)), 0.0}}};
  const DensityMatrix sigma0 = random_density(3, rng);
  const LindbladResult r = lindblad_integrate(model, sigma0, 1.0, 1e-3);
  const ComplexMatrix u = matexp_hermitian(h, 1.0);
  CHECK(max_abs(r.state.matrix() - u * sigma0.matrix() * u.adjoint()) < 1e-8);
}

TEST_CASE("qubit dephasing") {
  const double eta = 0.5;
  const LindbladModel model{Observable(ComplexMatrix::Zero(2, 2)), {{Observable(pauli::z()), eta}}};
  Rng rng(75);
  const DensityMatrix sigma0 = random_density(2, rng);
  const LindbladResult r = lindblad_integrate(model, sigma0, 1.0, 1e-3);
  CHECK(std::abs(r.state(0, 1) - sigma0(0, 1) * std::exp(-4.0 * eta * eta)) < 1e-6);
  CHECK(std::abs(r.state(0, 0) - sigma0(0, 0)) < 1e-14);
  CHECK(std::abs(r.state(1, 1) - sigma0(1, 1)) < 1e-14);
  CHECK(r.max_trace_error < 1e-10);
  CHECK(r.max_hermiticity_error < 1e-10);
  CHECK(r.min_eigenvalue > -1e-10);
  CHECK(r.steps == 1000);
}

TEST_CASE("Lindblad step-size guard") {
  const LindbladModel model{Observable(pauli::x()), {{Observable(pauli::z()), 3.0}}};
  CHECK_THROWS_AS(lindblad_integrate(model, DensityMatrix::maximally_mixed(2), 1.0, 0.1), InvalidArgument);
}

TEST_CASE("repeated measurements converge to the Lindblad integrator") {
  const LindbladModel model{Observable(0.5 * pauli::y()), {{Observable(pauli::z()), 0.5}}};
  const DensityMatrix sigma0 = DensityMatrix::pure(qubit(std::numbers::pi / 2.0, 0.0));
  const std::vector<RepeatedRow> rows = lindblad_from_repeated(model, sigma0, 1.0, {16, 32, 64, 128, 256});
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(rows[k].max_trace_error < 1e-10);
    if (rows[k].n == 64) CHECK(rows[k].error < 1e-2);
    if (k > 0) {
      const double ratio = rows[k - 1].error / rows[k].error;
      CHECK(ratio > 1.8);
      CHECK(ratio < 2.2);
    }
  }
}
