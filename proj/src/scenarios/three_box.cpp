#include <cmath>
#include <numbers>

#include "qmeas/ancilla.hpp"
#include "qmeas/projective.hpp"
#include "qmeas/scenarios.hpp"
#include "qmeas/weakpost.hpp"

namespace qmeas {

namespace {

Observable box(Index k) {
  RealVector v = RealVector::Zero(3);
  v(k) = 1.0;
  return Observable::diagonal(v);
}

}  // namespace

double three_box_canonical_theta() { return std::numbers::pi - std::atan(std::sqrt(2.0)); }

ThreeBoxReport three_box(double theta, double g, double delta, const Tolerances& tol) {
  const double r3 = 1.0 / std::sqrt(3.0);
  const Ket s{r3, r3, r3};
  const double a = std::sin(theta) / std::sqrt(2.0);
  const Ket f{a, a, std::cos(theta)};
  if (std::abs(f.inner(s)) <= tol.overlap_floor) {
    throw ZeroProbability("three_box: post-selection is orthogonal to the pre-selected state");
  }
  const Observable pa = box(0);
  const Observable pb = box(1);
  const Observable pc = box(2);

  ThreeBoxReport r;
  r.theta = theta;
  r.post = f;
  r.abl_a = abl_probability(s, pa, f, tol).probability_of(1.0);
  r.abl_b = abl_probability(s, pb, f, tol).probability_of(1.0);
  r.abl_c = abl_probability(s, pc, f, tol).probability_of(1.0);
  r.weak_a = weak_value(s, pa, f, tol);
  r.weak_b = weak_value(s, pb, f, tol);
  r.weak_c = weak_value(s, pc, f, tol);
  r.weak_c_closed_form = 1.0 / (std::sqrt(2.0) * std::tan(theta) + 1.0);

  // U = exp(+i g Pi_C (x) X): box C kicks the pointer momentum by +g.
  const GaussianPointer meter = GaussianPointer::with_default_grid(delta, g, 1.0);
  const ComplexVector& phi0 = meter.initial();
  const ComplexVector kicked = phi0.cwiseProduct(
      (kI * g * meter.positions().cast<complex>()).array().exp().matrix());
  std::vector<Ket> markers;
  for (double v : pc.basis_eigenvalues()) markers.emplace_back(v > 0.5 ? kicked : phi0);
  const PreMeasurement pm = PreMeasurement::from_markers(pc, meter.meter_model(), std::move(markers), tol);
  const ComplexVector psi = postselect_meter_vector(pm, s, f);
  r.g = g;
  r.post_probability = psi.squaredNorm();
  if (r.post_probability <= tol.min_probability) throw ZeroProbability("three_box: post-selection probability below floor");
  r.pointer_p = pointer_moments(meter, psi).p;
  r.pointer_p_over_g = r.pointer_p / g;
  return r;
}

}  // namespace qmeas
