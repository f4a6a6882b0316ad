#include <cmath>

#include "qmeas/scenarios.hpp"
#include "qmeas/weakpost.hpp"

namespace qmeas {

Ket spin_target_post(const Ket& s, double target, const Tolerances& tol) {
  if (s.dim() != 2) throw DimensionMismatch("spin_target: pre-state must be a qubit");
  if (!s.is_normalized(tol.normalization)) throw InvalidArgument("spin_target: pre-state not normalized");
  // <f|S|s> = W <f|s>  <=>  f orthogonal to (S - W)|s>.
  const ComplexVector v = (pauli::z() - target * pauli::identity()) * s.amplitudes();
  if (v.norm() <= tol.overlap_floor) return s;
  const Ket f = Ket(ComplexVector{{std::conj(v(1)), -std::conj(v(0))}}).normalized();
  if (std::abs(f.inner(s)) <= tol.overlap_floor) {
    throw InvalidArgument("spin_target: target unreachable from this pre-state (eigenstate of sigma_z)");
  }
  return f;
}

SpinTargetReport spin_target(const Ket& s, double target, double window, double delta, const Tolerances& tol) {
  if (!(window > 0.0)) throw InvalidArgument("spin_target: window must be positive");
  const Ket f = spin_target_post(s, target, tol);
  const Observable z(pauli::z());
  SpinTargetReport r;
  r.post = f;
  r.weak_value = weak_value(s, z, f, tol);
  r.overlap = std::abs(f.inner(s));
  r.alpha_f = std::abs(std::conj(f[0]) * s[0]);
  r.delta = delta;
  r.g = window * delta / std::max(1.0, std::abs(target));
  const GaussianPointer meter = GaussianPointer::with_default_grid(delta, r.g, 1.0);
  const WeakSetup setup{s, z, f, meter};
  const ComplexVector psi = postselect_meter_vector(setup_premeasurement(setup, tol), s, f);
  r.fq_exact = pointer_moments(meter, psi).q;
  r.fq_over_g = r.fq_exact / r.g;
  r.breakdown_band = r.g * r.alpha_f * std::sqrt(pointer_moments(meter, meter.initial()).p2);
  return r;
}

}  // namespace qmeas
