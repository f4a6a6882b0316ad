#include <cmath>

#include "qmeas/ancilla.hpp"
#include "qmeas/scenarios.hpp"
#include "qmeas/weakpost.hpp"

namespace qmeas {

namespace {

Ket zero_momentum(Index d) {
  return Ket(ComplexVector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d))));
}

void check_input(const Ket& psi, const Tolerances& tol) {
  if (psi.dim() < 1) throw DimensionMismatch("reconstruct_wavefunction: empty state");
  if (!psi.is_normalized(tol.normalization)) throw InvalidArgument("reconstruct_wavefunction: state not normalized");
  if (std::abs(zero_momentum(psi.dim()).inner(psi)) <= tol.overlap_floor) {
    throw ZeroProbability("reconstruct_wavefunction: state has no zero-momentum component");
  }
}

WavefunctionReport finish(const Ket& psi, ComplexVector weak) {
  WavefunctionReport r;
  r.weak_values = weak;
  ComplexVector rec = weak / weak.norm();
  const complex ov = rec.dot(psi.amplitudes());
  if (std::abs(ov) > 0.0) rec *= ov / std::abs(ov);
  r.reconstructed = rec;
  r.fidelity = std::abs(rec.dot(psi.amplitudes()));
  return r;
}

}  // namespace

WavefunctionReport reconstruct_wavefunction(const Ket& psi, const Tolerances& tol) {
  check_input(psi, tol);
  const Index d = psi.dim();
  const Ket f = zero_momentum(d);
  ComplexVector weak(d);
  for (Index x = 0; x < d; ++x) {
    ComplexMatrix pi = ComplexMatrix::Zero(d, d);
    pi(x, x) = 1.0;
    weak(x) = weak_value(psi, pi, f, tol);
  }
  return finish(psi, std::move(weak));
}

WavefunctionReport reconstruct_wavefunction_simulated(const Ket& psi, double g, const Tolerances& tol) {
  check_input(psi, tol);
  if (!(g > 0.0)) throw InvalidArgument("reconstruct_wavefunction: coupling must be positive");
  const Index d = psi.dim();
  const Ket f = zero_momentum(d);
  const MeterModel probe = MeterModel::computational(Ket{1.0, 0.0});
  ComplexVector weak(d);
  for (Index x = 0; x < d; ++x) {
    RealVector v = RealVector::Zero(d);
    v(x) = 1.0;
    const PreMeasurement pm = PreMeasurement::from_hamiltonian(Observable::diagonal(v), probe, pauli::y(), g, tol);
    const ComplexVector m = postselect_meter_vector(pm, psi, f);
    const double n2 = m.squaredNorm();
    if (n2 <= tol.min_probability) throw ZeroProbability("reconstruct_wavefunction: post-selection probability below floor");
    const double sx = m.dot(pauli::x() * m).real() / n2;
    const double sy = m.dot(pauli::y() * m).real() / n2;
    weak(x) = complex(sx, sy) / (2.0 * g);
  }
  return finish(psi, std::move(weak));
}

}  // namespace qmeas
