#pragma once

// Concrete meters: the grid-discretized von Neumann Gaussian pointer and the
// double-qubit meter.

#include <utility>

#include "qmeas/ancilla.hpp"
#include "qmeas/core.hpp"

namespace qmeas {

/// Uniform periodic grid q_k = (k - n/2) dq, dq = 2L/n, with its unitary
/// discrete Fourier transform. Momenta p_j = 2 pi (j - n/2) / (n dq) are in
/// centered (fftshift) order, so p = 0 is a grid point.
class FourierGrid {
 public:
  FourierGrid(double half_width, Index points);

  double half_width() const { return half_width_; }
  double dq() const { return dq_; }
  Index size() const { return positions_.size(); }
  const RealVector& positions() const { return positions_; }
  const RealVector& momenta() const { return momenta_; }

  /// Unitary transform to centered momentum order and back.
  ComplexVector to_momentum(const ComplexVector& psi) const;
  ComplexVector from_momentum(const ComplexVector& psi_p) const;

  /// exp(-i lambda P) psi, i.e. psi(q - lambda) with periodic wrap.
  ComplexVector momentum_phase(const ComplexVector& psi, double lambda) const;
  /// P psi evaluated spectrally.
  ComplexVector apply_p(const ComplexVector& psi) const;

 private:
  double half_width_;
  double dq_;
  RealVector positions_;
  RealVector momenta_;
};

/// Gaussian pointer on a FourierGrid.
///
/// Wave functions are stored as discrete amplitudes a_k = phi(q_k) sqrt(dq),
/// so sum_k |a_k|^2 = int |phi|^2 dq. |phi0|^2 is the normal density of
/// variance delta^2.
class GaussianPointer : public FourierGrid {
 public:
  GaussianPointer(double delta, double g, double half_width, Index points);

  /// L = 10 delta + 10 g max|s|, n = 1024 unless given.
  static GaussianPointer with_default_grid(double delta, double g, double max_abs_eigenvalue,
                                           Index points = 1024);

  double delta() const { return delta_; }
  double g() const { return g_; }
  const ComplexVector& initial() const { return initial_; }

  /// phi0(q - x) sampled on the grid; throws InvalidArgument unless
  /// |x| + 5 delta < L.
  ComplexVector shifted(double x) const;
  /// phi0(q - g s).
  ComplexVector pointer_shift(double s) const { return shifted(g_ * s); }

  /// Same grid and width, different coupling.
  GaussianPointer with_coupling(double g) const;

  /// Meter model with |m0> = phi0 and pointer values q_k.
  MeterModel meter_model() const;

 private:
  double delta_;
  double g_;
  ComplexVector initial_;
};

struct PointerMoments {
  double q = 0.0;
  double q2 = 0.0;
  double p = 0.0;
  double p2 = 0.0;
  double qp_anti = 0.0;  // <{Q,P}>

  double q_variance() const { return q2 - q * q; }
  double p_variance() const { return p2 - p * p; }
};

/// Moments of a meter density matrix on the grid.
PointerMoments pointer_moments(const FourierGrid& meter, const DensityMatrix& mu);
/// Moments of a (not necessarily normalized) pure grid state, divided by its
/// squared norm.
PointerMoments pointer_moments(const FourierGrid& meter, const ComplexVector& psi);

/// Marker-mode pre-measurement: marker i is phi0 shifted by g s_i.
PreMeasurement von_neumann_premeasurement(const GaussianPointer& meter, const Observable& obs,
                                          const Tolerances& tol = {});

/// Markers of exp(-i g S (x) P) built by momentum-space phases, one per
/// eigenbasis column of obs.
std::vector<Ket> von_neumann_momentum_markers(const GaussianPointer& meter, const Observable& obs);

/// <phi0(q - a)|phi0(q - b)> by quadrature.
double gaussian_overlap(const GaussianPointer& meter, double a, double b);

/// Double-qubit meter with angle theta in [0, pi].
struct QubitMeter {
  double theta = 0.0;

  /// (m^(+), m^(-)) = (cos t/2 |0> + sin t/2 |1>, sin t/2 |0> + cos t/2 |1>).
  std::pair<Ket, Ket> markers() const;
  /// Initial state m^(+), pointer values (+1, -1) on |0>, |1>.
  MeterModel meter_model() const;
};

std::pair<Ket, Ket> qubit_meter_markers(const QubitMeter& m);

/// Pre-measurement of a qubit observable with eigenvalues +-1: eigenvalue +1
/// gets marker m^(+), -1 gets m^(-). The completed unitary is the CNOT
/// construction.
PreMeasurement qubit_premeasurement(const QubitMeter& m, const Observable& obs,
                                    const Tolerances& tol = {});
/// Same with S = sigma_z on the computational basis.
PreMeasurement qubit_premeasurement(const QubitMeter& m, const Tolerances& tol = {});

}  // namespace qmeas
