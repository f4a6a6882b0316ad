#pragma once

// Indirect (ancilla) measurement: a pre-measurement unitary couples the system
// to a meter, the meter is read out in its pointer basis, and the system is
// updated by the induced measurement operators.

#include <cstdint>
#include <optional>
#include <vector>

#include "qmeas/core.hpp"

namespace qmeas {

/// Meter Hilbert space, initial state and pointer basis.
///
/// The pointer basis defaults to the computational basis; readout outcome k
/// refers to its k-th column.
class MeterModel {
 public:
  MeterModel(Ket initial, RealVector pointer_values,
             std::optional<ComplexMatrix> pointer_basis = std::nullopt, const Tolerances& tol = {});

  /// Computational-basis pointer with values 0, 1, ..., d-1.
  static MeterModel computational(Ket initial, const Tolerances& tol = {});

  Index dim() const { return initial_.dim(); }
  const Ket& initial() const { return initial_; }
  const RealVector& pointer_values() const { return values_; }
  bool computational_basis() const { return !basis_.has_value(); }
  /// Pointer states |m_k> as columns.
  ComplexMatrix pointer_basis() const;
  /// M = sum_k m_k |m_k><m_k|.
  Observable pointer_observable() const;

 private:
  Ket initial_;
  RealVector values_;
  std::optional<ComplexMatrix> basis_;
};

/// Pre-measurement of a system observable by a meter.
///
/// Stored as the system basis {|s_i>} and the marker states |m^(i)> with
/// U(|s_i> (x) |m0>) = |s_i> (x) |m^(i)>. The full unitary is materialized on
/// request only.
class PreMeasurement {
 public:
  /// Markers given per column of system_basis (orthonormal columns).
  static PreMeasurement from_markers(const ComplexMatrix& system_basis, MeterModel meter,
                                     std::vector<Ket> markers, const Tolerances& tol = {});
  /// Markers given per eigenbasis column of obs.
  static PreMeasurement from_markers(const Observable& obs, MeterModel meter,
                                     std::vector<Ket> markers, const Tolerances& tol = {});
  /// Computational system basis.
  static PreMeasurement from_markers(Index system_dim, MeterModel meter, std::vector<Ket> markers,
                                     const Tolerances& tol = {});

  /// U = exp(-i g S (x) N). N must be Hermitian on the meter space.
  static PreMeasurement from_hamiltonian(const Observable& s, MeterModel meter,
                                         const ComplexMatrix& n, double g,
                                         const Tolerances& tol = {});

  /// Explicit unitary on system (x) meter; must leave every eigenstate of s
  /// unchanged (QND).
  static PreMeasurement from_unitary(const Observable& s, MeterModel meter, const ComplexMatrix& u,
                                     const Tolerances& tol = {});

  Index system_dim() const { return basis_.rows(); }
  Index meter_dim() const { return meter_.dim(); }
  const MeterModel& meter() const { return meter_; }
  const ComplexMatrix& system_basis() const { return basis_; }
  const std::vector<Ket>& markers() const { return markers_; }
  /// Markers as columns.
  ComplexMatrix marker_matrix() const;
  /// G_ij = <m^(j)|m^(i)>.
  ComplexMatrix marker_gram() const;

  /// K = sum_i (|s_i> (x) |m^(i)>)<s_i|, the restriction of U to |m0>.
  ComplexMatrix isometry() const;

  /// Full unitary. An explicitly supplied one is returned as is; otherwise
  /// each meter block V_i with V_i|m0> = |m^(i)> is completed by a
  /// Householder reflection, optionally followed by a random rotation of the
  /// complement of |m0> (see with_completion_seed).
  ComplexMatrix unitary() const;

  /// Same markers, randomized unitary completion outside the marker span.
  PreMeasurement with_completion_seed(std::uint64_t seed) const;

 private:
  PreMeasurement(ComplexMatrix basis, MeterModel meter, std::vector<Ket> markers)
      : basis_(std::move(basis)), meter_(std::move(meter)), markers_(std::move(markers)) {}

  ComplexMatrix basis_;
  MeterModel meter_;
  std::vector<Ket> markers_;
  std::optional<ComplexMatrix> explicit_unitary_;
  std::optional<std::uint64_t> completion_seed_;
};

struct MeasurementOperatorSet {
  std::vector<ComplexMatrix> operators;  // Omega_k, one per pointer state
};

struct EffectSet {
  std::vector<ComplexMatrix> effects;  // E_k = Omega_k^dagger Omega_k
};

struct Readout {
  DensityMatrix state;  // sigma_1(|m_k)
  double probability;
};

/// tau_1 = U (sigma0 (x) mu0) U^dagger.
DensityMatrix premeasure(const PreMeasurement& pm, const DensityMatrix& sigma0,
                         const Tolerances& tol = {});

/// (U (|s> (x) |m0>)) for a pure system state, without forming U.
ComplexVector premeasure_pure(const PreMeasurement& pm, const Ket& s);

/// Meter-reduced state mu_1 = sum_i |m^(i)><s_i|sigma0|s_i><m^(i)|.
DensityMatrix meter_reduced(const PreMeasurement& pm, const DensityMatrix& sigma0,
                            const Tolerances& tol = {});

/// Conditional system state after reading pointer outcome k from tau_1.
Readout readout(const PreMeasurement& pm, const DensityMatrix& tau1, Index k,
                const Tolerances& tol = {});

/// Same conditional state computed from sigma0 with Omega_k.
Readout readout_from_system(const PreMeasurement& pm, const DensityMatrix& sigma0, Index k,
                            const Tolerances& tol = {});

/// Omega_k = sum_i <m_k|m^(i)> Pi_{s_i}; completeness is checked.
MeasurementOperatorSet measurement_operators(const PreMeasurement& pm, const Tolerances& tol = {});

/// E_k = Omega_k^dagger Omega_k; Hermiticity, positivity and completeness are
/// checked.
EffectSet effects(const MeasurementOperatorSet& ops, const Tolerances& tol = {});

/// Unconditional system state sum_k Omega_k sigma Omega_k^dagger, evaluated as
/// <s_i|sigma'|s_j> = <s_i|sigma|s_j> <m^(j)|m^(i)>.
DensityMatrix apply_unconditional(const PreMeasurement& pm, const DensityMatrix& sigma,
                                  const Tolerances& tol = {});

/// Two pre-measurements with unread meters, in order.
DensityMatrix consecutive(const PreMeasurement& pm1, const PreMeasurement& pm2,
                          const DensityMatrix& sigma0, const Tolerances& tol = {});

struct ExtendedOperators {
  std::vector<std::vector<ComplexMatrix>> operators;  // [k][r]: Omega_{k;r}
  EffectSet effects;                                   // E_k = sum_r Omega_{k;r}^dagger Omega_{k;r}
};

/// Omega_{k;r} = (<d_r| (x) <m_k|) U (|d0> (x) |m0>) for U on S (x) D (x) M.
ExtendedOperators extended_measurement_operators(const ComplexMatrix& u, Index system_dim,
                                                 const Ket& d0, const Ket& m0,
                                                 const Tolerances& tol = {});

/// Conditional state sum_r Omega_{k;r} sigma0 Omega_{k;r}^dagger / prob.
Readout extended_readout(const ExtendedOperators& ops, const DensityMatrix& sigma0, Index k,
                         const Tolerances& tol = {});

}  // namespace qmeas
