#pragma once

// Weak measurement with and without post-selection: weak values, second-order
// expansions of the system and meter states in the coupling g, and the exact
// evolution they are checked against.
//
// The second-order expressions assume a pointer coupling U = exp(-i g S (x) N)
// with N = P for the Gaussian pointer and <N>_0 = 0.

#include <cstdint>
#include <variant>

#include "qmeas/ancilla.hpp"
#include "qmeas/core.hpp"
#include "qmeas/meters.hpp"

namespace qmeas {

using Meter = std::variant<GaussianPointer, QubitMeter>;

struct WeakSetup {
  Ket pre;
  Observable observable;
  Ket post;
  Meter meter;
};

/// <f|S|s>/<f|s>; throws ZeroProbability when |<f|s>| is below
/// Tolerances::overlap_floor.
complex weak_value(const Ket& pre, const ComplexMatrix& op, const Ket& post, const Tolerances& tol = {});
complex weak_value(const Ket& pre, const Observable& obs, const Ket& post, const Tolerances& tol = {});

/// Pre-measurement of the setup's observable by its meter.
PreMeasurement setup_premeasurement(const WeakSetup& setup, const Tolerances& tol = {});

/// sigma0 - (g^2 <N^2>_0 / 2) [[sigma0, S], S].
DensityMatrix weak_system_update(const WeakSetup& setup, const DensityMatrix& sigma0,
                                 const Tolerances& tol = {});
/// Exact Tr_M(U (sigma0 (x) mu0) U^dagger).
DensityMatrix weak_system_update_exact(const WeakSetup& setup, const DensityMatrix& sigma0,
                                       const Tolerances& tol = {});

/// 1 - (g^2 <N^2>_0 / 2)(s_i - s_j)^2 and its quadrature counterpart.
double marker_overlap_weak(const GaussianPointer& meter, double s_i, double s_j);
double marker_overlap_exact(const GaussianPointer& meter, double s_i, double s_j);

struct PostSelected {
  DensityMatrix meter_state;  // mu_f
  double probability;         // prob(f | tau_1)
};

/// mu_f = G sigma0 G^dagger / prob with G = (<f| (x) 1) K. Throws
/// ZeroProbability below Tolerances::min_probability.
PostSelected postselect_meter_exact(const PreMeasurement& pm, const Ket& post, const DensityMatrix& sigma0,
                                    const Tolerances& tol = {});
PostSelected postselect_meter_exact(const WeakSetup& setup, const DensityMatrix& sigma0,
                                    const Tolerances& tol = {});
/// Unnormalized post-selected meter vector (<f| (x) 1) U |s>|m0> for a pure
/// pre-state; its squared norm is prob(f | tau_1).
ComplexVector postselect_meter_vector(const PreMeasurement& pm, const Ket& pre, const Ket& post);

/// Second-order post-selected meter operator
/// sum_ab C_ab |v_a><v_b| / D with v = (phi0, N phi0, N^2 phi0).
/// Hermitian with unit trace; not positive in general.
class SecondOrderMeter {
 public:
  SecondOrderMeter(ComplexMatrix vectors, ComplexMatrix coefficients, double denominator);

  const ComplexMatrix& vectors() const { return vectors_; }
  const ComplexMatrix& coefficients() const { return coefficients_; }
  double denominator() const { return denominator_; }

  /// Tr(L mu_f), L acting on the meter space.
  complex expectation(const ComplexMatrix& l) const;
  complex trace() const;
  ComplexMatrix matrix() const;

 private:
  ComplexMatrix vectors_;
  ComplexMatrix coefficients_;
  double denominator_;
};

struct WeakReport {
  complex weak_value;         // S_w
  complex square_weak_value;  // <f|S^2|s>/<f|s>
  double denominator;         // D = 1 - g^2 <N^2>_0 Re(X - |S_w|^2)
  double prob_post_exact;
  double prob_post_2nd;
  double pointer_q;           // second-order fQ
  double pointer_p;           // second-order fP
  double pointer_q2;          // Tr(Q^2 mu_f) at second order
  double pointer_p2;          // Tr(P^2 mu_f) at second order
  double pointer_q_exact;
  double pointer_p_exact;
  double pointer_q2_exact;
  double pointer_p2_exact;
  double pointer_q_var_exact;

  struct Deltas {
    double prob;
    double q;
    double p;
  } exact_minus_formula;
};

/// Second-order post-selection analysis with the exact values alongside.
/// Requires a Gaussian meter and a normalized pure pre-state.
WeakReport postselect_meter_2nd(const WeakSetup& setup, const Tolerances& tol = {});

/// The second-order meter operator alone.
SecondOrderMeter second_order_meter(const WeakSetup& setup, const Tolerances& tol = {});

struct PointerReadout {
  double q;
  double p;
};

/// fQ = g (Re S_w + <{P,Q}>_0 Im S_w) / D, fP = 2 g <P^2>_0 Im S_w / D.
PointerReadout pointer_readout_weak(const WeakSetup& setup, const Tolerances& tol = {});

struct MeterObservableWeak {
  double value;                // Tr(L mu_f) at second order
  double first_order;          // (<L>_0 + 2 g Im(S_w <L N>_0)) / D
  double commutator_part;      // g (-i<[L,N]>_0) Re S_w / D
  double anticommutator_part;  // g <{L,N}>_0 Im S_w / D
  double exact;                // Tr(L mu_f) from exact evolution
};

MeterObservableWeak meter_observable_weak(const WeakSetup& setup, const ComplexMatrix& l,
                                          const Tolerances& tol = {});

/// Q and P as dense grid matrices.
ComplexMatrix position_matrix(const GaussianPointer& meter);
ComplexMatrix momentum_matrix(const GaussianPointer& meter);

struct AmplificationReport {
  double max_fq;             // max |fQ| over post-selections
  double bound;              // g / sqrt(1 - r^2)
  double r_quadrature;
  double r_closed_form;      // exp(-g^2 / 2 delta^2)
  double theta;              // argmax f = (cos(theta/2), e^{i phi} sin(theta/2))
  double phi;
  Ket post;
  complex alpha_f;           // alpha <f|0>
  complex beta_f;            // beta <f|1>
  double dominant;           // max(|alpha_f|, |beta_f|), the branch the pointer follows
  double prob;               // exact prob(f | tau_1) at the optimum
  double prob_small_g;       // g^2 dominant^2 <P^2>_0
  double prob_closed_form;   // 2 dominant^2 (1 - r^2) / (1 + sqrt(1 - r^2))
  double variance;           // pointer variance at the optimum
  double initial_variance;   // <Q^2>_0
  double random_max;         // max |fQ| over random post-selections
  std::size_t random_samples;
  std::size_t random_violations;  // samples with |fQ| > bound (1 + 1e-12)
};

/// Scan post-selections for a qubit pre-state, S = sigma_z and a Gaussian
/// meter: grid scan, coordinate golden-section refinement and a seeded
/// random scan.
AmplificationReport amplification_scan(const Ket& pre, const GaussianPointer& meter, std::uint64_t seed,
                                       std::size_t random_samples = 10000, Index grid = 200);

struct DoubleQubitWeak {
  double formula;  // delta Re S_w / (1 - delta^2 Re(alpha_f beta_f*) / |<f|s>|^2), delta = pi/2 - theta
  double exact;    // Tr(S_1^M mu_f) from the full 4x4 evolution
  double closed_form;  // cos(theta)(|alpha_f|^2 - |beta_f|^2) / prob
  double prob;
};

/// Qubit pre-state, S = sigma_z, double-qubit meter with theta = pi/2 - 2 eps.
DoubleQubitWeak double_qubit_weak(const Ket& pre, const Ket& post, double eps, const Tolerances& tol = {});
/// Exact meter reading for any theta.
double double_qubit_exact(const Ket& pre, const Ket& post, double theta, const Tolerances& tol = {});

}  // namespace qmeas
