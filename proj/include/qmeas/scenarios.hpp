#pragma once

// End-to-end applications: Leggett-Garg, Three-Box, spin target weak values,
// wave-function reconstruction, two-slit trajectories, Zeno limit and the
// Lindblad master equation.

#include <optional>
#include <vector>

#include "qmeas/core.hpp"
#include "qmeas/meters.hpp"

namespace qmeas {

// ---------------------------------------------------------------- Leggett-Garg

struct LgiReport {
  double b_mean;                // <B>
  double mean_s;                // <s|S|s>
  double overlap2;              // |<f|s>|^2
  std::optional<double> re_sw;  // absent when <f|s> is below the floor
  bool violated;                // <B> > 1 + 1e-12 or < -3 - 1e-12
};

/// <B> = <s|S|s> + Re(<s|f><f|S|s>) - |<f|s>|^2. Throws InvalidArgument when
/// an eigenvalue of S lies outside [-1, 1].
LgiReport lgi_value(const Ket& s, const Observable& obs, const Ket& f, const Tolerances& tol = {});

/// s = sqrt(1 - beta^2)|0> + beta|1>, S = sigma_z, f = cos(phi/2)|0> + sin(phi/2)|1>.
LgiReport lgi_qubit(double beta, double phi, const Tolerances& tol = {});

struct LgiOptimum {
  double beta;
  double phi;
  double b;
};

struct LgiSearch {
  double max_b;
  std::vector<LgiOptimum> optima;  // every distinct local optimum reaching max_b
};

/// Grid over beta in [-1, 1] and phi in [0, 2 pi), then golden-section
/// refinement of each candidate.
LgiSearch lgi_search(Index grid = 400);

// ---------------------------------------------------------------- Three-Box

struct ThreeBoxReport {
  double theta;
  Ket post;
  double abl_a, abl_b, abl_c;        // prob(in box | s, f) with the box measured projectively
  complex weak_a, weak_b, weak_c;
  double weak_c_closed_form;         // 1 / (sqrt(2) tan(theta) + 1)
  double g;
  double pointer_p;                  // <P> after post-selection, exact meter simulation
  double pointer_p_over_g;
  double post_probability;
};

/// theta of the post-selection (1, 1, -1)/sqrt(3).
double three_box_canonical_theta();

/// s = (1,1,1)/sqrt(3), f = sin(theta)(|A> + |B>)/sqrt(2) + cos(theta)|C>.
/// The Gaussian meter is kicked in momentum by H = -gamma Pi_C (x) X.
ThreeBoxReport three_box(double theta, double g = 1e-2, double delta = 1.0, const Tolerances& tol = {});

// ---------------------------------------------------------------- spin target

struct SpinTargetReport {
  Ket post;
  complex weak_value;
  double overlap;          // |<f|s>|
  double alpha_f;          // |<f|0><0|s>|
  double g;
  double delta;
  double fq_exact;         // <Q> after post-selection, exact meter simulation
  double fq_over_g;
  double breakdown_band;   // g |alpha_f| sqrt(<P^2>_0)
};

/// Post-selection f with (sigma_z)_w = target for a qubit pre-state s;
/// throws InvalidArgument when unreachable.
Ket spin_target_post(const Ket& s, double target, const Tolerances& tol = {});

/// Construction plus a Gaussian-meter check with g = window * delta / |target|.
SpinTargetReport spin_target(const Ket& s, double target, double window = 0.01, double delta = 1.0,
                             const Tolerances& tol = {});

// ---------------------------------------------------------------- wave function

struct WavefunctionReport {
  ComplexVector weak_values;    // (Pi_x)_w with f = |p = 0>
  ComplexVector reconstructed;  // normalized, global phase aligned with the input
  double fidelity;              // |<psi_rec|psi>|
};

/// Exact weak values.
WavefunctionReport reconstruct_wavefunction(const Ket& psi, const Tolerances& tol = {});

/// Each Pi_x measured by a qubit pointer with U = exp(-i g Pi_x (x) sigma_y);
/// (Pi_x)_w is read as (<sigma_x> + i <sigma_y>) / 2g after post-selection.
WavefunctionReport reconstruct_wavefunction_simulated(const Ket& psi, double g, const Tolerances& tol = {});

// ---------------------------------------------------------------- two slit

struct TwoSlitConfig {
  double separation = 10.0;
  double width = 1.0;        // standard deviation of |psi|^2 per slit
  Index points = 512;
  Index steps = 200;
  double z_final = 40.0;
  double half_width = 100.0;
  Index trajectories = 401;
  Index bins = 40;
  bool single_slit = false;
};

struct TwoSlitResult {
  RealVector z;                  // steps + 1
  Eigen::MatrixXd x;             // (steps + 1) x trajectories
  bool ordered_every_step;       // strict ordering preserved
  double correlation;            // histogram vs |psi(z_final)|^2 per bin
  RealVector final_density;      // |psi(x, z_final)|^2 / dx on the grid
  RealVector grid;
};

/// Free propagation of the slit wave function and RK4 integration of
/// dx/dz = Re(<x|P|psi>/<x|psi>). Throws ContractViolation when a trajectory
/// leaves the grid.
TwoSlitResult two_slit_trajectories(const TwoSlitConfig& config);

// ---------------------------------------------------------------- Zeno

struct ZenoRow {
  Index n;
  double g;                 // per-step coupling gamma t_final / n
  double overlap;           // marker overlap by quadrature
  double disturbance;       // max-abs |sigma_n - sigma_0|
  double second_order;      // |sigma01| (1 - (1 - 2 g^2 <P^2>_0)^n)
  double limit;             // |sigma01| (1 - exp(-gamma^2 t^2 / (2 delta^2 n)))
};

/// n repeated von Neumann measurements of sigma_z on |+>, each evolved
/// exactly with coupling gamma t_final / n.
std::vector<ZenoRow> zeno_sweep(double gamma, double t_final, double delta, const std::vector<Index>& n_list,
                                const Tolerances& tol = {});

// ---------------------------------------------------------------- Lindblad

struct LindbladChannel {
  Observable t;
  double eta;  // >= 0
};

struct LindbladModel {
  Observable h;
  std::vector<LindbladChannel> channels;
};

struct LindbladResult {
  DensityMatrix state;
  Index steps;
  double max_trace_error;
  double max_hermiticity_error;
  double min_eigenvalue;
};

/// RK4 on d sigma/dt = i[sigma, H] - sum_a eta_a^2 [[sigma, T_a], T_a].
/// Throws InvalidArgument unless dt max(eta^2 |T|^2, |H|) < 0.1 and
/// ContractViolation when a step leaves the trace, Hermiticity or positivity
/// tolerances.
LindbladResult lindblad_integrate(const LindbladModel& model, const DensityMatrix& sigma0, double t,
                                  double dt);

struct RepeatedRow {
  Index n;
  double error;         // max-abs difference to the integrator
  double max_trace_error;
};

/// n steps of length t/n, each a unitary exp(-i H dt) followed by one
/// unread qubit-probe measurement per channel with
/// U = exp(-i eta sqrt(2 dt) T (x) sigma_x) on probe |0>.
DensityMatrix lindblad_repeated(const LindbladModel& model, const DensityMatrix& sigma0, double t, Index n,
                                double* max_trace_error = nullptr, const Tolerances& tol = {});

std::vector<RepeatedRow> lindblad_from_repeated(const LindbladModel& model, const DensityMatrix& sigma0, double t,
                                                const std::vector<Index>& n_list, double dt = 1e-3,
                                                const Tolerances& tol = {});

}  // namespace qmeas
