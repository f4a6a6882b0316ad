#include <cmath>
#include <numbers>
#include <random>

#include "cli.hpp"
#include "qmeas/ancilla.hpp"
#include "qmeas/meters.hpp"
#include "qmeas/projective.hpp"
#include "qmeas/random.hpp"
#include "qmeas/scenarios.hpp"
#include "qmeas/weakpost.hpp"

namespace qmeas::cli {

namespace {

using Rows = std::vector<std::pair<std::string, double>>;

Index as_index(double v) { return static_cast<Index>(std::llround(v)); }
bool as_bool(double v) { return v != 0.0; }

Ket qubit(double theta, double phi) {
  return Ket{std::cos(theta / 2.0), std::exp(kI * phi) * std::sin(theta / 2.0)};
}

Result luders(const Params& p, const Tolerances& tol, std::uint64_t) {
  const Observable z(pauli::z(), tol);
  const double mix = p.at("mix");
  if (mix < 0.0 || mix > 1.0) throw InvalidArgument("luders: mix must lie in [0, 1]");
  const DensityMatrix pure = DensityMatrix::pure(qubit(p.at("theta"), p.at("phi")), tol);
  const DensityMatrix rho = DensityMatrix::from_matrix(
      (1.0 - mix) * pure.matrix() + mix * DensityMatrix::maximally_mixed(2).matrix(), tol);
  const OutcomeDistribution dist = outcome_probability(z, rho, tol);
  const Conditional cond = luders_conditional(z, rho, p.at("outcome"), tol);
  const DensityMatrix unc = luders_unconditional(z, rho, tol);
  return {Rows{{"prob_plus", dist.probability_of(1.0)},
               {"prob_minus", dist.probability_of(-1.0)},
               {"mean", dist.mean()},
               {"expectation", expectation(z, rho).real()},
               {"conditional_probability", cond.probability},
               {"conditional_00", cond.state(0, 0).real()},
               {"conditional_11", cond.state(1, 1).real()},
               {"conditional_purity", cond.state.purity()},
               {"unconditional_00", unc(0, 0).real()},
               {"unconditional_11", unc(1, 1).real()},
               {"unconditional_01_abs", std::abs(unc(0, 1))},
               {"initial_01_abs", std::abs(rho(0, 1))}},
          std::nullopt};
}

Result abl(const Params& p, const Tolerances& tol, std::uint64_t) {
  const double r3 = 1.0 / std::sqrt(3.0);
  const Ket s{r3, r3, r3};
  const double theta = p.at("theta");
  const double a = std::sin(theta) / std::sqrt(2.0);
  const Ket f{a, a, std::cos(theta)};
  const Index box = as_index(p.at("box"));
  if (box < 0 || box > 2) throw InvalidArgument("abl: box must be 0 (A), 1 (B) or 2 (C)");
  RealVector v = RealVector::Zero(3);
  v(box) = 1.0;
  const Observable pi = Observable::diagonal(v, tol);
  const OutcomeDistribution dist = abl_probability(s, pi, f, tol);
  return {Rows{{"abl_in_box", dist.probability_of(1.0)},
               {"abl_not_in_box", dist.probability_of(0.0)},
               {"conditional_mean", abl_conditional_mean(s, pi, f, tol)},
               {"joint_then_post", joint_then_post_probability(s, pi, f)},
               {"overlap_probability", std::norm(f.inner(s))}},
          std::nullopt};
}

Result ancilla(const Params& p, const Tolerances& tol, std::uint64_t) {
  const QubitMeter meter{p.at("theta")};
  const double a2 = p.at("alpha2");
  if (a2 < 0.0 || a2 > 1.0) throw InvalidArgument("ancilla: alpha2 must lie in [0, 1]");
  const Ket s{std::sqrt(a2), std::exp(kI * p.at("phase")) * std::sqrt(1.0 - a2)};
  const DensityMatrix sigma0 = DensityMatrix::pure(s, tol);
  const PreMeasurement pm = qubit_premeasurement(meter, tol);
  const DensityMatrix tau1 = premeasure(pm, sigma0, tol);
  const MeasurementOperatorSet ops = measurement_operators(pm, tol);
  const EffectSet eff = effects(ops, tol);
  const DensityMatrix sigma1 = partial_trace(tau1, {2, 2}, Keep::First, tol);
  Rows rows;
  ComplexMatrix mixed = ComplexMatrix::Zero(2, 2);
  for (Index k = 0; k < 2; ++k) {
    const Readout r = readout(pm, tau1, k, tol);
    mixed += r.probability * r.state.matrix();
    rows.emplace_back("prob_m" + std::to_string(k), r.probability);
  }
  const double c = std::cos(meter.theta / 2.0);
  const double sn = std::sin(meter.theta / 2.0);
  rows.emplace_back("prob_m0_closed_form", c * c * a2 + sn * sn * (1.0 - a2));
  rows.emplace_back("marker_overlap", pm.marker_gram()(0, 1).real());
  rows.emplace_back("sigma1_01_abs", std::abs(sigma1(0, 1)));
  rows.emplace_back("sigma0_01_abs_times_overlap", std::abs(sigma0(0, 1)) * std::sin(meter.theta));
  rows.emplace_back("omega0_00", ops.operators[0](0, 0).real());
  rows.emplace_back("omega0_11", ops.operators[0](1, 1).real());
  rows.emplace_back("effect0_00", eff.effects[0](0, 0).real());
  rows.emplace_back("effect0_11", eff.effects[0](1, 1).real());
  rows.emplace_back("effects_completeness_error",
                    max_abs(eff.effects[0] + eff.effects[1] - ComplexMatrix::Identity(2, 2)));
  rows.emplace_back("unconditional_neutrality_error", max_abs(mixed - sigma1.matrix()));
  return {rows, std::nullopt};
}

Result von_neumann(const Params& p, const Tolerances& tol, std::uint64_t) {
  const double g = p.at("g");
  const double delta = p.at("delta");
  const double a2 = p.at("alpha2");
  if (a2 < 0.0 || a2 > 1.0) throw InvalidArgument("von-neumann: alpha2 must lie in [0, 1]");
  const GaussianPointer meter = GaussianPointer::with_default_grid(delta, g, 1.0, as_index(p.at("points")));
  const Observable z(pauli::z(), tol);
  const DensityMatrix sigma0 = DensityMatrix::pure(Ket{std::sqrt(a2), std::sqrt(1.0 - a2)}, tol);
  const PreMeasurement pm = von_neumann_premeasurement(meter, z, tol);
  const PointerMoments m = pointer_moments(meter, meter_reduced(pm, sigma0, tol));
  const PointerMoments m0 = pointer_moments(meter, meter.initial());
  const double mean_s = expectation(z, sigma0).real();
  const double var_s = 1.0 - mean_s * mean_s;
  double marker_diff = 0.0;
  const std::vector<Ket> via_p = von_neumann_momentum_markers(meter, z);
  for (std::size_t i = 0; i < via_p.size(); ++i) {
    marker_diff = std::max(marker_diff, (via_p[i].amplitudes() - pm.markers()[i].amplitudes()).cwiseAbs().maxCoeff());
  }
  return {Rows{{"q_mean", m.q},
               {"q_mean_expected", g * mean_s},
               {"q_variance", m.q_variance()},
               {"q_variance_expected", m0.q_variance() + g * g * var_s},
               {"p2_initial", m0.p2},
               {"p2_initial_expected", 1.0 / (4.0 * delta * delta)},
               {"marker_vs_momentum_max_diff", marker_diff},
               {"overlap_quadrature", gaussian_overlap(meter, g, -g)},
               {"overlap_closed_form", std::exp(-g * g / (2.0 * delta * delta))},
               {"grid_half_width", meter.half_width()}},
          std::nullopt};
}

Result amplify(const Params& p, const Tolerances&, std::uint64_t seed) {
  const double a2 = p.at("alpha2");
  if (!(a2 > 0.0 && a2 < 1.0)) throw InvalidArgument("amplify: alpha2 must lie strictly inside (0, 1)");
  const GaussianPointer meter = GaussianPointer::with_default_grid(p.at("delta"), p.at("g"), 1.0);
  const AmplificationReport r = amplification_scan(Ket{std::sqrt(a2), std::sqrt(1.0 - a2)}, meter, seed,
                                                   static_cast<std::size_t>(as_index(p.at("samples"))),
                                                   as_index(p.at("grid")));
  return {Rows{{"max_fq", r.max_fq},
               {"bound", r.bound},
               {"max_fq_over_g", r.max_fq / meter.g()},
               {"r_quadrature", r.r_quadrature},
               {"r_closed_form", r.r_closed_form},
               {"argmax_theta", r.theta},
               {"argmax_phi", r.phi},
               {"prob", r.prob},
               {"prob_small_g", r.prob_small_g},
               {"prob_closed_form", r.prob_closed_form},
               {"variance", r.variance},
               {"initial_variance", r.initial_variance},
               {"random_max_fq", r.random_max},
               {"random_samples", static_cast<double>(r.random_samples)},
               {"random_violations", static_cast<double>(r.random_violations)}},
          std::nullopt};
}

Result weak_sweep(const Params& p, const Tolerances& tol, std::uint64_t) {
  const double g = p.at("g");
  const GaussianPointer meter = GaussianPointer::with_default_grid(p.at("delta"), g, 1.0);
  const Observable z(pauli::z(), tol);
  const Ket pre = qubit(p.at("pre_theta"), p.at("pre_phi"));
  const Ket post = qubit(p.at("post_theta"), p.at("post_phi"));
  const WeakSetup setup{pre, z, post, meter};
  const WeakReport w = postselect_meter_2nd(setup, tol);
  const MeterObservableWeak n = meter_observable_weak(setup, momentum_matrix(meter), tol);
  const DensityMatrix sigma0 = DensityMatrix::pure(pre, tol);
  const double update = max_abs(weak_system_update_exact(setup, sigma0, tol).matrix() -
                                weak_system_update(setup, sigma0, tol).matrix());
  const double ov_exact = marker_overlap_exact(meter, 1.0, -1.0);
  const double ov_formula = marker_overlap_weak(meter, 1.0, -1.0);

  struct Pair {
    double exact, formula;
  };
  const Pair pairs[] = {{w.prob_post_exact, w.prob_post_2nd}, {w.pointer_q_exact, w.pointer_q},
                        {w.pointer_p_exact, w.pointer_p},     {ov_exact, ov_formula},
                        {update, 0.0},                         {n.exact, n.value}};
  const Index which = as_index(p.at("quantity"));
  if (which < 0 || which > 5) throw InvalidArgument("weak-sweep: quantity must be 0..5");
  const Pair sel = pairs[which];
  return {Rows{{"exact", sel.exact},
               {"formula", sel.formula},
               {"abs_delta", std::abs(sel.exact - sel.formula)},
               {"weak_value_re", w.weak_value.real()},
               {"weak_value_im", w.weak_value.imag()},
               {"denominator", w.denominator},
               {"prob_exact", w.prob_post_exact},
               {"prob_formula", w.prob_post_2nd},
               {"fq_exact", w.pointer_q_exact},
               {"fq_formula", w.pointer_q},
               {"fp_exact", w.pointer_p_exact},
               {"fp_formula", w.pointer_p},
               {"overlap_exact", ov_exact},
               {"overlap_formula", ov_formula},
               {"system_update_delta", update},
               {"n_exact", n.exact},
               {"n_formula", n.value},
               {"q2_exact", w.pointer_q2_exact},
               {"q2_formula", w.pointer_q2},
               {"p2_exact", w.pointer_p2_exact},
               {"p2_formula", w.pointer_p2}},
          std::nullopt};
}

Result lgi(const Params& p, const Tolerances& tol, std::uint64_t) {
  if (as_bool(p.at("search"))) {
    const LgiSearch s = lgi_search(as_index(p.at("grid")));
    Rows rows{{"max_B", s.max_b}, {"max_B_expected", 13.0 / 12.0}, {"optimum_count", static_cast<double>(s.optima.size())}};
    for (std::size_t k = 0; k < s.optima.size(); ++k) {
      const std::string tag = "optimum_" + std::to_string(k) + "_";
      rows.emplace_back(tag + "beta", s.optima[k].beta);
      rows.emplace_back(tag + "phi", s.optima[k].phi);
      rows.emplace_back(tag + "cos_phi", std::cos(s.optima[k].phi));
      rows.emplace_back(tag + "B", s.optima[k].b);
    }
    return {rows, std::nullopt};
  }
  const LgiReport r = lgi_qubit(p.at("beta"), p.at("phi"), tol);
  Rows rows{{"B", r.b_mean}, {"mean_s", r.mean_s}, {"overlap2", r.overlap2}};
  if (r.re_sw) rows.emplace_back("re_weak_value", *r.re_sw);
  rows.emplace_back("violated", r.violated ? 1.0 : 0.0);
  return {rows, std::nullopt};
}

Result three_box_run(const Params& p, const Tolerances& tol, std::uint64_t) {
  const ThreeBoxReport r = three_box(p.at("theta"), p.at("g"), p.at("delta"), tol);
  return {Rows{{"ABL_A", r.abl_a},
               {"ABL_B", r.abl_b},
               {"ABL_C", r.abl_c},
               {"weak_A", r.weak_a.real()},
               {"weak_B", r.weak_b.real()},
               {"weak_C", r.weak_c.real()},
               {"weak_sum", (r.weak_a + r.weak_b + r.weak_c).real()},
               {"weak_C_closed_form", r.weak_c_closed_form},
               {"pointer_P", r.pointer_p},
               {"pointer_P_over_g", r.pointer_p_over_g},
               {"post_probability", r.post_probability}},
          std::nullopt};
}

Result spin_target_run(const Params& p, const Tolerances& tol, std::uint64_t) {
  const double a = p.at("pre_angle");
  const SpinTargetReport r = spin_target(Ket{std::cos(a), std::sin(a)}, p.at("target"), p.at("window"), p.at("delta"), tol);
  return {Rows{{"weak_value_re", r.weak_value.real()},
               {"weak_value_im", r.weak_value.imag()},
               {"post_0_re", r.post[0].real()},
               {"post_0_im", r.post[0].imag()},
               {"post_1_re", r.post[1].real()},
               {"post_1_im", r.post[1].imag()},
               {"overlap", r.overlap},
               {"g", r.g},
               {"fq", r.fq_exact},
               {"fq_over_g", r.fq_over_g},
               {"breakdown_band", r.breakdown_band}},
          std::nullopt};
}

Result wavefn(const Params& p, const Tolerances& tol, std::uint64_t seed) {
  const Index d = as_index(p.at("dim"));
  if (d < 1) throw InvalidArgument("wavefn: dim must be positive");
  Rng rng(seed);
  Ket psi = random_ket(d, rng);
  while (std::abs(psi.amplitudes().sum()) < 1e-3) psi = random_ket(d, rng);
  const WavefunctionReport exact = reconstruct_wavefunction(psi, tol);
  const WavefunctionReport sim = reconstruct_wavefunction_simulated(psi, p.at("g"), tol);
  Table detail{{"x", "psi_re", "psi_im", "exact_re", "exact_im", "simulated_re", "simulated_im"}, {}};
  for (Index x = 0; x < d; ++x) {
    detail.rows.push_back({static_cast<double>(x), psi[x].real(), psi[x].imag(), exact.reconstructed(x).real(),
                           exact.reconstructed(x).imag(), sim.reconstructed(x).real(), sim.reconstructed(x).imag()});
  }
  return {Rows{{"fidelity_exact", exact.fidelity}, {"fidelity_simulated", sim.fidelity}}, detail};
}

Result two_slit(const Params& p, const Tolerances&, std::uint64_t) {
  TwoSlitConfig c;
  c.separation = p.at("separation");
  c.width = p.at("width");
  c.points = as_index(p.at("points"));
  c.steps = as_index(p.at("steps"));
  c.z_final = p.at("z_final");
  c.half_width = p.at("half_width");
  c.trajectories = as_index(p.at("trajectories"));
  c.bins = as_index(p.at("bins"));
  c.single_slit = as_bool(p.at("single_slit"));
  const TwoSlitResult r = two_slit_trajectories(c);
  Table detail;
  detail.header.push_back("z");
  for (Index j = 0; j < r.x.cols(); ++j) detail.header.push_back("x" + std::to_string(j));
  for (Index s = 0; s < r.x.rows(); ++s) {
    std::vector<double> row{r.z(s)};
    for (Index j = 0; j < r.x.cols(); ++j) row.push_back(r.x(s, j));
    detail.rows.push_back(std::move(row));
  }
  const Index last = r.x.rows() - 1;
  return {Rows{{"correlation", r.correlation},
               {"ordered_every_step", r.ordered_every_step ? 1.0 : 0.0},
               {"final_min_x", r.x.row(last).minCoeff()},
               {"final_max_x", r.x.row(last).maxCoeff()}},
          detail};
}

Result zeno(const Params& p, const Tolerances& tol, std::uint64_t) {
  const Index n = as_index(p.at("n"));
  if (n < 1) throw InvalidArgument("zeno: n must be positive");
  std::vector<Index> ladder;
  for (Index k = 1; k < n; k *= 2) ladder.push_back(k);
  ladder.push_back(n);
  const std::vector<ZenoRow> rows = zeno_sweep(p.at("gamma"), p.at("t_final"), p.at("delta"), ladder, tol);
  Table detail{{"n", "g", "overlap", "disturbance", "second_order", "limit"}, {}};
  bool monotone = true;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const ZenoRow& r = rows[k];
    detail.rows.push_back({static_cast<double>(r.n), r.g, r.overlap, r.disturbance, r.second_order, r.limit});
    if (k > 0 && !(r.disturbance < rows[k - 1].disturbance)) monotone = false;
  }
  const ZenoRow& r = rows.back();
  return {Rows{{"disturbance", r.disturbance},
               {"second_order", r.second_order},
               {"limit", r.limit},
               {"overlap", r.overlap},
               {"g", r.g},
               {"monotone", monotone ? 1.0 : 0.0}},
          detail};
}

Result lindblad(const Params& p, const Tolerances& tol, std::uint64_t) {
  const double eta = p.at("eta");
  const double omega = p.at("omega");
  const double t = p.at("t_final");
  const LindbladModel model{Observable(0.5 * omega * pauli::y(), tol), {{Observable(pauli::z(), tol), eta}}};
  const DensityMatrix sigma0 = DensityMatrix::pure(qubit(p.at("theta"), 0.0), tol);
  const LindbladResult r = lindblad_integrate(model, sigma0, t, p.at("dt"));
  const ComplexMatrix u = matexp_hermitian(model.h, t);
  const ComplexMatrix closed = u * sigma0.matrix() * u.adjoint();
  double repeated_trace = 0.0;
  const DensityMatrix rep = lindblad_repeated(model, sigma0, t, as_index(p.at("n")), &repeated_trace, tol);
  return {Rows{{"sigma00", r.state(0, 0).real()},
               {"sigma11", r.state(1, 1).real()},
               {"sigma01_re", r.state(0, 1).real()},
               {"sigma01_im", r.state(0, 1).imag()},
               {"dephasing_closed_form_01", std::abs(sigma0(0, 1)) * std::exp(-4.0 * eta * eta * t)},
               {"unitary_max_diff", max_abs(r.state.matrix() - closed)},
               {"steps", static_cast<double>(r.steps)},
               {"max_trace_error", r.max_trace_error},
               {"max_hermiticity_error", r.max_hermiticity_error},
               {"min_eigenvalue", r.min_eigenvalue},
               {"repeated_max_diff", max_abs(rep.matrix() - r.state.matrix())},
               {"repeated_max_trace_error", repeated_trace}},
          std::nullopt};
}

constexpr Kind R = Kind::Real;
constexpr Kind I = Kind::Integer;
constexpr Kind B = Kind::Boolean;

}  // namespace

const std::vector<Scenario>& scenarios() {
  const double pi = std::numbers::pi;
  static const std::vector<Scenario> all{
      {"luders", "projective sigma_z measurement of a (partly mixed) qubit",
       {{"theta", R, pi / 2.0, "Bloch polar angle of the pure part"},
        {"phi", R, 0.0, "Bloch azimuth of the pure part"},
        {"mix", R, 0.0, "weight of I/2"},
        {"outcome", R, 1.0, "conditioning eigenvalue"}},
       luders},
      {"abl", "ABL rule for a Three-Box projector",
       {{"theta", R, three_box_canonical_theta(), "post-selection angle"},
        {"box", I, 2.0, "0 = A, 1 = B, 2 = C"}},
       abl},
      {"ancilla", "double-qubit ancilla measurement",
       {{"theta", R, 0.5, "meter angle"},
        {"alpha2", R, 0.5, "|alpha|^2 of the system state"},
        {"phase", R, 0.0, "relative phase of the system state"}},
       ancilla},
      {"von-neumann", "Gaussian pointer pre-measurement of sigma_z",
       {{"g", R, 0.5, "coupling"},
        {"delta", R, 1.0, "pointer width"},
        {"alpha2", R, 0.5, "|alpha|^2 of the system state"},
        {"points", I, 1024.0, "grid points"}},
       von_neumann},
      {"amplify", "amplification by post-selection",
       {{"g", R, 0.3, "coupling"},
        {"delta", R, 1.0, "pointer width"},
        {"alpha2", R, 0.6, "|alpha|^2 of the system state"},
        {"samples", I, 10000.0, "random post-selections"},
        {"grid", I, 200.0, "scan grid per axis"}},
       amplify},
      {"weak-sweep", "second-order weak measurement against exact evolution",
       {{"g", R, 1e-2, "coupling"},
        {"delta", R, 1.0, "pointer width"},
        {"pre_theta", R, 0.8, "pre-selection polar angle"},
        {"pre_phi", R, 0.7, "pre-selection azimuth"},
        {"post_theta", R, 2.2, "post-selection polar angle"},
        {"post_phi", R, -0.3, "post-selection azimuth"},
        {"quantity", I, 0.0, "0 prob, 1 fQ, 2 fP, 3 overlap, 4 system update, 5 <N>"}},
       weak_sweep},
      {"lgi", "Leggett-Garg quantity with a weak value",
       {{"beta", R, -1.0 / 6.0, "system amplitude of |1>"},
        {"phi", R, std::acos(1.0 / 6.0), "post-selection angle"},
        {"search", B, 0.0, "search for the maximum"},
        {"grid", I, 400.0, "search grid per axis"}},
       lgi},
      {"three-box", "Three-Box paradox",
       {{"theta", R, three_box_canonical_theta(), "post-selection angle"},
        {"g", R, 1e-2, "meter coupling"},
        {"delta", R, 1.0, "pointer width"}},
       three_box_run},
      {"spin-target", "post-selection for a prescribed sigma_z weak value",
       {{"pre_angle", R, 0.3, "pre-state (cos a, sin a)"},
        {"target", R, 100.0, "weak value"},
        {"window", R, 0.01, "g |target| / delta"},
        {"delta", R, 1.0, "pointer width"}},
       spin_target_run},
      {"wavefn", "direct wave-function reconstruction",
       {{"dim", I, 8.0, "dimension"}, {"g", R, 1e-3, "qubit pointer coupling"}},
       wavefn},
      {"two-slit", "two-slit weak-velocity trajectories",
       {{"separation", R, 10.0, "slit separation"},
        {"width", R, 1.0, "slit width"},
        {"points", I, 512.0, "grid points"},
        {"steps", I, 200.0, "z steps"},
        {"z_final", R, 40.0, "propagation distance"},
        {"half_width", R, 100.0, "grid half-width"},
        {"trajectories", I, 401.0, "trajectory count"},
        {"bins", I, 40.0, "histogram bins"},
        {"single_slit", B, 0.0, "single slit"}},
       two_slit},
      {"zeno", "Zeno limit of repeated measurement",
       {{"gamma", R, 1.0, "coupling rate"},
        {"t_final", R, 1.0, "total time"},
        {"delta", R, 1.0, "pointer width"},
        {"n", I, 1024.0, "number of measurements"}},
       zeno},
      {"lindblad", "Lindblad dephasing and its repeated-measurement origin",
       {{"eta", R, 0.5, "dephasing rate"},
        {"omega", R, 0.0, "H = omega sigma_y / 2"},
        {"theta", R, pi / 2.0, "initial Bloch polar angle"},
        {"t_final", R, 1.0, "time"},
        {"dt", R, 1e-3, "RK4 step"},
        {"n", I, 64.0, "repeated-measurement steps"}},
       lindblad},
  };
  return all;
}

const Scenario& find_scenario(const std::string& name) {
  for (const auto& s : scenarios()) {
    if (s.name == name) return s;
  }
  throw ConfigError("unknown scenario '" + name + "'");
}

}  // namespace qmeas::cli
