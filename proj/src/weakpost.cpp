#include "qmeas/weakpost.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "optimize.hpp"

namespace qmeas {

namespace {

const GaussianPointer& gaussian(const WeakSetup& setup) {
  const auto* m = std::get_if<GaussianPointer>(&setup.meter);
  if (m == nullptr) throw InvalidArgument("weak expansion requires a Gaussian pointer meter");
  return *m;
}

void require_pure_setup(const WeakSetup& setup, const Tolerances& tol) {
  if (setup.pre.dim() != setup.observable.dim() || setup.post.dim() != setup.observable.dim()) {
    throw DimensionMismatch("WeakSetup: states do not match the observable");
  }
  if (!setup.pre.is_normalized(tol.normalization) || !setup.post.is_normalized(tol.normalization)) {
    throw InvalidArgument("WeakSetup: pre- and post-selected states must be normalized");
  }
}

double p2_initial(const GaussianPointer& meter) { return pointer_moments(meter, meter.initial()).p2; }

struct Expansion {
  complex sw;
  complex x;
  double d;
  double n2;
  double overlap2;  // |<f|s>|^2
};

Expansion expand(const WeakSetup& setup, const Tolerances& tol) {
  require_pure_setup(setup, tol);
  const GaussianPointer& meter = gaussian(setup);
  Expansion e;
  e.sw = weak_value(setup.pre, setup.observable, setup.post, tol);
  const ComplexMatrix s = setup.observable.matrix();
  e.x = weak_value(setup.pre, ComplexMatrix(s * s), setup.post, tol);
  e.n2 = p2_initial(meter);
  const double g = meter.g();
  e.d = 1.0 - g * g * e.n2 * (e.x - std::norm(e.sw)).real();
  e.overlap2 = std::norm(setup.post.inner(setup.pre));
  return e;
}

// Exact post-selected pointer expectation of L for a pure pre-state.
double exact_expectation(const ComplexVector& psi, const ComplexMatrix& l) {
  return psi.dot(l * psi).real() / psi.squaredNorm();
}

}  // namespace

complex weak_value(const Ket& pre, const ComplexMatrix& op, const Ket& post, const Tolerances& tol) {
  if (op.rows() != pre.dim() || op.cols() != pre.dim() || post.dim() != pre.dim()) {
    throw DimensionMismatch("weak_value: operand dimensions differ");
  }
  const complex ov = post.inner(pre);
  if (std::abs(ov) <= tol.overlap_floor) {
    std::ostringstream os;
    os << "weak_value: |<f|s>| = " << std::abs(ov) << " is below the floor " << tol.overlap_floor;
    throw ZeroProbability(os.str());
  }
  return post.amplitudes().dot(op * pre.amplitudes()) / ov;
}

complex weak_value(const Ket& pre, const Observable& obs, const Ket& post, const Tolerances& tol) {
  return weak_value(pre, obs.matrix(), post, tol);
}

PreMeasurement setup_premeasurement(const WeakSetup& setup, const Tolerances& tol) {
  if (const auto* g = std::get_if<GaussianPointer>(&setup.meter)) {
    return von_neumann_premeasurement(*g, setup.observable, tol);
  }
  return qubit_premeasurement(std::get<QubitMeter>(setup.meter), setup.observable, tol);
}

DensityMatrix weak_system_update(const WeakSetup& setup, const DensityMatrix& sigma0, const Tolerances& tol) {
  const GaussianPointer& meter = gaussian(setup);
  if (sigma0.dim() != setup.observable.dim()) throw DimensionMismatch("weak_system_update: state does not match");
  const ComplexMatrix& s = setup.observable.matrix();
  const double g = meter.g();
  const ComplexMatrix dc = commutator(commutator(sigma0.matrix(), s), s);
  return DensityMatrix::assume_positive(sigma0.matrix() - 0.5 * g * g * p2_initial(meter) * dc, tol);
}

DensityMatrix weak_system_update_exact(const WeakSetup& setup, const DensityMatrix& sigma0, const Tolerances& tol) {
  return apply_unconditional(setup_premeasurement(setup, tol), sigma0, tol);
}

double marker_overlap_weak(const GaussianPointer& meter, double s_i, double s_j) {
  const double g = meter.g();
  return 1.0 - 0.5 * g * g * p2_initial(meter) * (s_i - s_j) * (s_i - s_j);
}

double marker_overlap_exact(const GaussianPointer& meter, double s_i, double s_j) {
  return gaussian_overlap(meter, meter.g() * s_i, meter.g() * s_j);
}

ComplexVector postselect_meter_vector(const PreMeasurement& pm, const Ket& pre, const Ket& post) {
  if (pre.dim() != pm.system_dim() || post.dim() != pm.system_dim()) {
    throw DimensionMismatch("postselect: states do not match the system dimension");
  }
  const ComplexMatrix& w = pm.system_basis();
  const ComplexVector fs = w.adjoint() * post.amplitudes();
  const ComplexVector cs = w.adjoint() * pre.amplitudes();
  ComplexVector out = ComplexVector::Zero(pm.meter_dim());
  for (Index i = 0; i < pm.system_dim(); ++i) {
    out += std::conj(fs(i)) * cs(i) * pm.markers()[static_cast<std::size_t>(i)].amplitudes();
  }
  return out;
}

PostSelected postselect_meter_exact(const PreMeasurement& pm, const Ket& post, const DensityMatrix& sigma0,
                                    const Tolerances& tol) {
  if (post.dim() != pm.system_dim() || sigma0.dim() != pm.system_dim()) {
    throw DimensionMismatch("postselect: states do not match the system dimension");
  }
  if (!post.is_normalized(tol.normalization)) throw InvalidArgument("postselect: post-selected state not normalized");
  // G = sum_i <f|s_i> |m^(i)><s_i|
  const ComplexMatrix& w = pm.system_basis();
  const ComplexVector fs = w.adjoint() * post.amplitudes();
  ComplexMatrix gm = pm.marker_matrix() * fs.conjugate().asDiagonal() * w.adjoint();
  const ComplexMatrix num = gm * sigma0.matrix() * gm.adjoint();
  const double prob = num.trace().real();
  if (prob <= tol.min_probability) {
    std::ostringstream os;
    os << "postselect: post-selection probability " << prob << " below floor";
    throw ZeroProbability(os.str());
  }
  return {DensityMatrix::assume_positive(num / prob, tol), prob};
}

PostSelected postselect_meter_exact(const WeakSetup& setup, const DensityMatrix& sigma0, const Tolerances& tol) {
  return postselect_meter_exact(setup_premeasurement(setup, tol), setup.post, sigma0, tol);
}

SecondOrderMeter::SecondOrderMeter(ComplexMatrix vectors, ComplexMatrix coefficients, double denominator)
    : vectors_(std::move(vectors)), coefficients_(std::move(coefficients)), denominator_(denominator) {
  if (coefficients_.rows() != vectors_.cols() || coefficients_.cols() != vectors_.cols()) {
    throw DimensionMismatch("SecondOrderMeter: coefficient matrix does not match vectors");
  }
  if (!(std::abs(denominator_) > 0.0)) throw ZeroProbability("SecondOrderMeter: vanishing denominator");
}

complex SecondOrderMeter::expectation(const ComplexMatrix& l) const {
  if (l.rows() != vectors_.rows() || l.cols() != vectors_.rows()) {
    throw DimensionMismatch("SecondOrderMeter: operator does not match meter space");
  }
  // Tr(L sum C_ab |v_a><v_b|) = sum_ab C_ab <v_b|L|v_a>
  const ComplexMatrix lv = vectors_.adjoint() * (l * vectors_);
  return (coefficients_.cwiseProduct(lv.transpose())).sum() / denominator_;
}

complex SecondOrderMeter::trace() const {
  const ComplexMatrix gram = vectors_.adjoint() * vectors_;
  return (coefficients_.cwiseProduct(gram.transpose())).sum() / denominator_;
}

ComplexMatrix SecondOrderMeter::matrix() const {
  return vectors_ * coefficients_ * vectors_.adjoint() / denominator_;
}

SecondOrderMeter second_order_meter(const WeakSetup& setup, const Tolerances& tol) {
  const Expansion e = expand(setup, tol);
  const GaussianPointer& meter = gaussian(setup);
  const double g = meter.g();
  ComplexMatrix v(meter.size(), 3);
  v.col(0) = meter.initial();
  v.col(1) = meter.apply_p(v.col(0));
  v.col(2) = meter.apply_p(v.col(1));
  ComplexMatrix c = ComplexMatrix::Zero(3, 3);
  c(0, 0) = 1.0;
  c(1, 0) = -kI * g * e.sw;
  c(0, 1) = std::conj(c(1, 0));
  c(1, 1) = g * g * std::norm(e.sw);
  c(2, 0) = -0.5 * g * g * e.x;
  c(0, 2) = std::conj(c(2, 0));
  return SecondOrderMeter(std::move(v), std::move(c), e.d);
}

ComplexMatrix position_matrix(const GaussianPointer& meter) {
  return meter.positions().cast<complex>().asDiagonal();
}

ComplexMatrix momentum_matrix(const GaussianPointer& meter) {
  const Index n = meter.size();
  ComplexMatrix p(n, n);
  for (Index c = 0; c < n; ++c) {
    ComplexVector e = ComplexVector::Zero(n);
    e(c) = 1.0;
    p.col(c) = meter.apply_p(e);
  }
  return hermitian_part(p);
}

WeakReport postselect_meter_2nd(const WeakSetup& setup, const Tolerances& tol) {
  const Expansion e = expand(setup, tol);
  const GaussianPointer& meter = gaussian(setup);
  const SecondOrderMeter mu2 = second_order_meter(setup, tol);
  const PointerReadout readout = pointer_readout_weak(setup, tol);

  const PreMeasurement pm = von_neumann_premeasurement(meter, setup.observable, tol);
  const ComplexVector psi = postselect_meter_vector(pm, setup.pre, setup.post);
  const double prob = psi.squaredNorm();
  if (prob <= tol.min_probability) throw ZeroProbability("postselect: post-selection probability below floor");
  const PointerMoments exact = pointer_moments(meter, psi);

  const RealVector& qv = meter.positions();
  const RealVector& pv = meter.momenta();
  const ComplexMatrix& v = mu2.vectors();
  const ComplexMatrix q2v = v.adjoint() * (qv.cwiseAbs2().cast<complex>().asDiagonal() * v);
  // Tr(P^2 mu) via momentum amplitudes of the three basis vectors.
  ComplexMatrix vp(meter.size(), 3);
  for (Index a = 0; a < 3; ++a) vp.col(a) = meter.to_momentum(mu2.vectors().col(a));
  const ComplexMatrix p2v = vp.adjoint() * (pv.cwiseAbs2().cast<complex>().asDiagonal() * vp);

  WeakReport r;
  r.weak_value = e.sw;
  r.square_weak_value = e.x;
  r.denominator = e.d;
  r.prob_post_exact = prob;
  r.prob_post_2nd = e.overlap2 * e.d;
  r.pointer_q = readout.q;
  r.pointer_p = readout.p;
  r.pointer_q2 = (mu2.coefficients().cwiseProduct(q2v.transpose())).sum().real() / mu2.denominator();
  r.pointer_p2 = (mu2.coefficients().cwiseProduct(p2v.transpose())).sum().real() / mu2.denominator();
  r.pointer_q_exact = exact.q;
  r.pointer_p_exact = exact.p;
  r.pointer_q2_exact = exact.q2;
  r.pointer_p2_exact = exact.p2;
  r.pointer_q_var_exact = exact.q_variance();
  r.exact_minus_formula = {r.prob_post_exact - r.prob_post_2nd, r.pointer_q_exact - r.pointer_q,
                           r.pointer_p_exact - r.pointer_p};
  return r;
}

PointerReadout pointer_readout_weak(const WeakSetup& setup, const Tolerances& tol) {
  const Expansion e = expand(setup, tol);
  const GaussianPointer& meter = gaussian(setup);
  const PointerMoments m0 = pointer_moments(meter, meter.initial());
  const double g = meter.g();
  return {g * (e.sw.real() + m0.qp_anti * e.sw.imag()) / e.d, 2.0 * g * m0.p2 * e.sw.imag() / e.d};
}

MeterObservableWeak meter_observable_weak(const WeakSetup& setup, const ComplexMatrix& l, const Tolerances& tol) {
  const Expansion e = expand(setup, tol);
  const GaussianPointer& meter = gaussian(setup);
  if (l.rows() != meter.size() || l.cols() != meter.size()) {
    throw DimensionMismatch("meter_observable_weak: operator does not match meter grid");
  }
  if (!is_hermitian(l, 1e-9 * std::max(1.0, max_abs(l)))) {
    throw InvalidArgument("meter_observable_weak: operator is not Hermitian");
  }
  const double g = meter.g();
  const ComplexVector& phi0 = meter.initial();
  const ComplexVector nphi = meter.apply_p(phi0);
  const ComplexVector lphi = l * phi0;
  const double l0 = phi0.dot(lphi).real();
  const complex ln = phi0.dot(l * nphi);   // <L N>_0
  const complex nl = nphi.dot(lphi);      // <N L>_0
  const double comm = (-kI * (ln - nl)).real();
  const double anti = (ln + nl).real();

  MeterObservableWeak out;
  out.value = second_order_meter(setup, tol).expectation(l).real();
  out.first_order = (l0 + 2.0 * g * (e.sw * ln).imag()) / e.d;
  out.commutator_part = g * comm * e.sw.real() / e.d;
  out.anticommutator_part = g * anti * e.sw.imag() / e.d;
  const PreMeasurement pm = von_neumann_premeasurement(meter, setup.observable, tol);
  out.exact = exact_expectation(postselect_meter_vector(pm, setup.pre, setup.post), l);
  return out;
}

// ---------------------------------------------------------------- amplification

namespace {

struct QubitPointerForms {
  Eigen::Matrix2cd gram;  // <phi_a|phi_b>, a, b in {+g, -g}
  Eigen::Matrix2cd q;     // <phi_a|Q|phi_b>
  Eigen::Matrix2cd q2;    // <phi_a|Q^2|phi_b>
};

struct Evaluation {
  double fq;
  double q2;
  double prob;
};

Evaluation evaluate(const QubitPointerForms& forms, const Ket& pre, double t, double phi) {
  const complex f0 = std::cos(t / 2.0);
  const complex f1 = std::exp(kI * phi) * std::sin(t / 2.0);
  Eigen::Vector2cd c;
  c << pre[0] * std::conj(f0), pre[1] * std::conj(f1);
  const double prob = c.dot(forms.gram * c).real();
  if (!(prob > 0.0)) return {0.0, 0.0, 0.0};
  return {c.dot(forms.q * c).real() / prob, c.dot(forms.q2 * c).real() / prob, prob};
}

}  // namespace

AmplificationReport amplification_scan(const Ket& pre, const GaussianPointer& meter, std::uint64_t seed,
                                       std::size_t random_samples, Index grid) {
  if (pre.dim() != 2) throw DimensionMismatch("amplification_scan: pre-state must be a qubit");
  if (!pre.is_normalized(1e-12)) throw InvalidArgument("amplification_scan: pre-state not normalized");
  if (std::abs(pre[0]) == 0.0 || std::abs(pre[1]) == 0.0) {
    throw InvalidArgument("amplification_scan: pre-state must have both components");
  }
  if (grid < 4) throw InvalidArgument("amplification_scan: grid too small");
  const double g = meter.g();
  const ComplexVector plus = meter.pointer_shift(1.0);
  const ComplexVector minus = meter.pointer_shift(-1.0);
  const RealVector& qv = meter.positions();
  QubitPointerForms forms;
  const ComplexVector* v[2] = {&plus, &minus};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      forms.gram(a, b) = v[a]->dot(*v[b]);
      forms.q(a, b) = v[a]->dot(qv.cast<complex>().cwiseProduct(*v[b]));
      forms.q2(a, b) = v[a]->dot(qv.cwiseAbs2().cast<complex>().cwiseProduct(*v[b]));
    }
  }
  const double r = forms.gram(0, 1).real();

  // Grid scan over (theta, phi) in [0, pi] x [0, 2 pi).
  const double pi = std::numbers::pi;
  double best = -1.0;
  double bt = 0.0;
  double bp = 0.0;
  for (Index i = 0; i <= grid; ++i) {
    const double t = pi * static_cast<double>(i) / static_cast<double>(grid);
    for (Index j = 0; j < grid; ++j) {
      const double ph = 2.0 * pi * static_cast<double>(j) / static_cast<double>(grid);
      const double val = std::abs(evaluate(forms, pre, t, ph).fq);
      if (val > best) {
        best = val;
        bt = t;
        bp = ph;
      }
    }
  }
  const double ht = pi / static_cast<double>(grid);
  const double hp = 2.0 * pi / static_cast<double>(grid);
  for (int sweep = 0; sweep < 6; ++sweep) {
    bt = detail::golden_max([&](double t) { return std::abs(evaluate(forms, pre, t, bp).fq); }, bt - ht, bt + ht, 80);
    bp = detail::golden_max([&](double ph) { return std::abs(evaluate(forms, pre, bt, ph).fq); }, bp - hp, bp + hp, 80);
  }
  const Evaluation at = evaluate(forms, pre, bt, bp);

  AmplificationReport rep;
  rep.max_fq = std::abs(at.fq);
  rep.bound = g / std::sqrt(1.0 - r * r);
  rep.r_quadrature = r;
  rep.r_closed_form = std::exp(-g * g / (2.0 * meter.delta() * meter.delta()));
  rep.theta = bt;
  rep.phi = bp;
  rep.post = Ket{std::cos(bt / 2.0), std::exp(kI * bp) * std::sin(bt / 2.0)};
  rep.alpha_f = pre[0] * std::conj(rep.post[0]);
  rep.beta_f = pre[1] * std::conj(rep.post[1]);
  rep.dominant = std::max(std::abs(rep.alpha_f), std::abs(rep.beta_f));
  rep.prob = at.prob;
  const double a2 = rep.dominant * rep.dominant;
  rep.prob_small_g = g * g * a2 * pointer_moments(meter, meter.initial()).p2;
  rep.prob_closed_form = 2.0 * a2 * (1.0 - r * r) / (1.0 + std::sqrt(1.0 - r * r));
  rep.variance = at.q2 - at.fq * at.fq;
  rep.initial_variance = pointer_moments(meter, meter.initial()).q2;

  // Haar-random post-selections: theta from the uniform cos distribution.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  rep.random_max = 0.0;
  rep.random_samples = random_samples;
  rep.random_violations = 0;
  for (std::size_t k = 0; k < random_samples; ++k) {
    const double t = std::acos(1.0 - 2.0 * unit(rng));
    const double ph = 2.0 * pi * unit(rng);
    const double val = std::abs(evaluate(forms, pre, t, ph).fq);
    rep.random_max = std::max(rep.random_max, val);
    if (val > rep.bound * (1.0 + 1e-12)) ++rep.random_violations;
  }
  return rep;
}

// ---------------------------------------------------------------- double qubit

double double_qubit_exact(const Ket& pre, const Ket& post, double theta, const Tolerances& tol) {
  if (pre.dim() != 2 || post.dim() != 2) throw DimensionMismatch("double_qubit: states must be qubits");
  const QubitMeter meter{theta};
  const PreMeasurement pm = qubit_premeasurement(meter, tol);
  const ComplexMatrix u = pm.unitary();
  const DensityMatrix tau0 = DensityMatrix::pure(kron(pre, meter.markers().first), tol);
  const DensityMatrix tau1 = evolve(tau0, u, tol);
  // Project the system onto f and trace it out.
  const ComplexMatrix proj = kron(ComplexMatrix(post.amplitudes().adjoint()), pauli::identity());
  const ComplexMatrix num = proj * tau1.matrix() * proj.adjoint();
  const double prob = num.trace().real();
  if (prob <= tol.min_probability) throw ZeroProbability("double_qubit: post-selection probability below floor");
  return (pauli::z() * num).trace().real() / prob;
}

DoubleQubitWeak double_qubit_weak(const Ket& pre, const Ket& post, double eps, const Tolerances& tol) {
  if (pre.dim() != 2 || post.dim() != 2) throw DimensionMismatch("double_qubit: states must be qubits");
  const complex af = pre[0] * std::conj(post[0]);
  const complex bf = pre[1] * std::conj(post[1]);
  const complex fs = af + bf;
  if (std::abs(fs) <= tol.overlap_floor) throw ZeroProbability("double_qubit: <f|s> below floor");
  const double theta = std::numbers::pi / 2.0 - 2.0 * eps;
  const double delta = 2.0 * eps;
  const complex sw = (af - bf) / fs;
  DoubleQubitWeak out;
  out.formula = delta * sw.real() / (1.0 - delta * delta * (af * std::conj(bf)).real() / std::norm(fs));
  out.prob = std::norm(af) + std::norm(bf) + 2.0 * std::sin(theta) * (af * std::conj(bf)).real();
  out.closed_form = std::cos(theta) * (std::norm(af) - std::norm(bf)) / out.prob;
  out.exact = double_qubit_exact(pre, post, theta, tol);
  return out;
}

}  // namespace qmeas
