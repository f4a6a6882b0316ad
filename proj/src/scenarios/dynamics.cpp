#include <algorithm>
#include <cmath>
#include <sstream>

#include "qmeas/ancilla.hpp"
#include "qmeas/scenarios.hpp"

namespace qmeas {

namespace {

double spectral_norm(const Observable& o) {
  double m = 0.0;
  for (double v : o.eigenvalues()) m = std::max(m, std::abs(v));
  return m;
}

ComplexMatrix lindblad_rhs(const LindbladModel& model, const ComplexMatrix& sigma) {
  const ComplexMatrix& h = model.h.matrix();
  ComplexMatrix out = kI * commutator(sigma, h);
  for (const auto& ch : model.channels) {
    const ComplexMatrix& t = ch.t.matrix();
    out -= ch.eta * ch.eta * commutator(commutator(sigma, t), t);
  }
  return out;
}

void validate(const LindbladModel& model, Index dim) {
  if (model.h.dim() != dim) throw DimensionMismatch("lindblad: Hamiltonian does not match the state");
  for (const auto& ch : model.channels) {
    if (ch.t.dim() != dim) throw DimensionMismatch("lindblad: channel operator does not match the state");
    if (!(ch.eta >= 0.0)) throw InvalidArgument("lindblad: channel rates must be non-negative");
  }
}

Index step_count(double t, double dt) {
  if (!(t >= 0.0)) throw InvalidArgument("lindblad: time must be non-negative");
  if (!(dt > 0.0)) throw InvalidArgument("lindblad: step must be positive");
  return std::max<Index>(1, static_cast<Index>(std::ceil(t / dt - 1e-9)));
}

}  // namespace

std::vector<ZenoRow> zeno_sweep(double gamma, double t_final, double delta, const std::vector<Index>& n_list,
                                const Tolerances& tol) {
  const Observable z(pauli::z());
  const double r2 = 1.0 / std::sqrt(2.0);
  const DensityMatrix sigma0 = DensityMatrix::pure(Ket{r2, r2});
  const double off = std::abs(sigma0(0, 1));
  std::vector<ZenoRow> rows;
  for (Index n : n_list) {
    if (n < 1) throw InvalidArgument("zeno_sweep: step counts must be positive");
    const double g = gamma * t_final / static_cast<double>(n);
    const GaussianPointer meter = GaussianPointer::with_default_grid(delta, g, 1.0);
    const PreMeasurement pm = von_neumann_premeasurement(meter, z, tol);
    DensityMatrix sigma = sigma0;
    for (Index k = 0; k < n; ++k) sigma = apply_unconditional(pm, sigma, tol);
    const double p2 = pointer_moments(meter, meter.initial()).p2;
    ZenoRow row;
    row.n = n;
    row.g = g;
    row.overlap = pm.marker_gram()(0, 1).real();
    row.disturbance = max_abs(sigma.matrix() - sigma0.matrix());
    row.second_order = off * (1.0 - std::pow(1.0 - 2.0 * g * g * p2, static_cast<double>(n)));
    row.limit = off * (1.0 - std::exp(-gamma * gamma * t_final * t_final / (2.0 * delta * delta * static_cast<double>(n))));
    rows.push_back(row);
  }
  return rows;
}

LindbladResult lindblad_integrate(const LindbladModel& model, const DensityMatrix& sigma0, double t, double dt) {
  validate(model, sigma0.dim());
  const Index n = step_count(t, dt);
  const double h = t / static_cast<double>(n);
  double rate = spectral_norm(model.h);
  for (const auto& ch : model.channels) {
    const double tn = spectral_norm(ch.t);
    rate = std::max(rate, ch.eta * ch.eta * tn * tn);
  }
  if (dt * rate >= 0.1) {
    std::ostringstream os;
    os << "lindblad_integrate: step " << dt << " too large; need dt < " << 0.1 / rate;
    throw InvalidArgument(os.str());
  }
  ComplexMatrix s = sigma0.matrix();
  LindbladResult out{sigma0, n, 0.0, 0.0, sigma0.eigenvalues().minCoeff()};
  for (Index k = 0; k < n; ++k) {
    const ComplexMatrix k1 = lindblad_rhs(model, s);
    const ComplexMatrix k2 = lindblad_rhs(model, s + 0.5 * h * k1);
    const ComplexMatrix k3 = lindblad_rhs(model, s + 0.5 * h * k2);
    const ComplexMatrix k4 = lindblad_rhs(model, s + h * k3);
    s += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double tr = std::abs(s.trace() - 1.0);
    const double he = max_abs(s - s.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(s), Eigen::EigenvaluesOnly);
    const double mn = solver.eigenvalues().minCoeff();
    out.max_trace_error = std::max(out.max_trace_error, tr);
    out.max_hermiticity_error = std::max(out.max_hermiticity_error, he);
    out.min_eigenvalue = std::min(out.min_eigenvalue, mn);
    if (tr > 1e-10 || he > 1e-10 || mn < -1e-8) {
      std::ostringstream os;
      os << "lindblad_integrate: step " << k << " left the state contract (trace error " << tr
         << ", Hermiticity error " << he << ", min eigenvalue " << mn << ")";
      throw ContractViolation(os.str());
    }
  }
  Tolerances loose;
  loose.hermiticity = 1e-10;
  loose.trace = 1e-10;
  out.state = DensityMatrix::assume_positive(s, loose);
  return out;
}

DensityMatrix lindblad_repeated(const LindbladModel& model, const DensityMatrix& sigma0, double t, Index n,
                                double* max_trace_error, const Tolerances& tol) {
  validate(model, sigma0.dim());
  if (n < 1) throw InvalidArgument("lindblad_repeated: step count must be positive");
  const double dt = t / static_cast<double>(n);
  const ComplexMatrix u = matexp_hermitian(model.h, dt);
  const MeterModel probe = MeterModel::computational(Ket{1.0, 0.0});
  std::vector<PreMeasurement> probes;
  for (const auto& ch : model.channels) {
    probes.push_back(PreMeasurement::from_hamiltonian(ch.t, probe, pauli::x(), ch.eta * std::sqrt(2.0 * dt), tol));
  }
  Tolerances loose = tol;
  loose.trace = std::max(tol.trace, 1e-10);
  loose.hermiticity = std::max(tol.hermiticity, 1e-10);
  DensityMatrix sigma = sigma0;
  double worst = 0.0;
  for (Index k = 0; k < n; ++k) {
    sigma = evolve(sigma, u, loose);
    for (const auto& pm : probes) sigma = apply_unconditional(pm, sigma, loose);
    worst = std::max(worst, std::abs(sigma.matrix().trace().real() - 1.0));
  }
  if (max_trace_error != nullptr) *max_trace_error = worst;
  return sigma;
}

std::vector<RepeatedRow> lindblad_from_repeated(const LindbladModel& model, const DensityMatrix& sigma0, double t,
                                                const std::vector<Index>& n_list, double dt, const Tolerances& tol) {
  const DensityMatrix reference = lindblad_integrate(model, sigma0, t, dt).state;
  std::vector<RepeatedRow> rows;
  for (Index n : n_list) {
    double trace_error = 0.0;
    const DensityMatrix s = lindblad_repeated(model, sigma0, t, n, &trace_error, tol);
    rows.push_back({n, max_abs(s.matrix() - reference.matrix()), trace_error});
  }
  return rows;
}

}  // namespace qmeas
