#include "qmeas/meters.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace qmeas {

namespace {

ComplexVector fft_forward(const ComplexVector& in) {
  Eigen::FFT<double> fft;
  std::vector<complex> src(in.data(), in.data() + in.size());
  std::vector<complex> dst;
  fft.fwd(dst, src);
  return Eigen::Map<ComplexVector>(dst.data(), static_cast<Index>(dst.size()));
}

ComplexVector fft_inverse(const ComplexVector& in) {
  Eigen::FFT<double> fft;
  std::vector<complex> src(in.data(), in.data() + in.size());
  std::vector<complex> dst;
  fft.inv(dst, src);  // includes 1/n
  return Eigen::Map<ComplexVector>(dst.data(), static_cast<Index>(dst.size()));
}

}  // namespace

FourierGrid::FourierGrid(double half_width, Index points) : half_width_(half_width) {
  if (!(half_width > 0.0)) throw InvalidArgument("FourierGrid: half-width must be positive");
  if (points < 8 || points % 2 != 0) throw InvalidArgument("FourierGrid: grid size must be even and >= 8");
  const double n = static_cast<double>(points);
  dq_ = 2.0 * half_width / n;
  positions_.resize(points);
  momenta_.resize(points);
  for (Index k = 0; k < points; ++k) {
    const double c = static_cast<double>(k - points / 2);
    positions_(k) = c * dq_;
    momenta_(k) = 2.0 * std::numbers::pi * c / (n * dq_);
  }
}

ComplexVector FourierGrid::to_momentum(const ComplexVector& psi) const {
  if (psi.size() != size()) throw DimensionMismatch("FourierGrid: vector does not match grid");
  const ComplexVector raw = fft_forward(psi);
  const Index n = size();
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  ComplexVector out(n);
  for (Index j = 0; j < n; ++j) out(j) = raw((j + n / 2) % n) * scale;
  return out;
}

ComplexVector FourierGrid::from_momentum(const ComplexVector& psi_p) const {
  if (psi_p.size() != size()) throw DimensionMismatch("FourierGrid: vector does not match grid");
  const Index n = size();
  ComplexVector raw(n);
  for (Index j = 0; j < n; ++j) raw((j + n / 2) % n) = psi_p(j);
  return fft_inverse(raw) * std::sqrt(static_cast<double>(n));
}

ComplexVector FourierGrid::momentum_phase(const ComplexVector& psi, double lambda) const {
  ComplexVector hat = to_momentum(psi);
  for (Index j = 0; j < size(); ++j) hat(j) *= std::exp(-kI * lambda * momenta_(j));
  return from_momentum(hat);
}

ComplexVector FourierGrid::apply_p(const ComplexVector& psi) const {
  ComplexVector hat = to_momentum(psi);
  hat = hat.cwiseProduct(momenta_.cast<complex>());
  return from_momentum(hat);
}

GaussianPointer::GaussianPointer(double delta, double g, double half_width, Index points)
    : FourierGrid(half_width, points), delta_(delta), g_(g) {
  if (!(delta > 0.0)) throw InvalidArgument("GaussianPointer: width must be positive");
  if (!std::isfinite(g)) throw InvalidArgument("GaussianPointer: coupling must be finite");
  initial_ = shifted(0.0);
}

GaussianPointer GaussianPointer::with_default_grid(double delta, double g, double max_abs_eigenvalue,
                                                   Index points) {
  const double l = 10.0 * delta + 10.0 * std::abs(g) * std::abs(max_abs_eigenvalue);
  return GaussianPointer(delta, g, l, points);
}

GaussianPointer GaussianPointer::with_coupling(double g) const {
  return GaussianPointer(delta_, g, half_width(), size());
}

ComplexVector GaussianPointer::shifted(double x) const {
  if (std::abs(x) + 5.0 * delta_ >= half_width()) {
    std::ostringstream os;
    os << "GaussianPointer: shift " << x << " leaves the grid; need L > " << std::abs(x) + 5.0 * delta_
       << " (have " << half_width() << ")";
    throw InvalidArgument(os.str());
  }
  const double norm = std::pow(2.0 * std::numbers::pi * delta_ * delta_, -0.25) * std::sqrt(dq());
  const RealVector& q = positions();
  ComplexVector a(size());
  for (Index k = 0; k < size(); ++k) {
    const double u = q(k) - x;
    a(k) = norm * std::exp(-u * u / (4.0 * delta_ * delta_));
  }
  return a;
}

MeterModel GaussianPointer::meter_model() const { return MeterModel(Ket(initial_), positions()); }

PointerMoments pointer_moments(const FourierGrid& meter, const ComplexVector& psi) {
  if (psi.size() != meter.size()) throw DimensionMismatch("pointer_moments: vector does not match grid");
  const double norm2 = psi.squaredNorm();
  if (!(norm2 > 0.0)) throw ZeroProbability("pointer_moments: zero state");
  const RealVector& q = meter.positions();
  const RealVector& p = meter.momenta();
  const RealVector dens = psi.cwiseAbs2();
  const RealVector dens_p = meter.to_momentum(psi).cwiseAbs2();
  const ComplexVector ppsi = meter.apply_p(psi);
  PointerMoments m;
  m.q = dens.dot(q) / norm2;
  m.q2 = dens.dot(q.cwiseAbs2()) / norm2;
  m.p = dens_p.dot(p) / norm2;
  m.p2 = dens_p.dot(p.cwiseAbs2()) / norm2;
  // <{Q,P}> = 2 Re <psi|Q P|psi>
  m.qp_anti = 2.0 * psi.dot(q.cast<complex>().cwiseProduct(ppsi)).real() / norm2;
  return m;
}

PointerMoments pointer_moments(const FourierGrid& meter, const DensityMatrix& mu) {
  const Index n = meter.size();
  if (mu.dim() != n) throw DimensionMismatch("pointer_moments: density does not match grid");
  const ComplexMatrix& rho = mu.matrix();
  const RealVector& q = meter.positions();
  const RealVector& p = meter.momenta();
  // A = F rho (columns), B = F A^dagger = F rho F^dagger; P rho = F^-1 diag(p) A.
  ComplexMatrix a(n, n);
  for (Index c = 0; c < n; ++c) a.col(c) = meter.to_momentum(rho.col(c));
  const ComplexMatrix a_adj = a.adjoint();
  RealVector diag_p(n);
  for (Index c = 0; c < n; ++c) diag_p(c) = meter.to_momentum(a_adj.col(c))(c).real();
  complex qp = 0.0;
  for (Index c = 0; c < n; ++c) {
    const ComplexVector col = meter.from_momentum(p.cast<complex>().cwiseProduct(a.col(c)));
    qp += q(c) * col(c);
  }
  const RealVector dens = rho.diagonal().real();
  PointerMoments m;
  m.q = dens.dot(q);
  m.q2 = dens.dot(q.cwiseAbs2());
  m.p = diag_p.dot(p);
  m.p2 = diag_p.dot(p.cwiseAbs2());
  m.qp_anti = 2.0 * qp.real();
  return m;
}

PreMeasurement von_neumann_premeasurement(const GaussianPointer& meter, const Observable& obs,
                                          const Tolerances& tol) {
  const RealVector s = obs.basis_eigenvalues();
  std::vector<Ket> markers;
  for (Index i = 0; i < s.size(); ++i) markers.emplace_back(meter.pointer_shift(s(i)));
  return PreMeasurement::from_markers(obs, meter.meter_model(), std::move(markers), tol);
}

std::vector<Ket> von_neumann_momentum_markers(const GaussianPointer& meter, const Observable& obs) {
  const RealVector s = obs.basis_eigenvalues();
  std::vector<Ket> markers;
  for (Index i = 0; i < s.size(); ++i) {
    (void)meter.pointer_shift(s(i));  // grid-fit check
    markers.emplace_back(meter.momentum_phase(meter.initial(), meter.g() * s(i)));
  }
  return markers;
}

double gaussian_overlap(const GaussianPointer& meter, double a, double b) {
  return meter.shifted(a).dot(meter.shifted(b)).real();
}

std::pair<Ket, Ket> QubitMeter::markers() const {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  return {Ket{c, s}, Ket{s, c}};
}

MeterModel QubitMeter::meter_model() const {
  RealVector values(2);
  values << 1.0, -1.0;
  return MeterModel(markers().first, values);
}

std::pair<Ket, Ket> qubit_meter_markers(const QubitMeter& m) { return m.markers(); }

PreMeasurement qubit_premeasurement(const QubitMeter& m, const Observable& obs, const Tolerances& tol) {
  if (obs.dim() != 2) throw DimensionMismatch("qubit_premeasurement: observable must act on a qubit");
  const auto [plus, minus] = m.markers();
  const RealVector s = obs.basis_eigenvalues();
  std::vector<Ket> markers;
  for (Index i = 0; i < 2; ++i) {
    if (std::abs(std::abs(s(i)) - 1.0) > tol.degeneracy) {
      throw InvalidArgument("qubit_premeasurement: observable eigenvalues must be +1 and -1");
    }
    markers.push_back(s(i) > 0.0 ? plus : minus);
  }
  return PreMeasurement::from_markers(obs, m.meter_model(), std::move(markers), tol);
}

PreMeasurement qubit_premeasurement(const QubitMeter& m, const Tolerances& tol) {
  const auto [plus, minus] = m.markers();
  return PreMeasurement::from_markers(Index{2}, m.meter_model(), {plus, minus}, tol);
}

}  // namespace qmeas
