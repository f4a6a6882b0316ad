#include "qmeas/ancilla.hpp"

#include <cmath>
#include <sstream>

#include "qmeas/random.hpp"

namespace qmeas {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw DimensionMismatch(what);
}

// V with V|m0> = |m>: a phase times a Householder reflection.
ComplexMatrix householder_block(const ComplexVector& m0, const ComplexVector& m) {
  const Index d = m0.size();
  const complex ov = m0.dot(m);
  const double theta = std::abs(ov) > 0.0 ? std::arg(ov) : 0.0;
  const complex phase = std::exp(kI * theta);
  const ComplexVector w = m0 - m / phase;
  const double wn = w.squaredNorm();
  ComplexMatrix v = ComplexMatrix::Identity(d, d);
  if (std::sqrt(wn) >= 1e-14) v -= (2.0 / wn) * (w * w.adjoint());
  return phase * v;
}

// Random unitary fixing m0: exp(-i Q H Q) with Q the projector off m0.
ComplexMatrix complement_rotation(const ComplexVector& m0, Rng& rng) {
  const Index d = m0.size();
  const ComplexMatrix q = ComplexMatrix::Identity(d, d) - m0 * m0.adjoint();
  const ComplexMatrix h = hermitian_part(q * random_hermitian(d, rng) * q);
  return matexp_hermitian(Observable(h), 1.0);
}

std::vector<Ket> markers_from_unitary(const ComplexMatrix& basis, const MeterModel& meter,
                                      const ComplexMatrix& u, const Tolerances& tol) {
  const Index ds = basis.rows();
  const Index dm = meter.dim();
  require(u.rows() == ds * dm && u.cols() == ds * dm, "PreMeasurement: unitary does not match system x meter");
  if (!is_unitary(u, tol.unitarity)) throw InvalidArgument("PreMeasurement: operator is not unitary");
  std::vector<Ket> markers;
  for (Index i = 0; i < basis.cols(); ++i) {
    const ComplexVector col = u * kron(ComplexVector(basis.col(i)), meter.initial().amplitudes());
    ComplexVector m = ComplexVector::Zero(dm);
    for (Index a = 0; a < ds; ++a) m += std::conj(basis(a, i)) * col.segment(a * dm, dm);
    const double residual = (col - kron(ComplexVector(basis.col(i)), m)).cwiseAbs().maxCoeff();
    if (residual > tol.unitarity) {
      std::ostringstream os;
      os << "PreMeasurement: unitary disturbs system eigenstate " << i << " (residual " << residual << ")";
      throw InvalidArgument(os.str());
    }
    markers.emplace_back(m);
  }
  return markers;
}

}  // namespace

// ---------------------------------------------------------------- MeterModel

MeterModel::MeterModel(Ket initial, RealVector pointer_values, std::optional<ComplexMatrix> pointer_basis,
                       const Tolerances& tol)
    : initial_(std::move(initial)), values_(std::move(pointer_values)), basis_(std::move(pointer_basis)) {
  if (initial_.dim() == 0) throw DimensionMismatch("MeterModel: empty meter space");
  if (!initial_.is_normalized(tol.marker_normalization)) {
    throw InvalidArgument("MeterModel: initial meter state is not normalized");
  }
  require(values_.size() == initial_.dim(), "MeterModel: one pointer value per basis state required");
  if (basis_) {
    require(basis_->rows() == initial_.dim() && basis_->cols() == initial_.dim(),
            "MeterModel: pointer basis must be square with the meter dimension");
    if (!is_unitary(*basis_, tol.projector)) {
      throw InvalidArgument("MeterModel: pointer basis is not orthonormal and complete");
    }
  }
}

MeterModel MeterModel::computational(Ket initial, const Tolerances& tol) {
  const Index d = initial.dim();
  return MeterModel(std::move(initial), RealVector::LinSpaced(d, 0.0, static_cast<double>(d - 1)),
                    std::nullopt, tol);
}

ComplexMatrix MeterModel::pointer_basis() const {
  return basis_ ? *basis_ : ComplexMatrix::Identity(dim(), dim());
}

Observable MeterModel::pointer_observable() const {
  if (!basis_) return Observable::diagonal(values_);
  return Observable((*basis_) * values_.cast<complex>().asDiagonal() * basis_->adjoint());
}

// ---------------------------------------------------------------- PreMeasurement

PreMeasurement PreMeasurement::from_markers(const ComplexMatrix& system_basis, MeterModel meter,
                                            std::vector<Ket> markers, const Tolerances& tol) {
  require(system_basis.rows() == system_basis.cols() && system_basis.rows() > 0,
          "PreMeasurement: system basis must be square");
  if (!is_unitary(system_basis, tol.projector)) {
    throw InvalidArgument("PreMeasurement: system basis is not orthonormal");
  }
  require(static_cast<Index>(markers.size()) == system_basis.cols(),
          "PreMeasurement: one marker per system basis state required");
  for (std::size_t i = 0; i < markers.size(); ++i) {
    require(markers[i].dim() == meter.dim(), "PreMeasurement: marker dimension differs from meter");
    if (!markers[i].is_normalized(tol.marker_normalization)) {
      std::ostringstream os;
      os << "PreMeasurement: marker " << i << " has norm " << markers[i].norm();
      throw InvalidArgument(os.str());
    }
    markers[i] = markers[i].normalized();
  }
  return PreMeasurement(system_basis, std::move(meter), std::move(markers));
}

PreMeasurement PreMeasurement::from_markers(const Observable& obs, MeterModel meter,
                                            std::vector<Ket> markers, const Tolerances& tol) {
  return from_markers(obs.eigenbasis(), std::move(meter), std::move(markers), tol);
}

PreMeasurement PreMeasurement::from_markers(Index system_dim, MeterModel meter, std::vector<Ket> markers,
                                            const Tolerances& tol) {
  return from_markers(ComplexMatrix::Identity(system_dim, system_dim), std::move(meter),
                      std::move(markers), tol);
}

PreMeasurement PreMeasurement::from_hamiltonian(const Observable& s, MeterModel meter, const ComplexMatrix& n,
                                                double g, const Tolerances& tol) {
  require(n.rows() == meter.dim() && n.cols() == meter.dim(), "PreMeasurement: N does not match meter");
  if (!is_hermitian(n, tol.hermiticity)) throw InvalidArgument("PreMeasurement: N is not Hermitian");
  const ComplexMatrix u = matexp_hermitian(Observable(kron(s.matrix(), n), tol), g);
  return from_unitary(s, std::move(meter), u, tol);
}

PreMeasurement PreMeasurement::from_unitary(const Observable& s, MeterModel meter, const ComplexMatrix& u,
                                            const Tolerances& tol) {
  std::vector<Ket> markers = markers_from_unitary(s.eigenbasis(), meter, u, tol);
  PreMeasurement pm = from_markers(s.eigenbasis(), std::move(meter), std::move(markers), tol);
  pm.explicit_unitary_ = u;
  return pm;
}

ComplexMatrix PreMeasurement::marker_matrix() const {
  ComplexMatrix m(meter_dim(), static_cast<Index>(markers_.size()));
  for (std::size_t i = 0; i < markers_.size(); ++i) m.col(static_cast<Index>(i)) = markers_[i].amplitudes();
  return m;
}

ComplexMatrix PreMeasurement::marker_gram() const {
  const ComplexMatrix m = marker_matrix();
  return (m.adjoint() * m).transpose();
}

ComplexMatrix PreMeasurement::isometry() const {
  const Index ds = system_dim();
  ComplexMatrix a(ds * meter_dim(), ds);
  for (Index i = 0; i < ds; ++i) a.col(i) = kron(ComplexVector(basis_.col(i)), markers_[static_cast<std::size_t>(i)].amplitudes());
  return a * basis_.adjoint();
}

ComplexMatrix PreMeasurement::unitary() const {
  if (explicit_unitary_ && !completion_seed_) return *explicit_unitary_;
  const Index ds = system_dim();
  const Index dm = meter_dim();
  const ComplexVector& m0 = meter_.initial().amplitudes();
  std::optional<Rng> rng;
  if (completion_seed_) rng.emplace(*completion_seed_);
  ComplexMatrix u = ComplexMatrix::Zero(ds * dm, ds * dm);
  for (Index i = 0; i < ds; ++i) {
    ComplexMatrix v = householder_block(m0, markers_[static_cast<std::size_t>(i)].amplitudes());
    if (rng) v = v * complement_rotation(m0, *rng);
    const ComplexVector si = basis_.col(i);
    u += kron(ComplexMatrix(si * si.adjoint()), v);
  }
  return u;
}

PreMeasurement PreMeasurement::with_completion_seed(std::uint64_t seed) const {
  PreMeasurement pm = *this;
  pm.completion_seed_ = seed;
  return pm;
}

// ---------------------------------------------------------------- operations

DensityMatrix premeasure(const PreMeasurement& pm, const DensityMatrix& sigma0, const Tolerances& tol) {
  require(sigma0.dim() == pm.system_dim(), "premeasure: state does not match system dimension");
  const ComplexMatrix k = pm.isometry();
  return DensityMatrix::assume_positive(k * sigma0.matrix() * k.adjoint(), tol);
}

ComplexVector premeasure_pure(const PreMeasurement& pm, const Ket& s) {
  require(s.dim() == pm.system_dim(), "premeasure: state does not match system dimension");
  const ComplexVector c = pm.system_basis().adjoint() * s.amplitudes();
  ComplexVector out = ComplexVector::Zero(pm.system_dim() * pm.meter_dim());
  for (Index i = 0; i < pm.system_dim(); ++i) {
    out += c(i) * kron(ComplexVector(pm.system_basis().col(i)), pm.markers()[static_cast<std::size_t>(i)].amplitudes());
  }
  return out;
}

DensityMatrix meter_reduced(const PreMeasurement& pm, const DensityMatrix& sigma0, const Tolerances& tol) {
  require(sigma0.dim() == pm.system_dim(), "meter_reduced: state does not match system dimension");
  const ComplexMatrix& w = pm.system_basis();
  const RealVector p = (w.adjoint() * sigma0.matrix() * w).diagonal().real();
  const ComplexMatrix m = pm.marker_matrix();
  return DensityMatrix::assume_positive(m * p.cast<complex>().asDiagonal() * m.adjoint(), tol);
}

Readout readout(const PreMeasurement& pm, const DensityMatrix& tau1, Index k, const Tolerances& tol) {
  const Index ds = pm.system_dim();
  const Index dm = pm.meter_dim();
  require(tau1.dim() == ds * dm, "readout: joint state does not match system x meter");
  if (k < 0 || k >= dm) throw InvalidArgument("readout: pointer outcome out of range");
  const ComplexVector bk = pm.meter().pointer_basis().col(k);
  const ComplexMatrix p = kron(ComplexMatrix(ComplexMatrix::Identity(ds, ds)), ComplexMatrix(bk));
  const ComplexMatrix num = p.adjoint() * tau1.matrix() * p;
  const double prob = num.trace().real();
  if (prob <= tol.min_probability) {
    std::ostringstream os;
    os << "readout: pointer outcome " << k << " has probability " << prob;
    throw ZeroProbability(os.str());
  }
  return {DensityMatrix::assume_positive(num / prob, tol), prob};
}

Readout readout_from_system(const PreMeasurement& pm, const DensityMatrix& sigma0, Index k,
                            const Tolerances& tol) {
  require(sigma0.dim() == pm.system_dim(), "readout: state does not match system dimension");
  if (k < 0 || k >= pm.meter_dim()) throw InvalidArgument("readout: pointer outcome out of range");
  const ComplexMatrix overlaps = pm.meter().pointer_basis().col(k).adjoint() * pm.marker_matrix();
  const ComplexMatrix& w = pm.system_basis();
  const ComplexMatrix omega = w * overlaps.row(0).transpose().asDiagonal() * w.adjoint();
  const ComplexMatrix num = omega * sigma0.matrix() * omega.adjoint();
  const double prob = num.trace().real();
  if (prob <= tol.min_probability) {
    std::ostringstream os;
    os << "readout: pointer outcome " << k << " has probability " << prob;
    throw ZeroProbability(os.str());
  }
  return {DensityMatrix::assume_positive(num / prob, tol), prob};
}

MeasurementOperatorSet measurement_operators(const PreMeasurement& pm, const Tolerances& tol) {
  const ComplexMatrix overlaps = pm.meter().pointer_basis().adjoint() * pm.marker_matrix();
  const ComplexMatrix& w = pm.system_basis();
  const Index ds = pm.system_dim();
  MeasurementOperatorSet set;
  ComplexMatrix total = ComplexMatrix::Zero(ds, ds);
  for (Index k = 0; k < overlaps.rows(); ++k) {
    ComplexMatrix omega = w * overlaps.row(k).transpose().asDiagonal() * w.adjoint();
    total += omega.adjoint() * omega;
    set.operators.push_back(std::move(omega));
  }
  if (max_abs(total - ComplexMatrix::Identity(ds, ds)) > tol.completeness) {
    throw ContractViolation("measurement_operators: sum of Omega^dagger Omega differs from identity");
  }
  return set;
}

EffectSet effects(const MeasurementOperatorSet& ops, const Tolerances& tol) {
  if (ops.operators.empty()) throw InvalidArgument("effects: empty operator set");
  const Index ds = ops.operators.front().cols();
  EffectSet set;
  ComplexMatrix total = ComplexMatrix::Zero(ds, ds);
  for (const auto& omega : ops.operators) {
    require(omega.rows() == ds && omega.cols() == ds, "effects: operators of mixed dimension");
    const ComplexMatrix e = hermitian_part(omega.adjoint() * omega);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(e, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -tol.positivity) throw ContractViolation("effects: negative effect");
    total += e;
    set.effects.push_back(e);
  }
  if (max_abs(total - ComplexMatrix::Identity(ds, ds)) > tol.completeness) {
    throw ContractViolation("effects: effects do not sum to identity");
  }
  return set;
}

DensityMatrix apply_unconditional(const PreMeasurement& pm, const DensityMatrix& sigma, const Tolerances& tol) {
  require(sigma.dim() == pm.system_dim(), "apply_unconditional: state does not match system dimension");
  const ComplexMatrix& w = pm.system_basis();
  const ComplexMatrix in_basis = w.adjoint() * sigma.matrix() * w;
  const ComplexMatrix damped = in_basis.cwiseProduct(pm.marker_gram());
  return DensityMatrix::assume_positive(w * damped * w.adjoint(), tol);
}

DensityMatrix consecutive(const PreMeasurement& pm1, const PreMeasurement& pm2, const DensityMatrix& sigma0,
                          const Tolerances& tol) {
  require(pm1.system_dim() == pm2.system_dim(), "consecutive: system dimensions differ");
  return apply_unconditional(pm2, apply_unconditional(pm1, sigma0, tol), tol);
}

ExtendedOperators extended_measurement_operators(const ComplexMatrix& u, Index system_dim, const Ket& d0,
                                                 const Ket& m0, const Tolerances& tol) {
  const Index dd = d0.dim();
  const Index dm = m0.dim();
  const Index ds = system_dim;
  require(ds > 0 && u.rows() == ds * dd * dm && u.cols() == ds * dd * dm,
          "extended_measurement_operators: unitary does not match S x D x M");
  if (!is_unitary(u, tol.unitarity)) throw InvalidArgument("extended_measurement_operators: operator is not unitary");
  if (!d0.is_normalized(tol.normalization) || !m0.is_normalized(tol.normalization)) {
    throw InvalidArgument("extended_measurement_operators: initial states must be normalized");
  }
  const ComplexMatrix in = kron(ComplexMatrix(ComplexMatrix::Identity(ds, ds)),
                                ComplexMatrix(kron(d0.amplitudes(), m0.amplitudes())));
  const ComplexMatrix y = u * in;
  ExtendedOperators out;
  out.operators.assign(static_cast<std::size_t>(dm), std::vector<ComplexMatrix>(static_cast<std::size_t>(dd)));
  ComplexMatrix total = ComplexMatrix::Zero(ds, ds);
  for (Index k = 0; k < dm; ++k) {
    ComplexMatrix e = ComplexMatrix::Zero(ds, ds);
    for (Index r = 0; r < dd; ++r) {
      ComplexMatrix omega(ds, ds);
      for (Index a = 0; a < ds; ++a) omega.row(a) = y.row(a * dd * dm + r * dm + k);
      e += omega.adjoint() * omega;
      out.operators[static_cast<std::size_t>(k)][static_cast<std::size_t>(r)] = std::move(omega);
    }
    e = hermitian_part(e);
    total += e;
    out.effects.effects.push_back(std::move(e));
  }
  if (max_abs(total - ComplexMatrix::Identity(ds, ds)) > tol.completeness) {
    throw ContractViolation("extended_measurement_operators: effects do not sum to identity");
  }
  return out;
}

Readout extended_readout(const ExtendedOperators& ops, const DensityMatrix& sigma0, Index k,
                         const Tolerances& tol) {
  if (k < 0 || k >= static_cast<Index>(ops.operators.size())) {
    throw InvalidArgument("extended_readout: pointer outcome out of range");
  }
  const auto& row = ops.operators[static_cast<std::size_t>(k)];
  require(row.front().cols() == sigma0.dim(), "extended_readout: state does not match system dimension");
  ComplexMatrix num = ComplexMatrix::Zero(sigma0.dim(), sigma0.dim());
  for (const auto& omega : row) num += omega * sigma0.matrix() * omega.adjoint();
  const double prob = num.trace().real();
  if (prob <= tol.min_probability) throw ZeroProbability("extended_readout: outcome has zero probability");
  return {DensityMatrix::assume_positive(num / prob, tol), prob};
}

}  // namespace qmeas
