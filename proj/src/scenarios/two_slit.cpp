#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qmeas/scenarios.hpp"

namespace qmeas {

namespace {

// psi(z) = F^-1 exp(-i p^2 z / 2) F psi(0), exact for free motion.
class FreePropagator {
 public:
  FreePropagator(const FourierGrid& grid, const ComplexVector& psi0)
      : grid_(grid), hat0_(grid.to_momentum(psi0)) {}

  ComplexVector at(double z) const {
    const RealVector& p = grid_.momenta();
    ComplexVector hat(hat0_.size());
    for (Index j = 0; j < hat.size(); ++j) hat(j) = hat0_(j) * std::exp(-kI * 0.5 * p(j) * p(j) * z);
    return grid_.from_momentum(hat);
  }

  // Re(<x|P|psi>/<x|psi>) on the grid.
  RealVector velocity(double z) const {
    const ComplexVector psi = at(z);
    const ComplexVector ppsi = grid_.apply_p(psi);
    RealVector v(psi.size());
    for (Index k = 0; k < psi.size(); ++k) {
      const double d = std::norm(psi(k));
      v(k) = d > 0.0 ? (std::conj(psi(k)) * ppsi(k)).real() / d : 0.0;
    }
    return v;
  }

 private:
  const FourierGrid& grid_;
  ComplexVector hat0_;
};

double interpolate(const FourierGrid& grid, const RealVector& f, double x) {
  const RealVector& q = grid.positions();
  const double u = (x - q(0)) / grid.dq();
  const Index n = grid.size();
  if (u < 0.0 || u > static_cast<double>(n - 1)) {
    std::ostringstream os;
    os << "two_slit: trajectory at x = " << x << " left the grid";
    throw ContractViolation(os.str());
  }
  const Index k = std::min<Index>(static_cast<Index>(u), n - 2);
  const double w = u - static_cast<double>(k);
  return (1.0 - w) * f(k) + w * f(k + 1);
}

RealVector interpolate_all(const FourierGrid& grid, const RealVector& f, const Eigen::VectorXd& xs) {
  RealVector out(xs.size());
  for (Index i = 0; i < xs.size(); ++i) out(i) = interpolate(grid, f, xs(i));
  return out;
}

double pearson(const RealVector& a, const RealVector& b) {
  const RealVector ac = a.array() - a.mean();
  const RealVector bc = b.array() - b.mean();
  const double den = ac.norm() * bc.norm();
  return den > 0.0 ? ac.dot(bc) / den : 0.0;
}

}  // namespace

TwoSlitResult two_slit_trajectories(const TwoSlitConfig& c) {
  if (!(c.width > 0.0) || !(c.z_final > 0.0) || c.steps < 1 || c.trajectories < 2 || c.bins < 2) {
    throw InvalidArgument("two_slit: width, z_final, steps, trajectories and bins must be positive");
  }
  const FourierGrid grid(c.half_width, c.points);
  const RealVector& q = grid.positions();
  const double dx = grid.dq();
  if (c.width < 2.0 * dx) throw InvalidArgument("two_slit: grid does not resolve the slit width");

  ComplexVector psi0(grid.size());
  for (Index k = 0; k < grid.size(); ++k) {
    const auto packet = [&](double x0) { return std::exp(-(q(k) - x0) * (q(k) - x0) / (4.0 * c.width * c.width)); };
    psi0(k) = c.single_slit ? packet(0.0) : packet(-0.5 * c.separation) + packet(0.5 * c.separation);
  }
  psi0 /= psi0.norm();
  const FreePropagator prop(grid, psi0);

  // Start at quantiles of |psi0|^2, interpolating the cumulative weight.
  const Index nt = c.trajectories;
  const RealVector dens0 = psi0.cwiseAbs2();
  RealVector cdf(grid.size());
  double acc = 0.0;
  for (Index k = 0; k < grid.size(); ++k) {
    acc += dens0(k);
    cdf(k) = acc;
  }
  Eigen::VectorXd x(nt);
  for (Index j = 0; j < nt; ++j) {
    const double target = (static_cast<double>(j) + 0.5) / static_cast<double>(nt);
    const Index k = std::lower_bound(cdf.data(), cdf.data() + cdf.size(), target) - cdf.data();
    const double lo = k == 0 ? 0.0 : cdf(k - 1);
    const double w = (target - lo) / std::max(cdf(k) - lo, 1e-300);
    x(j) = q(k) - 0.5 * dx + w * dx;
  }

  TwoSlitResult out;
  out.grid = q;
  out.z = RealVector::LinSpaced(c.steps + 1, 0.0, c.z_final);
  out.x.resize(c.steps + 1, nt);
  out.x.row(0) = x.transpose();
  out.ordered_every_step = true;
  const auto ordered = [](const Eigen::VectorXd& v) {
    for (Index i = 1; i < v.size(); ++i) {
      if (!(v(i) > v(i - 1))) return false;
    }
    return true;
  };
  out.ordered_every_step = ordered(x);

  const double h = c.z_final / static_cast<double>(c.steps);
  RealVector v_now = prop.velocity(0.0);
  for (Index s = 0; s < c.steps; ++s) {
    const double z = h * static_cast<double>(s);
    const RealVector v_mid = prop.velocity(z + 0.5 * h);
    const RealVector v_end = prop.velocity(z + h);
    const Eigen::VectorXd k1 = interpolate_all(grid, v_now, x);
    const Eigen::VectorXd k2 = interpolate_all(grid, v_mid, x + 0.5 * h * k1);
    const Eigen::VectorXd k3 = interpolate_all(grid, v_mid, x + 0.5 * h * k2);
    const Eigen::VectorXd k4 = interpolate_all(grid, v_end, x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    (void)interpolate_all(grid, v_end, x);  // grid check
    out.x.row(s + 1) = x.transpose();
    if (!ordered(x)) out.ordered_every_step = false;
    v_now = v_end;
  }

  const ComplexVector psi_f = prop.at(c.z_final);
  out.final_density = psi_f.cwiseAbs2() / dx;

  // Histogram over the span of the final positions versus the integrated density.
  const double lo = x.minCoeff();
  const double hi = x.maxCoeff();
  const double bw = (hi - lo) / static_cast<double>(c.bins);
  RealVector hist = RealVector::Zero(c.bins);
  RealVector mass = RealVector::Zero(c.bins);
  for (Index j = 0; j < nt; ++j) {
    const Index b = std::min<Index>(static_cast<Index>((x(j) - lo) / bw), c.bins - 1);
    hist(b) += 1.0 / static_cast<double>(nt);
  }
  for (Index k = 0; k < grid.size(); ++k) {
    if (q(k) < lo || q(k) >= hi) continue;
    const Index b = std::min<Index>(static_cast<Index>((q(k) - lo) / bw), c.bins - 1);
    mass(b) += std::norm(psi_f(k));
  }
  out.correlation = pearson(hist, mass);
  return out;
}

}  // namespace qmeas
