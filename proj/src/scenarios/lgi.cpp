#include <algorithm>
#include <cmath>
#include <numbers>

#include "../optimize.hpp"
#include "qmeas/scenarios.hpp"
#include "qmeas/weakpost.hpp"

namespace qmeas {

LgiReport lgi_value(const Ket& s, const Observable& obs, const Ket& f, const Tolerances& tol) {
  if (s.dim() != obs.dim() || f.dim() != obs.dim()) throw DimensionMismatch("lgi_value: dimensions differ");
  for (double v : obs.eigenvalues()) {
    if (v < -1.0 - tol.degeneracy || v > 1.0 + tol.degeneracy) {
      throw InvalidArgument("lgi_value: eigenvalues of S must lie in [-1, 1]");
    }
  }
  const complex fs = f.inner(s);
  const complex fss = f.amplitudes().dot(obs.matrix() * s.amplitudes());  // <f|S|s>
  LgiReport r;
  r.mean_s = s.amplitudes().dot(obs.matrix() * s.amplitudes()).real();
  r.overlap2 = std::norm(fs);
  const double cross = (std::conj(fs) * fss).real();  // Re(<s|f><f|S|s>) = |<f|s>|^2 Re S_w
  if (std::abs(fs) > tol.overlap_floor) r.re_sw = weak_value(s, obs, f, tol).real();
  r.b_mean = r.mean_s + cross - r.overlap2;
  r.violated = r.b_mean > 1.0 + 1e-12 || r.b_mean < -3.0 - 1e-12;
  return r;
}

LgiReport lgi_qubit(double beta, double phi, const Tolerances& tol) {
  if (std::abs(beta) > 1.0) throw InvalidArgument("lgi_qubit: |beta| must not exceed 1");
  const Ket s{std::sqrt(1.0 - beta * beta), beta};
  const Ket f{std::cos(phi / 2.0), std::sin(phi / 2.0)};
  static const Observable z(pauli::z());
  return lgi_value(s, z, f, tol);
}

LgiSearch lgi_search(Index grid) {
  if (grid < 8) throw InvalidArgument("lgi_search: grid too small");
  const double two_pi = 2.0 * std::numbers::pi;
  const auto b_of = [](double beta, double phi) { return lgi_qubit(std::clamp(beta, -1.0, 1.0), phi).b_mean; };
  const Index nb = grid + 1;
  Eigen::MatrixXd values(nb, grid);
  for (Index i = 0; i < nb; ++i) {
    const double beta = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(grid);
    for (Index j = 0; j < grid; ++j) values(i, j) = b_of(beta, two_pi * static_cast<double>(j) / static_cast<double>(grid));
  }
  const double hb = 2.0 / static_cast<double>(grid);
  const double hp = two_pi / static_cast<double>(grid);
  const double grid_max = values.maxCoeff();

  std::vector<LgiOptimum> found;
  for (Index i = 0; i < nb; ++i) {
    for (Index j = 0; j < grid; ++j) {
      const double v = values(i, j);
      if (v < grid_max - 1e-2) continue;
      bool local = true;
      for (Index di = -1; di <= 1 && local; ++di) {
        for (Index dj = -1; dj <= 1; ++dj) {
          const Index ii = i + di;
          if (ii < 0 || ii >= nb || (di == 0 && dj == 0)) continue;
          const Index jj = (j + dj + grid) % grid;
          if (values(ii, jj) > v) {
            local = false;
            break;
          }
        }
      }
      if (!local) continue;
      double beta = -1.0 + hb * static_cast<double>(i);
      double phi = hp * static_cast<double>(j);
      for (int sweep = 0; sweep < 40; ++sweep) {
        beta = detail::golden_max([&](double b) { return b_of(b, phi); }, std::max(-1.0, beta - hb),
                                  std::min(1.0, beta + hb));
        phi = detail::golden_max([&](double p) { return b_of(beta, p); }, phi - hp, phi + hp);
      }
      phi = std::fmod(std::fmod(phi, two_pi) + two_pi, two_pi);
      found.push_back({beta, phi, b_of(beta, phi)});
    }
  }
  LgiSearch out;
  out.max_b = grid_max;
  for (const auto& o : found) out.max_b = std::max(out.max_b, o.b);
  for (const auto& o : found) {
    if (o.b < out.max_b - 1e-9) continue;
    const bool dup = std::any_of(out.optima.begin(), out.optima.end(), [&](const LgiOptimum& p) {
      return std::abs(p.beta - o.beta) < 1e-4 && std::abs(p.phi - o.phi) < 1e-4;
    });
    if (!dup) out.optima.push_back(o);
  }
  std::sort(out.optima.begin(), out.optima.end(), [](const LgiOptimum& a, const LgiOptimum& b) { return a.beta < b.beta; });
  return out;
}

}  // namespace qmeas
