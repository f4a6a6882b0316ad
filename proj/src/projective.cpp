#include "qmeas/projective.hpp"

#include <cmath>
#include <sstream>

namespace qmeas {

namespace {

void require_dim(const Observable& obs, Index dim, const char* where) {
  if (obs.dim() != dim) {
    std::ostringstream os;
    os << where << ": observable dimension " << obs.dim() << " does not match " << dim;
    throw DimensionMismatch(os.str());
  }
}

// |<f|Pi_i|s>|^2 for every outcome i.
std::vector<double> joint_weights(const Ket& pre, const Observable& obs, const Ket& post) {
  require_dim(obs, pre.dim(), "abl");
  require_dim(obs, post.dim(), "abl");
  std::vector<double> w(obs.outcome_count());
  for (std::size_t k = 0; k < w.size(); ++k) {
    const ComplexMatrix v = obs.eigenspace(k);
    const complex amp = (v.adjoint() * post.amplitudes()).dot(v.adjoint() * pre.amplitudes());
    w[k] = std::norm(amp);
  }
  return w;
}

}  // namespace

double OutcomeDistribution::probability_of(double eigenvalue, double tol) const {
  for (const auto& o : outcomes) {
    if (std::abs(o.eigenvalue - eigenvalue) <= tol) return o.probability;
  }
  throw InvalidArgument("OutcomeDistribution: no such eigenvalue");
}

double OutcomeDistribution::total() const {
  double t = 0.0;
  for (const auto& o : outcomes) t += o.probability;
  return t;
}

double OutcomeDistribution::mean() const {
  double m = 0.0;
  for (const auto& o : outcomes) m += o.eigenvalue * o.probability;
  return m;
}

OutcomeDistribution outcome_probability(const Observable& obs, const DensityMatrix& rho,
                                        const Tolerances& tol) {
  require_dim(obs, rho.dim(), "outcome_probability");
  OutcomeDistribution dist;
  for (std::size_t k = 0; k < obs.outcome_count(); ++k) {
    const ComplexMatrix v = obs.eigenspace(k);
    const double p = (v.adjoint() * rho.matrix() * v).trace().real();
    if (p < -tol.negative_probability) throw ContractViolation("outcome_probability: negative probability");
    dist.outcomes.push_back({obs.eigenvalue(k), p});
  }
  return dist;
}

Conditional luders_conditional(const Observable& obs, const DensityMatrix& rho, double outcome,
                               const Tolerances& tol) {
  require_dim(obs, rho.dim(), "luders_conditional");
  const std::size_t k = obs.outcome_index(outcome, tol.degeneracy);
  const ComplexMatrix pi = obs.projector(k);
  const ComplexMatrix num = pi * rho.matrix() * pi;
  const double p = num.trace().real();
  if (p <= tol.min_probability) {
    std::ostringstream os;
    os << "luders_conditional: outcome " << outcome << " has probability " << p;
    throw ZeroProbability(os.str());
  }
  return {DensityMatrix::assume_positive(num / p, tol), p};
}

DensityMatrix luders_unconditional(const Observable& obs, const DensityMatrix& rho,
                                   const Tolerances& tol) {
  require_dim(obs, rho.dim(), "luders_unconditional");
  ComplexMatrix out = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (std::size_t k = 0; k < obs.outcome_count(); ++k) {
    const ComplexMatrix pi = obs.projector(k);
    out += pi * rho.matrix() * pi;
  }
  return DensityMatrix::assume_positive(out, tol);
}

OutcomeDistribution abl_probability(const Ket& pre, const Observable& obs, const Ket& post,
                                    const Tolerances& tol) {
  const std::vector<double> w = joint_weights(pre, obs, post);
  double total = 0.0;
  for (double x : w) total += x;
  if (total <= tol.min_probability) {
    throw ZeroProbability("abl_probability: post-selection impossible after the intermediate measurement");
  }
  OutcomeDistribution dist;
  for (std::size_t k = 0; k < w.size(); ++k) dist.outcomes.push_back({obs.eigenvalue(k), w[k] / total});
  return dist;
}

double abl_conditional_mean(const Ket& pre, const Observable& obs, const Ket& post,
                            const Tolerances& tol) {
  return abl_probability(pre, obs, post, tol).mean();
}

double joint_then_post_probability(const Ket& pre, const Observable& obs, const Ket& post) {
  double total = 0.0;
  for (double x : joint_weights(pre, obs, post)) total += x;
  return total;
}

}  // namespace qmeas
