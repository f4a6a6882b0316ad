#pragma once

// Ideal (projective) measurement: outcome statistics, Lueders updates and the
// ABL rule for pre- and post-selected ensembles.

#include <vector>

#include "qmeas/core.hpp"

namespace qmeas {

struct Outcome {
  double eigenvalue;
  double probability;
};

/// One entry per distinct eigenvalue, ascending.
struct OutcomeDistribution {
  std::vector<Outcome> outcomes;

  double probability_of(double eigenvalue, double tol = 1e-9) const;
  double total() const;
  double mean() const;
};

struct Conditional {
  DensityMatrix state;
  double probability;
};

/// prob(s_i) = Tr(Pi_i rho).
OutcomeDistribution outcome_probability(const Observable& obs, const DensityMatrix& rho,
                                        const Tolerances& tol = {});

/// Pi rho Pi / prob for the outcome with the given eigenvalue; throws
/// ZeroProbability below Tolerances::min_probability.
Conditional luders_conditional(const Observable& obs, const DensityMatrix& rho, double outcome,
                               const Tolerances& tol = {});

/// sum_i Pi_i rho Pi_i.
DensityMatrix luders_unconditional(const Observable& obs, const DensityMatrix& rho,
                                   const Tolerances& tol = {});

/// |<f|Pi_i|s>|^2 / sum_j |<f|Pi_j|s>|^2.
OutcomeDistribution abl_probability(const Ket& pre, const Observable& obs, const Ket& post,
                                    const Tolerances& tol = {});

/// sum_i s_i prob(s_i | f, s).
double abl_conditional_mean(const Ket& pre, const Observable& obs, const Ket& post,
                            const Tolerances& tol = {});

/// sum_i |<f|Pi_i|s>|^2, the probability of passing the post-selection after
/// an intermediate measurement of obs.
double joint_then_post_probability(const Ket& pre, const Observable& obs, const Ket& post);

}  // namespace qmeas
