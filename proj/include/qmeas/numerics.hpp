#pragma once

namespace qmeas {

/// Every tolerance the library checks against, in one record.
/// Defaults are the documented contract values; callers may tighten or relax
/// them per call.
struct Tolerances {
  double hermiticity = 1e-12;          // max-abs |A - A^dagger|
  double trace = 1e-12;                // |Tr rho - 1|
  double positivity = 1e-10;           // eigenvalues >= -positivity
  double unitarity = 1e-10;            // max-abs |U^dagger U - 1|
  double normalization = 1e-12;        // | ||psi|| - 1 | for states
  double marker_normalization = 1e-10; // meter marker kets
  double degeneracy = 1e-9;            // eigenvalues closer than this are merged
  double projector = 1e-10;            // idempotence / completeness of projectors
  double completeness = 1e-10;         // sum of effects / measurement operators
  double min_probability = 1e-14;      // conditioning floor
  double overlap_floor = 1e-12;        // |<f|s>| floor for weak values
  double distribution_sum = 1e-10;     // outcome probabilities sum to one
  double negative_probability = 1e-12; // smallest admissible probability is -this
};

}  // namespace qmeas
