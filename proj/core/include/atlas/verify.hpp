#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "atlas/model.hpp"
#include "atlas/rng.hpp"

namespace atlas {

struct PropertyReport {
  std::string property;
  std::int64_t samples = 0;
  std::int64_t violations = 0;
  double worst_value = 0.0;  // most extreme observed statistic
  double bound_used = 0.0;   // threshold the statistic was held against
  bool pass = false;
  std::string note;
};

// Writes one machine-parseable line: JSON object with the fields above.
void print_report(std::ostream& out, const PropertyReport& report);

// Largest per-point gradient entry count against 4 n (2M+1) per output
// component (times the bank count for the all-densities variant).
PropertyReport check_sparsity(const AtlasModel& model, int points, SplitRng& rng);

// L1 gradient norm at random points against the model's gradient_bound().
PropertyReport check_gradient_bound(const AtlasModel& model, int points, SplitRng& rng);

// Gradient inner products of point pairs whose every coordinate differs by at
// least min_gap; the default variant must give exactly zero. Pairs are drawn
// by rejection; throws std::runtime_error when min_gap makes that infeasible.
PropertyReport check_orthogonality(const AtlasModel& model, int pairs, double min_gap,
                                   SplitRng& rng);
double default_orthogonality_gap(const AtlasModel& model);

// Outputs before vs. after expand_density_all + expand_exponentials(delta_M)
// on random points; also checks the parameter bookkeeping of the copy.
PropertyReport check_expansion(const AtlasModel& model, int points, int delta_M,
                               SplitRng& rng);
inline constexpr double kExpansionTolerance = 1e-12;

// Analytic backward vs. central finite differences at every touched
// parameter. Error metric: |a - fd| / max(|a|, |fd|, 1e-3), i.e. relative
// with an absolute floor where differences are roundoff-dominated.
PropertyReport check_finite_diff(const AtlasModel& model, int points, double step,
                                 double tolerance, SplitRng& rng);

// All five checks with the default sample sizes (1000 points, 10000 pairs,
// step 1e-5, tolerance 1e-5, delta_M 2).
std::vector<PropertyReport> run_all_checks(const AtlasModel& model, SplitRng& rng);

}  // namespace atlas
