#pragma once

#include <utility>
#include <vector>

#include "mogp/errors.hpp"
#include "mogp/features.hpp"
#include "mogp/individual.hpp"
#include "mogp/rng.hpp"
#include "mogp/semantics.hpp"
#include "mogp/tree.hpp"
#include "mogp/variation.hpp"

namespace mogp {

// Outcome of a trial-based crossover.  The offspring semantics are a
// by-product of the acceptance test and are returned so callers never have
// to evaluate the same trees twice.
struct SscResult {
  ProgramTree first;
  ProgramTree second;
  std::vector<double> first_semantics;
  std::vector<double> second_semantics;
  int trials = 0;
  bool accepted = false;
};

// True when a parent/offspring mean absolute semantic distance sits in the
// configured acceptance range: [lbss, ubss] with both bounds, strictly above
// ubss with one.
inline bool ssc_band_accepts(double distance, const SemanticThresholds& thresholds) {
  if (thresholds.lbss) return distance >= *thresholds.lbss && distance <= thresholds.ubss;
  return distance > thresholds.ubss;
}

// Crossover retried until both offspring land at an acceptable semantic
// distance from their own parent, up to max_trials attempts; when every
// attempt fails the final attempt is kept unconditionally.  One rng-identical
// call to crossover_90_10 per trial, so with max_trials = 1 and a band that
// accepts everything this reduces bitwise to plain crossover.
inline SscResult ssc_crossover(const Individual& parent_a, const Individual& parent_b,
                               const SemanticThresholds& thresholds, int max_trials,
                               const VariationParams& params, const FeatureTable& features,
                               EvalScratch& scratch, Rng& rng) {
  if (max_trials < 1) throw ContractError("ssc_crossover: max_trials must be at least 1");
  SscResult result;
  for (int trial = 1; trial <= max_trials; ++trial) {
    CrossoverResult attempt = crossover_90_10(parent_a.genotype, parent_b.genotype, params, rng);
    std::vector<double> first_semantics = evaluate(attempt.first, features, scratch);
    std::vector<double> second_semantics = evaluate(attempt.second, features, scratch);
    const bool accepted =
        ssc_band_accepts(mean_abs_distance(parent_a.semantics, first_semantics), thresholds) &&
        ssc_band_accepts(mean_abs_distance(parent_b.semantics, second_semantics), thresholds);
    if (accepted || trial == max_trials) {
      result.first = std::move(attempt.first);
      result.second = std::move(attempt.second);
      result.first_semantics = std::move(first_semantics);
      result.second_semantics = std::move(second_semantics);
      result.trials = trial;
      result.accepted = accepted;
      return result;
    }
  }
  throw ContractError("ssc_crossover: unreachable");
}

}  // namespace mogp
