#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "mogp/errors.hpp"
#include "mogp/individual.hpp"
#include "mogp/pareto.hpp"
#include "mogp/rng.hpp"

namespace mogp {

// Optional capture of one environmental-selection pass for inspection.
struct SelectionTrace {
  std::vector<std::vector<std::size_t>> fronts;  // indices into the merged population
  std::vector<double> crowding;                  // per merged index
  std::optional<std::size_t> pivot;              // merged index, semantic variants only
  std::vector<double> semantic_distances;        // per merged index, semantic variants only
};

namespace detail {

// Returns true when a beats b under the scheme's mating order; exact ties
// return false both ways.
inline bool tournament_better(const Individual& a, const Individual& b, Scheme scheme) {
  if (scheme == Scheme::nsga2) {
    if (a.rank != b.rank) return a.rank < b.rank;
  } else {
    if (a.strength_fitness != b.strength_fitness) return a.strength_fitness < b.strength_fitness;
  }
  return a.crowding > b.crowding;
}

}  // namespace detail

// Size-k tournament with replacement.  The winner is drawn uniformly among
// tied bests via reservoir replacement, so tie handling costs one rng draw
// per tie and none otherwise.
inline std::size_t tournament(const Population& pop, std::size_t k, Scheme scheme, Rng& rng) {
  if (pop.empty()) throw ContractError("tournament: empty population");
  if (k == 0) throw ContractError("tournament: zero tournament size");
  std::size_t best = rng.index(pop.size());
  std::size_t ties = 1;
  for (std::size_t i = 1; i < k; ++i) {
    const std::size_t challenger = rng.index(pop.size());
    if (detail::tournament_better(pop[challenger], pop[best], scheme)) {
      best = challenger;
      ties = 1;
    } else if (!detail::tournament_better(pop[best], pop[challenger], scheme)) {
      ++ties;
      if (rng.index(ties) == 0) best = challenger;
    }
  }
  return best;
}

namespace detail {

// Annotates rank and crowding (and strength fitness on demand) across the
// whole merged population, recording fronts in the trace when asked.
inline std::vector<std::vector<std::size_t>> annotate_merged(
    Population& merged, const std::vector<std::vector<double>>& points, bool with_strength,
    SelectionTrace* trace) {
  std::vector<std::vector<std::size_t>> fronts = non_dominated_sort(points);
  for (std::size_t f = 0; f < fronts.size(); ++f) {
    const std::vector<double> crowd = crowding_distances(points, fronts[f]);
    for (std::size_t k = 0; k < fronts[f].size(); ++k) {
      merged[fronts[f][k]].rank = static_cast<int>(f);
      merged[fronts[f][k]].crowding = crowd[k];
    }
  }
  if (with_strength) {
    const std::vector<double> fitness = strength_raw_fitness(points);
    for (std::size_t i = 0; i < merged.size(); ++i) merged[i].strength_fitness = fitness[i];
  }
  if (trace) {
    trace->fronts = fronts;
    trace->crowding.resize(merged.size());
    for (std::size_t i = 0; i < merged.size(); ++i) trace->crowding[i] = merged[i].crowding;
  }
  return fronts;
}

// Descending-crowding order of a front, stable in the front's index order.
inline std::vector<std::size_t> by_crowding_desc(const Population& merged,
                                                 const std::vector<std::size_t>& front) {
  std::vector<std::size_t> order = front;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return merged[a].crowding > merged[b].crowding;
  });
  return order;
}

}  // namespace detail

// Elitist environmental selection over an already-merged population: copy
// whole fronts while they fit, then fill from the next front in descending
// crowding order.  Annotations are computed on the merged set and carried
// on the returned individuals.  `with_strength` additionally annotates the
// strength-based fitness used by the spea2 mating scheme.
inline Population select_next_front_crowding(Population merged, std::size_t target,
                                             bool with_strength,
                                             SelectionTrace* trace = nullptr) {
  if (target > merged.size())
    throw ContractError("select_next_front_crowding: target exceeds merged size");
  const std::vector<std::vector<double>> points = objective_points(merged);
  const std::vector<std::vector<std::size_t>> fronts =
      detail::annotate_merged(merged, points, with_strength, trace);
  Population selected;
  selected.reserve(target);
  for (const std::vector<std::size_t>& front : fronts) {
    if (selected.size() == target) break;
    if (selected.size() + front.size() <= target) {
      for (std::size_t i : front) selected.push_back(merged[i]);
      continue;
    }
    for (std::size_t i : detail::by_crowding_desc(merged, front)) {
      if (selected.size() == target) break;
      selected.push_back(merged[i]);
    }
    break;
  }
  return selected;
}

// Generation wrapper: parents first so annotation and tie order are stable,
// survivor count equals the parent population size.
inline Population environmental_selection(Population parents, Population offspring,
                                          bool with_strength, SelectionTrace* trace = nullptr) {
  const std::size_t target = parents.size();
  Population merged = std::move(parents);
  merged.reserve(merged.size() + offspring.size());
  for (Individual& ind : offspring) merged.push_back(std::move(ind));
  return select_next_front_crowding(std::move(merged), target, with_strength, trace);
}

}  // namespace mogp
