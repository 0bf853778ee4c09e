#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "mogp/errors.hpp"
#include "mogp/individual.hpp"
#include "mogp/pareto.hpp"
#include "mogp/selection.hpp"
#include "mogp/semantics.hpp"

namespace mogp {

// Reference member of the archive's first front: the individual with the
// largest finite crowding distance; when every member is at infinity the
// highest TPR wins.  Earlier index breaks exact ties.  Crowding must already
// be assigned on the front's members.
inline std::size_t select_pivot(const Population& merged,
                                const std::vector<std::size_t>& front) {
  if (front.empty()) throw ContractError("select_pivot: empty front");
  bool have_finite = false;
  std::size_t best = front[0];
  for (std::size_t i : front) {
    if (!std::isfinite(merged[i].crowding)) continue;
    if (!have_finite || merged[i].crowding > merged[best].crowding) {
      best = i;
      have_finite = true;
    }
  }
  if (have_finite) return best;
  best = front[0];
  for (std::size_t i : front)
    if (merged[i].tpr > merged[best].tpr) best = i;
  return best;
}

namespace detail {

inline void reset_semantic_trace(SelectionTrace* trace, std::size_t n) {
  if (!trace) return;
  trace->pivot.reset();
  trace->semantic_distances.assign(n, std::numeric_limits<double>::quiet_NaN());
}

}  // namespace detail

// Environmental selection that copies whole fronts while they fit and then
// fills the free slots across ALL remaining fronts by crowding over the
// one-dimensional semantic distance to the pivot.  Equal semantic crowding
// falls back to (rank, objective crowding), which makes the all-distances-
// equal case coincide with the plain front-then-crowding selection.
inline Population select_next_scd(Population merged, std::size_t target,
                                  const SemanticThresholds& thresholds,
                                  bool with_strength = false, SelectionTrace* trace = nullptr) {
  if (target > merged.size()) throw ContractError("select_next_scd: target exceeds merged size");
  const std::vector<std::vector<double>> points = objective_points(merged);
  const std::vector<std::vector<std::size_t>> fronts =
      detail::annotate_merged(merged, points, with_strength, trace);
  detail::reset_semantic_trace(trace, merged.size());
  Population selected;
  selected.reserve(target);
  std::size_t next_front = 0;
  while (next_front < fronts.size() &&
         selected.size() + fronts[next_front].size() <= target) {
    for (std::size_t i : fronts[next_front]) selected.push_back(merged[i]);
    ++next_front;
  }
  if (selected.size() == target) return selected;

  std::vector<std::size_t> remaining;  // front-major order
  for (std::size_t f = next_front; f < fronts.size(); ++f)
    remaining.insert(remaining.end(), fronts[f].begin(), fronts[f].end());

  const std::size_t pivot = select_pivot(merged, fronts[0]);
  if (trace) trace->pivot = pivot;
  std::vector<std::vector<double>> distance_rows;
  distance_rows.reserve(remaining.size());
  for (std::size_t i : remaining) {
    merged[i].semantic_distance =
        semantic_distance(merged[i].semantics, merged[pivot].semantics, thresholds);
    if (trace) trace->semantic_distances[i] = merged[i].semantic_distance;
    distance_rows.push_back({merged[i].semantic_distance});
  }
  std::vector<std::size_t> all(remaining.size());
  std::iota(all.begin(), all.end(), 0);
  const std::vector<double> semantic_crowding = crowding_distances(distance_rows, all);

  std::vector<std::size_t> order = all;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (semantic_crowding[a] != semantic_crowding[b])
      return semantic_crowding[a] > semantic_crowding[b];
    const Individual& ia = merged[remaining[a]];
    const Individual& ib = merged[remaining[b]];
    if (ia.rank != ib.rank) return ia.rank < ib.rank;
    return ia.crowding > ib.crowding;
  });
  for (std::size_t k : order) {
    if (selected.size() == target) break;
    selected.push_back(merged[remaining[k]]);
  }
  return selected;
}

// Environmental selection that scores every merged member by semantic
// distance to the pivot and re-runs the elitist loop over three maximized
// criteria (TPR, TNR, distance).  Returned annotations come from the
// three-criteria sort.
inline Population select_next_sdo(Population merged, std::size_t target,
                                  const SemanticThresholds& thresholds,
                                  bool with_strength = false, SelectionTrace* trace = nullptr) {
  if (target > merged.size()) throw ContractError("select_next_sdo: target exceeds merged size");
  const std::vector<std::vector<double>> points2 = objective_points(merged);
  const std::vector<std::vector<std::size_t>> fronts2 = non_dominated_sort(points2);
  const std::vector<double> first_crowding = crowding_distances(points2, fronts2[0]);
  for (std::size_t k = 0; k < fronts2[0].size(); ++k)
    merged[fronts2[0][k]].crowding = first_crowding[k];
  const std::size_t pivot = select_pivot(merged, fronts2[0]);

  detail::reset_semantic_trace(trace, merged.size());
  if (trace) trace->pivot = pivot;
  std::vector<std::vector<double>> points3;
  points3.reserve(merged.size());
  for (std::size_t i = 0; i < merged.size(); ++i) {
    merged[i].semantic_distance =
        semantic_distance(merged[i].semantics, merged[pivot].semantics, thresholds);
    if (trace) trace->semantic_distances[i] = merged[i].semantic_distance;
    points3.push_back({merged[i].tpr, merged[i].tnr, merged[i].semantic_distance});
  }

  const std::vector<std::vector<std::size_t>> fronts3 = non_dominated_sort(points3);
  for (std::size_t f = 0; f < fronts3.size(); ++f) {
    const std::vector<double> crowd = crowding_distances(points3, fronts3[f]);
    for (std::size_t k = 0; k < fronts3[f].size(); ++k) {
      merged[fronts3[f][k]].rank = static_cast<int>(f);
      merged[fronts3[f][k]].crowding = crowd[k];
    }
  }
  if (with_strength) {
    // Mating pressure stays on the two real objectives under every variant.
    const std::vector<double> fitness = strength_raw_fitness(points2);
    for (std::size_t i = 0; i < merged.size(); ++i) merged[i].strength_fitness = fitness[i];
  }
  if (trace) {
    trace->fronts = fronts3;
    trace->crowding.resize(merged.size());
    for (std::size_t i = 0; i < merged.size(); ++i) trace->crowding[i] = merged[i].crowding;
  }

  Population selected;
  selected.reserve(target);
  for (const std::vector<std::size_t>& front : fronts3) {
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

}  // namespace mogp
