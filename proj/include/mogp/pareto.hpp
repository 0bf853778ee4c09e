#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "mogp/errors.hpp"

namespace mogp {

// Pareto dominance with every criterion maximized: at least as good
// everywhere and strictly better somewhere.
inline bool dominates(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ContractError("dominates: dimension mismatch");
  bool strictly_better = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return false;
    if (a[i] > b[i]) strictly_better = true;
  }
  return strictly_better;
}

// Fast non-dominated sort over a row-major point matrix.  Returns fronts in
// order; within a front, indices keep ascending input order.
inline std::vector<std::vector<std::size_t>> non_dominated_sort(
    const std::vector<std::vector<double>>& points) {
  const std::size_t n = points.size();
  std::vector<std::vector<std::size_t>> dominated_by(n);  // j for each i with i dom j
  std::vector<std::size_t> domination_count(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (dominates(points[i], points[j])) {
        dominated_by[i].push_back(j);
        ++domination_count[j];
      } else if (dominates(points[j], points[i])) {
        dominated_by[j].push_back(i);
        ++domination_count[i];
      }
    }
  std::vector<std::vector<std::size_t>> fronts;
  std::vector<std::size_t> current;
  for (std::size_t i = 0; i < n; ++i)
    if (domination_count[i] == 0) current.push_back(i);
  while (!current.empty()) {
    fronts.push_back(current);
    std::vector<std::size_t> next;
    for (std::size_t i : fronts.back())
      for (std::size_t j : dominated_by[i])
        if (--domination_count[j] == 0) next.push_back(j);
    std::sort(next.begin(), next.end());
    current = std::move(next);
  }
  return fronts;
}

// Crowding distance of each front member, front-relative.  Fronts of one or
// two members are all infinite.  Larger fronts: per criterion, the extremes
// get infinity and interior members accumulate the normalized gap between
// their neighbours; a criterion with zero range across the front is skipped
// outright, contributing neither gaps nor infinities.
inline std::vector<double> crowding_distances(const std::vector<std::vector<double>>& points,
                                              const std::vector<std::size_t>& front) {
  const std::size_t n = front.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (n == 0) return {};
  if (n <= 2) return std::vector<double>(n, inf);
  const std::size_t m = points[front[0]].size();
  std::vector<double> distance(n, 0.0);
  std::vector<std::size_t> order(n);
  for (std::size_t obj = 0; obj < m; ++obj) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return points[front[a]][obj] < points[front[b]][obj];
    });
    const double lo = points[front[order.front()]][obj];
    const double hi = points[front[order.back()]][obj];
    if (hi == lo) continue;
    distance[order.front()] = inf;
    distance[order.back()] = inf;
    for (std::size_t k = 1; k + 1 < n; ++k) {
      const double below = points[front[order[k - 1]]][obj];
      const double above = points[front[order[k + 1]]][obj];
      distance[order[k]] += (above - below) / (hi - lo);
    }
  }
  return distance;
}

// Strength-based fitness: an individual's raw fitness is the summed strength
// (count of dominated points) of everything that dominates it, so exactly
// the non-dominated score zero.  Smaller is better.
inline std::vector<double> strength_raw_fitness(const std::vector<std::vector<double>>& points) {
  const std::size_t n = points.size();
  std::vector<double> strength(n, 0.0);
  std::vector<std::vector<std::size_t>> dominators(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (dominates(points[i], points[j])) {
        strength[i] += 1.0;
        dominators[j].push_back(i);
      } else if (dominates(points[j], points[i])) {
        strength[j] += 1.0;
        dominators[i].push_back(j);
      }
    }
  std::vector<double> fitness(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j : dominators[i]) fitness[i] += strength[j];
  return fitness;
}

}  // namespace mogp
