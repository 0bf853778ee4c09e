#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "mogp/errors.hpp"
#include "mogp/individual.hpp"
#include "mogp/semantics.hpp"
#include "mogp/stats.hpp"

namespace mogp {

// One objective-space point backed by its confusion counts, so rate
// comparisons are exact integer arithmetic rather than float tolerance.
// Counts are small (dataset sized), far from the cross-product overflow
// range.
struct FrontPoint {
  std::int64_t tp = 0;
  std::int64_t fn = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;

  double tpr() const { return static_cast<double>(tp) / static_cast<double>(tp + fn); }
  double tnr() const { return static_cast<double>(tn) / static_cast<double>(tn + fp); }

  bool operator==(const FrontPoint&) const = default;
};

inline FrontPoint front_point(const Confusion& c) { return FrontPoint{c.tp, c.fn, c.fp, c.tn}; }

namespace detail {

inline void check_point(const FrontPoint& p) {
  if (p.tp < 0 || p.fn < 0 || p.fp < 0 || p.tn < 0 || p.tp + p.fn == 0 || p.tn + p.fp == 0)
    throw ContractError("FrontPoint: counts must be non-negative with both classes present");
}

// Three-way rational comparison of a.tp/(a.tp+a.fn) against b's.
inline int compare_tpr(const FrontPoint& a, const FrontPoint& b) {
  const std::int64_t lhs = a.tp * (b.tp + b.fn);
  const std::int64_t rhs = b.tp * (a.tp + a.fn);
  return lhs < rhs ? -1 : lhs > rhs ? 1 : 0;
}

inline int compare_tnr(const FrontPoint& a, const FrontPoint& b) {
  const std::int64_t lhs = a.tn * (b.tn + b.fp);
  const std::int64_t rhs = b.tn * (a.tn + a.fp);
  return lhs < rhs ? -1 : lhs > rhs ? 1 : 0;
}

}  // namespace detail

inline bool same_rates(const FrontPoint& a, const FrontPoint& b) {
  return detail::compare_tpr(a, b) == 0 && detail::compare_tnr(a, b) == 0;
}

inline bool dominates_point(const FrontPoint& a, const FrontPoint& b) {
  const int tpr = detail::compare_tpr(a, b);
  const int tnr = detail::compare_tnr(a, b);
  return tpr >= 0 && tnr >= 0 && (tpr > 0 || tnr > 0);
}

// Mutually non-dominated, rate-deduplicated set of objective points.
class FrontSet {
 public:
  // Inserts p unless an existing point dominates or duplicates it; existing
  // points p dominates are dropped.  Returns whether p was added.
  bool insert(const FrontPoint& p) {
    detail::check_point(p);
    for (const FrontPoint& q : points_)
      if (dominates_point(q, p) || same_rates(q, p)) return false;
    std::erase_if(points_, [&](const FrontPoint& q) { return dominates_point(p, q); });
    points_.push_back(p);
    return true;
  }

  const std::vector<FrontPoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool operator==(const FrontSet&) const = default;
  bool empty() const { return points_.empty(); }

 private:
  std::vector<FrontPoint> points_;
};

enum class HyperareaForm { trapezoid, rectangular };

// Area dominated by the front with reference point (0,0).  The trapezoid
// form closes the piecewise-linear curve through the points to the axes with
// virtual endpoints (0, tnr_first) and (tpr_last, 0); the rectangular form
// is the standard staircase hypervolume, which unlike the trapezoid form
// never decreases when a non-dominated point is added.
inline double hyperarea(const FrontSet& front, HyperareaForm form = HyperareaForm::trapezoid) {
  if (front.empty()) throw ContractError("hyperarea: empty front");
  std::vector<FrontPoint> pts = front.points();
  std::sort(pts.begin(), pts.end(),
            [](const FrontPoint& a, const FrontPoint& b) { return detail::compare_tpr(a, b) < 0; });
  double area = 0.0;
  if (form == HyperareaForm::trapezoid) {
    area = pts.front().tpr() * pts.front().tnr();  // segment from (0, tnr_first)
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
      area += (pts[i + 1].tpr() - pts[i].tpr()) * (pts[i].tnr() + pts[i + 1].tnr()) / 2.0;
  } else {
    double previous_tpr = 0.0;
    for (const FrontPoint& p : pts) {
      area += (p.tpr() - previous_tpr) * p.tnr();
      previous_tpr = p.tpr();
    }
  }
  return area;
}

// Non-dominated merge of per-run fronts.
inline FrontSet accumulate_po_front(const std::vector<FrontSet>& fronts) {
  if (fronts.empty()) throw ContractError("accumulate_po_front: no fronts");
  FrontSet merged;
  for (const FrontSet& front : fronts)
    for (const FrontPoint& p : front.points()) merged.insert(p);
  return merged;
}

namespace detail {

// Canonical reduced-fraction key for exact rate identity across differing
// denominators.
using RateKey = std::tuple<std::int64_t, std::int64_t, std::int64_t, std::int64_t>;

inline RateKey rate_key(const FrontPoint& p) {
  const std::int64_t gp = std::gcd(p.tp, p.tp + p.fn);
  const std::int64_t gn = std::gcd(p.tn, p.tn + p.fp);
  return {p.tp / gp, (p.tp + p.fn) / gp, p.tn / gn, (p.tn + p.fp) / gn};
}

inline std::set<RateKey> pooled_keys(const std::vector<FrontSet>& runs) {
  std::set<RateKey> pool;
  for (const FrontSet& run : runs)
    for (const FrontPoint& p : run.points()) pool.insert(rate_key(p));
  return pool;
}

}  // namespace detail

// Cross-method solution uniqueness: for each run of one method, the number
// of its points absent from the other method's pool across all of its runs;
// reported as mean and sample sd over runs, for both directions.
inline std::pair<Statistic, Statistic> unique_solutions(const std::vector<FrontSet>& a,
                                                        const std::vector<FrontSet>& b) {
  if (a.empty() || a.size() != b.size())
    throw ContractError("unique_solutions: run lists must be non-empty and equally sized");
  const std::set<detail::RateKey> pool_a = detail::pooled_keys(a);
  const std::set<detail::RateKey> pool_b = detail::pooled_keys(b);
  const auto count_unique = [](const std::vector<FrontSet>& runs,
                               const std::set<detail::RateKey>& other_pool) {
    std::vector<double> counts;
    counts.reserve(runs.size());
    for (const FrontSet& run : runs) {
      std::size_t unique = 0;
      for (const FrontPoint& p : run.points())
        if (!other_pool.contains(detail::rate_key(p))) ++unique;
      counts.push_back(static_cast<double>(unique));
    }
    return mean_and_sample_sd(counts);
  };
  return {count_unique(a, pool_b), count_unique(b, pool_a)};
}

// One completed evolutionary run, objectives measured on the test half.
struct RunResult {
  std::string run_id;
  std::uint64_t seed = 0;
  std::string dataset;
  Scheme scheme = Scheme::nsga2;
  Variant variant = Variant::baseline;
  std::optional<SemanticThresholds> thresholds;  // absent for baseline
  FrontSet final_front;
  double hypervolume = 0.0;
  double mean_tree_size = 0.0;
  std::vector<double> per_generation_sizes;  // archive mean size, initial included

  bool operator==(const RunResult&) const = default;
};

// Box-plot summary of the per-run mean tree sizes.
struct SizeSummary {
  std::vector<double> per_run_means;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

inline SizeSummary size_statistics(const std::vector<RunResult>& results) {
  if (results.empty()) throw ContractError("size_statistics: no runs");
  SizeSummary summary;
  for (const RunResult& r : results) summary.per_run_means.push_back(r.mean_tree_size);
  summary.min = *std::min_element(summary.per_run_means.begin(), summary.per_run_means.end());
  summary.max = *std::max_element(summary.per_run_means.begin(), summary.per_run_means.end());
  summary.q1 = quantile_type7(summary.per_run_means, 0.25);
  summary.median = quantile_type7(summary.per_run_means, 0.5);
  summary.q3 = quantile_type7(summary.per_run_means, 0.75);
  return summary;
}

}  // namespace mogp
