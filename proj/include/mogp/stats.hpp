#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

#include "mogp/errors.hpp"

namespace mogp {

// Sample statistic pair: mean and the n-1 standard deviation (0 for a single
// observation).
struct Statistic {
  double mean = 0.0;
  double sd = 0.0;
};

inline Statistic mean_and_sample_sd(const std::vector<double>& values) {
  if (values.empty()) throw ContractError("mean_and_sample_sd: empty sample");
  Statistic s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
  if (values.size() < 2) return s;
  double squares = 0.0;
  for (double v : values) squares += (v - s.mean) * (v - s.mean);
  s.sd = std::sqrt(squares / (values.size() - 1));
  return s;
}

// Linear-interpolation quantile over order statistics (the convention used
// by R's default and NumPy's "linear" mode).
inline double quantile_type7(std::vector<double> values, double p) {
  if (values.empty()) throw ContractError("quantile_type7: empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw ContractError("quantile_type7: p outside [0,1]");
  std::sort(values.begin(), values.end());
  const double h = static_cast<double>(values.size() - 1) * p;
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= values.size()) return values.back();
  return values[lo] + (h - lo) * (values[lo + 1] - values[lo]);
}

enum class Verdict { better, worse, equal };

struct RankSumResult {
  double p_value = 1.0;
  Verdict verdict = Verdict::equal;
  double rank_sum_x = 0.0;  // sum of x's midranks in the combined sample
};

namespace detail {

// Midranks of the combined sample, returned aligned to (x then y), plus the
// tie-correction accumulator sum of t^3 - t over tie groups.
struct MidrankTable {
  std::vector<double> ranks;
  double tie_correction = 0.0;
};

inline MidrankTable midranks(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> combined = x;
  combined.insert(combined.end(), y.begin(), y.end());
  for (double v : combined)
    if (std::isnan(v)) throw ContractError("wilcoxon_rank_sum: NaN observation");
  std::vector<std::size_t> order(combined.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return combined[a] < combined[b]; });

  MidrankTable table;
  table.ranks.resize(combined.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && combined[order[j + 1]] == combined[order[i]]) ++j;
    const double tie = static_cast<double>(j - i + 1);
    table.tie_correction += tie * tie * tie - tie;
    const double midrank = static_cast<double>(i + 1 + j + 1) / 2.0;
    for (std::size_t k = i; k <= j; ++k) table.ranks[order[k]] = midrank;
    i = j + 1;
  }
  return table;
}

// Exact two-sided p for the rank sum of a k-subset drawn uniformly from the
// combined sample, computed by dynamic programming over doubled midranks
// (integers even under ties).
inline double exact_two_sided_p(const std::vector<double>& all_ranks, std::size_t k,
                                double observed_rank_sum) {
  std::vector<std::int64_t> doubled;
  doubled.reserve(all_ranks.size());
  std::int64_t total = 0;
  for (double r : all_ranks) {
    const auto d = static_cast<std::int64_t>(std::llround(2.0 * r));
    doubled.push_back(d);
    total += d;
  }
  const auto observed = static_cast<std::int64_t>(std::llround(2.0 * observed_rank_sum));

  // counts[j][s]: number of j-subsets with doubled rank sum s.
  std::vector<std::vector<double>> counts(k + 1,
                                          std::vector<double>(static_cast<std::size_t>(total) + 1, 0.0));
  counts[0][0] = 1.0;
  for (std::int64_t d : doubled) {
    for (std::size_t j = k; j >= 1; --j) {
      auto& row = counts[j];
      const auto& below = counts[j - 1];
      for (std::int64_t s = total; s >= d; --s)
        if (below[static_cast<std::size_t>(s - d)] != 0.0)
          row[static_cast<std::size_t>(s)] += below[static_cast<std::size_t>(s - d)];
    }
  }
  double subsets = 0.0, low = 0.0, high = 0.0;
  for (std::int64_t s = 0; s <= total; ++s) {
    const double c = counts[k][static_cast<std::size_t>(s)];
    subsets += c;
    if (s <= observed) low += c;
    if (s >= observed) high += c;
  }
  return std::min(1.0, 2.0 * std::min(low, high) / subsets);
}

}  // namespace detail

// Two-sided Wilcoxon rank-sum test with midrank tie handling: exact subset
// enumeration when the smaller sample has at most 10 observations, otherwise
// the normal approximation with tie-corrected variance and a 0.5 continuity
// correction.  The verdict reads from x's side: better means x's mean exceeds
// y's at significance alpha.
inline RankSumResult wilcoxon_rank_sum(const std::vector<double>& x, const std::vector<double>& y,
                                       double alpha = 0.05) {
  if (x.size() < 2 || y.size() < 2)
    throw ContractError("wilcoxon_rank_sum: both samples need at least 2 observations");
  const std::size_t n = x.size();
  const std::size_t m = y.size();
  const std::size_t N = n + m;
  const detail::MidrankTable table = detail::midranks(x, y);

  RankSumResult result;
  for (std::size_t i = 0; i < n; ++i) result.rank_sum_x += table.ranks[i];

  if (std::min(n, m) <= 10) {
    const std::size_t k = std::min(n, m);
    double observed = 0.0;
    if (n <= m) {
      observed = result.rank_sum_x;
    } else {
      for (std::size_t i = n; i < N; ++i) observed += table.ranks[i];
    }
    result.p_value = detail::exact_two_sided_p(table.ranks, k, observed);
  } else {
    const double mean = static_cast<double>(n) * static_cast<double>(N + 1) / 2.0;
    const double variance =
        (static_cast<double>(n) * static_cast<double>(m) / 12.0) *
        (static_cast<double>(N + 1) -
         table.tie_correction / (static_cast<double>(N) * static_cast<double>(N - 1)));
    if (variance <= 0.0) {
      result.p_value = 1.0;
    } else {
      const double shifted = std::max(0.0, std::abs(result.rank_sum_x - mean) - 0.5);
      result.p_value = std::min(1.0, std::erfc(shifted / std::sqrt(2.0 * variance)));
    }
  }

  if (result.p_value < alpha) {
    const double mean_x = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / m;
    if (mean_x > mean_y)
      result.verdict = Verdict::better;
    else if (mean_x < mean_y)
      result.verdict = Verdict::worse;
  }
  return result;
}

}  // namespace mogp
