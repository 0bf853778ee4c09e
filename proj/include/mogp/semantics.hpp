#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "mogp/errors.hpp"

namespace mogp {

// Band for the semantic distance between two programs' output vectors.
// With lbss set, coordinates count when lbss <= |a_i - b_i| <= ubss (both
// ends inclusive); without it, when |a_i - b_i| > ubss (strict).
struct SemanticThresholds {
  double ubss = 0.5;
  std::optional<double> lbss;

  bool operator==(const SemanticThresholds&) const = default;
};

// Coordinate-count semantic distance.  NaN differences satisfy neither
// comparison and contribute nothing under either rule.
inline double semantic_distance(const std::vector<double>& a, const std::vector<double>& b,
                                const SemanticThresholds& t) {
  if (a.size() != b.size()) throw ContractError("semantic_distance: size mismatch");
  std::size_t count = 0;
  if (t.lbss) {
    const double lo = *t.lbss;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = std::fabs(a[i] - b[i]);
      count += (d >= lo && d <= t.ubss);
    }
  } else {
    for (std::size_t i = 0; i < a.size(); ++i) count += (std::fabs(a[i] - b[i]) > t.ubss);
  }
  return static_cast<double>(count);
}

// Mean absolute coordinate difference; the acceptance test for semantic
// crossover compares this against the threshold band.
inline double mean_abs_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw ContractError("mean_abs_distance: size mismatch");
  if (a.empty()) throw ContractError("mean_abs_distance: empty vectors");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::fabs(a[i] - b[i]);
  return sum / static_cast<double>(a.size());
}

}  // namespace mogp
