#pragma once

#include <cstdint>
#include <vector>

#include "mogp/errors.hpp"
#include "mogp/tree.hpp"

namespace mogp {

enum class Scheme { nsga2, spea2 };
enum class Variant { baseline, ssc, scd, sdo };

// Confusion counts of the sign classifier: output >= 0 predicts the
// positive (minority) class; NaN outputs fall to negative.
struct Confusion {
  std::int64_t tp = 0;
  std::int64_t fn = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
};

inline Confusion classify_confusion(const std::vector<double>& outputs,
                                    const std::vector<int>& labels) {
  if (outputs.size() != labels.size()) throw ContractError("classify_confusion: size mismatch");
  Confusion c;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    const bool predicted_positive = outputs[i] >= 0.0;
    if (labels[i] == 1)
      (predicted_positive ? c.tp : c.fn) += 1;
    else
      (predicted_positive ? c.fp : c.tn) += 1;
  }
  return c;
}

inline double true_positive_rate(const Confusion& c) {
  const std::int64_t positives = c.tp + c.fn;
  return positives == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(positives);
}

inline double true_negative_rate(const Confusion& c) {
  const std::int64_t negatives = c.tn + c.fp;
  return negatives == 0 ? 0.0 : static_cast<double>(c.tn) / static_cast<double>(negatives);
}

struct Individual {
  ProgramTree genotype;
  std::vector<double> semantics;  // outputs on the training rows
  double tpr = 0.0;               // training true positive rate
  double tnr = 0.0;               // training true negative rate

  // Selection annotations, relative to the merged population the individual
  // was last selected from; tournaments read them in the next generation.
  int rank = 0;
  double crowding = 0.0;
  double strength_fitness = 0.0;   // strength-based raw fitness (smaller wins)
  double semantic_distance = 0.0;  // distance to the pivot, semantic variants only
};

using Population = std::vector<Individual>;

// Per-individual objective rows (TPR, TNR), both maximized.
inline std::vector<std::vector<double>> objective_points(const Population& pop) {
  std::vector<std::vector<double>> points;
  points.reserve(pop.size());
  for (const Individual& ind : pop) points.push_back({ind.tpr, ind.tnr});
  return points;
}

}  // namespace mogp
