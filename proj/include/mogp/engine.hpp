#pragma once

// One evolutionary run: ramped initialization, the generational loop with
// variant-specific environmental selection, and the final test-set report.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "mogp/dataset.hpp"
#include "mogp/errors.hpp"
#include "mogp/individual.hpp"
#include "mogp/metrics.hpp"
#include "mogp/rng.hpp"
#include "mogp/selection.hpp"
#include "mogp/semantic_crossover.hpp"
#include "mogp/semantic_selection.hpp"
#include "mogp/semantics.hpp"
#include "mogp/tree.hpp"
#include "mogp/variation.hpp"

namespace mogp {

struct EngineConfig {
  Scheme scheme = Scheme::nsga2;
  Variant variant = Variant::baseline;
  std::optional<SemanticThresholds> thresholds;  // required by ssc/scd/sdo
  int ssc_max_trials = 20;
  std::size_t pop_size = 500;
  std::size_t generations = 50;
  int init_min_depth = 1;
  int init_max_depth = 5;
  VariationParams variation{};
};

inline void check_engine_config(const EngineConfig& cfg) {
  if (cfg.pop_size == 0) throw ContractError("engine: pop_size must be positive");
  if (cfg.variant != Variant::baseline && !cfg.thresholds)
    throw ContractError("engine: semantic variants need thresholds");
  if (cfg.variant == Variant::ssc && cfg.ssc_max_trials < 1)
    throw ContractError("engine: ssc_max_trials must be positive");
}

namespace detail {

inline Individual make_individual(ProgramTree tree, std::vector<double> semantics,
                                  const std::vector<int>& labels) {
  Individual ind;
  ind.genotype = std::move(tree);
  ind.semantics = std::move(semantics);
  const Confusion c = classify_confusion(ind.semantics, labels);
  ind.tpr = true_positive_rate(c);
  ind.tnr = true_negative_rate(c);
  return ind;
}

inline double mean_node_count(const Population& pop) {
  double total = 0.0;
  for (const Individual& ind : pop) total += static_cast<double>(ind.genotype.size());
  return total / static_cast<double>(pop.size());
}

}  // namespace detail

// Environmental selection dispatch.  Also used to annotate the initial
// population (target = |merged|), so first-generation tournaments see the
// same rank/crowding/strength annotations later generations do.
inline Population select_survivors(Population merged, std::size_t target, const EngineConfig& cfg,
                                   SelectionTrace* trace = nullptr) {
  const bool with_strength = cfg.scheme == Scheme::spea2;
  switch (cfg.variant) {
    case Variant::scd:
      return select_next_scd(std::move(merged), target, *cfg.thresholds, with_strength, trace);
    case Variant::sdo:
      return select_next_sdo(std::move(merged), target, *cfg.thresholds, with_strength, trace);
    default:
      return select_next_front_crowding(std::move(merged), target, with_strength, trace);
  }
}

// Produces exactly pop_size offspring.  Each slot draws one coin: crossover
// (two tournaments, both children kept while room remains) or mutation (one
// tournament, one child).  The ssc variant routes crossover through the
// trial-based operator and reuses the semantics it already evaluated.
inline Population make_offspring(const Population& parents, const EngineConfig& cfg,
                                 const Dataset& train, EvalScratch& scratch, Rng& rng) {
  Population offspring;
  offspring.reserve(cfg.pop_size);
  const std::size_t k = cfg.variation.tournament_size;
  while (offspring.size() < cfg.pop_size) {
    if (rng.real01() < cfg.variation.crossover_rate) {
      const Individual& a = parents[tournament(parents, k, cfg.scheme, rng)];
      const Individual& b = parents[tournament(parents, k, cfg.scheme, rng)];
      if (cfg.variant == Variant::ssc) {
        SscResult r = ssc_crossover(a, b, *cfg.thresholds, cfg.ssc_max_trials, cfg.variation,
                                    train.features, scratch, rng);
        offspring.push_back(detail::make_individual(std::move(r.first),
                                                    std::move(r.first_semantics), train.labels));
        if (offspring.size() < cfg.pop_size)
          offspring.push_back(detail::make_individual(
              std::move(r.second), std::move(r.second_semantics), train.labels));
      } else {
        CrossoverResult r = crossover_90_10(a.genotype, b.genotype, cfg.variation, rng);
        std::vector<double> first_semantics = evaluate(r.first, train.features, scratch);
        offspring.push_back(detail::make_individual(std::move(r.first),
                                                    std::move(first_semantics), train.labels));
        if (offspring.size() < cfg.pop_size) {
          std::vector<double> second_semantics = evaluate(r.second, train.features, scratch);
          offspring.push_back(detail::make_individual(std::move(r.second),
                                                      std::move(second_semantics), train.labels));
        }
      }
    } else {
      const Individual& p = parents[tournament(parents, k, cfg.scheme, rng)];
      ProgramTree child =
          subtree_mutation(p.genotype, cfg.variation, train.feature_count(), rng);
      std::vector<double> semantics = evaluate(child, train.features, scratch);
      offspring.push_back(
          detail::make_individual(std::move(child), std::move(semantics), train.labels));
    }
  }
  return offspring;
}

struct EvolutionResult {
  Population final_population;  // annotated survivors with training objectives
  FrontSet test_front;          // non-dominated test confusions of the final population
  double test_hyperarea = 0.0;  // trapezoid form
  double mean_tree_size = 0.0;  // mean node count of the final population
  std::vector<double> per_generation_sizes;  // mean node count, initial population first
};

inline EvolutionResult evolve(const EngineConfig& cfg, const SplitDataset& data,
                              std::uint64_t seed) {
  check_engine_config(cfg);
  Rng rng(seed);
  EvalScratch scratch;
  const Dataset& train = data.train;

  std::vector<ProgramTree> trees = ramped_half_and_half(
      cfg.pop_size, cfg.init_min_depth, cfg.init_max_depth, train.feature_count(), rng);
  Population pop;
  pop.reserve(cfg.pop_size);
  for (ProgramTree& tree : trees) {
    std::vector<double> semantics = evaluate(tree, train.features, scratch);
    pop.push_back(detail::make_individual(std::move(tree), std::move(semantics), train.labels));
  }

  EvolutionResult result;
  result.per_generation_sizes.reserve(cfg.generations + 1);
  result.per_generation_sizes.push_back(detail::mean_node_count(pop));
  pop = select_survivors(std::move(pop), cfg.pop_size, cfg);

  for (std::size_t gen = 0; gen < cfg.generations; ++gen) {
    Population offspring = make_offspring(pop, cfg, train, scratch, rng);
    Population merged = std::move(pop);
    merged.insert(merged.end(), std::make_move_iterator(offspring.begin()),
                  std::make_move_iterator(offspring.end()));
    pop = select_survivors(std::move(merged), cfg.pop_size, cfg);
    result.per_generation_sizes.push_back(detail::mean_node_count(pop));
  }

  // Training data never leaves this scope: only the finished population is
  // scored on the held-out half.
  for (const Individual& ind : pop) {
    const ObjectiveResult test = objectives_on(ind.genotype, data.test, scratch);
    result.test_front.insert(front_point(test.confusion));
  }
  result.test_hyperarea = hyperarea(result.test_front);
  result.mean_tree_size = result.per_generation_sizes.back();
  result.final_population = std::move(pop);
  return result;
}

}  // namespace mogp
