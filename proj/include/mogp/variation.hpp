#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "mogp/errors.hpp"
#include "mogp/rng.hpp"
#include "mogp/tree.hpp"

namespace mogp {

struct VariationParams {
  double crossover_rate = 0.60;
  double mutation_rate = 0.40;
  double internal_node_bias = 0.90;  // crossover-point probability of picking a function node
  std::size_t tournament_size = 7;
  std::size_t max_length = 800;  // node-count cap for offspring
  int max_depth = 8;             // depth cap for offspring

  bool operator==(const VariationParams&) const = default;
};

namespace detail {

constexpr Op kFunctions[] = {Op::Add, Op::Sub, Op::Mul, Op::Div};

inline Op random_function(Rng& rng) { return kFunctions[rng.index(4)]; }

inline Node random_terminal(std::size_t n_features, Rng& rng) {
  return Node{Op::Var, static_cast<std::int32_t>(rng.index(n_features))};
}

inline void full_nodes(std::vector<Node>& out, int depth, std::size_t n_features, Rng& rng) {
  if (depth == 0) {
    out.push_back(random_terminal(n_features, rng));
    return;
  }
  out.push_back(Node{random_function(rng), -1});
  full_nodes(out, depth - 1, n_features, rng);
  full_nodes(out, depth - 1, n_features, rng);
}

inline void grow_nodes(std::vector<Node>& out, int depth, std::size_t n_features, Rng& rng) {
  if (depth == 0 || !rng.bernoulli(0.5)) {
    out.push_back(random_terminal(n_features, rng));
    return;
  }
  out.push_back(Node{random_function(rng), -1});
  grow_nodes(out, depth - 1, n_features, rng);
  grow_nodes(out, depth - 1, n_features, rng);
}

}  // namespace detail

// Full method: every branch reaches exactly `depth`.
inline ProgramTree full_tree(int depth, std::size_t n_features, Rng& rng) {
  if (depth < 0) throw ContractError("full_tree: negative depth");
  std::vector<Node> nodes;
  detail::full_nodes(nodes, depth, n_features, rng);
  return ProgramTree::from_nodes(std::move(nodes));
}

// Grow method: each position is a function with probability one half until
// the depth budget runs out.
inline ProgramTree grow_tree(int max_depth, std::size_t n_features, Rng& rng) {
  if (max_depth < 0) throw ContractError("grow_tree: negative depth");
  std::vector<Node> nodes;
  detail::grow_nodes(nodes, max_depth, n_features, rng);
  return ProgramTree::from_nodes(std::move(nodes));
}

// Grow resampled until the result's depth equals `depth` exactly, so the
// initial population's depth histogram is exact.  Falls back to the full
// method if sampling keeps missing (only plausible for depth 0/1 corner
// cases with tiny feature counts).
inline ProgramTree grow_tree_exact(int depth, std::size_t n_features, Rng& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    ProgramTree t = grow_tree(depth, n_features, rng);
    if (t.depth() == depth) return t;
  }
  return full_tree(depth, n_features, rng);
}

// Ramped half-and-half initialisation: depths cycle over
// [init_min_depth, init_max_depth], alternating full and grow per cycle.
inline std::vector<ProgramTree> ramped_half_and_half(std::size_t pop_size, int init_min_depth,
                                                     int init_max_depth, std::size_t n_features,
                                                     Rng& rng) {
  if (init_min_depth < 0 || init_max_depth < init_min_depth)
    throw ContractError("ramped_half_and_half: bad depth range");
  const std::size_t levels = static_cast<std::size_t>(init_max_depth - init_min_depth) + 1;
  std::vector<ProgramTree> pop;
  pop.reserve(pop_size);
  for (std::size_t i = 0; i < pop_size; ++i) {
    const int depth = init_min_depth + static_cast<int>(i % levels);
    const bool use_full = (i / levels) % 2 == 0;
    pop.push_back(use_full ? full_tree(depth, n_features, rng)
                           : grow_tree_exact(depth, n_features, rng));
  }
  return pop;
}

// Crossover point choice: with probability `internal_node_bias` a function
// node, otherwise a leaf.  A tree with no function nodes always yields a
// leaf, but the coin is still drawn so streams stay aligned.
inline std::size_t pick_variation_point(const ProgramTree& tree, double internal_node_bias,
                                        Rng& rng) {
  const bool want_internal = rng.bernoulli(internal_node_bias);
  std::vector<std::size_t> pool;
  pool.reserve(tree.size());
  for (std::size_t i = 0; i < tree.size(); ++i)
    if (is_function(tree.node(i).op) == want_internal) pool.push_back(i);
  if (pool.empty())
    for (std::size_t i = 0; i < tree.size(); ++i)
      if (!is_function(tree.node(i).op)) pool.push_back(i);
  return pool[rng.index(pool.size())];
}

struct CrossoverResult {
  ProgramTree first;
  ProgramTree second;
};

// Subtree crossover with function-node bias.  An offspring that violates the
// length or depth cap is replaced by its corresponding parent (first
// offspring by the first parent).
inline CrossoverResult crossover_90_10(const ProgramTree& parent_a, const ProgramTree& parent_b,
                                       const VariationParams& params, Rng& rng) {
  const std::size_t pa = pick_variation_point(parent_a, params.internal_node_bias, rng);
  const std::size_t pb = pick_variation_point(parent_b, params.internal_node_bias, rng);
  ProgramTree c1 = parent_a.replaced(pa, parent_b.subtree(pb));
  ProgramTree c2 = parent_b.replaced(pb, parent_a.subtree(pa));
  if (c1.size() > params.max_length || c1.depth() > params.max_depth) c1 = parent_a;
  if (c2.size() > params.max_length || c2.depth() > params.max_depth) c2 = parent_b;
  return CrossoverResult{std::move(c1), std::move(c2)};
}

// Subtree mutation: a uniformly chosen node's subtree is replaced by a tree
// grown within the remaining depth budget.  A length violation hands back
// the parent.
inline ProgramTree subtree_mutation(const ProgramTree& parent, const VariationParams& params,
                                    std::size_t n_features, Rng& rng) {
  const std::size_t pos = rng.index(parent.size());
  const int room = params.max_depth - parent.node_depth(pos);
  const int target = static_cast<int>(rng.index(static_cast<std::size_t>(room) + 1));
  ProgramTree replacement = grow_tree(target, n_features, rng);
  ProgramTree child = parent.replaced(pos, replacement);
  if (child.size() > params.max_length) return parent;
  return child;
}

}  // namespace mogp
