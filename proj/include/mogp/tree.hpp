#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mogp/errors.hpp"
#include "mogp/features.hpp"

namespace mogp {

// Function set plus the terminal kind.  Terminals are dataset features only;
// there are no constants.
enum class Op : std::uint8_t { Add, Sub, Mul, Div, Var };

constexpr bool is_function(Op op) { return op != Op::Var; }

struct Node {
  Op op = Op::Var;
  std::int32_t var = -1;  // feature index; meaningful only when op == Var

  bool operator==(const Node&) const = default;
};

// Expression tree stored as a flat preorder node array.  Every function node
// has exactly two children, so a subtree is a contiguous node range, which
// makes crossover and mutation cheap splices.
class ProgramTree {
 public:
  ProgramTree() = default;

  static ProgramTree variable(std::int32_t feature) {
    ProgramTree t;
    t.nodes_.push_back(Node{Op::Var, feature});
    return t;
  }

  static ProgramTree function(Op op, const ProgramTree& left, const ProgramTree& right) {
    if (!is_function(op)) throw ContractError("ProgramTree::function: op must be a function");
    ProgramTree t;
    t.nodes_.reserve(1 + left.size() + right.size());
    t.nodes_.push_back(Node{op, -1});
    t.nodes_.insert(t.nodes_.end(), left.nodes_.begin(), left.nodes_.end());
    t.nodes_.insert(t.nodes_.end(), right.nodes_.begin(), right.nodes_.end());
    return t;
  }

  // Adopts a preorder node list; rejects arity-inconsistent input.
  static ProgramTree from_nodes(std::vector<Node> nodes) {
    std::size_t need = 1;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (need == 0) throw ContractError("ProgramTree::from_nodes: trailing nodes");
      need += is_function(nodes[i].op) ? 1 : std::size_t(-1);
      if (!is_function(nodes[i].op) && nodes[i].var < 0)
        throw ContractError("ProgramTree::from_nodes: negative feature index");
    }
    if (need != 0) throw ContractError("ProgramTree::from_nodes: truncated tree");
    ProgramTree t;
    t.nodes_ = std::move(nodes);
    return t;
  }

  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  const Node& node(std::size_t i) const { return nodes_[i]; }
  std::span<const Node> nodes() const { return nodes_; }

  // One past the last node of the subtree rooted at pos.
  std::size_t subtree_end(std::size_t pos) const {
    std::size_t end = pos;
    std::size_t need = 1;
    while (need > 0) {
      need += is_function(nodes_[end].op) ? 1 : std::size_t(-1);
      ++end;
    }
    return end;
  }

  // Depth of every node; the root has depth 0.
  std::vector<int> node_depths() const {
    std::vector<int> depths(nodes_.size(), 0);
    std::vector<int> remaining;  // open function nodes awaiting children
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      depths[i] = static_cast<int>(remaining.size());
      if (is_function(nodes_[i].op)) {
        remaining.push_back(2);
      } else {
        while (!remaining.empty()) {
          if (--remaining.back() == 0)
            remaining.pop_back();
          else
            break;
        }
      }
    }
    return depths;
  }

  int node_depth(std::size_t pos) const { return node_depths()[pos]; }

  int depth() const {
    int max_d = 0;
    std::vector<int> remaining;
    for (const Node& n : nodes_) {
      max_d = std::max<int>(max_d, static_cast<int>(remaining.size()));
      if (is_function(n.op)) {
        remaining.push_back(2);
      } else {
        while (!remaining.empty()) {
          if (--remaining.back() == 0)
            remaining.pop_back();
          else
            break;
        }
      }
    }
    return max_d;
  }

  ProgramTree subtree(std::size_t pos) const {
    const std::size_t end = subtree_end(pos);
    ProgramTree t;
    t.nodes_.assign(nodes_.begin() + pos, nodes_.begin() + end);
    return t;
  }

  // Copy of this tree with the subtree at pos replaced by `replacement`.
  ProgramTree replaced(std::size_t pos, const ProgramTree& replacement) const {
    const std::size_t end = subtree_end(pos);
    ProgramTree t;
    t.nodes_.reserve(nodes_.size() - (end - pos) + replacement.size());
    t.nodes_.insert(t.nodes_.end(), nodes_.begin(), nodes_.begin() + pos);
    t.nodes_.insert(t.nodes_.end(), replacement.nodes_.begin(), replacement.nodes_.end());
    t.nodes_.insert(t.nodes_.end(), nodes_.begin() + end, nodes_.end());
    return t;
  }

  // Prefix (Polish) text form, e.g. "(div (add x0 x1) x3)".
  std::string to_prefix() const {
    std::string out;
    std::size_t pos = 0;
    append_prefix(out, pos);
    return out;
  }

  static ProgramTree from_prefix(std::string_view text);

  bool operator==(const ProgramTree&) const = default;

 private:
  void append_prefix(std::string& out, std::size_t& pos) const {
    const Node& n = nodes_[pos++];
    switch (n.op) {
      case Op::Var:
        out += 'x';
        out += std::to_string(n.var);
        return;
      case Op::Add:
        out += "(add ";
        break;
      case Op::Sub:
        out += "(sub ";
        break;
      case Op::Mul:
        out += "(mul ";
        break;
      case Op::Div:
        out += "(div ";
        break;
    }
    append_prefix(out, pos);
    out += ' ';
    append_prefix(out, pos);
    out += ')';
  }

  std::vector<Node> nodes_;
};

namespace detail {

inline void skip_spaces(std::string_view text, std::size_t& pos) {
  while (pos < text.size() && text[pos] == ' ') ++pos;
}

inline void parse_prefix_node(std::string_view text, std::size_t& pos, std::vector<Node>& out) {
  skip_spaces(text, pos);
  if (pos >= text.size()) throw DataError("tree parse: unexpected end of input");
  if (text[pos] == '(') {
    ++pos;
    skip_spaces(text, pos);
    std::size_t start = pos;
    while (pos < text.size() && text[pos] != ' ') ++pos;
    const std::string_view name = text.substr(start, pos - start);
    Op op;
    if (name == "add")
      op = Op::Add;
    else if (name == "sub")
      op = Op::Sub;
    else if (name == "mul")
      op = Op::Mul;
    else if (name == "div")
      op = Op::Div;
    else
      throw DataError("tree parse: unknown function '" + std::string(name) + "'");
    out.push_back(Node{op, -1});
    parse_prefix_node(text, pos, out);
    parse_prefix_node(text, pos, out);
    skip_spaces(text, pos);
    if (pos >= text.size() || text[pos] != ')') throw DataError("tree parse: missing ')'");
    ++pos;
  } else if (text[pos] == 'x') {
    ++pos;
    std::size_t start = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    if (pos == start) throw DataError("tree parse: bad terminal");
    out.push_back(Node{Op::Var, std::stoi(std::string(text.substr(start, pos - start)))});
  } else {
    throw DataError("tree parse: unexpected character '" + std::string(1, text[pos]) + "'");
  }
}

}  // namespace detail

inline ProgramTree ProgramTree::from_prefix(std::string_view text) {
  std::vector<Node> nodes;
  std::size_t pos = 0;
  detail::parse_prefix_node(text, pos, nodes);
  detail::skip_spaces(text, pos);
  if (pos != text.size()) throw DataError("tree parse: trailing characters");
  return from_nodes(std::move(nodes));
}

// Checks feature indices against the dataset width.
inline void check_tree(const ProgramTree& tree, std::size_t n_features) {
  for (const Node& n : tree.nodes())
    if (n.op == Op::Var && (n.var < 0 || static_cast<std::size_t>(n.var) >= n_features))
      throw ContractError("tree references feature " + std::to_string(n.var) +
                          " outside table of width " + std::to_string(n_features));
}

// Reusable per-level evaluation buffers; one per recursion depth, so a
// single scratch serves any number of sequential evaluations.  prepare()
// must size the level list before buffer() references are taken: growing
// it mid-recursion would invalidate buffers held by outer levels.
class EvalScratch {
 public:
  void prepare(std::size_t levels) {
    if (levels > buffers_.size()) buffers_.resize(levels);
  }

  std::vector<double>& buffer(std::size_t level, std::size_t rows) {
    buffers_[level].resize(rows);
    return buffers_[level];
  }

 private:
  std::vector<std::vector<double>> buffers_;
};

namespace detail {

inline std::size_t eval_node(std::span<const Node> nodes, std::size_t pos,
                             const FeatureTable& features, std::vector<double>& out,
                             EvalScratch& scratch, std::size_t level) {
  const Node& n = nodes[pos];
  if (n.op == Op::Var) {
    const std::vector<double>& col = features.column(static_cast<std::size_t>(n.var));
    std::copy(col.begin(), col.end(), out.begin());
    return pos + 1;
  }
  std::size_t mid = eval_node(nodes, pos + 1, features, out, scratch, level + 1);
  std::vector<double>& rhs = scratch.buffer(level, features.rows());
  std::size_t end = eval_node(nodes, mid, features, rhs, scratch, level + 1);
  const std::size_t rows = features.rows();
  switch (n.op) {
    case Op::Add:
      for (std::size_t i = 0; i < rows; ++i) out[i] += rhs[i];
      break;
    case Op::Sub:
      for (std::size_t i = 0; i < rows; ++i) out[i] -= rhs[i];
      break;
    case Op::Mul:
      for (std::size_t i = 0; i < rows; ++i) out[i] *= rhs[i];
      break;
    case Op::Div:
      // Protected division: the numerator survives a zero denominator.
      for (std::size_t i = 0; i < rows; ++i)
        if (rhs[i] != 0.0) out[i] /= rhs[i];
      break;
    case Op::Var:
      break;  // unreachable
  }
  return end;
}

}  // namespace detail

// Evaluates the tree on every row of the table: one output per row.
inline std::vector<double> evaluate(const ProgramTree& tree, const FeatureTable& features,
                                    EvalScratch& scratch) {
  if (tree.empty()) throw ContractError("evaluate: empty tree");
  check_tree(tree, features.cols());
  scratch.prepare(static_cast<std::size_t>(tree.depth()) + 1);
  std::vector<double> out(features.rows());
  detail::eval_node(tree.nodes(), 0, features, out, scratch, 0);
  return out;
}

inline std::vector<double> evaluate(const ProgramTree& tree, const FeatureTable& features) {
  EvalScratch scratch;
  return evaluate(tree, features, scratch);
}

}  // namespace mogp
