#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "utvpi/bound.hpp"

namespace utvpi {

/// Node index in [0, 2n). Node 2k is the positive form of variable k,
/// node 2k+1 its negated form.
using NodeId = int;

/// Involution swapping the positive and negative form of a variable:
/// bar(2k) = 2k+1, bar(2k+1) = 2k.
constexpr NodeId bar(NodeId i) noexcept { return i ^ 1; }

/// Weighted graph on the 2n split nodes whose arcs (i,j) and (bar(j),bar(i))
/// always carry the same weight. Both members of such a pair resolve to one
/// canonical storage cell, so coherence cannot be violated by any write.
///
/// A fresh graph has a zero diagonal and every other weight at +infinity
/// (the empty constraint system).
template <class Num>
class OctGraph {
public:
  using bound_type = Bound<Num>;

  explicit OctGraph(int var_count) : n_(var_count) {
    if (var_count < 0) throw std::invalid_argument("OctGraph: negative variable count");
    const std::size_t nodes = static_cast<std::size_t>(2 * n_);
    w_.assign(nodes * nodes, bound_type::infinity());
    for (NodeId i = 0; i < 2 * n_; ++i) {
      w_[cell(i, i)] = bound_type(Num(0));
    }
  }

  int var_count() const { return n_; }
  int node_count() const { return 2 * n_; }

  bound_type weight(NodeId i, NodeId j) const { return w_[cell(i, j)]; }

  void set_weight(NodeId i, NodeId j, bound_type d) { w_[cell(i, j)] = std::move(d); }

  /// Lowers the arc to min(current, d); conjunction semantics for
  /// repeated constraints on the same arc.
  void min_weight(NodeId i, NodeId j, const bound_type& d) {
    bound_type& cur = w_[cell(i, j)];
    if (d < cur) cur = d;
  }

  /// Equality of the stored canonical cells (and therefore of every weight).
  friend bool operator==(const OctGraph& a, const OctGraph& b) {
    return a.n_ == b.n_ && a.w_ == b.w_;
  }
  friend bool operator!=(const OctGraph& a, const OctGraph& b) { return !(a == b); }

private:
  std::size_t cell(NodeId i, NodeId j) const {
    check_node(i);
    check_node(j);
    // The coherent mirror of (i,j) is (bar(j), bar(i)); the lexicographically
    // smaller pair owns the storage.
    const NodeId mi = bar(j);
    const NodeId mj = bar(i);
    const std::size_t nodes = static_cast<std::size_t>(2 * n_);
    if (i < mi || (i == mi && j <= mj)) {
      return static_cast<std::size_t>(i) * nodes + static_cast<std::size_t>(j);
    }
    return static_cast<std::size_t>(mi) * nodes + static_cast<std::size_t>(mj);
  }

  void check_node(NodeId i) const {
    if (i < 0 || i >= 2 * n_) throw std::out_of_range("OctGraph: node index out of range");
  }

  int n_;
  std::vector<bound_type> w_;
};

using IntOctGraph = OctGraph<std::int64_t>;

/// Zero diagonal plus the triangle inequality on every node triple.
template <class Num>
bool is_closed(const OctGraph<Num>& g) {
  const int nodes = g.node_count();
  const Bound<Num> zero{Num(0)};
  for (NodeId i = 0; i < nodes; ++i) {
    if (g.weight(i, i) != zero) return false;
  }
  for (NodeId i = 0; i < nodes; ++i) {
    for (NodeId k = 0; k < nodes; ++k) {
      const Bound<Num> ik = g.weight(i, k);
      if (!ik.is_finite()) continue;
      for (NodeId j = 0; j < nodes; ++j) {
        if (g.weight(i, j) > ik + g.weight(k, j)) return false;
      }
    }
  }
  return true;
}

/// Closed, and 2*w(i,j) <= w(i,bar(i)) + w(bar(j),j) for all i,j.
template <class Num>
bool is_strongly_closed(const OctGraph<Num>& g) {
  if (!is_closed(g)) return false;
  const int nodes = g.node_count();
  for (NodeId i = 0; i < nodes; ++i) {
    const Bound<Num> ui = g.weight(i, bar(i));
    for (NodeId j = 0; j < nodes; ++j) {
      if (twice(g.weight(i, j)) > ui + g.weight(bar(j), j)) return false;
    }
  }
  return true;
}

/// Strongly closed with every finite unary arc weight w(i,bar(i)) even.
/// Only meaningful for integer-weighted graphs; rational graphs are
/// rejected at compile time.
inline bool is_tightly_closed(const IntOctGraph& g) {
  if (!is_strongly_closed(g)) return false;
  for (NodeId i = 0; i < g.node_count(); ++i) {
    const Bound<std::int64_t> u = g.weight(i, bar(i));
    if (u.is_finite() && !is_even_integer(u.value())) return false;
  }
  return true;
}

/// Pointwise order on weights: G1 <= G2 iff w1(i,j) <= w2(i,j) everywhere.
template <class Num>
bool graph_leq(const OctGraph<Num>& g1, const OctGraph<Num>& g2) {
  if (g1.var_count() != g2.var_count()) {
    throw std::invalid_argument("graph_leq: variable counts differ");
  }
  const int nodes = g1.node_count();
  for (NodeId i = 0; i < nodes; ++i) {
    for (NodeId j = 0; j < nodes; ++j) {
      if (!(g1.weight(i, j) <= g2.weight(i, j))) return false;
    }
  }
  return true;
}

/// Why a closure computation hit bottom.
enum class Inconsistency {
  q_inconsistent,  // no rational solution (negative cycle)
  z_inconsistent,  // rational solutions exist but no integer one
};

/// Result of a closure: either the closed graph or bottom with the
/// inconsistency kind.
template <class Num>
class ClosureOutcome {
public:
  static ClosureOutcome closed(OctGraph<Num> g) { return ClosureOutcome(std::move(g)); }
  static ClosureOutcome bottom(Inconsistency why) { return ClosureOutcome(why); }

  bool is_bottom() const { return std::holds_alternative<Inconsistency>(state_); }
  bool is_closed() const { return !is_bottom(); }

  const OctGraph<Num>& graph() const {
    if (is_bottom()) throw std::logic_error("ClosureOutcome: graph() on bottom");
    return std::get<OctGraph<Num>>(state_);
  }

  Inconsistency inconsistency() const {
    if (!is_bottom()) throw std::logic_error("ClosureOutcome: inconsistency() on closed outcome");
    return std::get<Inconsistency>(state_);
  }

private:
  explicit ClosureOutcome(OctGraph<Num> g) : state_(std::move(g)) {}
  explicit ClosureOutcome(Inconsistency why) : state_(why) {}

  std::variant<OctGraph<Num>, Inconsistency> state_;
};

}  // namespace utvpi
