#pragma once

#include <cstdint>
#include <limits>
#include <type_traits>
#include <vector>

#include "utvpi/graph.hpp"
#include "utvpi/rational.hpp"

namespace utvpi {

namespace detail {

/// Diagonal := min(diagonal, 0). A finite negative input diagonal encodes an
/// inconsistent system and must survive to the consistency check.
template <class Num>
void clamp_diagonal(OctGraph<Num>& g) {
  const Bound<Num> zero{Num(0)};
  for (NodeId i = 0; i < g.node_count(); i += 2) {
    if (zero < g.weight(i, i)) g.set_weight(i, i, zero);
  }
}

/// Integer fast path: run the passes over a contiguous scratch matrix with a
/// +infinity sentinel, then fold each mirror pair back into its canonical
/// cell. Both mirror estimates are walk weights of the coherent input, so
/// their min is sound, and on consistent graphs they agree exactly.
inline void floyd_warshall_int(IntOctGraph& g) {
  const int nodes = g.node_count();
  constexpr std::int64_t kInf = INT64_MAX;
  const std::size_t stride = static_cast<std::size_t>(nodes);
  std::vector<std::int64_t> m(stride * stride, kInf);
  for (NodeId i = 0; i < nodes; ++i) {
    for (NodeId j = 0; j < nodes; ++j) {
      const Bound<std::int64_t> w = g.weight(i, j);
      if (w.is_finite()) m[static_cast<std::size_t>(i) * stride + j] = w.value();
    }
  }
  for (NodeId k = 0; k < nodes; ++k) {
    const std::int64_t* row_k = &m[static_cast<std::size_t>(k) * stride];
    for (NodeId i = 0; i < nodes; ++i) {
      const std::int64_t ik = m[static_cast<std::size_t>(i) * stride + k];
      if (ik == kInf) continue;
      std::int64_t* row_i = &m[static_cast<std::size_t>(i) * stride];
      for (NodeId j = 0; j < nodes; ++j) {
        const std::int64_t kj = row_k[j];
        if (kj == kInf) continue;
        std::int64_t cand;
        if (__builtin_add_overflow(ik, kj, &cand) || cand == kInf) {
          throw OverflowError("integer addition overflow");
        }
        if (cand < row_i[j]) row_i[j] = cand;
      }
    }
    bool negative = false;
    for (NodeId i = 0; i < nodes && !negative; ++i) {
      negative = m[static_cast<std::size_t>(i) * stride + i] < 0;
    }
    if (negative) break;
  }
  for (NodeId i = 0; i < nodes; ++i) {
    for (NodeId j = 0; j < nodes; ++j) {
      const std::int64_t a = m[static_cast<std::size_t>(i) * stride + j];
      const std::int64_t b = m[static_cast<std::size_t>(bar(j)) * stride + bar(i)];
      const std::int64_t v = a < b ? a : b;
      g.set_weight(i, j, v == kInf ? Bound<std::int64_t>::infinity() : Bound<std::int64_t>(v));
    }
  }
}

}  // namespace detail

/// Classical k-outer Floyd-Warshall over all 2n nodes, in place. Ties keep
/// the existing value. Mirror cells track every update through the shared
/// canonical storage, so coherence is preserved unconditionally.
///
/// Once a diagonal cell turns negative the graph is proved inconsistent and
/// the remaining passes are skipped: they could only relax weights around
/// the negative cycle without bound. Until that point every weight is a
/// simple-path sum, so finite inputs cannot overflow here.
template <class Num>
void floyd_warshall(OctGraph<Num>& g) {
  if constexpr (std::is_same_v<Num, std::int64_t>) {
    detail::floyd_warshall_int(g);
    return;
  } else {
    const int nodes = g.node_count();
    const Bound<Num> zero{Num(0)};
    for (NodeId k = 0; k < nodes; ++k) {
      for (NodeId i = 0; i < nodes; ++i) {
        const Bound<Num> ik = g.weight(i, k);
        if (!ik.is_finite()) continue;
        for (NodeId j = 0; j < nodes; ++j) {
          const Bound<Num> kj = g.weight(k, j);
          if (!kj.is_finite()) continue;
          g.min_weight(i, j, ik + kj);
        }
      }
      for (NodeId i = 0; i < nodes; i += 2) {
        if (g.weight(i, i) < zero) return;
      }
    }
  }
}

/// After shortest paths: consistent iff no diagonal went negative. The odd
/// diagonal cells mirror the even ones, so scanning even nodes suffices.
template <class Num>
bool q_consistent(const OctGraph<Num>& g) {
  const Bound<Num> zero{Num(0)};
  for (NodeId i = 0; i < g.node_count(); i += 2) {
    if (g.weight(i, i) < zero) return false;
  }
  return true;
}

/// Rounds every finite unary arc w(i,bar(i)) down to the nearest even value,
/// i.e. w := 2*floor(w/2). Sound only when the variables are integral.
template <class Num>
void tighten(OctGraph<Num>& g) {
  for (NodeId i = 0; i < g.node_count(); ++i) {
    const Bound<Num> u = g.weight(i, bar(i));
    if (u.is_finite()) g.set_weight(i, bar(i), round_down_even(u));
  }
}

/// After tightening: integer-consistent iff w(i,bar(i)) + w(bar(i),i) >= 0
/// for every i (even nodes suffice by coherence).
template <class Num>
bool z_consistent(const OctGraph<Num>& g) {
  const Bound<Num> zero{Num(0)};
  for (NodeId i = 0; i < g.node_count(); i += 2) {
    if (g.weight(i, bar(i)) + g.weight(bar(i), i) < zero) return false;
  }
  return true;
}

/// Single strengthening pass w(i,j) := min(w(i,j), w(i,bar(i))/2 + w(bar(j),j)/2).
/// The halves must be exact: integer graphs need even unary arcs (run tighten
/// first), rational graphs divide exactly. Cells with j = bar(i) are fixed
/// points of the rule, so the unary arcs read during the pass never move.
template <class Num>
void strong_coherence_pass(OctGraph<Num>& g) {
  const int nodes = g.node_count();
  std::vector<Bound<Num>> half_unary(static_cast<std::size_t>(nodes));
  for (NodeId i = 0; i < nodes; ++i) {
    half_unary[static_cast<std::size_t>(i)] = exact_half(g.weight(i, bar(i)));
  }
  for (NodeId i = 0; i < nodes; ++i) {
    const Bound<Num>& hi = half_unary[static_cast<std::size_t>(i)];
    if (!hi.is_finite()) continue;
    for (NodeId j = 0; j < nodes; ++j) {
      g.min_weight(i, j, hi + half_unary[static_cast<std::size_t>(bar(j))]);
    }
  }
}

/// Tight closure of an integer coherent graph: shortest paths, rational
/// consistency check, tightening, integer consistency check, then one
/// strengthening pass. Returns the tightly closed graph or bottom. The input
/// is left untouched; arithmetic overflow aborts with OverflowError before
/// any outcome is produced.
inline ClosureOutcome<std::int64_t> tight_closure(const IntOctGraph& input) {
  IntOctGraph g = input;
  detail::clamp_diagonal(g);
  floyd_warshall(g);
  if (!q_consistent(g)) return ClosureOutcome<std::int64_t>::bottom(Inconsistency::q_inconsistent);
  tighten(g);
  if (!z_consistent(g)) return ClosureOutcome<std::int64_t>::bottom(Inconsistency::z_inconsistent);
  strong_coherence_pass(g);
  return ClosureOutcome<std::int64_t>::closed(std::move(g));
}

/// Strong closure of a rational coherent graph: shortest paths, consistency
/// check, then one exact-arithmetic strengthening pass.
inline ClosureOutcome<Rational> strong_closure(const OctGraph<Rational>& input) {
  OctGraph<Rational> g = input;
  detail::clamp_diagonal(g);
  floyd_warshall(g);
  if (!q_consistent(g)) return ClosureOutcome<Rational>::bottom(Inconsistency::q_inconsistent);
  strong_coherence_pass(g);
  return ClosureOutcome<Rational>::closed(std::move(g));
}

namespace detail {

/// O(n^2) relaxation of every pair through one new arc (from,to) of weight d:
/// w(i,j) := min(w(i,j), w(i,from) + d + w(to,j)).
template <class Num>
void relax_through_arc(OctGraph<Num>& g, NodeId from, NodeId to, const Bound<Num>& d) {
  const int nodes = g.node_count();
  for (NodeId i = 0; i < nodes; ++i) {
    const Bound<Num> head = g.weight(i, from) + d;
    if (!head.is_finite()) continue;
    for (NodeId j = 0; j < nodes; ++j) {
      g.min_weight(i, j, head + g.weight(to, j));
    }
  }
}

}  // namespace detail

/// Adds one encoded arc to a tightly closed graph and restores tight closure
/// in O(n^2): if the arc is already entailed the graph is returned as is;
/// otherwise all pairs are relaxed through the arc and its coherent mirror,
/// followed by the consistency checks, tightening and strengthening pass.
inline ClosureOutcome<std::int64_t> incremental_add_arc(const IntOctGraph& tightly_closed,
                                                        NodeId from, NodeId to,
                                                        std::int64_t weight) {
  const Bound<std::int64_t> d{weight};
  if (tightly_closed.weight(from, to) <= d) {
    return ClosureOutcome<std::int64_t>::closed(tightly_closed);
  }
  IntOctGraph g = tightly_closed;
  g.set_weight(from, to, d);
  detail::relax_through_arc(g, from, to, d);
  detail::relax_through_arc(g, bar(to), bar(from), d);
  if (!q_consistent(g)) return ClosureOutcome<std::int64_t>::bottom(Inconsistency::q_inconsistent);
  tighten(g);
  if (!z_consistent(g)) return ClosureOutcome<std::int64_t>::bottom(Inconsistency::z_inconsistent);
  strong_coherence_pass(g);
  return ClosureOutcome<std::int64_t>::closed(std::move(g));
}

}  // namespace utvpi
