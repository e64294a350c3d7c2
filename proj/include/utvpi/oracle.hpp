#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "utvpi/constraints.hpp"
#include "utvpi/graph.hpp"
#include "utvpi/rational.hpp"

// Reference implementations for differential testing. Everything here is
// deliberately naive: rule saturation to a fixpoint, exhaustive model
// search, and a reproducible instance generator. None of it shares code
// with the closure algorithms it is used to check.

namespace utvpi::oracle {

/// Inference rules the saturation oracle may apply.
struct SaturationRules {
  bool transitivity = false;
  bool strong_coherence = false;
  bool tightening = false;

  static SaturationRules all() { return {true, true, true}; }
  static SaturationRules rational_rules() { return {true, true, false}; }
  static SaturationRules transitivity_only() { return {true, false, false}; }
};

namespace detail {

using utvpi::detail::int128;

inline bool negative_diagonal(const OctGraph<Rational>& g) {
  const Bound<Rational> zero{Rational(0)};
  for (NodeId i = 0; i < g.node_count(); i += 2) {
    if (g.weight(i, i) < zero) return true;
  }
  return false;
}

/// Round-robin sweeps of the selected rules until nothing changes. Returns
/// false when a diagonal cell went negative. Sweeps are capped to flag a
/// divergent (buggy) rule set.
inline bool saturate_sweeps(OctGraph<Rational>& g, const SaturationRules& rules) {
  const int nodes = g.node_count();
  const long long cap = 10LL * nodes * nodes * nodes + 16;
  long long sweep = 0;
  bool changed = true;
  while (changed) {
    if (++sweep > cap) throw std::runtime_error("saturate: iteration cap exceeded");
    changed = false;
    if (rules.transitivity) {
      for (NodeId i = 0; i < nodes; ++i) {
        for (NodeId k = 0; k < nodes; ++k) {
          const Bound<Rational> ik = g.weight(i, k);
          if (!ik.is_finite()) continue;
          for (NodeId j = 0; j < nodes; ++j) {
            const Bound<Rational> via = ik + g.weight(k, j);
            if (via < g.weight(i, j)) {
              g.set_weight(i, j, via);
              changed = true;
            }
          }
        }
      }
      if (negative_diagonal(g)) return false;
    }
    if (rules.strong_coherence) {
      for (NodeId i = 0; i < nodes; ++i) {
        for (NodeId j = 0; j < nodes; ++j) {
          const Bound<Rational> half =
              exact_half(g.weight(i, bar(i))) + exact_half(g.weight(bar(j), j));
          if (half < g.weight(i, j)) {
            g.set_weight(i, j, half);
            changed = true;
          }
        }
      }
      if (negative_diagonal(g)) return false;
    }
    if (rules.tightening) {
      for (NodeId i = 0; i < nodes; ++i) {
        const Bound<Rational> u = g.weight(i, bar(i));
        const Bound<Rational> even = round_down_even(u);
        if (even < u) {
          g.set_weight(i, bar(i), even);
          changed = true;
        }
      }
      if (negative_diagonal(g)) return false;
    }
  }
  return true;
}

}  // namespace detail

/// Applies the selected rules (plus a zero diagonal) to a fixpoint by naive
/// iteration. Bottom when a diagonal goes negative or, with tightening
/// selected, when some w(i,bar(i)) + w(bar(i),i) ends up negative. The kind
/// of inconsistency is attributed by first saturating without tightening.
inline ClosureOutcome<Rational> saturate(const OctGraph<Rational>& input,
                                         const SaturationRules& rules) {
  OctGraph<Rational> g = input;
  const Bound<Rational> zero{Rational(0)};
  for (NodeId i = 0; i < g.node_count(); i += 2) {
    if (zero < g.weight(i, i)) g.set_weight(i, i, zero);
  }
  if (rules.tightening) {
    SaturationRules without = rules;
    without.tightening = false;
    if (!detail::saturate_sweeps(g, without)) {
      return ClosureOutcome<Rational>::bottom(Inconsistency::q_inconsistent);
    }
    if (!detail::saturate_sweeps(g, rules)) {
      return ClosureOutcome<Rational>::bottom(Inconsistency::z_inconsistent);
    }
    for (NodeId i = 0; i < g.node_count(); i += 2) {
      if (g.weight(i, bar(i)) + g.weight(bar(i), i) < zero) {
        return ClosureOutcome<Rational>::bottom(Inconsistency::z_inconsistent);
      }
    }
  } else {
    if (!detail::saturate_sweeps(g, rules)) {
      return ClosureOutcome<Rational>::bottom(Inconsistency::q_inconsistent);
    }
  }
  return ClosureOutcome<Rational>::closed(std::move(g));
}

/// Widens an integer graph into the rational weight domain, e.g. to compare
/// an integer closure against the rational saturation fixpoint.
inline OctGraph<Rational> to_rational(const IntOctGraph& g) {
  OctGraph<Rational> out(g.var_count());
  for (NodeId i = 0; i < g.node_count(); ++i) {
    for (NodeId j = 0; j < g.node_count(); ++j) {
      const Bound<std::int64_t> w = g.weight(i, j);
      out.set_weight(i, j, w.is_finite() ? Bound<Rational>(Rational(w.value()))
                                         : Bound<Rational>::infinity());
    }
  }
  return out;
}

inline constexpr int kBruteForceMaxVars = 4;

/// Exhaustive integer satisfiability: enumerates valuations inside the box
/// |v_i| <= (2n+1)*D, D = max(1, max |d|), in lexicographic order starting
/// from the most negative corner, and returns the first model found.
/// Branches are pruned as soon as a constraint over already-assigned
/// variables fails, which never skips the lexicographically first model.
/// The box derivation lives in the README.
inline std::optional<Valuation> brute_force_z_sat(const std::vector<OctConstraint>& cs,
                                                  int var_count) {
  if (var_count < 0 || var_count > kBruteForceMaxVars) {
    throw std::invalid_argument("brute_force_z_sat: instance exceeds size limits");
  }
  std::int64_t max_abs = 1;
  for (const OctConstraint& c : cs) {
    const std::int64_t mag = c.d < 0 ? checked_mul(c.d, -1) : c.d;
    if (mag > max_abs) max_abs = mag;
  }
  const std::int64_t box = checked_mul(2 * var_count + 1, max_abs);

  // Constraints indexed by the deepest variable they mention.
  std::vector<std::vector<OctConstraint>> by_depth(static_cast<std::size_t>(var_count));
  for (const OctConstraint& c : cs) {
    const int top = c.is_unary() ? c.i : c.j;
    if (top >= var_count) {
      throw std::invalid_argument("brute_force_z_sat: constraint variable out of range");
    }
    by_depth[static_cast<std::size_t>(top)].push_back(c);
  }

  Valuation rho(static_cast<std::size_t>(var_count), 0);
  const auto search = [&](const auto& self, int depth) -> bool {
    if (depth == var_count) return true;
    for (std::int64_t v = -box; v <= box; ++v) {
      rho[static_cast<std::size_t>(depth)] = v;
      bool ok = true;
      for (const OctConstraint& c : by_depth[static_cast<std::size_t>(depth)]) {
        if (!satisfies(c, rho)) {
          ok = false;
          break;
        }
      }
      if (ok && self(self, depth + 1)) return true;
    }
    return false;
  };
  if (search(search, 0)) return rho;
  return std::nullopt;
}

/// Parameters for the reproducible instance generator.
struct InstanceSpec {
  int n = 0;
  double density = 1.0;        // fraction of legal sign patterns, in (0,1]
  std::int64_t bound_range = 4;  // |d| <= bound_range
  std::uint64_t seed = 0;
};

namespace detail {

class SeededRng {
public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  // mt19937_64 output is identical everywhere; the helpers below avoid
  // std::uniform_* distributions, whose streams differ across libraries.
  bool chance(double p) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return u < p;
  }

  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(engine_() % span);
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace detail

/// Deterministic, seed-reproducible constraint set. Every legal sign
/// pattern slot — 2 per variable, 4 per ordered variable pair, 2n + 4*n*(n-1)
/// in total — is included with probability `density`, with d uniform in
/// [-bound_range, bound_range]. Constraints are emitted in canonical form;
/// the two orientations of a pair draw independently, and duplicates keep
/// conjunction (min) semantics at encoding time.
inline std::vector<OctConstraint> generate(const InstanceSpec& spec) {
  if (spec.n < 0) throw std::invalid_argument("generate: negative variable count");
  if (!(spec.density > 0.0) || spec.density > 1.0) {
    throw std::invalid_argument("generate: density must be in (0, 1]");
  }
  if (spec.bound_range < 0) throw std::invalid_argument("generate: negative bound range");

  detail::SeededRng rng(spec.seed);
  std::vector<OctConstraint> out;
  const auto draw = [&](auto make) {
    if (rng.chance(spec.density)) {
      out.push_back(make(rng.uniform(-spec.bound_range, spec.bound_range)));
    }
  };
  for (int i = 0; i < spec.n; ++i) {
    for (const int a : {+1, -1}) {
      draw([&](std::int64_t d) { return make_unary(a, i, d); });
    }
  }
  for (int i = 0; i < spec.n; ++i) {
    for (int j = 0; j < spec.n; ++j) {
      if (j == i) continue;
      for (const int a : {+1, -1}) {
        for (const int b : {+1, -1}) {
          draw([&](std::int64_t d) { return make_binary(a, i, b, j, d); });
        }
      }
    }
  }
  return out;
}

}  // namespace utvpi::oracle
