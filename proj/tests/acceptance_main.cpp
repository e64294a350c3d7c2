// Acceptance suite: exercises every release criterion end to end and prints
// one PASS/FAIL line per criterion. Exits non-zero if any criterion fails.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "json.hpp"
#include "test_support.hpp"
#include "utvpi/utvpi.hpp"

using namespace utvpi;
using namespace testing_support;
using nlohmann::json;

namespace {

struct CriterionResult {
  bool pass = false;
  std::string detail;
};

struct Instance {
  std::vector<OctConstraint> constraints;
  int n = 0;
  double density = 0.0;
  std::uint64_t seed = 0;
};

std::vector<Instance> corpus() {
  std::vector<Instance> out;
  for (int n = 1; n <= 4; ++n) {
    for (const double density : {0.25, 0.5, 1.0}) {
      for (std::uint64_t seed = 1; seed <= 90; ++seed) {
        out.push_back({oracle::generate({n, density, 4, seed}), n, density, seed});
      }
    }
  }
  return out;
}

std::string verdict_of(const ClosureOutcome<std::int64_t>& o) {
  if (o.is_closed()) return "SAT";
  return o.inconsistency() == Inconsistency::q_inconsistent ? "UNSAT(Q)" : "UNSAT(Z)";
}

std::string verdict_of(const ClosureOutcome<Rational>& o) {
  if (o.is_closed()) return "SAT";
  return o.inconsistency() == Inconsistency::q_inconsistent ? "UNSAT(Q)" : "UNSAT(Z)";
}

// Shifted and embedded variants of the half-integral witness: x_p and x_q
// are rationally forced to the odd value k/2, so every instance is
// Q-consistent but Z-inconsistent.
std::vector<Instance> z_inconsistent_family() {
  std::vector<Instance> out;
  for (int n = 2; n <= 4; ++n) {
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        for (const std::int64_t k : {1, 3}) {
          Instance inst;
          inst.n = n;
          inst.constraints = {make_binary(+1, p, +1, q, k), make_binary(+1, p, -1, q, 0),
                              make_binary(-1, p, +1, q, 0), make_binary(-1, p, -1, q, -k)};
          out.push_back(std::move(inst));
        }
      }
    }
  }
  return out;
}

CriterionResult criterion_1_verdict_agreement(const std::vector<Instance>& instances,
                                              double* elapsed_seconds) {
  const auto start = std::chrono::steady_clock::now();
  int sat = 0, unsat_q = 0, unsat_z = 0;
  for (const Instance& inst : instances) {
    const auto tc = tight_closure(int_graph(inst.constraints, inst.n));
    const auto sat_out = oracle::saturate(oracle::to_rational(int_graph(inst.constraints, inst.n)),
                                          oracle::SaturationRules::all());
    const auto brute = oracle::brute_force_z_sat(inst.constraints, inst.n);
    if (verdict_of(tc) != verdict_of(sat_out)) {
      return {false, "saturation verdict differs at n=" + std::to_string(inst.n) +
                         " seed=" + std::to_string(inst.seed)};
    }
    if (tc.is_closed() != brute.has_value()) {
      return {false, "brute-force verdict differs at n=" + std::to_string(inst.n) +
                         " seed=" + std::to_string(inst.seed)};
    }
    if (tc.is_closed()) {
      ++sat;
    } else if (tc.inconsistency() == Inconsistency::q_inconsistent) {
      ++unsat_q;
    } else {
      ++unsat_z;
    }
  }
  *elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "%zu instances agree (%d SAT, %d UNSAT(Q), %d UNSAT(Z)) in %.1fs",
                instances.size(), sat, unsat_q, unsat_z, *elapsed_seconds);
  if (*elapsed_seconds >= 60.0) return {false, std::string(detail) + " — over the 60s budget"};
  if (instances.size() < 1000) return {false, "corpus smaller than 1000 instances"};
  return {true, detail};
}

CriterionResult criterion_2_matrix_exactness(const std::vector<Instance>& instances) {
  int compared = 0;
  for (const Instance& inst : instances) {
    const IntOctGraph g = int_graph(inst.constraints, inst.n);
    const auto tc = tight_closure(g);
    if (tc.is_bottom()) continue;
    const auto sat = oracle::saturate(oracle::to_rational(g), oracle::SaturationRules::all());
    if (sat.is_bottom() || !matrices_equal(tc.graph(), sat.graph())) {
      return {false, "matrix differs from saturation fixpoint at n=" + std::to_string(inst.n) +
                         " seed=" + std::to_string(inst.seed)};
    }
    if (!is_tightly_closed(tc.graph())) {
      return {false, "closure output not tightly closed at seed=" + std::to_string(inst.seed)};
    }
    ++compared;
  }
  return {true, std::to_string(compared) + " consistent instances match cell-for-cell"};
}

CriterionResult criterion_3_strong_closure_exactness() {
  int compared = 0;
  for (std::uint64_t seed = 1; seed <= 125; ++seed) {
    for (int n = 1; n <= 4; ++n) {
      const auto cs = oracle::generate({n, 0.6, 4, seed + 7000});
      const auto g = perturbed_rational_graph(cs, n, seed);
      const auto sc = strong_closure(g);
      const auto sat = oracle::saturate(g, oracle::SaturationRules::rational_rules());
      if (sc.is_closed() != sat.is_closed()) {
        return {false, "verdict differs at n=" + std::to_string(n) +
                           " seed=" + std::to_string(seed)};
      }
      if (sc.is_closed() && !(sc.graph() == sat.graph())) {
        return {false, "matrix differs at n=" + std::to_string(n) +
                           " seed=" + std::to_string(seed)};
      }
      if (sc.is_closed() && !is_strongly_closed(sc.graph())) {
        return {false, "result not strongly closed at seed=" + std::to_string(seed)};
      }
      ++compared;
    }
  }
  if (compared < 500) return {false, "fewer than 500 rational instances"};
  return {true, std::to_string(compared) + " rational instances match exactly"};
}

CriterionResult criterion_4_kernel_laws(const std::vector<Instance>& instances) {
  int closed_checked = 0;
  int monotone_pairs = 0;
  for (const Instance& inst : instances) {
    const IntOctGraph g = int_graph(inst.constraints, inst.n);
    const auto once = tight_closure(g);
    if (once.is_closed()) {
      if (!graph_leq(once.graph(), g)) {
        return {false, "not reductive at seed=" + std::to_string(inst.seed)};
      }
      const auto twice_closed = tight_closure(once.graph());
      if (twice_closed.is_bottom() || !(twice_closed.graph() == once.graph())) {
        return {false, "not idempotent at seed=" + std::to_string(inst.seed)};
      }
      ++closed_checked;
    }
    if (monotone_pairs < 600) {
      const IntOctGraph lower = lowered_copy(g, inst.seed * 31 + inst.n);
      const auto low_out = tight_closure(lower);
      if (once.is_bottom()) {
        // G1 <= G2 with G2 bottom: G1 must be bottom too.
        if (!low_out.is_bottom()) {
          return {false, "monotonicity broken (bottom) at seed=" + std::to_string(inst.seed)};
        }
      } else if (low_out.is_closed() && !graph_leq(low_out.graph(), once.graph())) {
        return {false, "monotonicity broken at seed=" + std::to_string(inst.seed)};
      }
      ++monotone_pairs;
    }
  }
  char detail[128];
  std::snprintf(detail, sizeof(detail), "idempotent+reductive on %d closed, monotone on %d pairs",
                closed_checked, monotone_pairs);
  if (monotone_pairs < 500) return {false, "fewer than 500 ordered pairs"};
  return {true, detail};
}

CriterionResult criterion_5_z_inconsistency_regression(const std::vector<Instance>& instances) {
  auto check_witness = [](const Instance& inst) -> std::string {
    // Rational closure of the integer weights, then the tightening step.
    OctGraph<Rational> g = oracle::to_rational(int_graph(inst.constraints, inst.n));
    const Bound<Rational> zero{Rational(0)};
    for (NodeId i = 0; i < g.node_count(); i += 2) {
      if (zero < g.weight(i, i)) g.set_weight(i, i, zero);
    }
    floyd_warshall(g);
    if (!q_consistent(g)) return "witness instance is not q-consistent";

    bool odd_unary_zero_cycle = false;
    for (NodeId i = 0; i < g.node_count() && !odd_unary_zero_cycle; ++i) {
      const Bound<Rational> u = g.weight(i, bar(i));
      const Bound<Rational> v = g.weight(bar(i), i);
      if (!u.is_finite() || !v.is_finite()) continue;
      const bool odd = u.value().is_integer() && u.value().numerator() % 2 != 0;
      odd_unary_zero_cycle = odd && !(zero < u + v);
    }
    if (!odd_unary_zero_cycle) return "no odd unary arc on a non-positive cycle";

    tighten(g);
    bool negative_pair = false;
    for (NodeId i = 0; i < g.node_count() && !negative_pair; i += 2) {
      negative_pair = g.weight(i, bar(i)) + g.weight(bar(i), i) < zero;
    }
    if (!negative_pair) return "tightening exposed no negative unary cycle";
    return "";
  };

  int witnesses = 0;
  for (const Instance& inst : instances) {
    const auto tc = tight_closure(int_graph(inst.constraints, inst.n));
    if (tc.is_bottom() && tc.inconsistency() == Inconsistency::z_inconsistent) {
      const std::string err = check_witness(inst);
      if (!err.empty()) return {false, err + " (corpus seed " + std::to_string(inst.seed) + ")"};
      ++witnesses;
    }
  }
  for (const Instance& inst : z_inconsistent_family()) {
    const auto tc = tight_closure(int_graph(inst.constraints, inst.n));
    if (!tc.is_bottom() || tc.inconsistency() != Inconsistency::z_inconsistent) {
      return {false, "constructed witness not reported UNSAT(Z)"};
    }
    if (oracle::brute_force_z_sat(inst.constraints, inst.n).has_value()) {
      return {false, "constructed witness has an integer model"};
    }
    const std::string err = check_witness(inst);
    if (!err.empty()) return {false, err};
    ++witnesses;
  }

  // The canonical witness must be exactly UNSAT(Z), not UNSAT(Q).
  const auto canonical = tight_closure(int_graph(
      parse_lines({"x0 + x1 <= 1", "x0 - x1 <= 0", "-x0 + x1 <= 0", "-x0 - x1 <= -1"}), 2));
  if (!canonical.is_bottom() || canonical.inconsistency() != Inconsistency::z_inconsistent) {
    return {false, "canonical witness verdict is not UNSAT(Z)"};
  }
  return {true, std::to_string(witnesses) + " z-inconsistent instances all show the odd cycle"};
}

CriterionResult criterion_6_incremental_equivalence() {
  int compared = 0;
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    for (int n = 1; n <= 4; ++n) {
      const auto cs = oracle::generate({n, 0.5, 4, seed + 11000});
      const auto batch = tight_closure(int_graph(cs, n));
      auto run = tight_closure(IntOctGraph(n));
      for (const OctConstraint& c : cs) {
        if (run.is_bottom()) break;
        run = incremental_add(run.graph(), c);
      }
      if (batch.is_bottom() != run.is_bottom()) {
        return {false, "incremental verdict differs at n=" + std::to_string(n) +
                           " seed=" + std::to_string(seed)};
      }
      if (batch.is_closed() && !(batch.graph() == run.graph())) {
        return {false, "incremental matrix differs at n=" + std::to_string(n) +
                           " seed=" + std::to_string(seed)};
      }
      ++compared;
    }
  }
  if (compared < 200) return {false, "fewer than 200 instances"};
  return {true, std::to_string(compared) + " instances identical batch vs incremental"};
}

CriterionResult criterion_7_model_soundness(const std::vector<Instance>& instances) {
  int models = 0;
  for (const Instance& inst : instances) {
    const auto tc = tight_closure(int_graph(inst.constraints, inst.n));
    if (tc.is_bottom()) continue;
    const Valuation rho = extract_model(tc.graph());
    if (!satisfies_all(inst.constraints, rho)) {
      return {false, "model violates a constraint at n=" + std::to_string(inst.n) +
                         " seed=" + std::to_string(inst.seed)};
    }
    ++models;
  }
  return {true, std::to_string(models) + " extracted models all satisfy their systems"};
}

CriterionResult criterion_8_cubic_scaling() {
  CliResult r;
  try {
    r = run_cli("bench --sizes 100,200 --reps 5 --seed 7 --format json");
  } catch (const std::exception& e) {
    return {false, e.what()};
  }
  if (r.exit_code != 0) return {false, "bench exited with " + std::to_string(r.exit_code)};
  double t100 = 0, t200 = 0;
  try {
    const json payload = json::parse(r.output);
    for (const auto& row : payload.at("rows")) {
      if (row.at("n") == 100) t100 = row.at("median_ms").get<double>();
      if (row.at("n") == 200) t200 = row.at("median_ms").get<double>();
    }
  } catch (const std::exception& e) {
    return {false, std::string("cannot parse bench output: ") + e.what()};
  }
  if (t100 <= 0 || t200 <= 0) return {false, "bench rows missing"};
  const double ratio = t200 / t100;
  char detail[160];
  std::snprintf(detail, sizeof(detail), "t(100)=%.1fms t(200)=%.1fms ratio=%.2f", t100, t200,
                ratio);
  if (ratio < 5.0 || ratio > 12.0) {
    return {false, std::string(detail) + " — ratio outside [5, 12]"};
  }
  if (t200 >= 2000.0) return {false, std::string(detail) + " — n=200 over 2s"};
  return {true, detail};
}

CriterionResult criterion_9_pipeline_agreement(const std::vector<Instance>& instances) {
  int compared = 0;
  for (const Instance& inst : instances) {
    const IntOctGraph g = int_graph(inst.constraints, inst.n);
    const auto checked = tight_closure(g);
    if (checked.is_bottom()) continue;
    if (!(unchecked_tight_pipeline(g) == checked.graph())) {
      return {false, "pipelines differ at n=" + std::to_string(inst.n) +
                         " seed=" + std::to_string(inst.seed)};
    }
    ++compared;
  }
  // Extend past the shared corpus until 500 consistent instances are seen.
  for (std::uint64_t seed = 10000; compared < 500 && seed < 12000; ++seed) {
    const int n = 1 + static_cast<int>(seed % 4);
    const auto cs = oracle::generate({n, 0.4, 4, seed});
    const IntOctGraph g = int_graph(cs, n);
    const auto checked = tight_closure(g);
    if (checked.is_bottom()) continue;
    if (!(unchecked_tight_pipeline(g) == checked.graph())) {
      return {false, "pipelines differ at extension seed=" + std::to_string(seed)};
    }
    ++compared;
  }
  if (compared < 500) return {false, "fewer than 500 consistent instances"};
  return {true, std::to_string(compared) + " consistent instances identical"};
}

}  // namespace

int main() {
  const std::vector<Instance> shared = corpus();
  double corpus_seconds = 0.0;

  struct Row {
    int id;
    const char* name;
    CriterionResult result;
  };
  std::vector<Row> rows;
  rows.push_back({1, "verdict oracle equivalence",
                  criterion_1_verdict_agreement(shared, &corpus_seconds)});
  rows.push_back({2, "matrix exactness vs saturation", criterion_2_matrix_exactness(shared)});
  rows.push_back({3, "strong closure exactness", criterion_3_strong_closure_exactness()});
  rows.push_back({4, "kernel laws", criterion_4_kernel_laws(shared)});
  rows.push_back({5, "z-inconsistency regression", criterion_5_z_inconsistency_regression(shared)});
  rows.push_back({6, "incremental equivalence", criterion_6_incremental_equivalence()});
  rows.push_back({7, "model soundness", criterion_7_model_soundness(shared)});
  rows.push_back({8, "cubic scaling", criterion_8_cubic_scaling()});
  rows.push_back({9, "checked vs check-free pipeline", criterion_9_pipeline_agreement(shared)});

  bool all_pass = true;
  for (const Row& row : rows) {
    all_pass = all_pass && row.result.pass;
    std::printf("[%s] %d %s — %s\n", row.result.pass ? "PASS" : "FAIL", row.id, row.name,
                row.result.detail.c_str());
  }
  return all_pass ? 0 : 1;
}
