// Command-line front end: tight/strong closure, entailment queries, integer
// model extraction and a cubic-scaling benchmark over constraint files.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "utvpi/utvpi.hpp"

namespace {

using nlohmann::json;
using namespace utvpi;

constexpr int kExitSat = 0;
constexpr int kExitUnsat = 1;
constexpr int kExitInputError = 2;

struct InputError {
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError{"cannot open '" + path + "'"};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct LoadedSystem {
  std::vector<OctConstraint> constraints;
  int var_count = 0;
};

LoadedSystem load_system(const std::string& path, int vars_override) {
  ConstraintSystem sys;
  try {
    sys = parse_system(read_file(path));
  } catch (const ParseError& e) {
    throw InputError{path + ": " + e.what()};
  }
  int n = sys.var_count;
  if (vars_override >= 0) {
    if (vars_override < sys.var_count) {
      throw InputError{"--vars " + std::to_string(vars_override) +
                       " is smaller than the largest variable index used"};
    }
    n = vars_override;
  }
  return {std::move(sys.constraints), n};
}

std::string verdict_name(Inconsistency kind) {
  return kind == Inconsistency::q_inconsistent ? "UNSAT(Q)" : "UNSAT(Z)";
}

template <class Num>
std::vector<std::string> sorted_constraint_lines(const OctGraph<Num>& g) {
  auto decoded = decode(g);
  std::sort(decoded.begin(), decoded.end(), canonical_less<Num>);
  std::vector<std::string> lines;
  lines.reserve(decoded.size());
  for (const auto& c : decoded) lines.push_back(to_string(c));
  return lines;
}

void emit(const json& payload, const std::vector<std::string>& text_lines, bool as_json) {
  if (as_json) {
    std::cout << payload.dump(2) << '\n';
  } else {
    for (const auto& line : text_lines) std::cout << line << '\n';
  }
}

int run_close(const std::string& path, int vars_override, bool rational, bool as_json) {
  const LoadedSystem sys = load_system(path, vars_override);
  std::vector<std::string> lines;
  json payload;
  int exit_code = kExitSat;
  if (rational) {
    const auto outcome = strong_closure(encode_system<Rational>(sys.constraints, sys.var_count));
    if (outcome.is_bottom()) {
      const std::string v = verdict_name(outcome.inconsistency());
      payload["verdict"] = v;
      lines.push_back(v);
      exit_code = kExitUnsat;
    } else {
      payload["verdict"] = "SAT";
      const auto cs = sorted_constraint_lines(outcome.graph());
      payload["constraints"] = cs;
      lines.push_back("SAT");
      lines.insert(lines.end(), cs.begin(), cs.end());
    }
  } else {
    const auto outcome = tight_closure(encode_system<std::int64_t>(sys.constraints, sys.var_count));
    if (outcome.is_bottom()) {
      const std::string v = verdict_name(outcome.inconsistency());
      payload["verdict"] = v;
      lines.push_back(v);
      exit_code = kExitUnsat;
    } else {
      payload["verdict"] = "SAT";
      const auto cs = sorted_constraint_lines(outcome.graph());
      payload["constraints"] = cs;
      lines.push_back("SAT");
      lines.insert(lines.end(), cs.begin(), cs.end());
    }
  }
  emit(payload, lines, as_json);
  return exit_code;
}

int run_entail(const std::string& path, const std::string& query, int vars_override,
               bool as_json) {
  LoadedSystem sys = load_system(path, vars_override);
  OctConstraint q;
  try {
    q = parse_constraint(query);
  } catch (const ParseError& e) {
    throw InputError{std::string("query: ") + e.what()};
  }
  const int query_top = (q.is_unary() ? q.i : q.j) + 1;
  const int n = std::max(sys.var_count, query_top);
  if (vars_override >= 0 && query_top > vars_override) {
    throw InputError{"query variable exceeds --vars"};
  }
  const auto outcome = tight_closure(encode_system<std::int64_t>(sys.constraints, n));
  std::string verdict;
  int exit_code;
  if (outcome.is_bottom()) {
    verdict = "ENTAILED (unsat)";
    exit_code = kExitSat;
  } else if (entails(outcome, q)) {
    verdict = "ENTAILED";
    exit_code = kExitSat;
  } else {
    verdict = "NOT ENTAILED";
    exit_code = kExitUnsat;
  }
  emit(json{{"verdict", verdict}}, {verdict}, as_json);
  return exit_code;
}

int run_model(const std::string& path, int vars_override, bool as_json) {
  const LoadedSystem sys = load_system(path, vars_override);
  const auto outcome = tight_closure(encode_system<std::int64_t>(sys.constraints, sys.var_count));
  if (outcome.is_bottom()) {
    const std::string v = verdict_name(outcome.inconsistency());
    emit(json{{"verdict", v}}, {v}, as_json);
    return kExitUnsat;
  }
  const Valuation rho = extract_model(outcome.graph());
  std::vector<std::string> lines;
  json model = json::object();
  for (std::size_t k = 0; k < rho.size(); ++k) {
    lines.push_back("x" + std::to_string(k) + " = " + std::to_string(rho[k]));
    model["x" + std::to_string(k)] = rho[k];
  }
  emit(json{{"verdict", "SAT"}, {"model", model}}, lines, as_json);
  return kExitSat;
}

int run_bench(const std::vector<int>& sizes, double density, std::uint64_t seed, int reps,
              bool as_json) {
  using clock = std::chrono::steady_clock;
  struct Row {
    int n;
    double median_ms;
  };
  std::vector<Row> rows;
  for (const int n : sizes) {
    // Non-negative bounds keep the instance satisfiable, so every rep runs
    // the full pipeline instead of bailing out at the consistency check.
    auto constraints = oracle::generate({n, density, 8, seed});
    for (OctConstraint& c : constraints) {
      if (c.d < 0) c.d = -c.d;
    }
    const auto g = encode_system<std::int64_t>(constraints, n);
    std::vector<double> times_ms;
    for (int r = 0; r < reps; ++r) {
      const auto start = clock::now();
      const auto outcome = tight_closure(g);
      const auto stop = clock::now();
      (void)outcome;
      times_ms.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
    }
    std::sort(times_ms.begin(), times_ms.end());
    rows.push_back({n, times_ms[times_ms.size() / 2]});
  }

  // Least-squares slope of log(time) against log(n).
  double exponent = 0.0;
  bool have_exponent = rows.size() >= 2;
  if (have_exponent) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const Row& r : rows) {
      const double x = std::log(static_cast<double>(r.n));
      const double y = std::log(std::max(r.median_ms, 1e-6));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double m = static_cast<double>(rows.size());
    exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  }

  json payload;
  std::vector<std::string> lines;
  lines.push_back("n       median_ms   reps");
  payload["rows"] = json::array();
  for (const Row& r : rows) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%-7d %-11.3f %d", r.n, r.median_ms, reps);
    lines.emplace_back(buf);
    payload["rows"].push_back({{"n", r.n}, {"median_ms", r.median_ms}, {"reps", reps}});
  }
  if (have_exponent) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "growth exponent estimate: %.2f", exponent);
    lines.emplace_back(buf);
    payload["growth_exponent"] = exponent;
  }
  emit(payload, lines, as_json);
  return kExitSat;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Integer octagonal (UTVPI) constraint engine"};
  app.require_subcommand(1);

  std::string file;
  std::string query;
  std::string format = "text";
  int vars_override = -1;
  bool rational = false;
  std::string sizes_arg = "100,200";
  double density = 1.0;
  std::uint64_t seed = 1;
  int reps = 5;

  const auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
  };

  CLI::App* close = app.add_subcommand("close", "Tightly close a constraint file");
  close->add_option("file", file, "Constraint file")->required();
  close->add_option("--vars", vars_override, "Override the inferred variable count");
  close->add_flag("--rational", rational, "Rational strong closure instead of tight closure");
  add_format(close);

  CLI::App* entail = app.add_subcommand("entail", "Check entailment of a query constraint");
  entail->add_option("file", file, "Constraint file")->required();
  entail->add_option("query", query, "Query constraint, e.g. 'x0 - x2 <= 3'")->required();
  entail->add_option("--vars", vars_override, "Override the inferred variable count");
  add_format(entail);

  CLI::App* model = app.add_subcommand("model", "Extract an integer model");
  model->add_option("file", file, "Constraint file")->required();
  model->add_option("--vars", vars_override, "Override the inferred variable count");
  add_format(model);

  CLI::App* bench = app.add_subcommand("bench", "Time tight closure on random dense instances");
  bench->add_option("--sizes", sizes_arg, "Comma-separated variable counts")
      ->capture_default_str();
  bench->add_option("--density", density, "Constraint density in (0,1]")->capture_default_str();
  bench->add_option("--seed", seed, "Instance seed")->capture_default_str();
  bench->add_option("--reps", reps, "Repetitions per size (median reported)")
      ->capture_default_str();
  add_format(bench);

  CLI11_PARSE(app, argc, argv);

  const bool as_json = format == "json";
  try {
    if (close->parsed()) return run_close(file, vars_override, rational, as_json);
    if (entail->parsed()) return run_entail(file, query, vars_override, as_json);
    if (model->parsed()) return run_model(file, vars_override, as_json);
    std::vector<int> sizes;
    std::stringstream ss(sizes_arg);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const int n = std::stoi(item);
      if (n < 0) throw InputError{"--sizes entries must be non-negative"};
      sizes.push_back(n);
    }
    if (sizes.empty() || reps < 1) throw InputError{"bench needs at least one size and one rep"};
    return run_bench(sizes, density, seed, reps, as_json);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.message << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}
