#pragma once

#include <cctype>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <type_traits>
#include <utility>
#include <vector>

#include "utvpi/closure.hpp"
#include "utvpi/graph.hpp"
#include "utvpi/rational.hpp"

namespace utvpi {

/// Octagonal constraint a*x_i + b*x_j <= d with unit coefficients:
/// a in {-1,+1}, b in {-1,0,+1}; b == 0 means the unary constraint a*x_i <= d.
/// Canonical form keeps i < j for binary constraints.
struct OctConstraint {
  int a = +1;
  int b = 0;
  int i = 0;
  int j = 0;
  std::int64_t d = 0;

  bool is_unary() const { return b == 0; }

  friend bool operator==(const OctConstraint& l, const OctConstraint& r) {
    return l.a == r.a && l.b == r.b && l.i == r.i && l.j == r.j && l.d == r.d;
  }
};

inline OctConstraint make_unary(int a, int var, std::int64_t d) {
  if (a != 1 && a != -1) throw std::invalid_argument("OctConstraint: coefficient must be +-1");
  if (var < 0) throw std::invalid_argument("OctConstraint: negative variable id");
  return OctConstraint{a, 0, var, 0, d};
}

inline OctConstraint make_binary(int a, int var_i, int b, int var_j, std::int64_t d) {
  if ((a != 1 && a != -1) || (b != 1 && b != -1)) {
    throw std::invalid_argument("OctConstraint: coefficients must be +-1");
  }
  if (var_i < 0 || var_j < 0) throw std::invalid_argument("OctConstraint: negative variable id");
  if (var_i == var_j) throw std::invalid_argument("OctConstraint: binary constraint on one variable");
  if (var_i > var_j) {
    std::swap(a, b);
    std::swap(var_i, var_j);
  }
  return OctConstraint{a, b, var_i, var_j, d};
}

/// Integer assignment to variables 0..n-1.
using Valuation = std::vector<std::int64_t>;

/// a*rho[i] + b*rho[j] <= d, evaluated without overflow.
inline bool satisfies(const OctConstraint& c, const Valuation& rho) {
  detail::int128 lhs = detail::int128(c.a) * rho.at(static_cast<std::size_t>(c.i));
  if (c.b != 0) lhs += detail::int128(c.b) * rho.at(static_cast<std::size_t>(c.j));
  return lhs <= detail::int128(c.d);
}

inline bool satisfies_all(const std::vector<OctConstraint>& cs, const Valuation& rho) {
  for (const OctConstraint& c : cs) {
    if (!satisfies(c, rho)) return false;
  }
  return true;
}

/// The potential-graph arc encoding a constraint. Unary bounds are doubled:
/// x_i <= d becomes node(2i) - node(2i+1) <= 2d.
struct EncodedArc {
  NodeId from;
  NodeId to;
  std::int64_t weight;
};

inline EncodedArc constraint_arc(const OctConstraint& c) {
  const NodeId pos_i = 2 * c.i;
  const NodeId neg_i = 2 * c.i + 1;
  if (c.is_unary()) {
    const std::int64_t w = checked_mul(c.d, 2);
    return c.a > 0 ? EncodedArc{pos_i, neg_i, w} : EncodedArc{neg_i, pos_i, w};
  }
  const NodeId pos_j = 2 * c.j;
  const NodeId neg_j = 2 * c.j + 1;
  if (c.a > 0 && c.b > 0) return {pos_i, neg_j, c.d};  //  x_i + x_j <= d
  if (c.a > 0 && c.b < 0) return {pos_i, pos_j, c.d};  //  x_i - x_j <= d
  if (c.a < 0 && c.b > 0) return {pos_j, pos_i, c.d};  // -x_i + x_j <= d
  return {neg_i, pos_j, c.d};                          // -x_i - x_j <= d
}

/// Lowers the constraint's arc to min(current, d); the coherent mirror
/// follows through the shared cell.
template <class Num>
void encode(const OctConstraint& c, OctGraph<Num>& g) {
  if (c.i >= g.var_count() || (!c.is_unary() && c.j >= g.var_count())) {
    throw std::out_of_range("encode: constraint variable out of range");
  }
  const EncodedArc arc = constraint_arc(c);
  g.min_weight(arc.from, arc.to, Bound<Num>(Num(arc.weight)));
}

template <class Num>
OctGraph<Num> encode_system(const std::vector<OctConstraint>& cs, int var_count) {
  OctGraph<Num> g(var_count);
  for (const OctConstraint& c : cs) encode(c, g);
  return g;
}

/// One constraint read back from a graph cell. For integer graphs a unary
/// cell with odd weight cannot be written as x_i <= d over the integers; it
/// is reported raw with half_integral set, meaning 2*a*x_i <= bound.
template <class Num>
struct DecodedConstraint {
  int a = +1;
  int b = 0;
  int i = 0;
  int j = 0;
  Num bound{};
  bool half_integral = false;

  bool is_unary() const { return b == 0; }

  friend bool operator==(const DecodedConstraint& l, const DecodedConstraint& r) {
    return l.a == r.a && l.b == r.b && l.i == r.i && l.j == r.j && l.bound == r.bound &&
           l.half_integral == r.half_integral;
  }
};

namespace detail {

inline bool canonical_cell(NodeId i, NodeId j) {
  const NodeId mi = bar(j);
  const NodeId mj = bar(i);
  return i < mi || (i == mi && j <= mj);
}

template <class Num>
DecodedConstraint<Num> decode_unary(NodeId p, const Num& w) {
  DecodedConstraint<Num> c;
  c.a = (p % 2 == 0) ? +1 : -1;
  c.i = p / 2;
  if constexpr (std::is_same_v<Num, Rational>) {
    c.bound = exact_half(w);
  } else {
    if (is_even_integer(w)) {
      c.bound = exact_half(w);
    } else {
      c.bound = w;
      c.half_integral = true;
    }
  }
  return c;
}

template <class Num>
DecodedConstraint<Num> decode_binary(NodeId p, NodeId q, const Num& w) {
  // Arc (p,q) states form(p) - form(q) <= w where form(2k) = +x_k and
  // form(2k+1) = -x_k.
  int a = (p % 2 == 0) ? +1 : -1;
  int b = (q % 2 == 0) ? -1 : +1;
  int vi = p / 2;
  int vj = q / 2;
  if (vi > vj) {
    std::swap(a, b);
    std::swap(vi, vj);
  }
  return DecodedConstraint<Num>{a, b, vi, vj, w, false};
}

}  // namespace detail

/// Emits one constraint per finite, non-diagonal canonical cell.
template <class Num>
std::vector<DecodedConstraint<Num>> decode(const OctGraph<Num>& g) {
  std::vector<DecodedConstraint<Num>> out;
  const int nodes = g.node_count();
  for (NodeId p = 0; p < nodes; ++p) {
    for (NodeId q = 0; q < nodes; ++q) {
      if (p == q || !detail::canonical_cell(p, q)) continue;
      const Bound<Num> w = g.weight(p, q);
      if (!w.is_finite()) continue;
      if (q == bar(p)) {
        out.push_back(detail::decode_unary(p, w.value()));
      } else {
        out.push_back(detail::decode_binary(p, q, w.value()));
      }
    }
  }
  return out;
}

/// Entailment against a tight closure: bottom entails everything, otherwise
/// the closed bound of the constraint's arc must not exceed the asked one.
inline bool entails(const ClosureOutcome<std::int64_t>& closure, const OctConstraint& c) {
  if (closure.is_bottom()) return true;
  const EncodedArc arc = constraint_arc(c);
  if (c.i >= closure.graph().var_count() ||
      (!c.is_unary() && c.j >= closure.graph().var_count())) {
    throw std::out_of_range("entails: constraint variable out of range");
  }
  return closure.graph().weight(arc.from, arc.to) <= Bound<std::int64_t>(arc.weight);
}

/// Constraint-level incremental addition (see incremental_add_arc).
inline ClosureOutcome<std::int64_t> incremental_add(const IntOctGraph& tightly_closed,
                                                    const OctConstraint& c) {
  if (c.i >= tightly_closed.var_count() || (!c.is_unary() && c.j >= tightly_closed.var_count())) {
    throw std::out_of_range("incremental_add: constraint variable out of range");
  }
  const EncodedArc arc = constraint_arc(c);
  return incremental_add_arc(tightly_closed, arc.from, arc.to, arc.weight);
}

/// Integer model of a tightly closed graph. Variables are fixed in ascending
/// order, each to its tightened upper bound (or, failing that, its lower
/// bound, or 0), re-establishing tight closure incrementally after each fix.
/// The intermediate systems stay consistent by construction, so a bottom
/// outcome here is an internal error.
inline Valuation extract_model(const IntOctGraph& tightly_closed) {
  IntOctGraph g = tightly_closed;
  const int n = g.var_count();
  Valuation rho(static_cast<std::size_t>(n), 0);
  for (int k = 0; k < n; ++k) {
    const NodeId pos = 2 * k;
    const NodeId neg = 2 * k + 1;
    const Bound<std::int64_t> ub = g.weight(pos, neg);
    const Bound<std::int64_t> lb = g.weight(neg, pos);
    std::int64_t v = 0;
    if (ub.is_finite()) {
      v = exact_half(ub.value());
    } else if (lb.is_finite()) {
      v = -exact_half(lb.value());
    }
    rho[static_cast<std::size_t>(k)] = v;
    auto upper = incremental_add_arc(g, pos, neg, checked_mul(v, 2));
    if (upper.is_bottom()) throw std::logic_error("extract_model: re-closure hit bottom");
    auto lower = incremental_add_arc(upper.graph(), neg, pos, checked_mul(v, -2));
    if (lower.is_bottom()) throw std::logic_error("extract_model: re-closure hit bottom");
    g = lower.graph();
  }
  return rho;
}

/// Parse failure with 1-based line and column.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& message, int line, int column)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

namespace detail {

class LineParser {
public:
  LineParser(std::string_view text, int line_no) : text_(text), line_(line_no) {}

  OctConstraint parse() {
    skip_spaces();
    int a = +1;
    if (peek() == '-') {
      ++pos_;
      a = -1;
      skip_spaces();
    }
    const int vi = parse_variable();
    skip_spaces();
    std::optional<int> b;
    int vj = 0;
    if (peek() == '+' || peek() == '-') {
      b = (peek() == '+') ? +1 : -1;
      ++pos_;
      skip_spaces();
      vj = parse_variable();
      skip_spaces();
    }
    expect("<=");
    skip_spaces();
    const std::int64_t d = parse_integer();
    skip_spaces();
    if (pos_ != text_.size()) fail("trailing characters after constraint");
    if (!b) return make_unary(a, vi, d);
    if (vi == vj) fail("binary constraint uses the same variable twice");
    return make_binary(a, vi, *b, vj, d);
  }

private:
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, line_, static_cast<int>(pos_) + 1);
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_spaces() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  void expect(std::string_view token) {
    if (text_.substr(pos_, token.size()) != token) {
      fail("expected '" + std::string(token) + "'");
    }
    pos_ += token.size();
  }

  int parse_variable() {
    if (peek() != 'x') fail("expected a variable like x0 (coefficients must be unit)");
    ++pos_;
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected a variable index");
    std::int64_t idx = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      idx = idx * 10 + (text_[pos_] - '0');
      if (idx > 1000000) fail("variable index too large");
      ++pos_;
    }
    return static_cast<int>(idx);
  }

  std::int64_t parse_integer() {
    bool negative = false;
    if (peek() == '-') {
      negative = true;
      ++pos_;
    }
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected an integer bound");
    std::int64_t value = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      const int digit = text_[pos_] - '0';
      if (__builtin_mul_overflow(value, 10, &value) ||
          __builtin_add_overflow(value, digit, &value)) {
        fail("bound out of range");
      }
      ++pos_;
    }
    return negative ? -value : value;
  }

  std::string_view text_;
  int line_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses one constraint: `[-]x<k> [(+|-) x<m>] <= <integer>`.
inline OctConstraint parse_constraint(std::string_view line, int line_no = 1) {
  return detail::LineParser(line, line_no).parse();
}

struct ConstraintSystem {
  std::vector<OctConstraint> constraints;
  int var_count = 0;  // inferred as 1 + max used index
};

/// Parses a whole file: one constraint per line, blank lines skipped,
/// `#` starts a comment.
inline ConstraintSystem parse_system(std::string_view text) {
  ConstraintSystem sys;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    ++line_no;
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
      if (end == text.size()) break;
      continue;
    }
    if (line.ends_with('\r')) line.remove_suffix(1);
    const OctConstraint c = parse_constraint(line, line_no);
    sys.constraints.push_back(c);
    const int top = c.is_unary() ? c.i : c.j;
    if (top + 1 > sys.var_count) sys.var_count = top + 1;
    if (end == text.size()) break;
  }
  return sys;
}

/// Canonical display order: unary before binary, then lexicographic by
/// (i, j, sign pattern) with '+' ranking before '-'.
template <class Num>
bool canonical_less(const DecodedConstraint<Num>& l, const DecodedConstraint<Num>& r) {
  const auto rank = [](const DecodedConstraint<Num>& c) {
    const int sign_rank = (c.a > 0 ? 0 : 2) + (c.is_unary() ? 0 : (c.b > 0 ? 0 : 1));
    return std::tuple(c.is_unary() ? 0 : 1, c.i, c.is_unary() ? -1 : c.j, sign_rank);
  };
  return rank(l) < rank(r);
}

inline std::string to_string(const OctConstraint& c) {
  std::string s = (c.a < 0) ? "-x" : "x";
  s += std::to_string(c.i);
  if (!c.is_unary()) {
    s += (c.b < 0) ? " - x" : " + x";
    s += std::to_string(c.j);
  }
  s += " <= " + std::to_string(c.d);
  return s;
}

template <class Num>
std::string to_string(const DecodedConstraint<Num>& c) {
  std::string s;
  if (c.half_integral) {
    s = (c.a < 0) ? "-2*x" : "2*x";
  } else {
    s = (c.a < 0) ? "-x" : "x";
  }
  s += std::to_string(c.i);
  if (!c.is_unary()) {
    s += (c.b < 0) ? " - x" : " + x";
    s += std::to_string(c.j);
  }
  s += " <= " + to_display_string(c.bound);
  return s;
}

}  // namespace utvpi
