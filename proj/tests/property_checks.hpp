#pragma once

// Randomised property checks shared by the unit tests and the acceptance
// binary. Each check returns how many cases ran and the first failure.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"

namespace ss::test {

struct CheckResult {
  int cases = 0;
  int failures = 0;
  std::string first_failure;

  void fail(const std::string& why) {
    if (failures++ == 0) first_failure = why;
  }
  bool ok() const { return failures == 0; }
};

inline bool close(double a, double b, double tol = 1e-12) {
  if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
  if (a == b) return true;
  return std::fabs(a - b) <= tol * std::max(1.0, std::fabs(b));
}

inline std::string num_text(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

// ---------------------------------------------------------------------------
// Formula fuzzer

class FormulaFuzzer {
 public:
  FormulaFuzzer(std::mt19937& rng, Coord owner) : rng_(rng), owner_(owner) {}

  std::string expr(int depth) {
    if (depth <= 0 || pick(4) == 0) return leaf();
    switch (pick(7)) {
      case 0: return "( " + expr(depth - 1) + " )";
      case 1: {
        static const char* ops[] = {"-", "+", "!", "~", "NOT"};
        return std::string(ops[pick(5)]) + " " + expr(depth - 1);
      }
      case 2: return expr(depth - 1) + " ? " + expr(depth - 1) + " : " + expr(depth - 1);
      case 3: return call(depth);
      default: {
        static const char* ops[] = {"*", "/", "%", "+", "-", "<<", ">>", "<", "<=", ">",
                                    ">=", "==", "!=", "&", "^", "|", "&&", "||", "AND",
                                    "OR", "XOR"};
        return expr(depth - 1) + " " + ops[pick(21)] + " " + expr(depth - 1);
      }
    }
  }

  std::string leaf() {
    switch (pick(6)) {
      case 0: return std::to_string(pick(20));
      case 1: return num_text(std::round(uniform(-50, 50) * 1000) / 1000);
      case 2: {
        static const char* syms[] = {"x", "y", "mean", "pi", "RAND_MAX"};
        return syms[pick(5)];
      }
      case 3:
        if (pick(3) == 0) return "\"s\"";
        [[fallthrough]];
      default: return cellref();
    }
  }

  std::string cellref() {
    Coord t{owner_.row + pick(11) - 5, owner_.col + pick(11) - 5};
    switch (pick(3)) {
      case 0: {
        std::string s;
        if (pick(2)) s += '$';
        s += column_letters(t.col);
        if (pick(2)) s += '$';
        return s + std::to_string(t.row);
      }
      case 1: return "R" + axis(t.row, owner_.row) + "C" + axis(t.col, owner_.col);
      default: return "C" + axis(t.col, owner_.col) + "R" + axis(t.row, owner_.row);
    }
  }

  std::string range() { return cellref() + ":" + cellref(); }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }

  std::string axis(int target, int owner) {
    if (pick(2)) return std::to_string(target);
    int off = target - owner;
    if (off == 0 && pick(2)) return "[]";
    return "[" + std::string(off > 0 ? "+" : "") + std::to_string(off) + "]";
  }

  std::string call(int depth) {
    switch (pick(6)) {
      case 0: return "sqrt( fabs( " + expr(depth - 1) + " ) )";
      case 1: return "pow( " + expr(depth - 1) + " , " + expr(depth - 1) + " )";
      case 2: return "fmin( " + expr(depth - 1) + " , " + expr(depth - 1) + " )";
      case 3: return "sum( " + range() + " )";
      case 4: return "avg( " + range() + " , " + expr(depth - 1) + " )";
      default: return "count( " + range() + " , " + cellref() + " )";
    }
  }

  std::mt19937& rng_;
  Coord owner_;
};

// Random values, strings and gaps around `centre`.
inline void scatter_cells(Sheet& sheet, std::mt19937& rng, Coord centre) {
  std::uniform_int_distribution<int> kind(0, 5);
  std::uniform_real_distribution<double> val(-100, 100);
  for (int r = centre.row - 6; r <= centre.row + 6; ++r)
    for (int c = centre.col - 6; c <= centre.col + 6; ++c) {
      int k = kind(rng);
      if (k == 0) continue;
      if (k == 1) {
        sheet.set_formula({r, c}, make_node(StringLit{"s"}));
        sheet.set_value({r, c}, std::string("s"));
      } else {
        double v = std::round(val(rng) * 100) / 100;
        sheet.set_formula({r, c}, make_node(NumberLit{v}));
        sheet.set_value({r, c}, v);
      }
    }
  sheet.set_symbol_value("x", 2.5);
  sheet.set_symbol_value("y", -3.0);
  sheet.set_symbol_value("mean", 75.8);
}

// parse(render(f, c, m)) evaluates like f at c, and rendering is stable.
inline CheckResult check_round_trip(int formulas, std::uint32_t seed) {
  CheckResult res;
  std::mt19937 rng(seed);
  std::ostringstream sink;
  Diagnostics diag(sink);
  auto fns = FunctionRegistry::with_builtins();
  for (int i = 0; i < formulas; ++i) {
    Coord owner{std::uniform_int_distribution<int>(10, 980)(rng),
                std::uniform_int_distribution<int>(10, 690)(rng)};
    Sheet sheet;
    scatter_cells(sheet, rng, owner);
    Evaluator ev(sheet, fns, diag);
    FormulaFuzzer fuzz(rng, owner);
    std::string text = fuzz.expr(4);
    ExprPtr f;
    try {
      auto st = parse_statement(tokenize(cell_name(owner) + " = " + text + ";"));
      f = std::get<FormulaAssignment>(st.body).formula;
    } catch (const ParseError& e) {
      ++res.cases;
      res.fail("fuzzed formula did not parse: " + text + " (" + e.what() + ")");
      continue;
    }
    const Value expected = ev.eval_tree(*f, owner);
    for (Notation m : {Notation::A0, Notation::RC, Notation::CR}) {
      ++res.cases;
      std::string rendered = render_formula(*f, owner, m);
      try {
        ExprPtr g = rebase(parse_expression(rendered), kOrigin, owner);
        Value got = ev.eval_tree(*g, owner);
        if (!got.same_as(expected) && !close(got.number(), expected.number(), 0))
          res.fail(text + " -> " + rendered + ": value differs");
        else if (render_formula(*g, owner, m) != rendered)
          res.fail(text + " -> " + rendered + " -> " + render_formula(*g, owner, m));
      } catch (const ParseError& e) {
        res.fail("rendered text did not parse: " + rendered + " (" + e.what() + ")");
      }
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Operator precedence against an independent C-precedence evaluator

class PrecedenceOracle {
 public:
  explicit PrecedenceOracle(std::vector<std::string> tokens) : t_(std::move(tokens)) {}

  double run() {
    double v = conditional();
    if (i_ != t_.size()) throw std::runtime_error("trailing tokens");
    return v;
  }

 private:
  static int precedence(const std::string& op) {
    static const std::map<std::string, int> table = {
        {"*", 13}, {"/", 13}, {"%", 13}, {"+", 12}, {"-", 12}, {"<<", 11}, {">>", 11},
        {"<", 10}, {"<=", 10}, {">", 10}, {">=", 10}, {"==", 9}, {"!=", 9},
        {"&", 8}, {"^", 7}, {"|", 6}, {"&&", 5}, {"||", 4}};
    auto it = table.find(op);
    return it == table.end() ? -1 : it->second;
  }

  static double apply(const std::string& op, double a, double b) {
    auto t = [](double v) { return v != 0.0; };
    auto shift = [](double n) { return static_cast<int>(std::clamp(std::trunc(n), -1e5, 1e5)); };
    if (op == "*") return a * b;
    if (op == "/") return a / b;
    if (op == "%") return std::fmod(a, b);
    if (op == "+") return a + b;
    if (op == "-") return a - b;
    if (op == "<<") return std::ldexp(a, std::isnan(b) ? 0 : shift(b));
    if (op == ">>") return std::ldexp(a, std::isnan(b) ? 0 : -shift(b));
    if (op == "<") return a < b;
    if (op == "<=") return a <= b;
    if (op == ">") return a > b;
    if (op == ">=") return a >= b;
    if (op == "==") return a == b;
    if (op == "!=") return a != b;
    if (op == "&" || op == "&&") return t(a) && t(b);
    if (op == "^") return t(a) != t(b);
    return t(a) || t(b);
  }

  const std::string& peek() const {
    static const std::string end;
    return i_ < t_.size() ? t_[i_] : end;
  }

  double conditional() {
    double c = binary(4);
    if (peek() != "?") return c;
    ++i_;
    double a = conditional();
    if (peek() != ":") throw std::runtime_error("missing :");
    ++i_;
    double b = conditional();
    return c != 0.0 ? a : b;
  }

  double binary(int min_prec) {
    double lhs = unary();
    for (;;) {
      int p = precedence(peek());
      if (p < min_prec) return lhs;
      std::string op = t_[i_++];
      double rhs = binary(p + 1);
      lhs = apply(op, lhs, rhs);
    }
  }

  double unary() {
    const std::string& tok = peek();
    if (tok == "-") return ++i_, -unary();
    if (tok == "+") return ++i_, unary();
    if (tok == "!") return ++i_, unary() == 0.0 ? 1.0 : 0.0;
    if (tok == "(") {
      ++i_;
      double v = conditional();
      ++i_;  // ')'
      return v;
    }
    return std::stod(t_[i_++]);
  }

  std::vector<std::string> t_;
  std::size_t i_ = 0;
};

inline CheckResult check_precedence(int cases, std::uint32_t seed) {
  CheckResult res;
  std::mt19937 rng(seed);
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  static const char* ops[] = {"*", "/", "%", "+", "-", "<<", ">>", "<", "<=", ">", ">=",
                              "==", "!=", "&", "^", "|", "&&", "||"};
  std::function<void(std::vector<std::string>&, int)> gen = [&](std::vector<std::string>& out,
                                                                int depth) {
    int k = depth <= 0 ? 0 : pick(8);
    if (k == 0) {
      out.push_back(pick(4) ? std::to_string(pick(6)) : "0.5");
    } else if (k == 1) {
      out.push_back(pick(2) ? "-" : "!");
      gen(out, depth - 1);
    } else if (k == 2) {
      out.push_back("(");
      gen(out, depth - 1);
      out.push_back(")");
    } else if (k == 3) {
      gen(out, depth - 1);
      out.push_back("?");
      gen(out, depth - 1);
      out.push_back(":");
      gen(out, depth - 1);
    } else {
      gen(out, depth - 1);
      out.push_back(ops[pick(18)]);
      gen(out, depth - 1);
    }
  };
  std::ostringstream sink;
  Diagnostics diag(sink);
  auto fns = FunctionRegistry::with_builtins();
  Sheet sheet;
  Evaluator ev(sheet, fns, diag);
  for (int i = 0; i < cases; ++i, ++res.cases) {
    std::vector<std::string> toks;
    gen(toks, 5);
    std::string text;
    for (auto& t : toks) text += t + " ";
    double want = PrecedenceOracle(toks).run();
    try {
      double got = ev.eval_tree(*parse_expression(text), kOrigin).number();
      if (!Value(got).same_as(Value(want))) res.fail(text + ": " + num_text(got) + " vs " + num_text(want));
    } catch (const ParseError& e) {
      res.fail(text + ": " + e.what());
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Traversal laws

inline CheckResult check_traversal(int cases, std::uint32_t seed) {
  CheckResult res;
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> row(0, kRows - 1), col(0, kCols - 1), span(0, 12);
  for (int i = 0; i < cases; ++i) {
    ++res.cases;
    Coord a{row(rng), col(rng)};
    Coord b{std::clamp(a.row + span(rng) - 6, 0, kRows - 1),
            std::clamp(a.col + span(rng) - 6, 0, kCols - 1)};
    ResolvedRange r{a, b};
    const std::size_t expected = static_cast<std::size_t>(std::abs(a.row - b.row) + 1) *
                                 static_cast<std::size_t>(std::abs(a.col - b.col) + 1);
    auto rows = traverse(r, Direction::ByRows);
    auto cols = traverse(r, Direction::ByCols);
    auto rev = traverse({b, a}, Direction::ByRows);
    std::reverse(rev.begin(), rev.end());
    std::set<Coord> seen(rows.begin(), rows.end());
    bool inside = std::all_of(rows.begin(), rows.end(), [&](Coord c) {
      return c.row >= std::min(a.row, b.row) && c.row <= std::max(a.row, b.row) &&
             c.col >= std::min(a.col, b.col) && c.col <= std::max(a.col, b.col);
    });
    std::set<Coord> seen_cols(cols.begin(), cols.end());
    std::string where = cell_name(a) + ":" + cell_name(b);
    if (rows.size() != expected || cell_count(r) != expected || seen.size() != expected)
      res.fail(where + ": cardinality");
    else if (!inside)
      res.fail(where + ": left the rectangle");
    else if (rows.front() != a || rows.back() != b || cols.front() != a || cols.back() != b)
      res.fail(where + ": corners");
    else if (rev != rows)
      res.fail(where + ": swapping corners does not reverse the order");
    else if (seen_cols != seen)
      res.fail(where + ": byrows and bycols visit different cells");
  }
  return res;
}

// ---------------------------------------------------------------------------
// Acyclic sheets against a topological-order oracle

struct DagStats {
  CheckResult values;         // converged values equal the oracle
  CheckResult schedule;       // reported count equals the sweep-finality prediction
  CheckResult within_two;     // the "at most 2 iterations" bound
  std::map<long, int> histogram;
};

struct DagNode {
  bool symbol = false;
  Coord cell{};
  std::string name;
  double constant = 0;
  std::vector<std::pair<int, double>> deps;  // (node index, weight)
};

inline std::string dag_ref(const DagNode& n) { return n.symbol ? n.name : cell_name(n.cell); }

// Iteration after which every node holds its final value, from the sweep
// order alone: symbols in definition order, cells row-major, then reversed.
inline long finality_iteration(const std::vector<DagNode>& nodes,
                               const std::vector<int>& symbol_order) {
  std::vector<int> cells;
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i)
    if (!nodes[i].symbol) cells.push_back(i);
  std::sort(cells.begin(), cells.end(), [&](int a, int b) { return nodes[a].cell < nodes[b].cell; });
  // Literal formulas hold their value from the moment they are defined.
  std::vector<bool> final(nodes.size(), false);
  for (std::size_t i = 0; i < nodes.size(); ++i) final[i] = nodes[i].deps.empty();
  auto all_final = [&] { return std::all_of(final.begin(), final.end(), [](bool b) { return b; }); };
  if (all_final()) return 0;
  auto visit = [&](int i) {
    bool ok = true;
    for (auto& [d, w] : nodes[i].deps) ok = ok && final[d];
    final[i] = ok;  // re-evaluation with stale inputs stays stale
  };
  for (long it = 1; it <= 1000; ++it) {
    for (int s : symbol_order) visit(s);
    for (int c : cells) visit(c);
    for (auto r = cells.rbegin(); r != cells.rend(); ++r) visit(*r);
    if (all_final()) return it;
  }
  return -1;
}

inline DagStats check_acyclic_sheets(int sheets, std::uint32_t seed) {
  DagStats st;
  std::mt19937 rng(seed);
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  std::uniform_real_distribution<double> weight(0.25, 2.0), constant(1.0, 10.0);
  for (int s = 0; s < sheets; ++s) {
    const int n = 4 + pick(20);
    std::vector<DagNode> nodes(n);  // index order is the topological order
    std::set<Coord> used;
    std::vector<int> symbol_order;
    for (int i = 0; i < n; ++i) {
      DagNode& node = nodes[i];
      node.constant = std::round(constant(rng) * 8) / 8;
      if (pick(5) == 0) {
        node.symbol = true;
        node.name = "sym" + std::to_string(i);
        symbol_order.push_back(i);
      } else {
        do node.cell = {pick(8), pick(8)};
        while (!used.insert(node.cell).second);
      }
      if (i > 0)
        for (int k = pick(4); k > 0; --k)
          node.deps.emplace_back(pick(i), std::round(weight(rng) * 8) / 8);
    }
    std::shuffle(symbol_order.begin(), symbol_order.end(), rng);

    // Oracle: evaluate in topological order, same operation order as the text.
    std::vector<double> want(n);
    for (int i = 0; i < n; ++i) {
      double v = nodes[i].constant;
      for (auto& [d, w] : nodes[i].deps) v = v + w * want[d];
      want[i] = v;
    }

    std::string script;
    auto define = [&](int i) {
      script += dag_ref(nodes[i]) + " = " + num_text(nodes[i].constant);
      for (auto& [d, w] : nodes[i].deps) script += " + " + num_text(w) + " * " + dag_ref(nodes[d]);
      script += ";\n";
    };
    for (int i : symbol_order) define(i);
    for (int i = 0; i < n; ++i)
      if (!nodes[i].symbol) define(i);

    Harness h;
    h.run(script + "eval 1000;");
    auto report = h.session.executor().last_report();
    ++st.values.cases;
    ++st.schedule.cases;
    ++st.within_two.cases;
    const std::string tag = "sheet " + std::to_string(s);
    if (!report || !report->converged) {
      st.values.fail(tag + ": did not converge");
      continue;
    }
    st.histogram[report->iterations]++;
    for (int i = 0; i < n; ++i) {
      double got = nodes[i].symbol ? h.session.sheet().symbol_value(nodes[i].name).number()
                                   : h.session.sheet().value(nodes[i].cell).number();
      if (!close(got, want[i])) {
        st.values.fail(tag + ": " + dag_ref(nodes[i]) + " = " + num_text(got) + ", oracle " +
                       num_text(want[i]));
        break;
      }
    }
    const long predicted = finality_iteration(nodes, symbol_order) + 1;
    if (report->iterations != predicted)
      st.schedule.fail(tag + ": converged after " + std::to_string(report->iterations) +
                       ", sweep analysis predicts " + std::to_string(predicted));
    if (report->iterations > 2)
      st.within_two.fail(tag + ": converged after " + std::to_string(report->iterations) +
                         " iterations");
  }
  return st;
}

// ---------------------------------------------------------------------------
// Range functions against brute force

inline CheckResult check_range_functions(int cases, std::uint32_t seed) {
  CheckResult res;
  std::mt19937 rng(seed);
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  std::uniform_real_distribution<double> val(-3, 3);
  static const char* names[] = {"sum", "count", "avg", "prod", "min", "max", "stdev", "majority"};
  for (int i = 0; i < cases; ++i) {
    Harness h;
    Sheet& sheet = h.session.sheet();
    for (int r = 0; r < 12; ++r)
      for (int c = 0; c < 12; ++c) {
        switch (pick(6)) {
          case 0: break;
          case 1: sheet.set_value({r, c}, val(rng)); break;  // value only: not defined
          case 2: sheet.set_formula({r, c}, make_node(StringLit{"t"})); sheet.set_value({r, c}, std::string("t")); break;
          case 3: sheet.set_formula({r, c}, make_node(NumberLit{0})); sheet.set_value({r, c}, 0.0); break;
          default: {
            double v = val(rng);
            sheet.set_formula({r, c}, make_node(NumberLit{v}));
            sheet.set_value({r, c}, v);
          }
        }
      }
    Coord a{pick(12), pick(12)}, b{pick(12), pick(12)};
    const bool extra = pick(3) == 0;
    const double scalar = std::round(val(rng) * 4) / 4;
    for (const char* fn : names) {
      ++res.cases;
      std::vector<double> xs;
      for (int r = std::min(a.row, b.row); r <= std::max(a.row, b.row); ++r)
        for (int c = std::min(a.col, b.col); c <= std::max(a.col, b.col); ++c)
          if (const Cell* cell = sheet.find({r, c}); cell && cell->formula)
            xs.push_back(cell->value.number());
      if (extra) xs.push_back(scalar);

      double want = 0;
      const double n = static_cast<double>(xs.size());
      const std::string f = fn;
      if (!xs.empty()) {
        if (f == "sum" || f == "avg") {
          for (double x : xs) want += x;
          if (f == "avg") want /= n;
        } else if (f == "count") {
          want = n;
        } else if (f == "prod") {
          want = 1;
          for (double x : xs) want *= x;
        } else if (f == "min") {
          want = *std::min_element(xs.begin(), xs.end());
        } else if (f == "max") {
          want = *std::max_element(xs.begin(), xs.end());
        } else if (f == "stdev") {
          if (xs.size() > 1) {
            double mean = 0, ss = 0;
            for (double x : xs) mean += x;
            mean /= n;
            for (double x : xs) ss += (x - mean) * (x - mean);
            want = std::sqrt(ss / (n - 1));
          }
        } else {
          double nz = 0;
          for (double x : xs) nz += x != 0;
          want = nz * 2 > n ? 1 : 0;
        }
      }
      std::string call = f + "(" + cell_name(a) + ":" + cell_name(b) +
                         (extra ? ", " + num_text(scalar) : std::string()) + ")";
      h.run("z900 = " + call + "; eval z900 1;");
      double got = h.value("z900");
      if (!close(got, want)) res.fail(call + " = " + num_text(got) + ", oracle " + num_text(want));
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// copy versus re-creating each destination formula by hand

inline CheckResult check_copy_equivalence(int cases, std::uint32_t seed) {
  CheckResult res;
  std::mt19937 rng(seed);
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  for (int i = 0; i < cases; ++i) {
    ++res.cases;
    const int h = 1 + pick(4), w = 1 + pick(4);
    Coord src{20 + pick(8), pick(8)};
    Coord dst{100 + pick(20), 20 + pick(8)};
    auto corners = [&](Coord at) {
      Coord far{at.row + h - 1, at.col + w - 1};
      switch (pick(4)) {
        case 0: return ResolvedRange{at, far};
        case 1: return ResolvedRange{far, at};
        case 2: return ResolvedRange{{at.row, far.col}, {far.row, at.col}};
        default: return ResolvedRange{{far.row, at.col}, {at.row, far.col}};
      }
    };
    ResolvedRange s = corners(src);
    const int layout = pick(4);
    ResolvedRange d = layout == 0   ? ResolvedRange{s.start, s.end}
                      : layout == 1 ? ResolvedRange{s.end, s.start}
                                    : corners(dst);
    if (layout < 2) {  // same corner pattern, moved
      d.start = {d.start.row - src.row + dst.row, d.start.col - src.col + dst.col};
      d.end = {d.end.row - src.row + dst.row, d.end.col - src.col + dst.col};
    }
    const Direction dir = pick(2) ? Direction::ByRows : Direction::ByCols;

    // Each source cell: terms addressed relative to its owner, fixed, or mixed.
    struct Term {
      int kind;  // 0 relative, 1 fixed, 2 fixed column, 3 fixed row
      int dr, dc;
      Coord fixed;
      double w;
    };
    std::map<Coord, std::vector<Term>> templates;
    auto text_at = [&](const std::vector<Term>& terms, Coord owner) {
      std::string t = "1";
      for (auto& term : terms) {
        Coord rel{owner.row + term.dr, owner.col + term.dc};
        std::string ref;
        switch (term.kind) {
          case 0: ref = cell_name(rel); break;
          case 1: ref = "$" + column_letters(term.fixed.col) + "$" + std::to_string(term.fixed.row); break;
          case 2: ref = "$" + column_letters(term.fixed.col) + std::to_string(rel.row); break;
          default: ref = column_letters(rel.col) + "$" + std::to_string(term.fixed.row); break;
        }
        t += " + " + num_text(term.w) + " * " + ref;
      }
      return t;
    };

    std::string data;
    for (int r = 0; r < 10; ++r)
      for (int c = 0; c < 10; ++c) data += cell_name({r, c}) + " = " + std::to_string(pick(50)) + ";";

    auto src_cells = traverse(s, dir);
    auto dst_cells = traverse(d, dir);
    std::string base = data, manual = data;
    for (Coord c : src_cells) {
      std::vector<Term> terms;
      for (int k = 1 + pick(3); k > 0; --k) {
        Coord target{pick(10), pick(10)};
        terms.push_back({pick(4), target.row - c.row, target.col - c.col, target, 0.5 * (1 + pick(4))});
      }
      templates[c] = terms;
      base += cell_name(c) + " = " + text_at(terms, c) + ";";
    }
    manual = base;
    for (std::size_t k = 0; k < dst_cells.size(); ++k)
      manual += cell_name(dst_cells[k]) + " = " + text_at(templates[src_cells[k]], dst_cells[k]) + ";";
    const char* dir_word = dir == Direction::ByRows ? "byrows" : "bycols";
    std::string copy = base + "copy " + dir_word + " " + cell_name(d.start) + ":" + cell_name(d.end) +
                       " " + cell_name(s.start) + ":" + cell_name(s.end) + ";";

    Harness a, b;
    a.run(copy + "eval 10;");
    b.run(manual + "eval 10;");
    for (Coord c : dst_cells) {
      double x = a.session.sheet().value(c).number(), y = b.session.sheet().value(c).number();
      if (!Value(x).same_as(Value(y))) {
        res.fail(copy.substr(data.size()) + ": " + cell_name(c) + " " + num_text(x) + " vs " + num_text(y));
        break;
      }
    }
    // Every destination shares its source's formula object.
    for (std::size_t k = 0; k < dst_cells.size(); ++k)
      if (a.session.sheet().find(dst_cells[k])->formula != a.session.sheet().find(src_cells[k])->formula) {
        res.fail("destination " + cell_name(dst_cells[k]) + " does not share its source formula");
        break;
      }
  }
  return res;
}

}  // namespace ss::test
