#pragma once

#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ss/diagnostics.hpp"
#include "ss/expr.hpp"
#include "ss/funcs.hpp"
#include "ss/model.hpp"

namespace ss {

struct ConvergenceReport {
  long iterations = 0;
  bool converged = false;

  std::string message() const;
};

// Values of every occupied cell and every symbol.
struct Snapshot {
  std::vector<std::pair<Coord, Value>> cells;
  std::vector<std::pair<std::string, Value>> symbols;
};

Snapshot snapshot(const Sheet& sheet);
bool detect_change(const Snapshot& before, const Snapshot& after);

class Evaluator;

// What a function implementation sees while it runs.
class EvalContext {
 public:
  EvalContext(Evaluator& evaluator, Coord owner) : ev_(&evaluator), owner_(owner) {}

  Coord owner() const { return owner_; }

  Value value(const ExprNode& node);
  double number(const ExprNode& node) { return value(node).number(); }

  // node must be a cell or symbol reference.
  void assign(const ExprNode& target, Value v);

  // Range-function arguments: ranges and bare cell references contribute
  // their defined cells, other expressions their value.
  std::vector<double> collect(std::span<const ExprPtr> args);

  Rng& rng();
  void diagnose(const ExprNode& node, std::string_view message);

 private:
  Evaluator* ev_;
  Coord owner_;
};

class Evaluator {
 public:
  Evaluator(Sheet& sheet, const FunctionRegistry& functions, Diagnostics& diag)
      : sheet_(sheet), functions_(functions), diag_(diag) {}

  Value eval_tree(const ExprNode& node, Coord owner);

  // Each iteration evaluates the symbol table in definition order.
  ConvergenceReport eval_symbols(long iterations);

  // Each iteration: symbols, a forward row-major sweep over the used extent,
  // then the same sweep in reverse. Stops after an iteration with no change.
  ConvergenceReport eval_sheet(long iterations = 2);

  // Each iteration: symbols, then one directed pass over the range.
  ConvergenceReport eval_range(const ResolvedRange& range, Direction dir,
                               long iterations);

  // Resets per-command diagnostic de-duplication.
  void begin_command() { reported_.clear(); }

  Sheet& sheet() { return sheet_; }
  const FunctionRegistry& functions() const { return functions_; }
  void diagnose(const ExprNode& node, std::string_view message);

 private:
  friend class EvalContext;

  Value eval_call(const Call& call, const ExprNode& node, Coord owner);
  Value read(const ExprNode& lvalue, Coord owner);
  void write(const ExprNode& lvalue, Coord owner, Value v);
  void eval_symbol_table();
  void eval_cell(Coord c);
  template <typename Pass>
  ConvergenceReport iterate(long iterations, Pass&& pass);

  Sheet& sheet_;
  const FunctionRegistry& functions_;
  Diagnostics& diag_;
  std::set<std::pair<std::uint64_t, std::string>> reported_;
};

}  // namespace ss
