#include "ss/eval.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <type_traits>

namespace ss {

std::string ConvergenceReport::message() const {
  return std::string("ss_eval: ") + (converged ? "converged" : "still changing") + " after " +
         std::to_string(iterations) + " iterations";
}

Snapshot snapshot(const Sheet& sheet) {
  Snapshot s;
  s.cells.reserve(sheet.cells().size());
  for (const auto& [c, cell] : sheet.cells())
    if (cell.occupied()) s.cells.emplace_back(c, cell.value);
  s.symbols.reserve(sheet.symbols().size());
  for (const auto& sym : sheet.symbols()) s.symbols.emplace_back(sym.name, sym.value);
  return s;
}

bool detect_change(const Snapshot& before, const Snapshot& after) {
  if (before.cells.size() != after.cells.size() || before.symbols.size() != after.symbols.size())
    return true;
  for (std::size_t i = 0; i < before.cells.size(); ++i) {
    if (before.cells[i].first != after.cells[i].first) return true;
    if (!before.cells[i].second.same_as(after.cells[i].second)) return true;
  }
  for (std::size_t i = 0; i < before.symbols.size(); ++i) {
    if (before.symbols[i].first != after.symbols[i].first) return true;
    if (!before.symbols[i].second.same_as(after.symbols[i].second)) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Operators

namespace {

bool truth(double v) { return v != 0.0; }
double flag(bool b) { return b ? 1.0 : 0.0; }

// Shift counts are truncated to an integer exponent.
int exponent(double n) {
  if (std::isnan(n)) return 0;
  return static_cast<int>(std::clamp(std::trunc(n), -100000.0, 100000.0));
}

double apply(BinaryOp op, double l, double r) {
  switch (op) {
    case BinaryOp::Mul: return l * r;
    case BinaryOp::Div: return l / r;
    case BinaryOp::Mod: return std::fmod(l, r);
    case BinaryOp::Add: return l + r;
    case BinaryOp::Sub: return l - r;
    case BinaryOp::Shl: return std::ldexp(l, exponent(r));
    case BinaryOp::Shr: return std::ldexp(l, -exponent(r));
    case BinaryOp::Lt: return flag(l < r);
    case BinaryOp::Le: return flag(l <= r);
    case BinaryOp::Gt: return flag(l > r);
    case BinaryOp::Ge: return flag(l >= r);
    case BinaryOp::Eq: return flag(l == r);
    case BinaryOp::Ne: return flag(l != r);
    case BinaryOp::BitAnd:
    case BinaryOp::And: return flag(truth(l) && truth(r));
    case BinaryOp::BitXor: return flag(truth(l) != truth(r));
    case BinaryOp::BitOr:
    case BinaryOp::Or: return flag(truth(l) || truth(r));
  }
  return 0.0;
}

BinaryOp compound(AssignOp op) {
  switch (op) {
    case AssignOp::Add: return BinaryOp::Add;
    case AssignOp::Sub: return BinaryOp::Sub;
    case AssignOp::Mul: return BinaryOp::Mul;
    case AssignOp::Div: return BinaryOp::Div;
    case AssignOp::Mod: return BinaryOp::Mod;
    case AssignOp::Shl: return BinaryOp::Shl;
    case AssignOp::Shr: return BinaryOp::Shr;
    case AssignOp::And: return BinaryOp::BitAnd;
    case AssignOp::Xor: return BinaryOp::BitXor;
    case AssignOp::Or: return BinaryOp::BitOr;
    case AssignOp::Set: break;
  }
  return BinaryOp::Add;
}

}  // namespace

// ---------------------------------------------------------------------------
// EvalContext

Value EvalContext::value(const ExprNode& node) { return ev_->eval_tree(node, owner_); }

void EvalContext::assign(const ExprNode& target, Value v) { ev_->write(target, owner_, std::move(v)); }

std::vector<double> EvalContext::collect(std::span<const ExprPtr> args) {
  std::vector<double> out;
  const Sheet& sheet = ev_->sheet_;
  auto add_cell = [&](Coord c) {
    const Cell* cell = sheet.find(c);
    if (cell && cell->defined()) out.push_back(cell->value.number());
  };
  for (const auto& arg : args) {
    if (auto r = arg->as<RangeExpr>()) {
      auto rr = resolve(r->range, owner_);
      if (!rr) continue;
      for (Coord c : traverse(*rr, Direction::ByRows)) add_cell(c);
    } else if (auto c = arg->as<CellRefExpr>()) {
      if (auto rc = c->ref.resolve(owner_)) add_cell(*rc);
    } else {
      out.push_back(number(*arg));
    }
  }
  return out;
}

Rng& EvalContext::rng() { return ev_->sheet_.rng; }

void EvalContext::diagnose(const ExprNode& node, std::string_view message) {
  ev_->diagnose(node, message);
}

// ---------------------------------------------------------------------------
// Evaluator

void Evaluator::diagnose(const ExprNode& node, std::string_view message) {
  if (reported_.emplace(node.id(), std::string(message)).second) diag_.error(message);
}

Value Evaluator::read(const ExprNode& lvalue, Coord owner) {
  if (auto c = lvalue.as<CellRefExpr>()) {
    auto rc = c->ref.resolve(owner);
    return rc ? sheet_.value(*rc) : Value{};
  }
  return sheet_.symbol_value(lvalue.as<SymbolRef>()->name);
}

void Evaluator::write(const ExprNode& lvalue, Coord owner, Value v) {
  if (auto c = lvalue.as<CellRefExpr>()) {
    if (auto rc = c->ref.resolve(owner)) sheet_.set_value(*rc, std::move(v));
    return;
  }
  if (auto s = lvalue.as<SymbolRef>()) {
    if (constant_value(s->name)) {
      diagnose(lvalue, "cannot assign to constant '" + s->name + "'");
      return;
    }
    sheet_.set_symbol_value(s->name, std::move(v));
    return;
  }
  diagnose(lvalue, "assignment to a non-lvalue");
}

Value Evaluator::eval_tree(const ExprNode& node, Coord owner) {
  auto num = [&](const ExprPtr& e) { return eval_tree(*e, owner).number(); };
  return std::visit(
      [&](const auto& n) -> Value {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, NumberLit>) {
          return n.value;
        } else if constexpr (std::is_same_v<T, StringLit>) {
          return n.text;
        } else if constexpr (std::is_same_v<T, CellRefExpr> || std::is_same_v<T, SymbolRef>) {
          return read(node, owner);
        } else if constexpr (std::is_same_v<T, Unary>) {
          double v = num(n.operand);
          switch (n.op) {
            case UnaryOp::Plus: return v;
            case UnaryOp::Minus: return -v;
            case UnaryOp::Not:
            case UnaryOp::Complement: return flag(!truth(v));
          }
          return 0.0;
        } else if constexpr (std::is_same_v<T, Binary>) {
          if (n.op == BinaryOp::And) {
            if (!truth(num(n.lhs))) return 0.0;
            return flag(truth(num(n.rhs)));
          }
          if (n.op == BinaryOp::Or) {
            if (truth(num(n.lhs))) return 1.0;
            return flag(truth(num(n.rhs)));
          }
          double l = num(n.lhs);
          return apply(n.op, l, num(n.rhs));
        } else if constexpr (std::is_same_v<T, Ternary>) {
          return truth(num(n.cond)) ? eval_tree(*n.then, owner) : eval_tree(*n.otherwise, owner);
        } else if constexpr (std::is_same_v<T, Assign>) {
          Value rhs = eval_tree(*n.value, owner);
          if (n.op != AssignOp::Set)
            rhs = apply(compound(n.op), read(*n.target, owner).number(), rhs.number());
          write(*n.target, owner, rhs);
          return rhs;
        } else if constexpr (std::is_same_v<T, Step>) {
          double old = read(*n.target, owner).number();
          double updated = n.increment ? old + 1 : old - 1;
          write(*n.target, owner, updated);
          return n.prefix ? updated : old;
        } else if constexpr (std::is_same_v<T, Call>) {
          return eval_call(n, node, owner);
        } else {
          diagnose(node, "a range or list cannot be used as a number");
          return 0.0;
        }
      },
      node.data());
}

Value Evaluator::eval_call(const Call& call, const ExprNode& node, Coord owner) {
  const FunctionEntry* f = functions_.find(call.name);
  if (!f) {
    diagnose(node, "unknown function '" + call.name + "'");
    return 0.0;
  }
  const int arity = f->manifest.arity;
  if (arity != kVariadic && static_cast<int>(call.args.size()) != arity) {
    diagnose(node, call.name + "() expects " + std::to_string(arity) + " argument" +
                       (arity == 1 ? "" : "s") + ", got " + std::to_string(call.args.size()));
    return 0.0;
  }
  if (f->lvalue_slot && !call.args[*f->lvalue_slot]->is_lvalue()) {
    diagnose(node, "argument " + std::to_string(*f->lvalue_slot + 1) + " of " + call.name +
                       "() must be a cell or symbol");
    return 0.0;
  }
  EvalContext ctx(*this, owner);
  try {
    return f->impl(call.args, ctx);
  } catch (const std::exception& e) {
    diagnose(node, call.name + "(): " + e.what());
    return 0.0;
  }
}

void Evaluator::eval_symbol_table() {
  // Symbols may be appended while evaluating (writes to new names).
  for (std::size_t i = 0; i < sheet_.symbols().size(); ++i) {
    ExprPtr f = sheet_.symbols()[i].formula;
    if (!f) continue;
    Value v = eval_tree(*f, kOrigin);
    sheet_.symbols()[i].value = std::move(v);
  }
}

void Evaluator::eval_cell(Coord c) {
  const Cell* cell = sheet_.find(c);
  if (!cell || !cell->formula) return;
  ExprPtr f = cell->formula;
  Value v = eval_tree(*f, c);
  sheet_.set_value(c, std::move(v));
}

template <typename Pass>
ConvergenceReport Evaluator::iterate(long iterations, Pass&& pass) {
  Snapshot before = snapshot(sheet_);
  for (long k = 1; k <= iterations; ++k) {
    diag_.trace("eval iteration " + std::to_string(k));
    eval_symbol_table();
    pass();
    Snapshot after = snapshot(sheet_);
    if (!detect_change(before, after)) return {k, true};
    before = std::move(after);
  }
  return {iterations, false};
}

ConvergenceReport Evaluator::eval_symbols(long iterations) {
  return iterate(iterations, [] {});
}

ConvergenceReport Evaluator::eval_sheet(long iterations) {
  std::vector<Coord> order;
  for (const auto& [c, cell] : sheet_.cells())
    if (cell.defined()) order.push_back(c);
  return iterate(iterations, [&] {
    for (Coord c : order) eval_cell(c);
    for (auto it = order.rbegin(); it != order.rend(); ++it) eval_cell(*it);
  });
}

ConvergenceReport Evaluator::eval_range(const ResolvedRange& range, Direction dir,
                                        long iterations) {
  std::vector<Coord> order;
  for (Coord c : traverse(range, dir)) {
    const Cell* cell = sheet_.find(c);
    if (cell && cell->defined()) order.push_back(c);
  }
  return iterate(iterations, [&] {
    for (Coord c : order) eval_cell(c);
  });
}

}  // namespace ss
