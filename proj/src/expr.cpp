#include "ss/expr.hpp"

#include <atomic>
#include <type_traits>

namespace ss {

namespace {
std::atomic<std::uint64_t> next_id{1};
}

ExprNode::ExprNode(NodeData data) : data_(std::move(data)), id_(next_id++) {}

namespace {

Axis shift(Axis a, bool positional, int from, int to) {
  if (!a.fixed && positional) a.value += from - to;
  return a;
}

CellRef rebase_ref(CellRef r, Coord from, Coord to) {
  bool positional = r.notation == Notation::A0;
  r.row = shift(r.row, positional, from.row, to.row);
  r.col = shift(r.col, positional, from.col, to.col);
  return r;
}

}  // namespace

ExprPtr rebase(const ExprPtr& expr, Coord from, Coord to) {
  if (!expr) return expr;
  auto sub = [&](const ExprPtr& e) { return rebase(e, from, to); };
  return std::visit(
      [&](const auto& n) -> ExprPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, CellRefExpr>) {
          return make_node(CellRefExpr{rebase_ref(n.ref, from, to)});
        } else if constexpr (std::is_same_v<T, RangeExpr>) {
          return make_node(RangeExpr{
              Range{rebase_ref(n.range.start, from, to), rebase_ref(n.range.end, from, to)}});
        } else if constexpr (std::is_same_v<T, Unary>) {
          return make_node(Unary{n.op, sub(n.operand)});
        } else if constexpr (std::is_same_v<T, Binary>) {
          return make_node(Binary{n.op, sub(n.lhs), sub(n.rhs)});
        } else if constexpr (std::is_same_v<T, Ternary>) {
          return make_node(Ternary{sub(n.cond), sub(n.then), sub(n.otherwise)});
        } else if constexpr (std::is_same_v<T, Assign>) {
          return make_node(Assign{n.op, sub(n.target), sub(n.value)});
        } else if constexpr (std::is_same_v<T, Step>) {
          return make_node(Step{n.increment, n.prefix, sub(n.target)});
        } else if constexpr (std::is_same_v<T, Call>) {
          Call c{n.name, {}};
          for (const auto& a : n.args) c.args.push_back(sub(a));
          return make_node(std::move(c));
        } else if constexpr (std::is_same_v<T, ListExpr>) {
          ListExpr l;
          for (const auto& a : n.items) l.items.push_back(sub(a));
          return make_node(std::move(l));
        } else {
          return make_node(T(n));
        }
      },
      expr->data());
}

const char* spelling(UnaryOp op) {
  switch (op) {
    case UnaryOp::Plus: return "+";
    case UnaryOp::Minus: return "-";
    case UnaryOp::Not: return "!";
    case UnaryOp::Complement: return "~";
  }
  return "?";
}

const char* spelling(BinaryOp op) {
  switch (op) {
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Mod: return "%";
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Shl: return "<<";
    case BinaryOp::Shr: return ">>";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::BitAnd: return "&";
    case BinaryOp::BitXor: return "^";
    case BinaryOp::BitOr: return "|";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
  }
  return "?";
}

const char* spelling(AssignOp op) {
  switch (op) {
    case AssignOp::Set: return "=";
    case AssignOp::Add: return "+=";
    case AssignOp::Sub: return "-=";
    case AssignOp::Mul: return "*=";
    case AssignOp::Div: return "/=";
    case AssignOp::Mod: return "%=";
    case AssignOp::Shl: return "<<=";
    case AssignOp::Shr: return ">>=";
    case AssignOp::And: return "&=";
    case AssignOp::Xor: return "^=";
    case AssignOp::Or: return "|=";
  }
  return "?";
}

}  // namespace ss
