#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "ss/coord.hpp"

namespace ss {

class ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

enum class UnaryOp { Plus, Minus, Not, Complement };

// & ^ | are logical, not bitwise.
enum class BinaryOp {
  Mul, Div, Mod,
  Add, Sub,
  Shl, Shr,
  Lt, Le, Gt, Ge,
  Eq, Ne,
  BitAnd, BitXor, BitOr,
  And, Or,
};

enum class AssignOp { Set, Add, Sub, Mul, Div, Mod, Shl, Shr, And, Xor, Or };

struct NumberLit {
  double value;
};

struct StringLit {
  std::string text;
  char quote = '"';
};

struct CellRefExpr {
  CellRef ref;
};

struct SymbolRef {
  std::string name;
};

struct Unary {
  UnaryOp op;
  ExprPtr operand;
};

struct Binary {
  BinaryOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};

struct Ternary {
  ExprPtr cond;
  ExprPtr then;
  ExprPtr otherwise;
};

// target is always a CellRefExpr or SymbolRef node.
struct Assign {
  AssignOp op;
  ExprPtr target;
  ExprPtr value;
};

struct Step {
  bool increment;
  bool prefix;
  ExprPtr target;
};

struct Call {
  std::string name;
  std::vector<ExprPtr> args;
};

struct RangeExpr {
  Range range;
};

struct ListExpr {
  std::vector<ExprPtr> items;
};

using NodeData = std::variant<NumberLit, StringLit, CellRefExpr, SymbolRef,
                              Unary, Binary, Ternary, Assign, Step, Call,
                              RangeExpr, ListExpr>;

// Immutable formula tree node. Every node gets a process-unique id; the id of
// a formula's root is its identity when shared between cells.
class ExprNode {
 public:
  explicit ExprNode(NodeData data);

  const NodeData& data() const { return data_; }
  std::uint64_t id() const { return id_; }

  template <typename T>
  const T* as() const { return std::get_if<T>(&data_); }

  template <typename T>
  bool is() const { return std::holds_alternative<T>(data_); }

  bool is_lvalue() const { return is<CellRefExpr>() || is<SymbolRef>(); }
  bool is_operator() const {
    return is<Unary>() || is<Binary>() || is<Ternary>() || is<Assign>() ||
           is<Step>();
  }

 private:
  NodeData data_;
  std::uint64_t id_;
};

template <typename T>
ExprPtr make_node(T&& data) {
  return std::make_shared<const ExprNode>(NodeData(std::forward<T>(data)));
}

// Copies `expr`, re-anchoring relative references written against `from` so
// that they address the same absolute cells when owned by `to`.
ExprPtr rebase(const ExprPtr& expr, Coord from, Coord to);

// C operator spellings.
const char* spelling(UnaryOp op);
const char* spelling(BinaryOp op);
const char* spelling(AssignOp op);

}  // namespace ss
