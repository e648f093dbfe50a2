#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <type_traits>

#include "ss/lexparse.hpp"

namespace ss {

std::string format_number(double v) {
  if (std::isnan(v)) return "(HUGE_VAL-HUGE_VAL)";
  if (std::isinf(v)) return v > 0 ? "HUGE_VAL" : "-HUGE_VAL";
  char buf[40];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string render_cellref(const CellRef& ref, Coord owner, Notation mode) {
  auto c = ref.resolve(owner);
  if (!c) return "#REF";
  switch (mode) {
    case Notation::A0:
      return (ref.col.fixed ? "$" : "") + column_letters(c->col) + (ref.row.fixed ? "$" : "") +
             std::to_string(c->row);
    case Notation::RC:
      return "R" + std::to_string(c->row) + "C" + std::to_string(c->col);
    case Notation::CR:
      return "C" + std::to_string(c->col) + "R" + std::to_string(c->row);
  }
  return "#REF";
}

namespace {

class Renderer {
 public:
  Renderer(Coord owner, Notation mode) : owner_(owner), mode_(mode) {}

  std::string operator()(const ExprNode& node) const {
    return std::visit([&](const auto& n) { return render(n); }, node.data());
  }

 private:
  // Operator operands are always parenthesized.
  std::string operand(const ExprPtr& e) const {
    bool wrap = e->is_operator();
    if (auto n = e->as<NumberLit>()) wrap = std::signbit(n->value) || std::isnan(n->value);
    return wrap ? "(" + (*this)(*e) + ")" : (*this)(*e);
  }

  std::string render(const NumberLit& n) const { return format_number(n.value); }
  std::string render(const StringLit& s) const { return s.quote + s.text + s.quote; }
  std::string render(const CellRefExpr& c) const { return render_cellref(c.ref, owner_, mode_); }
  std::string render(const SymbolRef& s) const { return s.name; }
  std::string render(const Unary& u) const { return spelling(u.op) + operand(u.operand); }
  std::string render(const Binary& b) const {
    return operand(b.lhs) + spelling(b.op) + operand(b.rhs);
  }
  std::string render(const Ternary& t) const {
    return operand(t.cond) + " ? " + operand(t.then) + " : " + operand(t.otherwise);
  }
  std::string render(const Assign& a) const {
    return (*this)(*a.target) + " " + spelling(a.op) + " " + operand(a.value);
  }
  std::string render(const Step& s) const {
    const char* op = s.increment ? "++" : "--";
    return s.prefix ? op + (*this)(*s.target) : (*this)(*s.target) + op;
  }
  std::string render(const Call& c) const {
    std::string out = c.name + "(";
    for (std::size_t i = 0; i < c.args.size(); ++i) {
      if (i) out += ", ";
      out += (*this)(*c.args[i]);
    }
    return out + ")";
  }
  std::string render(const RangeExpr& r) const {
    return render_cellref(r.range.start, owner_, mode_) + ":" +
           render_cellref(r.range.end, owner_, mode_);
  }
  std::string render(const ListExpr& l) const {
    std::string out = "{";
    for (std::size_t i = 0; i < l.items.size(); ++i) {
      if (i) out += ", ";
      out += (*this)(*l.items[i]);
    }
    return out + "}";
  }

  Coord owner_;
  Notation mode_;
};

}  // namespace

std::string render_formula(const ExprNode& node, Coord owner, Notation mode) {
  return Renderer(owner, mode)(node);
}

}  // namespace ss
