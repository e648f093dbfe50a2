#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "ss/lexparse.hpp"
#include "ss/model.hpp"

namespace ss {

namespace {

std::string lower(std::string_view s) {
  std::string u(s);
  for (auto& c : u) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return u;
}

std::optional<AssignOp> assign_op(const Token& t) {
  if (t.kind != TokenKind::Operator) return std::nullopt;
  static const std::pair<std::string_view, AssignOp> kOps[] = {
      {"=", AssignOp::Set},    {"+=", AssignOp::Add},   {"-=", AssignOp::Sub},
      {"*=", AssignOp::Mul},   {"/=", AssignOp::Div},   {"%=", AssignOp::Mod},
      {"<<=", AssignOp::Shl},  {">>=", AssignOp::Shr},  {"&=", AssignOp::And},
      {"^=", AssignOp::Xor},   {"|=", AssignOp::Or}};
  for (const auto& [text, op] : kOps)
    if (t.text == text) return op;
  return std::nullopt;
}

struct BinaryLevel {
  std::initializer_list<std::pair<std::string_view, BinaryOp>> ops;
};

// Lowest to highest precedence, as in C.
const BinaryLevel kLevels[] = {
    {{{"||", BinaryOp::Or}}},
    {{{"&&", BinaryOp::And}}},
    {{{"|", BinaryOp::BitOr}}},
    {{{"^", BinaryOp::BitXor}}},
    {{{"&", BinaryOp::BitAnd}}},
    {{{"==", BinaryOp::Eq}, {"!=", BinaryOp::Ne}}},
    {{{"<", BinaryOp::Lt}, {"<=", BinaryOp::Le}, {">", BinaryOp::Gt}, {">=", BinaryOp::Ge}}},
    {{{"<<", BinaryOp::Shl}, {">>", BinaryOp::Shr}}},
    {{{"+", BinaryOp::Add}, {"-", BinaryOp::Sub}}},
    {{{"*", BinaryOp::Mul}, {"/", BinaryOp::Div}, {"%", BinaryOp::Mod}}},
};
constexpr std::size_t kLevelCount = std::size(kLevels);

class Parser {
 public:
  explicit Parser(std::span<const Token> tokens) : toks_(tokens) {}

  Statement statement() {
    Statement st;
    st.line = peek().line;
    if (peek().kind == TokenKind::Keyword) {
      st.body = command();
    } else if (peek().kind == TokenKind::CellRef && peek(1).is_op(":")) {
      st.body = range_list();
    } else {
      st.body = formula_assignment();
    }
    end_statement();
    return st;
  }

  ExprPtr full_expression() {
    auto e = assignment();
    end_statement();
    if (peek().kind != TokenKind::End) fail("unexpected " + describe(peek()));
    return e;
  }

 private:
  // --- token access

  const Token& peek(std::size_t ahead = 0) const {
    static const Token kEnd{};
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : kEnd;
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size()) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == TokenKind::End || peek().is_op(";"); }
  bool accept(std::string_view op) {
    if (!peek().is_op(op)) return false;
    ++pos_;
    return true;
  }
  void expect(std::string_view op) {
    if (!accept(op)) fail("expected '" + std::string(op) + "' before " + describe(peek()));
  }
  void end_statement() {
    if (peek().kind == TokenKind::End) return;
    if (peek().is_op(":"))
      fail("a range is only allowed as a function argument or in a range assignment");
    if (!peek().is_op(";")) fail("expected ';' before " + describe(peek()));
    ++pos_;
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg); }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case TokenKind::End: return "end of input";
      case TokenKind::String: return "string";
      default: return "'" + t.text + "'";
    }
  }

  // --- expressions

  ExprPtr assignment() {
    auto lhs = conditional();
    if (auto op = assign_op(peek())) {
      ++pos_;
      check_target(*lhs, "assignment");
      auto rhs = assignment();
      return make_node(Assign{*op, lhs, rhs});
    }
    return lhs;
  }

  void check_target(const ExprNode& target, std::string_view what) const {
    if (!target.is_lvalue()) fail(std::string(what) + " to a non-lvalue");
    if (auto s = target.as<SymbolRef>(); s && constant_value(s->name))
      fail(std::string(what) + " to constant '" + s->name + "'");
  }

  ExprPtr conditional() {
    auto cond = binary(0);
    if (!accept("?")) return cond;
    auto then = assignment();
    if (!accept(":")) fail("expected ':' in conditional expression");
    auto otherwise = conditional();
    return make_node(Ternary{cond, then, otherwise});
  }

  ExprPtr binary(std::size_t level) {
    if (level == kLevelCount) return unary();
    auto lhs = binary(level + 1);
    for (;;) {
      const Token& t = peek();
      if (t.kind != TokenKind::Operator) return lhs;
      auto& ops = kLevels[level].ops;
      auto it = std::find_if(ops.begin(), ops.end(), [&](auto& p) { return p.first == t.text; });
      if (it == ops.end()) return lhs;
      ++pos_;
      auto rhs = binary(level + 1);
      lhs = make_node(Binary{it->second, lhs, rhs});
    }
  }

  ExprPtr unary() {
    const Token& t = peek();
    if (t.kind == TokenKind::Operator) {
      if (t.text == "++" || t.text == "--") {
        bool inc = t.text == "++";
        ++pos_;
        auto target = unary();
        check_target(*target, inc ? "increment" : "decrement");
        return make_node(Step{inc, true, target});
      }
      std::optional<UnaryOp> op;
      if (t.text == "+") op = UnaryOp::Plus;
      if (t.text == "-") op = UnaryOp::Minus;
      if (t.text == "!") op = UnaryOp::Not;
      if (t.text == "~") op = UnaryOp::Complement;
      if (op) {
        ++pos_;
        return make_node(Unary{*op, unary()});
      }
    }
    return postfix();
  }

  ExprPtr postfix() {
    auto e = primary();
    while (peek().is_op("++") || peek().is_op("--")) {
      bool inc = next().text == "++";
      check_target(*e, inc ? "increment" : "decrement");
      e = make_node(Step{inc, false, e});
    }
    return e;
  }

  ExprPtr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::Number:
        ++pos_;
        return make_node(NumberLit{t.number});
      case TokenKind::String:
        ++pos_;
        return make_node(StringLit{t.text, t.quote});
      case TokenKind::CellRef: {
        ++pos_;
        return make_node(CellRefExpr{parse_cellref(t.text)});
      }
      case TokenKind::Identifier:
      case TokenKind::Keyword: {
        ++pos_;
        if (accept("(")) return call(t.text);
        return make_node(SymbolRef{t.text});
      }
      case TokenKind::Invalid:
        fail(t.text);
      default:
        break;
    }
    if (accept("(")) {
      auto e = assignment();
      expect(")");
      return e;
    }
    fail("unexpected " + describe(t));
  }

  ExprPtr call(const std::string& name) {
    Call c{name, {}};
    if (accept(")")) return make_node(std::move(c));
    do {
      if (peek().kind == TokenKind::CellRef && peek(1).is_op(":")) {
        c.args.push_back(make_node(RangeExpr{range()}));
      } else {
        c.args.push_back(assignment());
      }
    } while (accept(","));
    expect(")");
    return make_node(std::move(c));
  }

  Range range() {
    const Token& s = peek();
    if (s.kind != TokenKind::CellRef) fail("expected a cell or range before " + describe(s));
    ++pos_;
    Range r{parse_cellref(s.text), parse_cellref(s.text)};
    if (accept(":")) {
      const Token& e = peek();
      if (e.kind != TokenKind::CellRef) fail("expected a cell after ':'");
      ++pos_;
      r.end = parse_cellref(e.text);
    }
    return r;
  }

  // --- statements

  FormulaAssignment formula_assignment() {
    auto e = assignment();
    ExprPtr target;
    ExprPtr formula;
    bool self_update = true;
    if (auto a = e->as<Assign>()) {
      self_update = a->op != AssignOp::Set;
      target = a->target;
      formula = a->op == AssignOp::Set ? a->value : e;
    } else if (auto s = e->as<Step>()) {
      target = s->target;
      formula = e;
    } else {
      fail("statement does not assign to a cell or symbol");
    }

    if (auto sym = target->as<SymbolRef>()) return {sym->name, formula};

    const CellRef& ref = target->as<CellRefExpr>()->ref;
    auto owner = ref.resolve(kOrigin);
    if (!owner) fail("assignment target is outside the sheet");
    formula = rebase(formula, kOrigin, *owner);
    if (self_update) formula = anchor_target(formula);
    return {*owner, formula};
  }

  // The root target of a side-effecting cell formula always names its owner.
  static ExprPtr anchor_target(const ExprPtr& formula) {
    auto self = [](const ExprPtr& t) {
      CellRef r = t->as<CellRefExpr>()->ref;
      if (!r.row.fixed) r.row.value = 0;
      if (!r.col.fixed) r.col.value = 0;
      return make_node(CellRefExpr{r});
    };
    if (auto a = formula->as<Assign>()) return make_node(Assign{a->op, self(a->target), a->value});
    auto s = formula->as<Step>();
    return make_node(Step{s->increment, s->prefix, self(s->target)});
  }

  RangeListAssignment range_list() {
    RangeListAssignment out;
    out.range = range();
    if (!accept("=")) fail("expected '=' after range");
    if (!accept("{")) fail("a range can only be assigned a { list }");
    if (!peek().is_op("}")) {
      do {
        out.items.push_back(conditional());
      } while (accept(","));
    }
    expect("}");
    return out;
  }

  // --- commands

  std::optional<Direction> direction_option() {
    if (peek().is(TokenKind::Keyword, "byrows")) {
      ++pos_;
      return Direction::ByRows;
    }
    if (peek().is(TokenKind::Keyword, "bycols")) {
      ++pos_;
      return Direction::ByCols;
    }
    return std::nullopt;
  }

  bool at_direction() const {
    return peek().is(TokenKind::Keyword, "byrows") || peek().is(TokenKind::Keyword, "bycols");
  }

  void set_direction(std::optional<Direction>& slot) {
    auto d = direction_option();
    if (!d) return;
    if (slot && *slot != *d) fail("conflicting byrows/bycols options");
    slot = d;
  }

  // "fname", stdout or -
  std::optional<std::string> file_name() {
    const Token& t = peek();
    if (t.kind == TokenKind::String || t.is(TokenKind::Identifier, "stdout") ||
        t.is(TokenKind::Operator, "-")) {
      ++pos_;
      return t.kind == TokenKind::Operator ? "-" : t.text;
    }
    return std::nullopt;
  }

  long iteration_count() {
    const Token& t = next();
    double v = t.number;
    if (v < 1 || v != std::floor(v) || v > 1e9) fail("iteration count must be a positive integer");
    return static_cast<long>(v);
  }

  Command command() {
    const std::string kw = next().text;
    if (kw == "byrows") return DirectionCmd{Direction::ByRows};
    if (kw == "bycols") return DirectionCmd{Direction::ByCols};
    if (kw == "exit" || kw == "quit") return ExitCmd{};
    if (kw == "copy") {
      CopyCmd c;
      set_direction(c.direction);
      c.dest = range();
      set_direction(c.direction);
      c.src = range();
      set_direction(c.direction);
      return c;
    }
    if (kw == "debug") {
      if (at_end()) return DebugCmd{true};
      auto w = lower(next().text);
      if (w != "on" && w != "off") fail("debug expects on or off");
      return DebugCmd{w == "on"};
    }
    if (kw == "eval") {
      EvalCmd c;
      while (!at_end()) {
        const Token& t = peek();
        if (at_direction()) {
          set_direction(c.direction);
        } else if (t.is(TokenKind::Identifier, "symbols")) {
          if (c.symbols || c.range) fail("eval takes a range or symbols, not both");
          ++pos_;
          c.symbols = true;
        } else if (t.kind == TokenKind::CellRef) {
          if (c.symbols || c.range) fail("eval takes a range or symbols, not both");
          c.range = range();
        } else if (t.kind == TokenKind::Number) {
          if (c.iterations) fail("eval takes one iteration count");
          c.iterations = iteration_count();
        } else {
          fail("unexpected " + describe(t) + " in eval");
        }
      }
      return c;
    }
    if (kw == "fill") {
      FillCmd c;
      set_direction(c.direction);
      c.range = range();
      set_direction(c.direction);
      c.start = conditional();
      expect(",");
      c.increment = conditional();
      set_direction(c.direction);
      return c;
    }
    if (kw == "format") return format_command();
    if (kw == "load") {
      LoadCmd c;
      while (!at_end()) {
        if (peek().kind != TokenKind::String) fail("load expects quoted file names");
        c.files.push_back(next().text);
      }
      if (c.files.empty()) fail("load expects at least one file name");
      return c;
    }
    if (kw == "output") {
      auto f = file_name();
      if (!f) fail("output expects a file name");
      return OutputCmd{*f};
    }
    if (kw == "plot" || kw == "plot2d" || kw == "plot3d") {
      PlotCmd c;
      c.kind = kw == "plot3d" ? PlotKind::Plot3d : kw == "plot2d" ? PlotKind::Plot2d : PlotKind::Plot;
      set_direction(c.direction);
      c.file = file_name();
      set_direction(c.direction);
      if (peek().kind == TokenKind::CellRef) c.range = range();
      set_direction(c.direction);
      return c;
    }
    if (kw == "print") return print_command();
    if (kw == "srand") return SrandCmd{conditional()};
    fail("'" + kw + "' is not a command");
  }

  Command format_command() {
    const Token& t = peek();
    auto is_end_after = [&](std::size_t n) {
      const Token& a = peek(n);
      return a.kind == TokenKind::End || a.is_op(";");
    };
    if (t.kind == TokenKind::CellRef && lower(t.text) == "a0" && is_end_after(1)) {
      ++pos_;
      return NotationCmd{Notation::A0};
    }
    if (t.kind == TokenKind::Identifier && is_end_after(1)) {
      auto w = lower(t.text);
      if (w == "rc" || w == "cr") {
        ++pos_;
        return NotationCmd{w == "rc" ? Notation::RC : Notation::CR};
      }
    }
    FormatCmd c;
    if (t.kind == TokenKind::CellRef) {
      c.scope = FormatCmd::Scope::Cells;
      c.range = range();
    } else if (t.is(TokenKind::Identifier, "row") || t.is(TokenKind::Identifier, "col")) {
      bool row = t.text == "row";
      ++pos_;
      c.scope = row ? FormatCmd::Scope::Row : FormatCmd::Scope::Col;
      const Token& idx = next();
      if (idx.kind == TokenKind::Number && idx.number == std::floor(idx.number) &&
          idx.number >= 0 && idx.number < (row ? kRows : kCols)) {
        c.index = static_cast<int>(idx.number);
      } else if (!row && idx.kind == TokenKind::Identifier && column_index(idx.text)) {
        c.index = *column_index(idx.text);
      } else {
        fail(std::string("bad ") + (row ? "row" : "column") + " for format");
      }
    }
    if (peek().kind != TokenKind::String) fail("format expects A0, RC, CR or a quoted format");
    c.format = next().text;
    if (!valid_number_format(c.format)) fail("malformed format string \"" + c.format + "\"");
    return c;
  }

  Command print_command() {
    PrintCmd c;
    static const std::pair<std::string_view, PrintSelector> kSelectors[] = {
        {"macros", PrintSelector::Macros},       {"symbols", PrintSelector::Symbols},
        {"formulas", PrintSelector::Formulas},   {"values", PrintSelector::Values},
        {"formats", PrintSelector::Formats},     {"pointers", PrintSelector::Pointers},
        {"constants", PrintSelector::Constants}, {"functions", PrintSelector::Functions}};
    set_direction(c.direction);
    c.file = file_name();
    while (!at_end()) {
      const Token& t = peek();
      if (at_direction()) {
        set_direction(c.direction);
      } else if (t.kind == TokenKind::CellRef) {
        if (c.range) fail("print takes one range");
        c.range = range();
      } else if (t.kind == TokenKind::Identifier && t.text == "all") {
        ++pos_;
        for (const auto& [_, sel] : kSelectors) c.selectors.push_back(sel);
      } else if (t.kind == TokenKind::Identifier) {
        auto it = std::find_if(std::begin(kSelectors), std::end(kSelectors),
                               [&](auto& p) { return p.first == t.text; });
        if (it == std::end(kSelectors)) fail("unknown print selector '" + t.text + "'");
        ++pos_;
        c.selectors.push_back(it->second);
      } else {
        fail("unexpected " + describe(t) + " in print");
      }
    }
    if (c.selectors.empty()) c.selectors.push_back(PrintSelector::Values);
    return c;
  }

  std::span<const Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Statement parse_statement(std::span<const Token> tokens) {
  return Parser(tokens).statement();
}

ExprPtr parse_expression(std::span<const Token> tokens) {
  return Parser(tokens).full_expression();
}

ExprPtr parse_expression(std::string_view text) {
  auto toks = tokenize(text);
  return parse_expression(toks);
}

}  // namespace ss
