#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "ss/coord.hpp"
#include "ss/expr.hpp"

namespace ss {

// ---------------------------------------------------------------------------
// Preprocessing: comments, backslash continuations, object-like #define.

struct Macro {
  std::string name;
  std::string replacement;
};

struct LogicalLine {
  std::string text;
  int line = 1;           // physical line the logical line starts on
  bool newline = false;   // source line was newline-terminated
};

class Preprocessor {
 public:
  using ErrorFn = std::function<void(int line, const std::string&)>;

  using MacroTable = std::vector<Macro>;

  // Preprocessors that share a table see each other's definitions.
  explicit Preprocessor(ErrorFn on_error = {},
                        std::shared_ptr<MacroTable> macros = nullptr)
      : on_error_(std::move(on_error)),
        macros_(macros ? std::move(macros) : std::make_shared<MacroTable>()) {}

  // Feeds one physical line (without its terminator). Returns the completed
  // logical line, if any. #define lines and joined prefixes return nothing.
  std::optional<LogicalLine> feed(std::string_view physical, int line_no,
                                  bool newline = true);

  // Flushes a pending continuation and reports an unterminated comment.
  std::optional<LogicalLine> finish();

  const MacroTable& macros() const { return *macros_; }

 private:
  std::string strip_comments(std::string_view text, int line_no);
  std::string expand(std::string_view text) const;
  bool try_define(std::string_view text);

  ErrorFn on_error_;
  std::shared_ptr<MacroTable> macros_;
  std::string pending_;
  int pending_line_ = 0;
  bool joining_ = false;
  bool in_block_comment_ = false;
  int comment_line_ = 0;
};

// Whole-text convenience wrapper around Preprocessor.
std::string preprocess(std::string_view source,
                       Preprocessor::ErrorFn on_error = {});

// ---------------------------------------------------------------------------
// Tokens

enum class TokenKind {
  Identifier, Keyword, CellRef, Number, String, Operator, Punct,
  Invalid,  // placeholder left where a lexical error was reported
  End,
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;  // contents for strings, canonical spelling for operators
  int line = 1;
  double number = 0.0;
  char quote = 0;

  bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
  bool is_op(std::string_view t) const {
    return (kind == TokenKind::Operator || kind == TokenKind::Punct) && text == t;
  }
};

class LexError : public ParseError {
 public:
  LexError(const std::string& what, int line) : ParseError(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

bool is_command_keyword(std::string_view word);

// Tokenizes preprocessed text. No End token is appended. Without `on_error`
// the first lexical error throws; with it, errors are reported and an
// Invalid token marks the spot.
std::vector<Token> tokenize(std::string_view text, int first_line = 1,
                            const std::function<void(const LexError&)>& on_error = {});

// ---------------------------------------------------------------------------
// Statements

enum class PrintSelector {
  Macros, Symbols, Formulas, Values, Formats, Pointers, Constants, Functions,
};

enum class PlotKind { Plot, Plot2d, Plot3d };

struct DirectionCmd { Direction direction; };
struct CopyCmd { Range dest; Range src; std::optional<Direction> direction; };
struct DebugCmd { bool on; };
struct EvalCmd {
  std::optional<Range> range;
  bool symbols = false;
  std::optional<long> iterations;
  std::optional<Direction> direction;
};
struct ExitCmd {};
struct FillCmd {
  Range range;
  ExprPtr start;
  ExprPtr increment;
  std::optional<Direction> direction;
};
struct NotationCmd { Notation notation; };
struct FormatCmd {
  enum class Scope { Global, Cells, Row, Col };
  Scope scope = Scope::Global;
  Range range{};  // Cells
  int index = 0;  // Row / Col
  std::string format;
};
struct LoadCmd { std::vector<std::string> files; };
struct OutputCmd { std::string file; };
struct PlotCmd {
  PlotKind kind = PlotKind::Plot;
  std::optional<std::string> file;
  std::optional<Range> range;
  std::optional<Direction> direction;
};
struct PrintCmd {
  std::optional<std::string> file;
  std::optional<Range> range;
  std::vector<PrintSelector> selectors;
  std::optional<Direction> direction;
};
struct SrandCmd { ExprPtr seed; };

using Command = std::variant<DirectionCmd, CopyCmd, DebugCmd, EvalCmd, ExitCmd,
                             FillCmd, NotationCmd, FormatCmd, LoadCmd,
                             OutputCmd, PlotCmd, PrintCmd, SrandCmd>;

// `lhs op= expr`, `++lhs` and friends. For plain `=` the formula is the right
// hand side; otherwise it is the whole side-effecting expression. Cell
// formulas are anchored at the target cell.
struct FormulaAssignment {
  std::variant<Coord, std::string> target;
  ExprPtr formula;
};

// `range = { item, ... }`. Items are anchored at the origin.
struct RangeListAssignment {
  Range range;
  std::vector<ExprPtr> items;
};

struct Statement {
  std::variant<FormulaAssignment, RangeListAssignment, Command> body;
  int line = 1;
};

// Parses one statement from `tokens` (which must end with ';' or be the full
// remaining input). Throws ParseError.
Statement parse_statement(std::span<const Token> tokens);

// Parses a standalone expression (no trailing ';'). Relative references are
// anchored at the origin. Throws ParseError.
ExprPtr parse_expression(std::span<const Token> tokens);
ExprPtr parse_expression(std::string_view text);

// Text of a formula as seen from `owner`.
std::string render_formula(const ExprNode& node, Coord owner, Notation mode);
std::string render_cellref(const CellRef& ref, Coord owner, Notation mode);

// Shortest decimal text that reads back as exactly `v`.
std::string format_number(double v);

}  // namespace ss
