#include "ss/commands.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace ss {

bool is_stdout_name(std::string_view name) { return name == "stdout" || name == "-"; }

// ---------------------------------------------------------------------------
// OutputRouter

std::ostream* OutputRouter::open(const std::string& file) {
  if (auto it = files_.find(file); it != files_.end()) return it->second.get();
  auto f = std::make_unique<std::ofstream>(file, std::ios::out | std::ios::trunc);
  if (!*f) return nullptr;
  return files_.emplace(file, std::move(f)).first->second.get();
}

std::ostream* OutputRouter::stream(const std::optional<std::string>& file) {
  if (!file) return global_;
  if (is_stdout_name(*file)) return stdout_;
  return open(*file);
}

bool OutputRouter::set_global(const std::string& file) {
  std::ostream* s = is_stdout_name(file) ? stdout_ : open(file);
  if (!s) return false;
  global_ = s;
  return true;
}

void OutputRouter::flush() {
  stdout_->flush();
  for (auto& [_, f] : files_) f->flush();
}

// ---------------------------------------------------------------------------
// Renderers

namespace {

std::vector<int> steps(int from, int to) {
  std::vector<int> out;
  const int step = to >= from ? 1 : -1;
  for (int i = from;; i += step) {
    out.push_back(i);
    if (i == to) break;
  }
  return out;
}

void trim_trailing_tabs(std::string& line) {
  while (!line.empty() && line.back() == '\t') line.pop_back();
}

// Tab-separated grid with a header row of labels and a leading label column.
// bycols transposes it: one line per column.
template <typename CellText>
std::string grid(const Sheet& sheet, const ResolvedRange& r, Direction dir, CellText&& text) {
  auto rows = steps(r.start.row, r.end.row);
  auto cols = steps(r.start.col, r.end.col);
  auto col_label = [&](int c) {
    return sheet.display_mode == Notation::A0 ? column_letters(c) : std::to_string(c);
  };
  auto row_label = [](int row) { return std::to_string(row); };

  const bool by_rows = dir == Direction::ByRows;
  const auto& outer = by_rows ? rows : cols;
  const auto& inner = by_rows ? cols : rows;

  std::string out;
  std::string line;
  for (int i : inner) line += '\t' + (by_rows ? col_label(i) : row_label(i));
  out += line + '\n';
  for (int o : outer) {
    line = by_rows ? row_label(o) : col_label(o);
    for (int i : inner) {
      Coord c = by_rows ? Coord{o, i} : Coord{i, o};
      line += '\t';
      line += text(c);
    }
    trim_trailing_tabs(line);
    out += line + '\n';
  }
  return out;
}

std::string symbol_value_text(const Value& v) {
  if (v.is_string()) return v.string();
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v.number());
  return buf;
}

}  // namespace

std::string print_values(const Sheet& sheet, const ResolvedRange& range, Direction dir) {
  return grid(sheet, range, dir, [&](Coord c) -> std::string {
    const Cell* cell = sheet.find(c);
    if (!cell || !cell->occupied()) return {};
    if (cell->value.is_string()) return cell->value.string();
    return format_value(sheet.resolve_format(c), cell->value.number());
  });
}

std::string print_formulas(const Sheet& sheet, const ResolvedRange& range, Direction dir) {
  return grid(sheet, range, dir, [&](Coord c) -> std::string {
    const Cell* cell = sheet.find(c);
    if (!cell || !cell->formula) return {};
    return render_formula(*cell->formula, c, sheet.display_mode);
  });
}

std::string print_pointers(const Sheet& sheet, const ResolvedRange& range, Direction dir) {
  return grid(sheet, range, dir, [&](Coord c) -> std::string {
    const Cell* cell = sheet.find(c);
    if (!cell || !cell->occupied()) return {};
    if (!cell->formula) return "0";
    char buf[24];
    std::snprintf(buf, sizeof buf, "%llx", static_cast<unsigned long long>(cell->formula->id()));
    return buf;
  });
}

std::string print_symbols(const Sheet& sheet) {
  std::string out;
  for (const auto& s : sheet.symbols()) {
    std::string value = symbol_value_text(s.value);
    std::string formula = s.formula ? render_formula(*s.formula, kOrigin, sheet.display_mode) : "";
    out += s.name + " = ";
    if (s.value.is_undefined() && !formula.empty()) {
      out += formula + '\n';
      continue;
    }
    if (!formula.empty() && formula != value) out += formula + " = ";
    out += value + '\n';
  }
  return out;
}

std::string print_formats(const Sheet& sheet) {
  std::string out;
  switch (sheet.display_mode) {
    case Notation::A0: out += "format A0;\n"; break;
    case Notation::RC: out += "format RC;\n"; break;
    case Notation::CR: out += "format CR;\n"; break;
  }
  out += sheet.direction == Direction::ByRows ? "byrows;\n" : "bycols;\n";
  out += "format \"" + sheet.global_format() + "\";\n";
  for (const auto& [row, f] : sheet.row_formats())
    out += "format row " + std::to_string(row) + " \"" + f + "\";\n";
  for (const auto& [col, f] : sheet.col_formats())
    out += "format col " + std::to_string(col) + " \"" + f + "\";\n";
  for (const auto& [c, cell] : sheet.cells())
    if (cell.format) out += "format " + cell_name(c) + " \"" + *cell.format + "\";\n";
  return out;
}

std::string print_macros(const std::vector<Macro>& macros) {
  std::string out;
  for (const auto& m : macros) {
    out += "#define " + m.name;
    if (!m.replacement.empty()) out += ' ' + m.replacement;
    out += '\n';
  }
  return out;
}

std::string print_constants() {
  std::string out;
  for (const auto& c : constants()) out += std::string(c.name) + " = " + symbol_value_text(c.value) + '\n';
  return out;
}

std::string print_functions(const FunctionRegistry& functions) {
  std::string out;
  for (const FunctionEntry* f : functions.listing()) {
    const auto& m = f->manifest;
    out += m.name + '\t' + (m.arity == kVariadic ? std::string("n") : std::to_string(m.arity)) +
           '\t' + m.description + '\n';
  }
  return out;
}

std::string plot_data(const Sheet& sheet, const ResolvedRange& range, Direction dir,
                      PlotKind kind) {
  auto rows = steps(range.start.row, range.end.row);
  auto cols = steps(range.start.col, range.end.col);
  const bool by_rows = dir == Direction::ByRows;
  const auto& outer = by_rows ? rows : cols;
  const auto& inner = by_rows ? cols : rows;
  std::string out;
  char buf[32];
  bool first = true;
  for (int o : outer) {
    if (kind == PlotKind::Plot3d && !first) out += '\n';
    first = false;
    std::string line;
    for (int i : inner) {
      Coord c = by_rows ? Coord{o, i} : Coord{i, o};
      std::snprintf(buf, sizeof buf, "%.17g", sheet.value(c).number());
      if (!line.empty()) line += ' ';
      line += buf;
    }
    out += line + '\n';
  }
  return out;
}

bool copy_cells(Sheet& sheet, const ResolvedRange& dest, const ResolvedRange& src, Direction dir) {
  if (cell_count(dest) != cell_count(src)) return false;
  auto d = traverse(dest, dir);
  auto s = traverse(src, dir);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const Cell* from = sheet.find(s[i]);
    ExprPtr formula = from ? from->formula : nullptr;
    if (formula) {
      sheet.set_formula(d[i], std::move(formula));
    } else if (const Cell* to = sheet.find(d[i]); to && to->occupied()) {
      Cell& cell = sheet.at(d[i]);
      cell.formula = nullptr;
      cell.value = Value{};
    }
  }
  return true;
}

void fill_cells(Sheet& sheet, const ResolvedRange& range, double start, double increment,
                Direction dir) {
  auto coords = traverse(range, dir);
  for (std::size_t k = 0; k < coords.size(); ++k) {
    double v = start + static_cast<double>(k) * increment;
    sheet.set_formula(coords[k], make_node(NumberLit{v}));
    sheet.set_value(coords[k], v);
  }
}

// ---------------------------------------------------------------------------
// Executor

namespace {

const char* statement_kind(const Statement& s) {
  if (std::holds_alternative<FormulaAssignment>(s.body)) return "formula";
  if (std::holds_alternative<RangeListAssignment>(s.body)) return "range list";
  return "command";
}

// Literal formulas take their value immediately.
std::optional<Value> literal_value(const ExprPtr& e) {
  if (auto n = e->as<NumberLit>()) return Value(n->value);
  if (auto t = e->as<StringLit>()) return Value(t->text);
  if (auto u = e->as<Unary>(); u && (u->op == UnaryOp::Plus || u->op == UnaryOp::Minus)) {
    if (auto n = u->operand->as<NumberLit>()) return Value(u->op == UnaryOp::Minus ? -n->value : n->value);
  }
  return std::nullopt;
}

}  // namespace

Flow Executor::execute(const Statement& statement) {
  diag_.set_line(statement.line);
  diag_.trace(diag_.file() + ":" + std::to_string(statement.line) + ": " +
              statement_kind(statement));
  if (auto a = std::get_if<FormulaAssignment>(&statement.body)) {
    assign(*a);
  } else if (auto r = std::get_if<RangeListAssignment>(&statement.body)) {
    assign(*r);
  } else {
    Flow f = run(std::get<Command>(statement.body));
    out_.flush();
    return f;
  }
  return Flow::Continue;
}

void Executor::assign(const FormulaAssignment& a) {
  if (auto c = std::get_if<Coord>(&a.target)) {
    sheet_.set_formula(*c, a.formula);
    if (auto v = literal_value(a.formula)) sheet_.set_value(*c, *v);
    return;
  }
  try {
    const auto& name = std::get<std::string>(a.target);
    sheet_.define_symbol(name, a.formula);
    if (auto v = literal_value(a.formula)) sheet_.set_symbol_value(name, *v);
  } catch (const std::invalid_argument& e) {
    diag_.error(e.what());
  }
}

void Executor::assign(const RangeListAssignment& a) {
  auto r = resolve_range(a.range);
  if (!r) return;
  try {
    sheet_.assign_range_list(*r, sheet_.direction, a.items);
    auto coords = traverse(*r, sheet_.direction);
    for (std::size_t i = 0; i < coords.size(); ++i)
      if (auto v = literal_value(a.items[i])) sheet_.set_value(coords[i], *v);
  } catch (const std::invalid_argument& e) {
    diag_.error(e.what());
  }
}

std::optional<ResolvedRange> Executor::resolve_range(const Range& r) {
  auto rr = resolve(r, kOrigin);
  if (!rr) diag_.error("range is outside the sheet");
  return rr;
}

ResolvedRange Executor::default_extent() const { return sheet_.occupied_extent().range(); }

void Executor::write(const std::optional<std::string>& file, const std::string& text) {
  std::ostream* s = out_.stream(file);
  if (!s) {
    diag_.error("cannot write '" + file.value_or("") + "'");
    return;
  }
  *s << text;
}

Flow Executor::run(const Command& command) {
  evaluator_.begin_command();
  return std::visit(
      [&](const auto& c) -> Flow {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, DirectionCmd>) {
          sheet_.direction = c.direction;
        } else if constexpr (std::is_same_v<T, CopyCmd>) {
          copy(c);
        } else if constexpr (std::is_same_v<T, DebugCmd>) {
          diag_.debug = c.on;
        } else if constexpr (std::is_same_v<T, EvalCmd>) {
          eval(c);
        } else if constexpr (std::is_same_v<T, ExitCmd>) {
          return Flow::Exit;
        } else if constexpr (std::is_same_v<T, FillCmd>) {
          fill(c);
        } else if constexpr (std::is_same_v<T, NotationCmd>) {
          sheet_.display_mode = c.notation;
        } else if constexpr (std::is_same_v<T, FormatCmd>) {
          format(c);
        } else if constexpr (std::is_same_v<T, LoadCmd>) {
          for (const auto& f : c.files)
            if (loader_) loader_(f);
        } else if constexpr (std::is_same_v<T, OutputCmd>) {
          if (!out_.set_global(c.file)) diag_.error("cannot write '" + c.file + "'");
        } else if constexpr (std::is_same_v<T, PlotCmd>) {
          plot(c);
        } else if constexpr (std::is_same_v<T, PrintCmd>) {
          print(c);
        } else if constexpr (std::is_same_v<T, SrandCmd>) {
          double s = evaluator_.eval_tree(*c.seed, kOrigin).number();
          sheet_.rng.seed(static_cast<std::uint32_t>(
              static_cast<long long>(std::isfinite(s) ? std::trunc(s) : 0.0)));
        }
        return Flow::Continue;
      },
      command);
}

void Executor::copy(const CopyCmd& c) {
  auto dest = resolve_range(c.dest);
  auto src = resolve_range(c.src);
  if (!dest || !src) return;
  if (!copy_cells(sheet_, *dest, *src, c.direction.value_or(sheet_.direction)))
    diag_.error("copy ranges differ in size (" + std::to_string(cell_count(*dest)) + " vs " +
                std::to_string(cell_count(*src)) + " cells)");
}

void Executor::eval(const EvalCmd& c) {
  const long n = c.iterations.value_or(2);
  ConvergenceReport report;
  if (c.symbols) {
    report = evaluator_.eval_symbols(n);
  } else if (c.range) {
    auto r = resolve_range(*c.range);
    if (!r) return;
    report = evaluator_.eval_range(*r, c.direction.value_or(sheet_.direction), n);
  } else {
    report = evaluator_.eval_sheet(n);
  }
  last_report_ = report;
  diag_.message(report.message());
}

void Executor::fill(const FillCmd& c) {
  auto r = resolve_range(c.range);
  if (!r) return;
  double start = evaluator_.eval_tree(*c.start, kOrigin).number();
  double inc = evaluator_.eval_tree(*c.increment, kOrigin).number();
  fill_cells(sheet_, *r, start, inc, c.direction.value_or(sheet_.direction));
}

void Executor::format(const FormatCmd& c) {
  switch (c.scope) {
    case FormatCmd::Scope::Global:
      sheet_.set_global_format(c.format);
      break;
    case FormatCmd::Scope::Row:
      sheet_.set_row_format(c.index, c.format);
      break;
    case FormatCmd::Scope::Col:
      sheet_.set_col_format(c.index, c.format);
      break;
    case FormatCmd::Scope::Cells:
      if (auto r = resolve_range(c.range))
        for (Coord cell : traverse(*r, Direction::ByRows)) sheet_.set_cell_format(cell, c.format);
      break;
  }
}

void Executor::print(const PrintCmd& c) {
  std::optional<ResolvedRange> range;
  if (c.range) {
    range = resolve_range(*c.range);
    if (!range) return;
  } else if (!sheet_.occupied_extent().empty()) {
    range = default_extent();
  }
  const Direction dir = c.direction.value_or(sheet_.direction);
  static const std::vector<Macro> kNoMacros;

  std::string text;
  for (PrintSelector sel : c.selectors) {
    std::string block;
    switch (sel) {
      case PrintSelector::Macros: block = print_macros(macros_ ? *macros_ : kNoMacros); break;
      case PrintSelector::Symbols: block = print_symbols(sheet_); break;
      case PrintSelector::Formulas: if (range) block = print_formulas(sheet_, *range, dir); break;
      case PrintSelector::Values: if (range) block = print_values(sheet_, *range, dir); break;
      case PrintSelector::Formats: block = print_formats(sheet_); break;
      case PrintSelector::Pointers: if (range) block = print_pointers(sheet_, *range, dir); break;
      case PrintSelector::Constants: block = print_constants(); break;
      case PrintSelector::Functions: block = print_functions(functions_); break;
    }
    if (block.empty()) continue;
    text += block + '\n';
  }
  write(c.file, text);
}

void Executor::plot(const PlotCmd& c) {
  std::optional<ResolvedRange> range;
  if (c.range) {
    range = resolve_range(*c.range);
  } else if (!sheet_.occupied_extent().empty()) {
    range = default_extent();
  }
  if (!range) return;
  write(c.file, plot_data(sheet_, *range, c.direction.value_or(sheet_.direction), c.kind));
}

}  // namespace ss
