#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "ss/coord.hpp"
#include "ss/expr.hpp"
#include "ss/rng.hpp"

namespace ss {

// Number, string or undefined. Strings and undefined read as 0 in numeric
// context.
class Value {
 public:
  Value() = default;
  Value(double d) : data_(d) {}
  Value(std::string s) : data_(std::move(s)) {}

  bool is_undefined() const { return std::holds_alternative<std::monostate>(data_); }
  bool is_number() const { return std::holds_alternative<double>(data_); }
  bool is_string() const { return std::holds_alternative<std::string>(data_); }

  double number() const {
    if (auto d = std::get_if<double>(&data_)) return *d;
    return 0.0;
  }
  const std::string& string() const { return std::get<std::string>(data_); }

  // Bitwise for numbers, so NaN equals itself and -0 differs from +0.
  bool same_as(const Value& other) const;

 private:
  std::variant<std::monostate, double, std::string> data_;
};

struct Cell {
  ExprPtr formula;
  Value value;
  std::optional<std::string> format;

  bool defined() const { return formula != nullptr; }
  bool occupied() const { return formula != nullptr || !value.is_undefined(); }
};

struct Symbol {
  std::string name;
  ExprPtr formula;  // null for symbols created only by side-effect writes
  Value value;
};

struct Constant {
  const char* name;
  double value;
};

// HUGE_VAL, RAND_MAX, pi
const std::vector<Constant>& constants();
std::optional<double> constant_value(std::string_view name);

struct Extent {
  int min_row = 0, max_row = -1, min_col = 0, max_col = -1;

  bool empty() const { return max_row < min_row; }
  ResolvedRange range() const { return {{min_row, min_col}, {max_row, max_col}}; }
  void include(Coord c);
};

// Cells of `r` in traversal order. The step on each axis follows the corner
// order, so b9:a0 walks both axes downward.
std::vector<Coord> traverse(const ResolvedRange& r, Direction dir);
std::size_t cell_count(const ResolvedRange& r);

class Sheet {
 public:
  Sheet() = default;

  // --- cells
  const Cell* find(Coord c) const;
  Cell& at(Coord c) { return cells_[c]; }
  const std::map<Coord, Cell>& cells() const { return cells_; }

  Value value(Coord c) const;
  void set_value(Coord c, Value v) { cells_[c].value = std::move(v); }
  void set_formula(Coord c, ExprPtr formula) { cells_[c].formula = std::move(formula); }

  // Pairs items with traverse(range) order; no cell changes unless the
  // counts match. Items are anchored at the origin and rebased per cell.
  void assign_range_list(const ResolvedRange& range, Direction dir,
                         const std::vector<ExprPtr>& items);

  // Bounding box of cells holding formulas.
  Extent used_extent() const;
  // Bounding box of cells holding a formula or a value.
  Extent occupied_extent() const;

  // --- symbols
  // Throws std::invalid_argument for cell-like or constant names.
  void define_symbol(const std::string& name, ExprPtr formula);
  Symbol* find_symbol(std::string_view name);
  const Symbol* find_symbol(std::string_view name) const;
  const std::vector<Symbol>& symbols() const { return symbols_; }
  std::vector<Symbol>& symbols() { return symbols_; }
  // Creates a formula-less symbol if needed.
  void set_symbol_value(const std::string& name, Value v);
  Value symbol_value(std::string_view name) const;

  // --- formats
  void set_global_format(std::string f) { global_format_ = std::move(f); }
  void set_row_format(int row, std::string f) { row_formats_[row] = std::move(f); }
  void set_col_format(int col, std::string f) { col_formats_[col] = std::move(f); }
  void set_cell_format(Coord c, std::string f) { cells_[c].format = std::move(f); }
  const std::string& global_format() const { return global_format_; }
  const std::map<int, std::string>& row_formats() const { return row_formats_; }
  const std::map<int, std::string>& col_formats() const { return col_formats_; }
  // cell > row > column > global
  const std::string& resolve_format(Coord c) const;

  Notation display_mode = Notation::A0;
  Direction direction = Direction::ByRows;
  Rng rng;

 private:
  std::map<Coord, Cell> cells_;
  std::vector<Symbol> symbols_;
  std::unordered_map<std::string, std::size_t> symbol_index_;
  std::map<int, std::string> row_formats_;
  std::map<int, std::string> col_formats_;
  std::string global_format_ = "%.2f";
};

// Checks a printf conversion for a single double, e.g. "%.2f" or "x=%8.3e".
bool valid_number_format(std::string_view fmt);
std::string format_value(const std::string& fmt, double v);

}  // namespace ss
