#include "ss/model.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "ss/lexparse.hpp"

namespace ss {

bool Value::same_as(const Value& other) const {
  if (data_.index() != other.data_.index()) return false;
  if (auto d = std::get_if<double>(&data_))
    return std::bit_cast<std::uint64_t>(*d) ==
           std::bit_cast<std::uint64_t>(std::get<double>(other.data_));
  if (auto s = std::get_if<std::string>(&data_)) return *s == std::get<std::string>(other.data_);
  return true;
}

const std::vector<Constant>& constants() {
  static const std::vector<Constant> kConstants = {
      {"HUGE_VAL", HUGE_VAL},
      {"RAND_MAX", Rng::kRandMax},
      {"pi", 4 * std::atan(1.0)},
  };
  return kConstants;
}

std::optional<double> constant_value(std::string_view name) {
  for (const auto& c : constants())
    if (name == c.name) return c.value;
  return std::nullopt;
}

void Extent::include(Coord c) {
  if (empty()) {
    min_row = max_row = c.row;
    min_col = max_col = c.col;
    return;
  }
  min_row = std::min(min_row, c.row);
  max_row = std::max(max_row, c.row);
  min_col = std::min(min_col, c.col);
  max_col = std::max(max_col, c.col);
}

std::vector<Coord> traverse(const ResolvedRange& r, Direction dir) {
  const int row_step = r.end.row >= r.start.row ? 1 : -1;
  const int col_step = r.end.col >= r.start.col ? 1 : -1;
  std::vector<Coord> out;
  out.reserve(cell_count(r));
  if (dir == Direction::ByRows) {
    for (int row = r.start.row;; row += row_step) {
      for (int col = r.start.col;; col += col_step) {
        out.push_back({row, col});
        if (col == r.end.col) break;
      }
      if (row == r.end.row) break;
    }
  } else {
    for (int col = r.start.col;; col += col_step) {
      for (int row = r.start.row;; row += row_step) {
        out.push_back({row, col});
        if (row == r.end.row) break;
      }
      if (col == r.end.col) break;
    }
  }
  return out;
}

std::size_t cell_count(const ResolvedRange& r) {
  return static_cast<std::size_t>(std::abs(r.end.row - r.start.row) + 1) *
         static_cast<std::size_t>(std::abs(r.end.col - r.start.col) + 1);
}

// ---------------------------------------------------------------------------
// Sheet

const Cell* Sheet::find(Coord c) const {
  auto it = cells_.find(c);
  return it == cells_.end() ? nullptr : &it->second;
}

Value Sheet::value(Coord c) const {
  const Cell* cell = find(c);
  return cell ? cell->value : Value{};
}

void Sheet::assign_range_list(const ResolvedRange& range, Direction dir,
                              const std::vector<ExprPtr>& items) {
  auto coords = traverse(range, dir);
  if (coords.size() != items.size())
    throw std::invalid_argument("range has " + std::to_string(coords.size()) +
                                " cells but the list has " + std::to_string(items.size()) +
                                " items");
  for (std::size_t i = 0; i < coords.size(); ++i)
    set_formula(coords[i], rebase(items[i], kOrigin, coords[i]));
}

Extent Sheet::used_extent() const {
  Extent e;
  for (const auto& [c, cell] : cells_)
    if (cell.defined()) e.include(c);
  return e;
}

Extent Sheet::occupied_extent() const {
  Extent e;
  for (const auto& [c, cell] : cells_)
    if (cell.occupied()) e.include(c);
  return e;
}

void Sheet::define_symbol(const std::string& name, ExprPtr formula) {
  if (looks_like_cellref(name))
    throw std::invalid_argument("'" + name + "' is a cell name and cannot be a symbol");
  if (constant_value(name)) throw std::invalid_argument("'" + name + "' is a constant");
  if (auto s = find_symbol(name)) {
    s->formula = std::move(formula);
    return;
  }
  symbol_index_[name] = symbols_.size();
  symbols_.push_back({name, std::move(formula), {}});
}

Symbol* Sheet::find_symbol(std::string_view name) {
  auto it = symbol_index_.find(std::string(name));
  return it == symbol_index_.end() ? nullptr : &symbols_[it->second];
}

const Symbol* Sheet::find_symbol(std::string_view name) const {
  return const_cast<Sheet*>(this)->find_symbol(name);
}

void Sheet::set_symbol_value(const std::string& name, Value v) {
  if (auto s = find_symbol(name)) {
    s->value = std::move(v);
    return;
  }
  symbol_index_[name] = symbols_.size();
  symbols_.push_back({name, nullptr, std::move(v)});
}

Value Sheet::symbol_value(std::string_view name) const {
  if (auto c = constant_value(name)) return *c;
  const Symbol* s = find_symbol(name);
  return s ? s->value : Value{};
}

const std::string& Sheet::resolve_format(Coord c) const {
  if (const Cell* cell = find(c); cell && cell->format) return *cell->format;
  if (auto it = row_formats_.find(c.row); it != row_formats_.end()) return it->second;
  if (auto it = col_formats_.find(c.col); it != col_formats_.end()) return it->second;
  return global_format_;
}

// ---------------------------------------------------------------------------
// printf formats

bool valid_number_format(std::string_view fmt) {
  int conversions = 0;
  for (std::size_t i = 0; i < fmt.size(); ++i) {
    if (fmt[i] != '%') continue;
    ++i;
    if (i < fmt.size() && fmt[i] == '%') continue;
    while (i < fmt.size() && std::string_view("-+ #0").find(fmt[i]) != std::string_view::npos) ++i;
    int width_digits = 0;
    while (i < fmt.size() && std::isdigit(static_cast<unsigned char>(fmt[i]))) ++i, ++width_digits;
    if (i < fmt.size() && fmt[i] == '.') {
      ++i;
      int prec_digits = 0;
      while (i < fmt.size() && std::isdigit(static_cast<unsigned char>(fmt[i]))) ++i, ++prec_digits;
      if (prec_digits > 2) return false;
    }
    if (width_digits > 3) return false;
    if (i < fmt.size() && fmt[i] == 'l') ++i;
    if (i >= fmt.size() || std::string_view("eEfFgGaA").find(fmt[i]) == std::string_view::npos)
      return false;
    ++conversions;
  }
  return conversions == 1;
}

std::string format_value(const std::string& fmt, double v) {
  char buf[128];
  int n = std::snprintf(buf, sizeof buf, fmt.c_str(), v);
  if (n < 0) return {};
  if (static_cast<std::size_t>(n) < sizeof buf) return std::string(buf, n);
  std::string out(static_cast<std::size_t>(n) + 1, '\0');
  std::snprintf(out.data(), out.size(), fmt.c_str(), v);
  out.resize(static_cast<std::size_t>(n));
  return out;
}

}  // namespace ss
