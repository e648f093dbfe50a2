#include "ss/coord.hpp"

#include <cctype>
#include <charconv>
#include <string>

namespace ss {

namespace {

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

char upper(char c) { return static_cast<char>(std::toupper(static_cast<unsigned char>(c))); }

struct AxisSpec {
  bool bracketed = false;
  int value = 0;
};

// Parses "[+-n]" / "[]" or plain digits at text[pos]; advances pos.
std::optional<AxisSpec> scan_axis(std::string_view text, std::size_t& pos) {
  AxisSpec spec;
  if (pos < text.size() && text[pos] == '[') {
    std::size_t p = pos + 1;
    bool negative = false;
    if (p < text.size() && (text[p] == '+' || text[p] == '-')) {
      negative = text[p] == '-';
      ++p;
    }
    std::size_t digits = p;
    while (p < text.size() && std::isdigit(static_cast<unsigned char>(text[p]))) ++p;
    if (p >= text.size() || text[p] != ']') return std::nullopt;
    long v = 0;
    if (p > digits) {
      if (p - digits > 4) return std::nullopt;
      std::from_chars(text.data() + digits, text.data() + p, v);
    } else if (digits != pos + 1) {
      return std::nullopt;  // sign without digits
    }
    spec.bracketed = true;
    spec.value = static_cast<int>(negative ? -v : v);
    pos = p + 1;
    return spec;
  }
  std::size_t p = pos;
  while (p < text.size() && std::isdigit(static_cast<unsigned char>(text[p]))) ++p;
  if (p == pos || p - pos > 4) return std::nullopt;
  long v = 0;
  std::from_chars(text.data() + pos, text.data() + p, v);
  spec.value = static_cast<int>(v);
  pos = p;
  return spec;
}

struct Scanned {
  CellRef ref;
  std::size_t length;
};

std::optional<Scanned> scan_rc(std::string_view text) {
  if (text.empty()) return std::nullopt;
  char first = upper(text[0]);
  if (first != 'R' && first != 'C') return std::nullopt;
  std::size_t pos = 1;
  auto a = scan_axis(text, pos);
  if (!a || pos >= text.size()) return std::nullopt;
  char second = upper(text[pos]);
  if (second == first || (second != 'R' && second != 'C')) return std::nullopt;
  ++pos;
  auto b = scan_axis(text, pos);
  if (!b) return std::nullopt;
  if (pos < text.size() && ident_char(text[pos])) return std::nullopt;

  auto row = first == 'R' ? *a : *b;
  auto col = first == 'R' ? *b : *a;
  CellRef ref;
  ref.row = {!row.bracketed, row.value};
  ref.col = {!col.bracketed, col.value};
  ref.notation = first == 'R' ? Notation::RC : Notation::CR;
  return Scanned{ref, pos};
}

std::optional<Scanned> scan_a0(std::string_view text) {
  std::size_t pos = 0;
  CellRef ref;
  ref.notation = Notation::A0;
  if (pos < text.size() && text[pos] == '$') {
    ref.col.fixed = true;
    ++pos;
  }
  std::size_t letters = pos;
  while (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos == letters || pos - letters > 2) return std::nullopt;
  auto col = column_index(text.substr(letters, pos - letters));
  if (pos < text.size() && text[pos] == '$') {
    ref.row.fixed = true;
    ++pos;
  }
  std::size_t digits = pos;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos == digits || pos - digits > 6) return std::nullopt;
  if (pos < text.size() && ident_char(text[pos])) return std::nullopt;
  long row = 0;
  std::from_chars(text.data() + digits, text.data() + pos, row);
  ref.col.value = *col;
  ref.row.value = static_cast<int>(row);
  return Scanned{ref, pos};
}

}  // namespace

std::string column_letters(int col) {
  std::string s;
  if (col >= 26) s += static_cast<char>('A' + col / 26 - 1);
  s += static_cast<char>('A' + col % 26);
  return s;
}

std::optional<int> column_index(std::string_view letters) {
  if (letters.empty() || letters.size() > 2) return std::nullopt;
  int v = 0;
  for (char c : letters) {
    if (!std::isalpha(static_cast<unsigned char>(c))) return std::nullopt;
    v = v * 26 + (upper(c) - 'A' + 1);
  }
  return v - 1;
}

std::string cell_name(Coord c) { return column_letters(c.col) + std::to_string(c.row); }

bool looks_like_cellref(std::string_view text) {
  if (auto s = scan_rc(text); s && s->length == text.size()) return true;
  if (auto s = scan_a0(text); s && s->length == text.size()) return true;
  return false;
}

std::size_t cellref_prefix(std::string_view text) {
  if (auto s = scan_rc(text)) return s->length;
  if (auto s = scan_a0(text)) return s->length;
  return 0;
}

CellRef parse_cellref(std::string_view lexeme) {
  auto s = scan_rc(lexeme);
  if (!s || s->length != lexeme.size()) s = scan_a0(lexeme);
  if (!s || s->length != lexeme.size())
    throw ParseError("malformed cell reference '" + std::string(lexeme) + "'");
  const CellRef& r = s->ref;
  auto axis_ok = [&](const Axis& a, int limit) {
    bool positional = a.fixed || r.notation == Notation::A0;
    return positional ? a.value >= 0 && a.value < limit : a.value > -limit && a.value < limit;
  };
  if (!axis_ok(r.row, kRows) || !axis_ok(r.col, kCols))
    throw ParseError("cell reference '" + std::string(lexeme) + "' is out of bounds");
  return r;
}

}  // namespace ss
