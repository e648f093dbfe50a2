#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ss {

inline constexpr int kRows = 1000;  // rows 0..999
inline constexpr int kCols = 702;   // columns A..ZZ

// Absolute grid coordinate. Ordering is row-major.
struct Coord {
  int row = 0;
  int col = 0;

  friend auto operator<=>(const Coord&, const Coord&) = default;
};

inline constexpr Coord kOrigin{0, 0};

inline bool in_bounds(Coord c) {
  return c.row >= 0 && c.row < kRows && c.col >= 0 && c.col < kCols;
}

enum class Notation { A0, RC, CR };
enum class Direction { ByRows, ByCols };

// One axis of a cell reference: an absolute index when fixed, otherwise an
// offset from the owning cell.
struct Axis {
  bool fixed = false;
  int value = 0;

  friend bool operator==(const Axis&, const Axis&) = default;
};

struct CellRef {
  Axis row;
  Axis col;
  Notation notation = Notation::A0;

  // nullopt when the reference falls off the grid.
  std::optional<Coord> resolve(Coord owner) const {
    Coord c{row.fixed ? row.value : owner.row + row.value,
            col.fixed ? col.value : owner.col + col.value};
    if (!in_bounds(c)) return std::nullopt;
    return c;
  }

  friend bool operator==(const CellRef&, const CellRef&) = default;
};

// Start/end pair; corner order encodes the traversal direction.
struct Range {
  CellRef start;
  CellRef end;
};

struct ResolvedRange {
  Coord start;
  Coord end;
};

inline std::optional<ResolvedRange> resolve(const Range& r, Coord owner) {
  auto s = r.start.resolve(owner);
  auto e = r.end.resolve(owner);
  if (!s || !e) return std::nullopt;
  return ResolvedRange{*s, *e};
}

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// A..ZZ <-> 0..701
std::string column_letters(int col);
std::optional<int> column_index(std::string_view letters);

// A0 spelling of an absolute coordinate, e.g. {1, 3} -> "D1".
std::string cell_name(Coord c);

// True if `text` is spelled as a cell reference in any notation.
bool looks_like_cellref(std::string_view text);

// Length of the cell reference spelled at the start of `text`, or 0.
std::size_t cellref_prefix(std::string_view text);

// Parses A0 ("$B$9"), RC ("R[]C[-1]") or CR ("C0R0") notation. A bracketed
// RC/CR axis is an offset from the owning cell as written. An unprefixed A0
// axis names a position, so it is stored as an offset from the origin ("B9"
// yields offsets (9, 1)) and rebase() re-anchors it to the real owner.
// Throws ParseError on malformed or out-of-bounds input.
CellRef parse_cellref(std::string_view lexeme);

}  // namespace ss
