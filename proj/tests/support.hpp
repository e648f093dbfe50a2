#pragma once

#include <sstream>
#include <string>
#include <string_view>

#include "ss/session.hpp"

namespace ss::test {

struct Run {
  std::string out;
  std::string err;
};

// Runs a script through a fresh session.
inline Run run_script(std::string_view text) {
  std::ostringstream out, err;
  Session s(out, err);
  s.run_text(text, "t.ss");
  return {out.str(), err.str()};
}

// A session whose output can be inspected between scripts.
struct Harness {
  std::ostringstream out, err;
  Session session{out, err};

  Harness& run(std::string_view text) {
    session.run_text(text, "t.ss");
    return *this;
  }
  std::string take_out() {
    std::string s = out.str();
    out.str({});
    return s;
  }
  std::string take_err() {
    std::string s = err.str();
    err.str({});
    return s;
  }
  double value(std::string_view cell) {
    auto ref = parse_cellref(cell);
    return session.sheet().value(*ref.resolve(kOrigin)).number();
  }
  const Cell* cell(std::string_view name) {
    auto ref = parse_cellref(name);
    return session.sheet().find(*ref.resolve(kOrigin));
  }
};

inline Coord at(std::string_view name) { return *parse_cellref(name).resolve(kOrigin); }

}  // namespace ss::test
