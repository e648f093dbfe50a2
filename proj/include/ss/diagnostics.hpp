#pragma once

#include <ostream>
#include <string>
#include <string_view>

namespace ss {

enum class Severity { Error, Warning };

// Error-stream reporter. Diagnostics read "file:line: severity: message";
// plain messages (convergence reports, debug traces) are written as-is.
class Diagnostics {
 public:
  explicit Diagnostics(std::ostream& err) : err_(&err) {}

  void set_location(std::string file, int line) {
    file_ = std::move(file);
    line_ = line;
  }
  void set_line(int line) { line_ = line; }
  const std::string& file() const { return file_; }
  int line() const { return line_; }

  void report(Severity severity, std::string_view message);
  void error(std::string_view message) { report(Severity::Error, message); }
  void warning(std::string_view message) { report(Severity::Warning, message); }

  void message(std::string_view text);
  void trace(std::string_view text) {
    if (debug) message(std::string("debug: ").append(text));
  }

  int error_count() const { return errors_; }

  bool debug = false;

 private:
  std::ostream* err_;
  std::string file_ = "<stdin>";
  int line_ = 0;
  int errors_ = 0;
};

}  // namespace ss
