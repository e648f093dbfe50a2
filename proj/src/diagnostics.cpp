#include "ss/diagnostics.hpp"

namespace ss {

void Diagnostics::report(Severity severity, std::string_view message) {
  if (severity == Severity::Error) ++errors_;
  *err_ << file_ << ':' << line_ << ": " << (severity == Severity::Error ? "error" : "warning")
        << ": " << message << '\n';
}

void Diagnostics::message(std::string_view text) { *err_ << text << '\n'; }

}  // namespace ss
