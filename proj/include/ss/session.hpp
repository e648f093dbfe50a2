#pragma once

#include <istream>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ss/commands.hpp"
#include "ss/diagnostics.hpp"
#include "ss/funcs.hpp"
#include "ss/lexparse.hpp"
#include "ss/model.hpp"

namespace ss {

// One batch run: a sheet, its function registry and the input units fed to
// it. Statements execute as soon as their ';' has been read.
class Session {
 public:
  Session(std::ostream& out, std::ostream& err,
          FunctionRegistry functions = FunctionRegistry::with_builtins());

  // False if the file could not be read.
  bool run_file(const std::string& path);
  void run_stream(std::istream& in, const std::string& name);
  void run_text(std::string_view text, const std::string& name = "<text>");

  bool stopped() const { return stopped_; }
  int exit_status() const { return unreadable_ ? 1 : 0; }

  Sheet& sheet() { return sheet_; }
  FunctionRegistry& functions() { return functions_; }
  Executor& executor() { return executor_; }
  Diagnostics& diagnostics() { return diag_; }

 private:
  class Unit;

  std::ostream& err_;
  Diagnostics diag_;
  Sheet sheet_;
  FunctionRegistry functions_;
  OutputRouter out_;
  std::shared_ptr<Preprocessor::MacroTable> macros_;
  Executor executor_;
  bool stopped_ = false;
  bool unreadable_ = false;
  int depth_ = 0;
};

// `ss [file ...]`: runs the files in order, then standard input.
int run(std::span<const std::string> args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace ss
