#pragma once

#include <functional>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ss/diagnostics.hpp"
#include "ss/eval.hpp"
#include "ss/funcs.hpp"
#include "ss/lexparse.hpp"
#include "ss/model.hpp"

namespace ss {

// "stdout" and "-" name standard output.
bool is_stdout_name(std::string_view name);

// Global data sink plus per-command file overrides. A file is truncated the
// first time it is opened and appended to afterwards.
class OutputRouter {
 public:
  explicit OutputRouter(std::ostream& standard_out)
      : stdout_(&standard_out), global_(&standard_out) {}

  // nullptr if the file cannot be opened.
  std::ostream* stream(const std::optional<std::string>& file);
  bool set_global(const std::string& file);
  void flush();

 private:
  std::ostream* open(const std::string& file);

  std::ostream* stdout_;
  std::ostream* global_;
  std::map<std::string, std::unique_ptr<std::ofstream>> files_;
};

// --- data renderers; each returns complete lines

std::string print_values(const Sheet& sheet, const ResolvedRange& range, Direction dir);
std::string print_formulas(const Sheet& sheet, const ResolvedRange& range, Direction dir);
std::string print_pointers(const Sheet& sheet, const ResolvedRange& range, Direction dir);
std::string print_symbols(const Sheet& sheet);
std::string print_formats(const Sheet& sheet);
std::string print_macros(const std::vector<Macro>& macros);
std::string print_constants();
std::string print_functions(const FunctionRegistry& functions);
std::string plot_data(const Sheet& sheet, const ResolvedRange& range, Direction dir,
                      PlotKind kind);

// Shares source formula handles with destination cells in traversal order.
// Reads the grid live, so overlapping ranges propagate. Returns false on a
// size mismatch.
bool copy_cells(Sheet& sheet, const ResolvedRange& dest, const ResolvedRange& src,
                Direction dir);

// Literal constants start, start+inc, start+2*inc, ... along traversal order.
void fill_cells(Sheet& sheet, const ResolvedRange& range, double start,
                double increment, Direction dir);

enum class Flow { Continue, Exit };

class Executor {
 public:
  using Loader = std::function<void(const std::string& file)>;

  Executor(Sheet& sheet, const FunctionRegistry& functions, Diagnostics& diag,
           OutputRouter& out)
      : sheet_(sheet), functions_(functions), diag_(diag), out_(out),
        evaluator_(sheet, functions, diag) {}

  void set_macros(const std::vector<Macro>* macros) { macros_ = macros; }
  void set_loader(Loader loader) { loader_ = std::move(loader); }

  Flow execute(const Statement& statement);

  Evaluator& evaluator() { return evaluator_; }
  const std::optional<ConvergenceReport>& last_report() const { return last_report_; }

 private:
  Flow run(const Command& command);
  void assign(const FormulaAssignment& a);
  void assign(const RangeListAssignment& a);
  std::optional<ResolvedRange> resolve_range(const Range& r);
  ResolvedRange default_extent() const;
  void write(const std::optional<std::string>& file, const std::string& text);

  void copy(const CopyCmd& c);
  void eval(const EvalCmd& c);
  void fill(const FillCmd& c);
  void format(const FormatCmd& c);
  void print(const PrintCmd& c);
  void plot(const PlotCmd& c);

  Sheet& sheet_;
  const FunctionRegistry& functions_;
  Diagnostics& diag_;
  OutputRouter& out_;
  Evaluator evaluator_;
  const std::vector<Macro>* macros_ = nullptr;
  Loader loader_;
  std::optional<ConvergenceReport> last_report_;
};

}  // namespace ss
