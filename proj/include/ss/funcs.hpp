#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ss/expr.hpp"

namespace ss {

class EvalContext;

enum class FunctionKind { Numeric, Range };

inline constexpr int kVariadic = -1;

// What the first-line comment of a function source declares.
struct FunctionManifest {
  std::string name;
  FunctionKind kind = FunctionKind::Numeric;
  int arity = 1;  // 0, 1, 2 or kVariadic
  std::string description;
};

// Every function gets the unevaluated argument nodes and the reference cell.
using FunctionImpl = std::function<double(std::span<const ExprPtr>, EvalContext&)>;

struct FunctionEntry {
  FunctionManifest manifest;
  std::optional<int> lvalue_slot;  // argument that receives a second result
  FunctionImpl impl;
};

class FunctionRegistry {
 public:
  FunctionRegistry() = default;

  // Math library, random numbers, time and the range functions.
  static FunctionRegistry with_builtins();

  // Throws std::invalid_argument if the name is taken.
  void add(FunctionEntry entry);

  // Same as add(), but also refuses constant names. Throws std::invalid_argument.
  void register_user_function(FunctionManifest manifest, FunctionImpl impl);

  const FunctionEntry* find(std::string_view name) const;

  // Sorted by name.
  std::vector<const FunctionEntry*> listing() const;

 private:
  std::vector<FunctionEntry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

// "/* 1 pseudo-random integer, 0<=irand(i)<=i-1" -> arity 1 + description.
// The arity may also be "n" or "..." for variadic. Throws std::invalid_argument.
FunctionManifest parse_manifest_comment(std::string_view first_line,
                                        std::string name, FunctionKind kind);

// One function per non-blank line: "name numeric|range arity description".
// '#' starts a comment line. Throws std::invalid_argument.
std::vector<FunctionManifest> parse_manifest(std::string_view text);

// Range function reductions over the contributing values.
namespace aggregate {
double sum(std::span<const double> v);
double count(std::span<const double> v);
double avg(std::span<const double> v);
double prod(std::span<const double> v);
double min(std::span<const double> v);
double max(std::span<const double> v);
double stdev(std::span<const double> v);
double majority(std::span<const double> v);
}  // namespace aggregate

}  // namespace ss
