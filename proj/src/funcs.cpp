#include "ss/funcs.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <climits>
#include <cmath>
#include <ctime>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "ss/eval.hpp"
#include "ss/model.hpp"

namespace ss {

namespace aggregate {

double sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

double count(std::span<const double> v) { return static_cast<double>(v.size()); }

double avg(std::span<const double> v) { return v.empty() ? 0.0 : sum(v) / count(v); }

// Empty contributions give 0, like every other reduction.
double prod(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 1.0, std::multiplies<>());
}

double min(std::span<const double> v) {
  return v.empty() ? 0.0 : *std::min_element(v.begin(), v.end());
}

double max(std::span<const double> v) {
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

// Sample standard deviation (n-1 divisor).
double stdev(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  double mean = avg(v);
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double majority(std::span<const double> v) {
  auto nonzero = std::count_if(v.begin(), v.end(), [](double x) { return x != 0.0; });
  return 2 * static_cast<std::size_t>(nonzero) > v.size() ? 1.0 : 0.0;
}

}  // namespace aggregate

// ---------------------------------------------------------------------------
// Manifests

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::pair<std::string_view, std::string_view> split_word(std::string_view s) {
  s = trim(s);
  auto end = s.find_first_of(" \t");
  if (end == std::string_view::npos) return {s, {}};
  return {s.substr(0, end), trim(s.substr(end))};
}

int parse_arity(std::string_view word) {
  if (word == "n" || word == "...") return kVariadic;
  int v = -1;
  auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), v);
  if (ec != std::errc() || ptr != word.data() + word.size() || v < 0 || v > 2)
    throw std::invalid_argument("bad arity '" + std::string(word) + "'");
  return v;
}

}  // namespace

FunctionManifest parse_manifest_comment(std::string_view first_line, std::string name,
                                        FunctionKind kind) {
  auto s = trim(first_line);
  if (!s.starts_with("/*")) throw std::invalid_argument("manifest comment must start with /*");
  s.remove_prefix(2);
  if (s.ends_with("*/")) s.remove_suffix(2);
  auto [arity, description] = split_word(s);
  if (arity.empty()) throw std::invalid_argument("manifest comment has no arity");
  return {std::move(name), kind, parse_arity(arity), std::string(description)};
}

std::vector<FunctionManifest> parse_manifest(std::string_view text) {
  std::vector<FunctionManifest> out;
  int line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    auto [name, rest] = split_word(line);
    auto [kind, rest2] = split_word(rest);
    auto [arity, description] = split_word(rest2);
    if (name.empty() || kind.empty() || arity.empty())
      throw std::invalid_argument("manifest line " + std::to_string(line_no) +
                                  ": expected name, kind, arity and description");
    FunctionManifest m;
    m.name = std::string(name);
    if (kind == "numeric")
      m.kind = FunctionKind::Numeric;
    else if (kind == "range")
      m.kind = FunctionKind::Range;
    else
      throw std::invalid_argument("manifest line " + std::to_string(line_no) +
                                  ": kind must be numeric or range");
    m.arity = parse_arity(arity);
    m.description = std::string(description);
    out.push_back(std::move(m));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Registry

void FunctionRegistry::add(FunctionEntry entry) {
  const std::string& name = entry.manifest.name;
  if (index_.count(name)) throw std::invalid_argument("function '" + name + "' already exists");
  index_[name] = entries_.size();
  entries_.push_back(std::move(entry));
}

void FunctionRegistry::register_user_function(FunctionManifest manifest, FunctionImpl impl) {
  if (constant_value(manifest.name))
    throw std::invalid_argument("'" + manifest.name + "' is a constant");
  add({std::move(manifest), std::nullopt, std::move(impl)});
}

const FunctionEntry* FunctionRegistry::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? nullptr : &entries_[it->second];
}

std::vector<const FunctionEntry*> FunctionRegistry::listing() const {
  std::vector<const FunctionEntry*> out;
  for (const auto& e : entries_) out.push_back(&e);
  std::sort(out.begin(), out.end(),
            [](auto* a, auto* b) { return a->manifest.name < b->manifest.name; });
  return out;
}

// ---------------------------------------------------------------------------
// Builtins

namespace {

using Args = std::span<const ExprPtr>;

FunctionImpl one(double (*f)(double)) {
  return [f](Args a, EvalContext& ctx) { return f(ctx.number(*a[0])); };
}

FunctionImpl two(double (*f)(double, double)) {
  return [f](Args a, EvalContext& ctx) {
    double x = ctx.number(*a[0]);
    return f(x, ctx.number(*a[1]));
  };
}

FunctionImpl reduce(double (*f)(std::span<const double>)) {
  return [f](Args a, EvalContext& ctx) { return f(ctx.collect(a)); };
}

int to_int(double v) {
  if (std::isnan(v)) return 0;
  return static_cast<int>(std::clamp(std::trunc(v), double(INT_MIN), double(INT_MAX)));
}

struct Builtin {
  const char* name;
  const char* comment;  // first-line comment: arity and description
  FunctionImpl impl;
  FunctionKind kind = FunctionKind::Numeric;
  std::optional<int> lvalue_slot = std::nullopt;
};

std::vector<Builtin> builtins() {
  using K = FunctionKind;
  return {
      {"sin", "/* 1 sine */", one([](double x) { return std::sin(x); })},
      {"cos", "/* 1 cosine */", one([](double x) { return std::cos(x); })},
      {"tan", "/* 1 tangent */", one([](double x) { return std::tan(x); })},
      {"asin", "/* 1 arc sine */", one([](double x) { return std::asin(x); })},
      {"acos", "/* 1 arc cosine */", one([](double x) { return std::acos(x); })},
      {"atan", "/* 1 arc tangent */", one([](double x) { return std::atan(x); })},
      {"sinh", "/* 1 hyperbolic sine */", one([](double x) { return std::sinh(x); })},
      {"cosh", "/* 1 hyperbolic cosine */", one([](double x) { return std::cosh(x); })},
      {"tanh", "/* 1 hyperbolic tangent */", one([](double x) { return std::tanh(x); })},
      {"asinh", "/* 1 inverse hyperbolic sine */", one([](double x) { return std::asinh(x); })},
      {"acosh", "/* 1 inverse hyperbolic cosine */", one([](double x) { return std::acosh(x); })},
      {"atanh", "/* 1 inverse hyperbolic tangent */", one([](double x) { return std::atanh(x); })},
      {"exp", "/* 1 e raised to x */", one([](double x) { return std::exp(x); })},
      {"exp2", "/* 1 2 raised to x */", one([](double x) { return std::exp2(x); })},
      {"expm1", "/* 1 exp(x)-1 */", one([](double x) { return std::expm1(x); })},
      {"log", "/* 1 natural logarithm */", one([](double x) { return std::log(x); })},
      {"log10", "/* 1 base 10 logarithm */", one([](double x) { return std::log10(x); })},
      {"log2", "/* 1 base 2 logarithm */", one([](double x) { return std::log2(x); })},
      {"log1p", "/* 1 log(1+x) */", one([](double x) { return std::log1p(x); })},
      {"sqrt", "/* 1 square root */", one([](double x) { return std::sqrt(x); })},
      {"cbrt", "/* 1 cube root */", one([](double x) { return std::cbrt(x); })},
      {"ceil", "/* 1 smallest integer not less than x */", one([](double x) { return std::ceil(x); })},
      {"floor", "/* 1 largest integer not greater than x */", one([](double x) { return std::floor(x); })},
      {"fabs", "/* 1 absolute value */", one([](double x) { return std::fabs(x); })},
      {"round", "/* 1 round half away from zero */", one([](double x) { return std::round(x); })},
      {"trunc", "/* 1 round toward zero */", one([](double x) { return std::trunc(x); })},
      {"rint", "/* 1 round to nearest integer */", one([](double x) { return std::rint(x); })},
      {"erf", "/* 1 error function */", one([](double x) { return std::erf(x); })},
      {"erfc", "/* 1 complementary error function */", one([](double x) { return std::erfc(x); })},
      {"tgamma", "/* 1 gamma function */", one([](double x) { return std::tgamma(x); })},
      {"lgamma", "/* 1 log of the absolute gamma function */", one([](double x) { return std::lgamma(x); })},

      {"atan2", "/* 2 arc tangent of y/x */", two([](double y, double x) { return std::atan2(y, x); })},
      {"fmod", "/* 2 floating-point remainder */", two([](double x, double y) { return std::fmod(x, y); })},
      {"pow", "/* 2 x raised to y */", two([](double x, double y) { return std::pow(x, y); })},
      {"hypot", "/* 2 sqrt(x*x+y*y) */", two([](double x, double y) { return std::hypot(x, y); })},
      {"fmin", "/* 2 smaller of x and y */", two([](double x, double y) { return std::fmin(x, y); })},
      {"fmax", "/* 2 larger of x and y */", two([](double x, double y) { return std::fmax(x, y); })},
      {"fdim", "/* 2 positive difference */", two([](double x, double y) { return std::fdim(x, y); })},
      {"copysign", "/* 2 magnitude of x with the sign of y */", two([](double x, double y) { return std::copysign(x, y); })},
      {"remainder", "/* 2 IEEE remainder */", two([](double x, double y) { return std::remainder(x, y); })},
      {"ldexp", "/* 2 x times 2 raised to n */",
       [](Args a, EvalContext& ctx) {
         double x = ctx.number(*a[0]);
         return std::ldexp(x, to_int(ctx.number(*a[1])));
       }},
      {"frexp", "/* 2 mantissa of x, exponent stored in the second argument */",
       [](Args a, EvalContext& ctx) {
         int e = 0;
         double m = std::frexp(ctx.number(*a[0]), &e);
         ctx.assign(*a[1], static_cast<double>(e));
         return m;
       },
       K::Numeric, 1},
      {"modf", "/* 2 fractional part of x, integer part stored in the second argument */",
       [](Args a, EvalContext& ctx) {
         double ip = 0.0;
         double f = std::modf(ctx.number(*a[0]), &ip);
         ctx.assign(*a[1], ip);
         return f;
       },
       K::Numeric, 1},

      {"rand", "/* 0 pseudo-random integer, 0<=rand()<=RAND_MAX */",
       [](Args, EvalContext& ctx) { return static_cast<double>(ctx.rng().next()); }},
      {"srand", "/* 1 seed rand() */",
       [](Args a, EvalContext& ctx) {
         ctx.rng().seed(static_cast<std::uint32_t>(to_int(ctx.number(*a[0]))));
         return 0.0;
       }},
      {"drand", "/* 0 pseudo-random uniform(0,1) value, 0<=drand()<1 */",
       [](Args, EvalContext& ctx) { return ctx.rng().uniform(); }},
      {"irand", "/* 1 pseudo-random integer, 0<=irand(i)<=i-1 */",
       [](Args a, EvalContext& ctx) {
         int i = to_int(ctx.number(*a[0]));
         return static_cast<double>(static_cast<int>(i * ctx.rng().uniform()));
       }},
      {"nrand", "/* 0 pseudo-random standard normal value */",
       [](Args, EvalContext& ctx) {
         // Box-Muller; the second deviate of each pair is discarded.
         double u1 = ctx.rng().uniform();
         double u2 = ctx.rng().uniform();
         return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * std::numbers::pi * u2);
       }},
      {"time", "/* 0 seconds since the epoch */",
       [](Args, EvalContext&) { return static_cast<double>(std::time(nullptr)); }},

      {"avg", "/* n average */", reduce(aggregate::avg), K::Range},
      {"count", "/* n number of cells defined */", reduce(aggregate::count), K::Range},
      {"majority", "/* n non-zero if majority are non-zero */", reduce(aggregate::majority), K::Range},
      {"max", "/* n maximum */", reduce(aggregate::max), K::Range},
      {"min", "/* n minimum */", reduce(aggregate::min), K::Range},
      {"prod", "/* n product */", reduce(aggregate::prod), K::Range},
      {"stdev", "/* n standard deviation */", reduce(aggregate::stdev), K::Range},
      {"sum", "/* n sum */", reduce(aggregate::sum), K::Range},
  };
}

}  // namespace

FunctionRegistry FunctionRegistry::with_builtins() {
  FunctionRegistry r;
  for (auto& b : builtins()) {
    r.add({parse_manifest_comment(b.comment, b.name, b.kind), b.lvalue_slot, std::move(b.impl)});
  }
  return r;
}

}  // namespace ss
