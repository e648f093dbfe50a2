#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "ss/lexparse.hpp"

namespace ss {

namespace {

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}
// '$' belongs to cell names such as $D$1, which must not be split by macros.
bool macro_ident_char(char c) { return ident_char(c) || c == '$'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string upper(std::string_view s) {
  std::string u(s);
  for (auto& c : u) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return u;
}

}  // namespace

// ---------------------------------------------------------------------------
// Preprocessor

std::optional<LogicalLine> Preprocessor::feed(std::string_view physical, int line_no,
                                              bool newline) {
  if (!physical.empty() && physical.back() == '\r') physical.remove_suffix(1);
  if (!joining_) pending_line_ = line_no;
  if (!physical.empty() && physical.back() == '\\') {
    pending_.append(physical.substr(0, physical.size() - 1));
    joining_ = true;
    return std::nullopt;
  }
  std::string logical = std::move(pending_);
  pending_.clear();
  joining_ = false;
  logical.append(physical);

  std::string text = strip_comments(logical, pending_line_);
  if (try_define(text)) return std::nullopt;
  return LogicalLine{expand(text), pending_line_, newline};
}

std::optional<LogicalLine> Preprocessor::finish() {
  std::optional<LogicalLine> out;
  if (joining_) {
    std::string logical = std::move(pending_);
    pending_.clear();
    joining_ = false;
    std::string text = strip_comments(logical, pending_line_);
    if (!try_define(text)) out = LogicalLine{expand(text), pending_line_, false};
  }
  if (in_block_comment_) {
    in_block_comment_ = false;
    if (on_error_) on_error_(comment_line_, "unterminated comment");
  }
  return out;
}

std::string Preprocessor::strip_comments(std::string_view text, int line_no) {
  std::string out;
  out.reserve(text.size());
  char quote = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_block_comment_) {
      if (c == '*' && i + 1 < text.size() && text[i + 1] == '/') {
        in_block_comment_ = false;
        ++i;
        out += ' ';
      }
      continue;
    }
    if (quote) {
      if (c == quote) quote = 0;
      out += c;
      continue;
    }
    if (c == '"' || c == '\'') {
      quote = c;
      out += c;
      continue;
    }
    if (c == '/' && i + 1 < text.size()) {
      if (text[i + 1] == '/') break;
      if (text[i + 1] == '*') {
        in_block_comment_ = true;
        comment_line_ = line_no;
        ++i;
        continue;
      }
    }
    out += c;
  }
  return out;
}

bool Preprocessor::try_define(std::string_view text) {
  auto t = trim(text);
  if (t.empty() || t.front() != '#') return false;
  t.remove_prefix(1);
  t = trim(t);
  constexpr std::string_view kDefine = "define";
  if (t.substr(0, kDefine.size()) != kDefine ||
      (t.size() > kDefine.size() && !std::isspace(static_cast<unsigned char>(t[kDefine.size()])))) {
    if (on_error_) on_error_(pending_line_, "unknown preprocessor directive");
    return true;
  }
  t = trim(t.substr(kDefine.size()));
  std::size_t n = 0;
  while (n < t.size() && ident_char(t[n])) ++n;
  if (n == 0 || !ident_start(t[0])) {
    if (on_error_) on_error_(pending_line_, "#define needs a macro name");
    return true;
  }
  Macro m{std::string(t.substr(0, n)), std::string(trim(t.substr(n)))};
  auto it = std::find_if(macros_->begin(), macros_->end(),
                         [&](const Macro& x) { return x.name == m.name; });
  if (it != macros_->end())
    it->replacement = std::move(m.replacement);
  else
    macros_->push_back(std::move(m));
  return true;
}

std::string Preprocessor::expand(std::string_view text) const {
  if (macros_->empty()) return std::string(text);
  std::string out;
  out.reserve(text.size());
  char quote = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (quote) {
      if (c == quote) quote = 0;
      out += c;
      ++i;
    } else if (c == '"' || c == '\'') {
      quote = c;
      out += c;
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      // numbers such as 1e5 are not identifiers
      while (i < text.size() && (ident_char(text[i]) || text[i] == '.')) out += text[i++];
    } else if (macro_ident_char(c)) {
      std::size_t j = i;
      while (j < text.size() && macro_ident_char(text[j])) ++j;
      std::string_view word = text.substr(i, j - i);
      auto it = std::find_if(macros_->begin(), macros_->end(),
                             [&](const Macro& m) { return m.name == word; });
      if (it != macros_->end())
        out += it->replacement;
      else
        out.append(word);
      i = j;
    } else {
      out += c;
      ++i;
    }
  }
  return out;
}

std::string preprocess(std::string_view source, Preprocessor::ErrorFn on_error) {
  Preprocessor pp(std::move(on_error));
  std::string out;
  int line = 1;
  std::size_t start = 0;
  auto emit = [&](const std::optional<LogicalLine>& l) {
    if (!l) return;
    out += l->text;
    if (l->newline) out += '\n';
  };
  while (start < source.size()) {
    auto nl = source.find('\n', start);
    bool has_nl = nl != std::string_view::npos;
    auto end = has_nl ? nl : source.size();
    emit(pp.feed(source.substr(start, end - start), line++, has_nl));
    start = has_nl ? nl + 1 : source.size();
  }
  emit(pp.finish());
  return out;
}

// ---------------------------------------------------------------------------
// Lexer

bool is_command_keyword(std::string_view word) {
  static constexpr std::array<std::string_view, 16> kKeywords = {
      "byrows", "bycols", "copy",   "debug",  "eval",   "exit",  "fill",  "format",
      "load",   "output", "plot",   "plot2d", "plot3d", "print", "quit",  "srand"};
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

namespace {

constexpr std::array<std::string_view, 20> kMultiOps = {
    "<<=", ">>=", "++", "--", "+=", "-=", "*=", "/=", "%=", "&=",
    "^=",  "|=",  "<<", ">>", "<=", ">=", "==", "!=", "&&", "||"};
constexpr std::string_view kSingleOps = "+-*/%<>!~&^|?:=";
constexpr std::string_view kPunct = "(){},;";

std::optional<std::string> keyword_operator(std::string_view word) {
  auto u = upper(word);
  if (u == "NOT") return "!";
  if (u == "AND") return "&&";
  if (u == "XOR") return "^";
  if (u == "OR") return "||";
  return std::nullopt;
}

}  // namespace

std::vector<Token> tokenize(std::string_view text, int first_line,
                            const std::function<void(const LexError&)>& on_error) {
  std::vector<Token> out;
  int line = first_line;
  std::size_t i = 0;
  auto fail = [&](const std::string& msg) {
    LexError e(msg, line);
    if (!on_error) throw e;
    on_error(e);
    out.push_back(Token{TokenKind::Invalid, msg, line});
  };

  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    Token tok;
    tok.line = line;

    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j < text.size() && text[j] == '.') {
        ++j;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      }
      if (j < text.size() && (text[j] == 'e' || text[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < text.size() && (text[k] == '+' || text[k] == '-')) ++k;
        if (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) {
          while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
          j = k;
        }
      }
      tok.kind = TokenKind::Number;
      tok.text = std::string(text.substr(i, j - i));
      auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + j, tok.number);
      i = j;
      if (ec != std::errc() || !std::isfinite(tok.number)) {
        fail("number '" + tok.text + "' is out of range");
        continue;
      }
      if (i < text.size() && ident_char(text[i])) {
        fail("malformed number '" + tok.text + std::string(1, text[i]) + "'");
        while (i < text.size() && ident_char(text[i])) ++i;
        continue;
      }
      out.push_back(std::move(tok));
      continue;
    }

    if (ident_start(c) || c == '$') {
      if (auto n = cellref_prefix(text.substr(i))) {
        tok.kind = TokenKind::CellRef;
        tok.text = std::string(text.substr(i, n));
        i += n;
        out.push_back(std::move(tok));
        continue;
      }
      if (c == '$') {
        ++i;
        fail("illegal character '$'");
        continue;
      }
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      std::string word(text.substr(i, j - i));
      i = j;
      if (auto op = keyword_operator(word)) {
        tok.kind = TokenKind::Operator;
        tok.text = *op;
      } else {
        tok.kind = is_command_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier;
        tok.text = std::move(word);
      }
      out.push_back(std::move(tok));
      continue;
    }

    if (c == '"' || c == '\'') {
      auto close = text.find_first_of(std::string{c, '\n'}, i + 1);
      if (close == std::string_view::npos || text[close] != c) {
        std::size_t stop = close == std::string_view::npos ? text.size() : close;
        i = stop;
        fail("unterminated string");
        continue;
      }
      tok.kind = TokenKind::String;
      tok.quote = c;
      tok.text = std::string(text.substr(i + 1, close - i - 1));
      i = close + 1;
      out.push_back(std::move(tok));
      continue;
    }

    auto multi = std::find_if(kMultiOps.begin(), kMultiOps.end(), [&](std::string_view op) {
      return text.substr(i, op.size()) == op;
    });
    if (multi != kMultiOps.end()) {
      tok.kind = TokenKind::Operator;
      tok.text = std::string(*multi);
      i += multi->size();
      out.push_back(std::move(tok));
      continue;
    }
    if (kSingleOps.find(c) != std::string_view::npos) {
      tok.kind = TokenKind::Operator;
      tok.text = std::string(1, c);
      ++i;
      out.push_back(std::move(tok));
      continue;
    }
    if (kPunct.find(c) != std::string_view::npos) {
      tok.kind = TokenKind::Punct;
      tok.text = std::string(1, c);
      ++i;
      out.push_back(std::move(tok));
      continue;
    }
    ++i;
    fail(std::string("illegal character '") + c + "'");
  }
  return out;
}

}  // namespace ss
