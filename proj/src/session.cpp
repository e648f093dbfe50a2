#include "ss/session.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

namespace ss {

namespace {
constexpr int kMaxLoadDepth = 32;
}

// One input file or stream: its own comment/continuation state and its own
// queue of tokens waiting for a ';'.
class Session::Unit {
 public:
  Unit(Session& session, std::string name)
      : s_(session),
        name_(std::move(name)),
        pp_([this](int line, const std::string& msg) { error_at(line, msg); }, session.macros_) {}

  void line(std::string_view text, bool newline) {
    ++line_no_;
    if (auto l = pp_.feed(text, line_no_, newline)) push(*l);
  }

  void finish() {
    if (auto l = pp_.finish()) push(*l);
    if (!pending_.empty() && !s_.stopped_) error_at(pending_.front().line, "missing ';' at end of input");
    pending_.clear();
  }

 private:
  void error_at(int line, const std::string& msg) {
    s_.diag_.set_location(name_, line);
    s_.diag_.error(msg);
  }

  void push(const LogicalLine& l) {
    auto toks = tokenize(l.text, l.line, [&](const LexError& e) { error_at(e.line(), e.what()); });
    pending_.insert(pending_.end(), std::make_move_iterator(toks.begin()),
                    std::make_move_iterator(toks.end()));
    drain();
  }

  void drain() {
    for (;;) {
      if (s_.stopped_) {
        pending_.clear();
        return;
      }
      auto semi = std::find_if(pending_.begin(), pending_.end(),
                               [](const Token& t) { return t.is_op(";"); });
      if (semi == pending_.end()) return;
      std::vector<Token> stmt(std::make_move_iterator(pending_.begin()),
                              std::make_move_iterator(semi + 1));
      pending_.erase(pending_.begin(), semi + 1);
      run(stmt);
    }
  }

  void run(const std::vector<Token>& stmt) {
    s_.diag_.set_location(name_, stmt.front().line);
    // Lexical errors were reported when they were found.
    if (std::any_of(stmt.begin(), stmt.end(),
                    [](const Token& t) { return t.kind == TokenKind::Invalid; }))
      return;
    if (stmt.size() == 1) return;  // empty statement
    Statement st;
    try {
      st = parse_statement(stmt);
    } catch (const ParseError& e) {
      s_.diag_.error(e.what());
      return;
    }
    if (s_.executor_.execute(st) == Flow::Exit) s_.stopped_ = true;
  }

  Session& s_;
  std::string name_;
  Preprocessor pp_;
  std::vector<Token> pending_;
  int line_no_ = 0;
};

Session::Session(std::ostream& out, std::ostream& err, FunctionRegistry functions)
    : err_(err),
      diag_(err),
      functions_(std::move(functions)),
      out_(out),
      macros_(std::make_shared<Preprocessor::MacroTable>()),
      executor_(sheet_, functions_, diag_, out_) {
  executor_.set_macros(macros_.get());
  executor_.set_loader([this](const std::string& file) { run_file(file); });
}

bool Session::run_file(const std::string& path) {
  if (depth_ >= kMaxLoadDepth) {
    diag_.error("load nesting too deep at '" + path + "'");
    return false;
  }
  std::ifstream in(path);
  if (!in) {
    diag_.error("cannot read '" + path + "'");
    unreadable_ = true;
    return false;
  }
  run_stream(in, path);
  return true;
}

void Session::run_stream(std::istream& in, const std::string& name) {
  const std::string saved_file = diag_.file();
  const int saved_line = diag_.line();
  ++depth_;
  {
    Unit unit(*this, name);
    std::string line;
    while (!stopped_ && std::getline(in, line)) unit.line(line, !in.eof());
    unit.finish();
  }
  --depth_;
  diag_.set_location(saved_file, saved_line);
}

void Session::run_text(std::string_view text, const std::string& name) {
  std::istringstream in{std::string(text)};
  run_stream(in, name);
}

int run(std::span<const std::string> args, std::istream& in, std::ostream& out, std::ostream& err) {
  Session session(out, err);
  for (const auto& file : args) {
    if (session.stopped()) break;
    session.run_file(file);
  }
  if (!session.stopped()) session.run_stream(in, "<stdin>");
  return session.exit_status();
}

}  // namespace ss
