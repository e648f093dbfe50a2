#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "support.hpp"

using namespace ss;

namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> files, std::string_view input) {
  std::istringstream in{std::string(input)};
  std::ostringstream out, err;
  int status = run(files, in, out, err);
  return {status, out.str(), err.str()};
}

void write_file(const std::string& path, std::string_view text) {
  std::ofstream(path) << text;
}

std::string shell(const std::string& cmd) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  pclose(p);
  return out;
}

}  // namespace

TEST(Cli, FilesThenStandardInput) {
  write_file("cli_sqrt.ss", "x = 2; a0 = b0 ? b0 : x/2; b0 = (a0+x/a0)/2;\nformat \"%.18g\"; eval 100;\n");
  auto r = run_cli({"cli_sqrt.ss"}, "print values;");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "\tA\tB\n0\t1.41421356237309492\t1.41421356237309492\n\n");
  EXPECT_EQ(r.err, "ss_eval: converged after 6 iterations\n");
}

TEST(Cli, EmptyInput) {
  auto r = run_cli({}, "");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "");
  EXPECT_EQ(r.err, "");
}

TEST(Cli, MissingFileContinues) {
  write_file("cli_ok.ss", "a0 = 1; eval; print values;");
  auto r = run_cli({"cli_missing.ss", "cli_ok.ss"}, "");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("error: cannot read 'cli_missing.ss'"), std::string::npos);
  EXPECT_EQ(r.out, "\tA\n0\t1.00\n\n");
}

TEST(Cli, DiagnosticsCarryFileAndLine) {
  write_file("cli_bad.ss", "a0 = 1;\n\na1 = (2;\na2 = 3; eval; print values;\n");
  auto r = run_cli({"cli_bad.ss"}, "");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.err.rfind("cli_bad.ss:3: error: ", 0), 0u) << r.err;
  // The bad statement is skipped; its neighbours still run.
  EXPECT_EQ(r.out, "\tA\n0\t1.00\n1\n2\t3.00\n\n");
}

TEST(Cli, StatementIsolation) {
  auto r = run_cli({}, "a0 = 5; a0 = 1 +; b0 = @; eval; print values;");
  EXPECT_EQ(r.out, "\tA\n0\t5.00\n\n");
  EXPECT_NE(r.err.find("<stdin>:1: error:"), std::string::npos);
}

TEST(Cli, StatementsSpanLines) {
  auto r = run_cli({}, "a0 =\n 1 +\n 2\n;\neval; print values;");
  EXPECT_EQ(r.out, "\tA\n0\t3.00\n\n");
}

TEST(Cli, UnterminatedStatementIsReported) {
  auto r = run_cli({}, "a0 = 1");
  EXPECT_NE(r.err.find("<stdin>:1: error: missing ';'"), std::string::npos);
}

TEST(Cli, LoadCommand) {
  write_file("cli_inner.ss", "#define K 4\nb0 = K * 2;\n");
  // Macros from a loaded file apply from the next input line on.
  auto r = run_cli({}, "load \"cli_inner.ss\";\na0 = K; eval; print values;");
  EXPECT_EQ(r.out, "\tA\tB\n0\t4.00\t8.00\n\n");
  write_file("cli_loop.ss", "load \"cli_loop.ss\";\n");
  auto loop = run_cli({"cli_loop.ss"}, "");
  EXPECT_NE(loop.err.find("load nesting too deep"), std::string::npos);
}

TEST(Cli, ExitStopsStandardInput) {
  write_file("cli_exit.ss", "a0 = 1; exit;");
  auto r = run_cli({"cli_exit.ss"}, "eval; print values;");
  EXPECT_EQ(r.out, "");
}

TEST(Cli, DeterministicReplay) {
  const std::string a = "srand 9; a0 = drand(); b0 += nrand();\n";
  const std::string b = "c0 = irand(10) + rand(); eval 20; print values formulas;\n";
  write_file("cli_part_a.ss", a);
  write_file("cli_part_b.ss", b);
  write_file("cli_whole.ss", a + b);
  auto split = run_cli({"cli_part_a.ss", "cli_part_b.ss"}, "");
  auto whole = run_cli({"cli_whole.ss"}, "");
  EXPECT_EQ(split.out, whole.out);
  EXPECT_EQ(split.err, whole.err);
}

TEST(Cli, BinaryPipeline) {
  write_file("cli_pipe.ss", "print formats;");
  std::string formats = shell(std::string(SS_BINARY) + " cli_pipe.ss < /dev/null");
  EXPECT_NE(formats.find("format \"%.2f\""), std::string::npos);
  // Output of one run is valid input for the next.
  std::string replay = shell("(echo 'format \"%.3f\"; format col C \"%g\"; print formats;' | " +
                             std::string(SS_BINARY) + "; echo 'print formats;') | " +
                             std::string(SS_BINARY) + " 2>&1");
  EXPECT_NE(replay.find("format \"%.3f\""), std::string::npos) << replay;
  EXPECT_EQ(replay.find("error"), std::string::npos) << replay;
}
