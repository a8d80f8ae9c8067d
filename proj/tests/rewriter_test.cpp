// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "oracles.hpp"
#include "unioffload/rewriter.hpp"

using namespace unioffload;

namespace {

const Registry& reg() { return Registry::bundled(); }

TranspileResult run(const std::string& src, Backend b, PragmaStyle style = PragmaStyle::Hash) {
  TranspileConfig cfg;
  cfg.backend = b;
  cfg.style = style;
  return transpile(src, cfg, reg());
}

// Lines of `after` that differ from `before`, assuming only replacements.
std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::size_t b = 0;
  while (b < text.size()) {
    auto e = text.find('\n', b);
    if (e == std::string::npos) e = text.size();
    out.push_back(text.substr(b, e - b));
    b = e + 1;
  }
  return out;
}

}  // namespace

TEST(Transpile, NbodyOnAccKernels) {
  auto src = oracle::read_fixture("nbody.c");
  auto res = run(src, Backend::AccKernels);
  ASSERT_TRUE(res.ok);
  auto in = lines_of(src);
  auto out = lines_of(res.output);
  ASSERT_EQ(out.size(), in.size() + 1);
  EXPECT_EQ(out[1], "  #pragma acc kernels vector_length(NTHREADS)");
  EXPECT_EQ(out[2], "  #pragma acc loop independent");
  EXPECT_EQ(out[7], "    #pragma acc loop seq");
  // Everything else is untouched.
  std::vector<std::string> rest_in(in), rest_out(out);
  rest_in.erase(rest_in.begin() + 6);
  rest_in.erase(rest_in.begin() + 1);
  rest_out.erase(rest_out.begin() + 7);
  rest_out.erase(rest_out.begin() + 1, rest_out.begin() + 3);
  EXPECT_EQ(rest_in, rest_out);
}

TEST(Transpile, DiffusionOnOmpDistribute) {
  auto src = oracle::read_fixture("diffusion.c");
  auto res = run(src, Backend::OmpDistribute);
  ASSERT_TRUE(res.ok);
  auto out = lines_of(res.output);
  EXPECT_EQ(out[9], "  #pragma omp target teams distribute parallel for simd collapse(3)");
  bool noted = false;
  for (const auto& d : res.diagnostics) noted |= d.message.find("ACC_CLAUSE_PRESENT") != std::string::npos;
  EXPECT_TRUE(noted);
  EXPECT_EQ(lines_of(src).size(), out.size());
}

TEST(Transpile, NoInvocationsIsIdentity) {
  const std::string src = "int main() {\r\n  return 0; // OFFLOAD()\r\n}";
  for (Backend b : kAllBackends) {
    auto res = run(src, b);
    EXPECT_TRUE(res.ok);
    EXPECT_EQ(res.output, src);
    EXPECT_TRUE(res.diagnostics.empty());
  }
}

TEST(Transpile, DroppedDirectiveRemovesLine) {
  auto res = run("a;\n  PRAGMA_ACC_LOOP(ACC_CLAUSE_SEQ)\nb;\n", Backend::OmpLoop);
  ASSERT_TRUE(res.ok);
  EXPECT_EQ(res.output, "a;\nb;\n");
}

TEST(Transpile, UnderscoreStyleIsOneLine) {
  auto res = run("  OFFLOAD()\n", Backend::AccKernels, PragmaStyle::Underscore);
  EXPECT_EQ(res.output, "  _Pragma(\"acc kernels\") _Pragma(\"acc loop\")\n");
}

TEST(Transpile, PreservesCrLf) {
  auto res = run("x;\r\n\tOFFLOAD()\r\ny;\r\n", Backend::AccParallel);
  EXPECT_EQ(res.output, "x;\r\n\t#pragma acc parallel\r\n\t#pragma acc loop\r\ny;\r\n");
}

TEST(Transpile, KeepDirectiveComment) {
  TranspileConfig cfg;
  cfg.backend = Backend::OmpLoop;
  cfg.keep_directive_comment = true;
  auto res = transpile("OFFLOAD(COLLAPSE(2),\n   AS_ASYNC())\n", cfg, reg());
  EXPECT_EQ(res.output, "#pragma omp target teams loop collapse(2) nowait\n// from: OFFLOAD(COLLAPSE(2), AS_ASYNC())\n");
}

TEST(Transpile, ErrorsProduceNoOutput) {
  auto res = run("ok;\n  OFFLOAD(COLLAPSE(2), bogus)\n  OFFLOAD(\n", Backend::AccKernels);
  EXPECT_FALSE(res.ok);
  EXPECT_TRUE(res.output.empty());
  ASSERT_FALSE(res.diagnostics.empty());
  EXPECT_EQ(res.diagnostics[0].level, Level::Error);
}

// Every diagnostic points inside the invocation that produced it.
TEST(Transpile, DiagnosticLocationsFallInsideInvocation) {
  const std::string src = "int a;\n    OFFLOAD(NUM_THREADS(4), COLLAPSE(2), ACC_CLAUSE_PRESENT(f))\nint b;\n";
  auto res = run(src, Backend::Fallback);
  ASSERT_TRUE(res.ok);
  ASSERT_FALSE(res.diagnostics.empty());
  for (const auto& d : res.diagnostics) {
    EXPECT_EQ(d.loc.line, 2u) << d.message;
    EXPECT_GE(d.loc.offset, src.find("OFFLOAD"));
    EXPECT_LT(d.loc.offset, src.find("int b"));
  }
  auto bad = run(src.substr(0, src.find("COLLAPSE(2)")) + "COLLAPSE())\n", Backend::Fallback);
  ASSERT_FALSE(bad.ok);
  EXPECT_EQ(bad.diagnostics[0].loc.line, 2u);
  EXPECT_EQ(bad.diagnostics[0].loc.column, 29u);
}

TEST(Transpile, TrailingCodeMovesToItsOwnLine) {
  auto res = run("  OFFLOAD() for (;;) {}\n", Backend::OmpLoop);
  EXPECT_EQ(res.output, "  #pragma omp target teams loop\n  for (;;) {}\n");
  auto again = run(res.output, Backend::OmpLoop);
  EXPECT_EQ(again.output, res.output);
}
