#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include "support.hpp"
#include "urysohn/io.hpp"

using namespace urysohn;
namespace fs = std::filesystem;

namespace {

const fs::path samples = URYSOHN_SAMPLES;

io::Document doc(const char* name) { return io::read_document(samples / name); }

fs::path scratch(const std::string& name, const std::string& body) {
  const fs::path p = fs::temp_directory_path() / ("urysohn_test_" + name);
  std::ofstream(p) << body;
  return p;
}

}  // namespace

TEST(Io, ReadsSpacesAndRefs) {
  const auto s = io::space_from_json(doc("pair_q4.json").value);
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s.denominator(), 4);
  const auto w = io::word_from_json(doc("word.json"));
  EXPECT_EQ(w.alphabet.space(), s);
  EXPECT_EQ(graev_norm_dp(w.word, w.alphabet), 1);
  const auto inst = io::gh_instance_from_json(doc("gh_pair.json"));
  EXPECT_EQ(gh_en_formula(inst).str(), "2/10");
}

TEST(Io, SpaceRoundTrip) {
  const auto s = io::space_from_json(doc("equilateral.json").value);
  EXPECT_EQ(io::space_from_json(io::space_to_json(s)), s);
}

TEST(Io, RejectsMalformedInput) {
  EXPECT_THROW(io::read_document(samples / "missing.json"), InputError);
  EXPECT_THROW(io::read_document(scratch("garbage.json", "{not json")), InputError);
  using io::json;
  EXPECT_THROW(io::space_from_json(json::parse(R"({"points": ["a"], "denominator": 2})")), InputError);
  EXPECT_THROW(io::space_from_json(json::parse(R"({"points": ["a"], "denominator": 2, "dist": [[0.5]]})")),
               InputError);
  EXPECT_THROW(io::space_from_json(json::parse(R"({"points": ["a", "b"], "denominator": 2, "dist": [[0, 1], [2, 0]]})")),
               InputError);
  EXPECT_THROW(io::space_from_json(doc("triangle_violation.json").value), InputError);
}

#ifdef URYSOHN_CLI

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run cli(const std::string& args) {
  const std::string cmd = "cd '" + samples.string() + "' && '" URYSOHN_CLI "' " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST(Cli, ValidateExitCodes) {
  const auto ok = cli("validate pair.json");
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(ok.out, "valid\n");
  const auto bad = cli("validate triangle_violation.json");
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("triangle"), std::string::npos);
  EXPECT_EQ(cli("validate missing.json").code, 1);
}

TEST(Cli, UnknownFlagsAreRejected) {
  EXPECT_EQ(cli("--bogus validate pair.json").code, 1);
  EXPECT_EQ(cli("graev norm --fast word.json").code, 1);
}

TEST(Cli, GuardRefusalExitsTwo) {
  std::string dist = "[";
  for (int i = 0; i < 5; ++i) {
    dist += i ? ",[" : "[";
    for (int j = 0; j < 5; ++j) dist += std::string(j ? "," : "") + (i == j ? "0" : "8");
    dist += "]";
  }
  dist += "]";
  const auto p = scratch("big.json", R"({"points": ["a","b","c","d","e"], "denominator": 8, "dist": )" + dist + "}");
  EXPECT_EQ(cli("theta classify '" + p.string() + "'").code, 2);
}

TEST(Cli, GraevOracleMatchesDp) {
  const auto dp = cli("graev norm word.json");
  const auto brute = cli("graev norm --oracle word.json");
  EXPECT_EQ(dp.code, 0);
  EXPECT_EQ(dp.out, brute.out);
  EXPECT_EQ(dp.out, "1/4\n");
}

TEST(Cli, GhFormulaAndOracle) {
  EXPECT_EQ(cli("gh dist gh_pair.json").out, "2/10\n");
  const auto o = cli("gh dist --oracle gh_pair.json");
  EXPECT_EQ(o.code, 0);
  EXPECT_EQ(o.out.rfind("2/10\n", 0), 0u);
}

TEST(Cli, JsonOutputIsDeterministic) {
  for (const char* args : {"--json theta classify equilateral.json", "--json gh dist gh_pair.json",
                           "--json approximant build seed.json", "--json homog phi relation_word.json"}) {
    const auto a = cli(args), b = cli(args);
    EXPECT_EQ(a.code, 0) << args << "\n" << a.out;
    EXPECT_EQ(a.out, b.out) << args;
    EXPECT_FALSE(io::json::parse(a.out, nullptr, false).is_discarded()) << args;
  }
}

TEST(Cli, SelftestPasses) {
  const auto r = cli("selftest");
  EXPECT_EQ(r.code, 0) << r.out;
}

#endif
