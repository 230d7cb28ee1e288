#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "kgframe/cli.hpp"
#include "kgframe/json_io.hpp"
#include "test_util.hpp"

using namespace kgframe;
using kgframe::cli::run;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("kgframe_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const auto p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  std::filesystem::path dir_;
};

const char* kScalarSpec = R"({"system": {"ambient_dim": 1, "blocks": [{"dim": 1, "matrix": [[{"re": 2, "im": 0}]]}]},
                              "K": [[{"re": 1, "im": 0}]]})";

const char* kRankDeficient = R"({"system": {"ambient_dim": 2, "blocks": [{"dim": 1, "matrix": [[1, 0]]}]}})";

json parse_out(const cli::CommandResult& r) { return json::parse(r.out); }

}  // namespace

TEST_F(CliTest, CheckScalarSpec) {
  const auto path = write("s.json", kScalarSpec);
  const auto r = run({"check", "--input", path});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const json j = parse_out(r);
  EXPECT_NEAR(j["lower"].get<double>(), 4.0, 1e-9);
  EXPECT_NEAR(j["upper"].get<double>(), 4.0, 1e-12);
  EXPECT_TRUE(j["k_g_frame"].get<bool>());
  EXPECT_EQ(run({"bounds", "-i", path}).out, r.out);
}

TEST_F(CliTest, CheckRankDeficient) {
  const auto r = run({"check", "--input", write("r.json", kRankDeficient)});
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_FALSE(parse_out(r)["k_g_frame"].get<bool>());
}

TEST_F(CliTest, CheckMalformed) {
  auto r = run({"check", "--input", write("m.json", "{\"system\": [")});
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_FALSE(r.err.empty());
  r = run({"check", "--input", (dir_ / "missing.json").string()});
  EXPECT_EQ(r.exit_code, 2);
  r = run({"check", "--input",
           write("d.json", R"({"system": {"ambient_dim": 2, "blocks": [{"dim": 1, "matrix": [[1]]}]}})")});
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.err.find("system.blocks[0]"), std::string::npos) << r.err;
}

TEST_F(CliTest, CheckCsv) {
  const auto r = run({"check", "--input", write("s.json", kScalarSpec), "--csv"});
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out.rfind("lower,upper,", 0), 0u);
}

TEST_F(CliTest, ToleranceFlagsAndEnvironment) {
  const auto path = write("s.json", kScalarSpec);
  EXPECT_EQ(run({"check", "--input", path, "--tol-psd", "1e-7"}).exit_code, 0);
  EXPECT_EQ(run({"check", "--input", path, "--tol-psd", "2"}).exit_code, 2);
  EXPECT_EQ(run({"check", "--input", path}, {{"KGFRAME_TOL_RANK", "-1"}}).exit_code, 2);
  EXPECT_EQ(run({"check", "--input", path}, {{"KGFRAME_TOL_RANK", "1e-9"}}).exit_code, 0);
}

TEST_F(CliTest, Dual) {
  auto r = run({"dual", "--input", write("s.json", kScalarSpec)});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  json j = parse_out(r);
  EXPECT_NEAR(j["product"].get<double>(), 1.0, 1e-6);
  const auto dual = system_from_json(j["dual"], "dual");
  EXPECT_NEAR(std::abs(dual.op(0)(0, 0) - 0.5), 0.0, 1e-12);

  const auto id = write("i.json", R"({"system": {"ambient_dim": 2, "blocks": [{"dim": 2, "matrix": [[1, 0], [0, 1]]}]},
                                      "K": [[1, 2], [3, 4]]})");
  r = run({"dual", "--input", id});
  ASSERT_EQ(r.exit_code, 0);
  j = parse_out(r);
  EXPECT_MAT_NEAR(system_from_json(j["dual"], "dual").op(0), (ComplexMatrix{{1.0, 2.0}, {3.0, 4.0}}), 1e-12);

  EXPECT_EQ(run({"dual", "--input", write("r.json", kRankDeficient)}).exit_code, 1);
}

TEST_F(CliTest, Atomic) {
  const auto path = write("s.json", kScalarSpec);
  auto r = run({"atomic", "--input", path, "--vector", "1"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  json j = parse_out(r);
  EXPECT_NEAR(j["c"].get<double>(), 0.5, 1e-12);
  EXPECT_NEAR(j["norm"].get<double>(), 0.5, 1e-12);

  r = run({"atomic", "--input", path, "--vector", "[0]"});
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(parse_out(r)["norm"].get<double>(), 0.0);

  EXPECT_EQ(run({"atomic", "--input", path, "--vector", "1,2"}).exit_code, 2);
}

TEST_F(CliTest, CombineModes) {
  const auto lin = write("lin.json", R"({"system": {"ambient_dim": 1, "blocks": [{"dim": 1, "matrix": [[2]]}]},
                                        "K1": [[1]], "K2": [[1]], "alpha": 1, "beta": 0})");
  auto r = run({"combine", "--mode", "linear", "--input", lin});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  json j = parse_out(r);
  EXPECT_NEAR(j["bound"]["measured_lower"].get<double>(), 4.0, 1e-8);
  EXPECT_NEAR(j["bound"]["predicted_lower"].get<double>(), 2.0, 1e-8);

  const auto nonorth = write("p.json", R"({"system": {"ambient_dim": 1, "blocks": [{"dim": 1, "matrix": [[2]]}]},
                                          "second_system": {"ambient_dim": 1, "blocks": [{"dim": 1, "matrix": [[1]]}]},
                                          "K": [[1]], "U": [[1]], "V": [[1]]})");
  r = run({"combine", "--mode", "perturb", "--input", nonorth});
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("OrthogonalityViolated"), std::string::npos) << r.err;

  EXPECT_EQ(run({"combine", "--mode", "bogus", "--input", lin}).exit_code, 2);
}

TEST_F(CliTest, CombineParsevalOnGeneratedPair) {
  // two Parseval systems for K = I with disjoint supports
  const auto pair = write("pp.json", R"({
      "system": {"ambient_dim": 2, "blocks": [{"dim": 2, "matrix": [[1, 0], [0, 1]]}, {"dim": 2, "matrix": [[0, 0], [0, 0]]}]},
      "second_system": {"ambient_dim": 2, "blocks": [{"dim": 2, "matrix": [[0, 0], [0, 0]]}, {"dim": 2, "matrix": [[1, 0], [0, 1]]}]},
      "K": [[1, 0], [0, 1]]})");
  const auto r = run({"combine", "--mode", "parseval", "--input", pair});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NEAR(parse_out(r)["tightness"].get<double>(), 2.0, 1e-12);
}

TEST_F(CliTest, Verify) {
  auto r = run({"verify", "--theorem", "L4.9", "--trials", "100", "--seed", "7"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(parse_out(r)["passes"].get<int>(), 100);

  r = run({"verify", "--theorem", "T4.10", "--trials", "50", "--seed", "1"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_TRUE(parse_out(r).contains("tallies"));

  EXPECT_EQ(run({"verify", "--theorem", "X9"}).exit_code, 2);
  EXPECT_EQ(run({"verify", "--theorem", "L2.3", "--dims", "n=5-2"}).exit_code, 2);

  const auto a = run({"verify", "--theorem", "T4.8", "--trials", "30", "--seed", "4", "--dims", "n=1-5,blocks=2-4,m=1-3"});
  const auto b = run({"verify", "--theorem", "T4.8", "--trials", "30", "--seed", "4", "--dims", "n=1-5,blocks=2-4,m=1-3",
                      "--jobs", "4"});
  ASSERT_EQ(a.exit_code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST_F(CliTest, GenRoundTrips) {
  for (const std::string kind : {"system", "parseval", "orthogonal-pair"}) {
    const auto g1 = run({"gen", "--kind", kind, "--seed", "9", "--dims", "3,2,2"});
    const auto g2 = run({"gen", "--kind", kind, "--seed", "9", "--dims", "3,2,2"});
    ASSERT_EQ(g1.exit_code, 0) << kind << g1.err;
    EXPECT_EQ(g1.out, g2.out);
    const auto path = write(kind + ".json", g1.out);
    const auto c = run({"check", "--input", path});
    EXPECT_NE(c.exit_code, 2) << kind << c.err;
    const auto spec = parse_frame_spec_text(g1.out);
    EXPECT_EQ(parse_frame_spec_text(frame_spec_to_json(spec).dump()), spec);
    if (kind == "parseval") {
      EXPECT_TRUE(parse_out(c)["parseval"].get<bool>());
    }
  }
  EXPECT_EQ(run({"gen", "--kind", "system", "--dims", "0"}).exit_code, 2);
  EXPECT_EQ(run({"gen", "--kind", "system", "--dims", "17"}).exit_code, 2);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).exit_code, 2);
  EXPECT_EQ(run({"frobnicate"}).exit_code, 2);
}

TEST(CliBinary, ExitCodesThroughProcess) {
  const std::string cmd = std::string(KGFRAME_CLI_PATH) + " gen --kind system --seed 3 --dims 2 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  ASSERT_NE(pipe, nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t got = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), got);
  const int status = pclose(pipe);
  EXPECT_EQ(WEXITSTATUS(status), 0);
  EXPECT_EQ(out, cli::run({"gen", "--kind", "system", "--seed", "3", "--dims", "2"}).out);

  const std::string bad = std::string(KGFRAME_CLI_PATH) + " verify --theorem X9 >/dev/null 2>&1";
  EXPECT_EQ(WEXITSTATUS(std::system(bad.c_str())), 2);
}
