#include <nswlb/cli.hpp>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = nswlb::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("nswlb_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const json& j) {
    const auto p = (dir_ / name).string();
    std::ofstream(p) << j.dump();
    return p;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

json twoLinks(std::size_t players) {
  json ps = json::array();
  for (std::size_t i = 0; i < players; ++i) ps.push_back({{"strategies", {{"a"}, {"b"}}}});
  return {{"resources", {{{"id", "a"}, {"latency", "poly:0,1"}}, {{"id", "b"}, {"latency", "poly:0,1"}}}},
          {"players", ps}};
}

}  // namespace

TEST_F(CliTest, GenerateThenAnalyze) {
  const auto game = path("g.json");
  ASSERT_EQ(cli({"generate", "unweightedLB", "--m", "2", "--k", "1", "--o", "1", "--out", game}).code, 0);
  const auto r = cli({"analyze", game});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_TRUE(j["isPne"].get<bool>());
  EXPECT_NEAR(j["designated"]["ratio"].get<double>(), std::sqrt(2.0), 1e-12);
}

TEST_F(CliTest, AnalyzeExplicitProfile) {
  const auto game = write("g.json", twoLinks(2));
  const auto r = cli({"analyze", game, "--profile", write("p.json", {0, 0})});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_FALSE(j["isPne"].get<bool>());
  EXPECT_NEAR(j["nsw"].get<double>(), 2.0, 1e-12);
}

TEST_F(CliTest, VerifyBoundsPrintsRows) {
  const auto r = cli({"verify-bounds", "--p", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("1\t2\t2\t1.44467\t4\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("sup\t2\t2\t1.44467\t4\n"), std::string::npos) << r.out;
}

TEST_F(CliTest, OptSinglePlayer) {
  json g = {{"resources", {{{"id", "slow"}, {"latency", "poly:0,2"}}, {{"id", "fast"}, {"latency", "poly:0,1"}}}},
            {"players", {{{"strategies", {{"slow"}, {"fast"}}}}}}};
  for (const std::string method : {"brute", "matching"}) {
    const auto r = cli({"opt", write("g.json", g), "--method", method});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["profile"], json({1}));
    EXPECT_NEAR(j["nsw"].get<double>(), 1.0, 1e-12);
  }
}

TEST_F(CliTest, ExitCodes) {
  auto bad = cli({"analyze", path("missing.json")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_EQ(json::parse(bad.err)["error"], "validation");
  EXPECT_EQ(cli({"generate", "nope"}).code, 1);
  EXPECT_EQ(cli({"frobnicate"}).code, 1);

  const auto big = cli({"opt", write("big.json", twoLinks(30)), "--method", "brute"});
  EXPECT_EQ(big.code, 2);
  EXPECT_EQ(json::parse(big.err)["error"], "sizeCap");

  const auto stuck = cli({"dynamics", write("g.json", twoLinks(4)), "--max-sweeps", "1"});
  EXPECT_EQ(stuck.code, 3);
  EXPECT_EQ(json::parse(stuck.err)["error"], "nonConvergence");
}

TEST_F(CliTest, DynamicsWritesTrace) {
  const auto trace = path("trace.csv");
  const auto r = cli({"dynamics", write("g.json", twoLinks(4)), "--trace", trace});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(json::parse(r.out)["isPne"].get<bool>());
  std::ifstream in(trace);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "sweep,player,from,to,old_cost,new_cost");
}

TEST_F(CliTest, GreedyAndNonatomic) {
  auto inst = twoLinks(2);
  inst["arrivalOrder"] = {1, 0};
  const auto g = cli({"greedy", write("i.json", inst)});
  ASSERT_EQ(g.code, 0) << g.err;
  const auto gj = json::parse(g.out);
  EXPECT_NEAR(gj["competitiveRatio"].get<double>(), 1.0, 1e-12);

  json flow = {{"resources", {{{"id", "a"}, {"latency", "poly:0,1"}}, {{"id", "b"}, {"latency", "poly:0,2"}}}},
               {"types", {{{"rate", 3.0}, {"resources", {"a", "b"}}}}}};
  for (const std::string method : {"pairwise", "waterfill"}) {
    const auto r = cli({"nonatomic", write("f.json", flow), "--method", method});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_NEAR(j["flow"][0][0].get<double>(), 2.0, 1e-6);
    EXPECT_LE(j["wardropGap"].get<double>(), 1e-6);
  }
}

TEST_F(CliTest, ExperimentIsDeterministic) {
  json plan = {{"seed", 7},
               {"entries",
                {{{"family", "unweightedLB"}, {"m", 3}, {"f", "poly:0,1"}},
                 {{"family", "linearCG"}, {"n", 4}, {"eps", 0.4}},
                 {{"family", "randomWeighted"}, {"count", 20}, {"maxPlayers", 4}},
                 {{"family", "randomGreedy"}, {"count", 20}, {"maxPlayers", 4}}}}};
  const auto p = write("plan.json", plan);
  ASSERT_EQ(cli({"experiment", p, "--out", path("a"), "--jobs", "4"}).code, 0);
  ASSERT_EQ(cli({"experiment", p, "--out", path("b"), "--jobs", "1"}).code, 0);
  auto slurp = [](const fs::path& f) {
    std::ifstream in(f, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  const auto a = slurp(dir_ / "a" / "results.csv");
  EXPECT_EQ(a, slurp(dir_ / "b" / "results.csv"));
  EXPECT_EQ(a.substr(0, a.find('\n')), nswlb::experiment::kCsvHeader);
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 43);
}
