#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fuzzdyn/cli.hpp"

using namespace fuzzdyn;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "fuzzdyn");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class CliDir : public ::testing::Test {
protected:
    void SetUp() override {
        dir = fs::temp_directory_path() / ("fuzzdyn_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
    }
    void TearDown() override { fs::remove_all(dir); }
    fs::path dir;
};

}  // namespace

TEST(Cli, CatalogListsEverything) {
    const auto r = run({"catalog"});
    EXPECT_EQ(r.code, 0);
    for (const auto& e : theorem_entries()) EXPECT_NE(r.out.find(e.name), std::string::npos) << e.name;
    for (const auto& e : generator_entries()) EXPECT_NE(r.out.find(e.syntax), std::string::npos) << e.name;
    const auto j = Json::parse(run({"catalog", "--json"}).out);
    EXPECT_EQ(j["theorems"].size(), theorem_entries().size());
}

TEST(Cli, UniformRigidityOfTheTwelveCycle) {
    const auto r = run({"check", "--system", "rotation:12,1", "--props", "uniform-rigidity", "--eps", "1/24"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("least_n=12"), std::string::npos) << r.out;
}

TEST(Cli, TransitivityWitness) {
    const auto r = run({"check", "--system", "multiply:8,2", "--props", "transitivity", "--json"});
    EXPECT_EQ(r.code, 0) << r.err;
    const auto j = Json::parse(r.out);
    const auto& v = j["verdicts"][0];
    EXPECT_EQ(v["verdict"], "fails");
    EXPECT_EQ(v["witnesses"][0], Json::array({"U", "{0}"}));
    EXPECT_EQ(v["witnesses"][1], Json::array({"V", "{1}"}));
    EXPECT_EQ(j["tool"], "fuzzdyn");
}

TEST(Cli, LevelsAndManyProperties) {
    for (const auto* level : {"base", "hyperspace", "fuzzy-eq", "fuzzy-geq", "fuzzy-f0", "fuzzy-all"}) {
        const auto r = run({"check", "--system", "rotation:3,1", "--level", level, "--m", "2", "--props",
                            "transitivity,mixing,periodic-density,equicontinuity,proximality"});
        EXPECT_EQ(r.code, 0) << level << ": " << r.err;
    }
    std::string all;
    for (const auto& p : check_properties()) all += (all.empty() ? "" : ",") + p;
    const auto r = run({"check", "--system", "rotation:4,1", "--props", all});
    EXPECT_EQ(r.code, 0) << r.err;
    const auto s = run({"check", "--system", "fullshift:2,2", "--level", "hyperspace", "--props", "transitivity,mixing"});
    EXPECT_EQ(s.code, 0) << s.err;
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run({"check", "--system", "rotation:x"}).code, 2);
    EXPECT_EQ(run({"check", "--props", "chaos"}).code, 2);
    EXPECT_EQ(run({"check", "--eps", "0"}).code, 2);
    EXPECT_EQ(run({"check", "--bogus"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"verify", "--theorem", "chaos"}).code, 2);
    EXPECT_EQ(run({"verify"}).code, 2);
    EXPECT_EQ(run({"check", "--system", "file:/nonexistent/sys.json"}).code, 2);
    EXPECT_EQ(run({"check", "--system", "{\"kind\": \"finite\"}"}).code, 2);
    const auto bound = run({"check", "--system", "rotation:20,1", "--level", "hyperspace"});
    EXPECT_EQ(bound.code, 3);
    EXPECT_NE(bound.err.find("max_base_points"), std::string::npos) << bound.err;
    EXPECT_EQ(run({"--version"}).out, std::string(kVersion) + "\n");
}

TEST(Cli, OutputIsDeterministic) {
    for (const std::vector<std::string>& args :
         {std::vector<std::string>{"check", "--system", "multiply:9,2", "--props", "transitivity,uniform-rigidity", "--json"},
          std::vector<std::string>{"verify", "--theorem", "cut-lemma", "--system", "multiply:9,2", "--m", "4", "--json"},
          std::vector<std::string>{"verify", "--theorem", "proximality", "--system", "gridmap:half,8", "--m", "2"}}) {
        const auto a = run(args), b = run(args);
        EXPECT_EQ(a.code, 0) << a.err;
        EXPECT_EQ(a.out, b.out);
    }
}

TEST_F(CliDir, CheckWritesJsonAndCsv) {
    const auto r = run({"check", "--system", "rotation:5,1", "--props", "transitivity,weak-mixing", "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = Json::parse(slurp(dir / "check.json"));
    EXPECT_EQ(j["verdicts"].size(), 2u);
    const auto csv = slurp(dir / "check.csv");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
    for (const auto& e : fs::directory_iterator(dir)) EXPECT_NE(e.path().extension(), ".tmp");
}

TEST_F(CliDir, VerifyWritesReport) {
    const auto r = run({"verify", "--theorem", "proximality", "--system", "gridmap:half,8", "--m", "2", "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = Json::parse(slurp(dir / "verify-proximality.json"));
    EXPECT_EQ(j["report"]["consistent"], true);
    EXPECT_EQ(j["report"]["red_alert"], false);
    EXPECT_TRUE(fs::exists(dir / "verify-proximality.csv"));
    EXPECT_FALSE(fs::exists(dir / "replay-proximality.json"));
}

TEST_F(CliDir, VerifyAcceptsGFromFile) {
    fs::create_directories(dir);
    std::ofstream(dir / "g.json") << R"({"grid_m": 4, "table": ["0", "1/4", "1/4", "3/4", "1"]})";
    const auto r = run({"verify", "--theorem", "cut-lemma", "--system", "multiply:9,2", "--m", "4", "--g",
                        "file:" + (dir / "g.json").string()});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(run({"verify", "--theorem", "cut-lemma", "--system", "multiply:9,2", "--m", "2", "--g",
                   "file:" + (dir / "g.json").string()})
                  .code,
              2);
}

TEST_F(CliDir, PlotData) {
    ASSERT_EQ(run({"plotdata", "--system", "constant:3", "--out", dir.string()}).code, 0);
    // preperiod 1 and period 1 give the default horizon 3
    EXPECT_EQ(slurp(dir / "diam.csv"), "n,diam\n0,1\n1,0\n2,0\n3,0\n");
    ASSERT_EQ(run({"plotdata", "--system", "rotation:12,1", "--out", dir.string()}).code, 0);
    const auto disp = slurp(dir / "displacement.csv");
    EXPECT_NE(disp.find("\n0,0\n"), std::string::npos);
    EXPECT_NE(disp.find("\n12,0\n"), std::string::npos);
    EXPECT_NE(disp.find("\n24,0\n"), std::string::npos);
    EXPECT_NE(disp.find("\n6,1/2\n"), std::string::npos);
    const auto modulus = slurp(dir / "modulus.csv");
    EXPECT_NE(modulus.find("\n1/12,1/12\n"), std::string::npos) << modulus;
    EXPECT_EQ(run({"plotdata", "--system", "fullshift:2,2", "--out", dir.string()}).code, 2);
}

TEST_F(CliDir, UnwritableOutputIsReported) {
    fs::create_directories(dir);
    std::ofstream(dir / "blocker") << "x";
    EXPECT_EQ(run({"check", "--out", (dir / "blocker" / "sub").string()}).code, 2);
}
