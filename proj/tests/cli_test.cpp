#include "cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace gapzeros::cli {
namespace {

struct Result {
    int code = -1;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "gapzeros");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Result r;
    r.code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    for (std::string line; std::getline(is, line);) out.push_back(line);
    return out;
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("gapzeros_cli_test_" + name);
}

TEST(Eval, FreeFamily) {
    const auto r = run_cli({"eval", "--family", "constant:1,0", "--x", "0", "--n", "2"});
    ASSERT_EQ(r.code, kOk) << r.err;
    const auto l = lines(r.out);
    ASSERT_EQ(l.size(), 4u);
    EXPECT_EQ(l[0], "j,sign,log_abs,value");
    EXPECT_EQ(l[3], "2,-1,0,-1");
}

TEST(Eval, PeriodicPowerOfThree) {
    const auto r = run_cli({"--format", "json", "eval", "--family", "periodic2:3,1,0", "--x", "0", "--n", "8"});
    ASSERT_EQ(r.code, kOk) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.at(8).at("value").get<double>(), 81.0);
    EXPECT_EQ(j.at(7).at("sign").get<int>(), 0);
}

TEST(Eval, HumanFormatAndHugeValues) {
    const auto r = run_cli({"--format", "human", "eval", "--family", "periodic2:3,1,0", "--x", "0", "--n", "2000"});
    ASSERT_EQ(r.code, kOk) << r.err;
    EXPECT_NE(r.out.find("p_2000(0) = exp("), std::string::npos);
}

TEST(Eval, BadFamilyIsUsageError) {
    EXPECT_EQ(run_cli({"eval", "--family", "bogus", "--x", "0", "--n", "2"}).code, kUsage);
    EXPECT_EQ(run_cli({"eval", "--family", "constant:0,0", "--x", "0", "--n", "2"}).code, kUsage);
    EXPECT_EQ(run_cli({"eval", "--x", "0", "--n", "2"}).code, kUsage);
    EXPECT_EQ(run_cli({}).code, kUsage);
    EXPECT_EQ(run_cli({"--format", "xml", "eval", "--family", "section4", "--x", "0", "--n", "1"}).code, kUsage);
}

TEST(Zeros, FreeFamilyDegreeTwo) {
    const auto r = run_cli({"zeros", "--family", "constant:1,0", "--n", "2"});
    ASSERT_EQ(r.code, kOk) << r.err;
    const auto l = lines(r.out);
    ASSERT_EQ(l.size(), 3u);
    EXPECT_EQ(l[0], "index,zero,bracket_width");
    EXPECT_NEAR(std::stod(l[1].substr(2)), -1.0, 1e-12);
    EXPECT_NEAR(std::stod(l[2].substr(2)), 1.0, 1e-12);
}

TEST(Zeros, Section4TravelingZero) {
    const auto r = run_cli({"--format", "json", "zeros", "--family", "section4", "--n", "17"});
    ASSERT_EQ(r.code, kOk) << r.err;
    const auto zeros = nlohmann::json::parse(r.out).at("zeros").get<std::vector<double>>();
    ASSERT_EQ(zeros.size(), 17u);
    double best = 1.0;
    for (double z : zeros) best = std::min(best, std::abs(z + 0.5));
    EXPECT_LE(best, 2.0 / 81.0);
}

TEST(Zeros, DegreeZeroRejected) {
    const auto r = run_cli({"zeros", "--family", "constant:1,0", "--n", "0"});
    EXPECT_EQ(r.code, kUsage);
    EXPECT_FALSE(r.err.empty());
}

TEST(Count, OpenInterval) {
    const auto r = run_cli({"count", "--family", "section4", "--n", "17", "--lo", "-0.6", "--hi", "-0.4"});
    ASSERT_EQ(r.code, kOk) << r.err;
    EXPECT_EQ(lines(r.out).at(1), "17,-0.59999999999999998,-0.40000000000000002,1");
    EXPECT_EQ(run_cli({"count", "--family", "section4", "--n", "3", "--lo", "1", "--hi", "0"}).code, kPrecondition);
}

TEST(Certify, Section4HundredDegrees) {
    const auto r = run_cli({"certify", "--family", "section4", "--x0", "0", "--support", "[-5,-1],[1,5]", "--n",
                            "1..100"});
    ASSERT_EQ(r.code, kOk) << r.err;
    const auto l = lines(r.out);
    ASSERT_EQ(l.size(), 101u);
    for (std::size_t i = 1; i < l.size(); ++i) EXPECT_EQ(l[i].substr(l[i].rfind(',') + 1), "true") << l[i];
}

TEST(Certify, KnownSupportAndHumanVerdicts) {
    const auto r = run_cli({"--format", "human", "certify", "--family", "periodic2:3,1,0", "--x0", "0.5", "--support",
                            "known", "--n", "3..5"});
    ASSERT_EQ(r.code, kOk) << r.err;
    const auto l = lines(r.out);
    ASSERT_EQ(l.size(), 3u);
    for (const auto& line : l) EXPECT_EQ(line.rfind("VERIFIED", 0), 0u) << line;
}

TEST(Certify, IsolatedRankOne) {
    const auto r = run_cli({"--format", "json", "certify", "--family", "rank_one:3,constant:1,0", "--isolated",
                            "--n", "0..40"});
    ASSERT_EQ(r.code, kOk) << r.err;
    const auto arr = nlohmann::json::parse(r.out);
    ASSERT_EQ(arr.size(), 41u);
    for (const auto& c : arr) {
        EXPECT_TRUE(c.at("verified").get<bool>());
        EXPECT_NEAR(c.at("x0").get<double>(), 10.0 / 3.0, 1e-12);
    }
    const auto with_x0 = run_cli({"certify", "--family", "rank_one:3,constant:1,0", "--isolated", "--x0", "3.3333",
                                  "--eps", "0.01", "--n", "5"});
    EXPECT_EQ(with_x0.code, kOk) << with_x0.err;
}

TEST(Certify, PreconditionFailures) {
    EXPECT_EQ(run_cli({"certify", "--family", "section4", "--x0", "2", "--support", "[-5,-1],[1,5]", "--n", "3"}).code,
              kPrecondition);
    EXPECT_EQ(run_cli({"certify", "--family", "constant:1,0", "--isolated", "--n", "3"}).code, kPrecondition);
    EXPECT_EQ(run_cli({"certify", "--family", "section4", "--support", "known", "--n", "3"}).code, kPrecondition);
    EXPECT_EQ(run_cli({"certify", "--family", "rank_one:3,constant:1,0", "--x0", "3", "--support", "known"}).code,
              kPrecondition);
    EXPECT_EQ(run_cli({"certify", "--family", "section4", "--x0", "0", "--support", "known", "--n", "5..2"}).code,
              kUsage);
}

TEST(Certify, WrongSupportModelIsReportedAsViolation) {
    const auto r = run_cli({"certify", "--family", "constant:1,0", "--x0", "0", "--support", "[5,6]", "--n", "20"});
    EXPECT_EQ(r.code, kViolation);
    EXPECT_NE(r.out.find("false"), std::string::npos);
}

TEST(Gapdense, ThreeRowsAllPass) {
    const auto r = run_cli({"gapdense", "--n-max", "3"});
    ASSERT_EQ(r.code, kOk) << r.err;
    const auto l = lines(r.out);
    ASSERT_EQ(l.size(), 4u);
    EXPECT_EQ(l[0], "n,j,beta_n,nearest_zero,distance,bound,residual_sq,residual_bound,pass");
    for (std::size_t i = 1; i < 4; ++i) EXPECT_EQ(l[i].substr(l[i].size() - 5), ",true");
}

TEST(Gapdense, CloudRowsInsideGapAndDeterministic) {
    const auto a = run_cli({"gapdense", "--cloud", "97"});
    const auto b = run_cli({"gapdense", "--cloud", "97"});
    ASSERT_EQ(a.code, kOk) << a.err;
    EXPECT_EQ(a.out, b.out);
    const auto l = lines(a.out);
    EXPECT_EQ(l.at(0), "j,zero");
    EXPECT_LE(l.size() - 1, 97u);
    for (std::size_t i = 1; i < l.size(); ++i) {
        const double z = std::stod(l[i].substr(l[i].find(',') + 1));
        EXPECT_GT(z, -1.0);
        EXPECT_LT(z, 1.0);
    }
}

TEST(Gapdense, ThreadCountDoesNotChangeOutput) {
    EXPECT_EQ(run_cli({"gapdense", "--n-max", "5"}).out, run_cli({"--threads", "4", "gapdense", "--n-max", "5"}).out);
}

TEST(Quadrature, WeightsSumToOne) {
    const auto r = run_cli({"--format", "json", "quadrature", "--family", "section4", "--n", "50"});
    ASSERT_EQ(r.code, kOk) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    double total = 0.0;
    for (double w : j.at("weights")) total += w;
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Mcheck, FreeFamilyResidual) {
    const auto r = run_cli({"--format", "json", "mcheck", "--family", "constant:1,0"});
    ASSERT_EQ(r.code, kOk) << r.err;
    EXPECT_LT(nlohmann::json::parse(r.out).at("residual").get<double>(), 1e-8);
    EXPECT_EQ(run_cli({"mcheck", "--family", "constant:1,0", "--im", "0"}).code, kPrecondition);
}

TEST(Config, JsonFileSuppliesFlags) {
    const auto path = temp_file("config.json");
    {
        std::ofstream f(path);
        f << R"({"format": "json", "zeros": {"family": {"kind": "constant", "a": 1, "b": 0}, "n": 2}})";
    }
    const auto r = run_cli({"--config", path.string(), "zeros"});
    ASSERT_EQ(r.code, kOk) << r.err;
    EXPECT_EQ(nlohmann::json::parse(r.out).at("zeros").size(), 2u);
    std::filesystem::remove(path);
}

TEST(Config, UnknownKeysRejected) {
    const auto path = temp_file("bad_config.json");
    {
        std::ofstream f(path);
        f << R"({"format": "json", "colour": "blue"})";
    }
    EXPECT_EQ(run_cli({"--config", path.string(), "zeros", "--family", "section4", "--n", "3"}).code, kUsage);
    {
        std::ofstream f(path);
        f << "{ not json";
    }
    EXPECT_EQ(run_cli({"--config", path.string(), "zeros", "--family", "section4", "--n", "3"}).code, kUsage);
    std::filesystem::remove(path);
}

TEST(Output, OutFlagWritesFile) {
    const auto path = temp_file("zeros.csv");
    const auto r = run_cli({"--out", path.string(), "zeros", "--family", "constant:1,0", "--n", "3"});
    ASSERT_EQ(r.code, kOk) << r.err;
    EXPECT_TRUE(r.out.empty());
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    EXPECT_EQ(lines(ss.str()).size(), 4u);
    std::filesystem::remove(path);
}

TEST(Help, ExitsCleanly) {
    const auto r = run_cli({"--help"});
    EXPECT_EQ(r.code, kOk);
    EXPECT_NE(r.out.find("certify"), std::string::npos);
}

} // namespace
} // namespace gapzeros::cli
