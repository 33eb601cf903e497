#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = reslab::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("psi") {
    const auto r = invoke({"psi", "--x", "10", "--y", "3"});
    CHECK(r.code == 0);
    CHECK(r.out == "7\n");
    CHECK(r.err.empty());
    const auto grid = invoke({"psi", "--x", "10,100", "--y", "2,3", "--format", "csv"});
    CHECK(grid.out.rfind("x,y,u,psi_exact,psi_estimate,ratio\n", 0) == 0);
  }

  TEST_CASE("delta") {
    const auto r = invoke({"delta", "--q", "5", "--x", "2"});
    CHECK(r.code == 0);
    CHECK(r.out == "1.41421356237\nwitness 1 (1)\n");
    const json j = json::parse(invoke({"delta", "--q", "5", "--x", "2", "--format", "json"}).out);
    CHECK(j["witness_flat"] == 1);
  }

  TEST_CASE("small subcommands") {
    CHECK(invoke({"psiq", "--x", "10", "--y", "3", "--m", "2"}).out == "3\n");
    CHECK(invoke({"enumerate", "--x", "10", "--y", "3"}).out == "1\n2\n3\n4\n6\n8\n9\n");
    CHECK(invoke({"alpha", "--x", "4", "--y", "2"}).out == "0.584962500721\n");
    CHECK(invoke({"charsum", "--q", "5", "--x", "1", "--chi", "2"}).out == "1 0\n");
    const auto cs = invoke({"charsum", "--q", "5", "--x", "4", "--chi", "2", "--format", "json"});
    CHECK(cs.code == 0);
    CHECK(json::parse(cs.out)["abs"].get<double>() < 1e-12);
    CHECK(invoke({"charsum", "--q", "5", "--x", "4", "--chi", "4"}).code == 1);
    const auto all = invoke({"charsum", "--q", "7", "--x", "3", "--format", "csv"});
    CHECK(std::count(all.out.begin(), all.out.end(), '\n') == 7);
  }

  TEST_CASE("verify emits a JSON record") {
    const auto r = invoke({"verify", "--q", "99991", "--x", "1000", "--c", "0.24", "--eps", "0.1"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["chain_ok"] == true);
    CHECK(j["q"] == 99991);
    CHECK(j["delta_exact"].get<double>() > 0.0);
    CHECK_FALSE(j.contains("timings_ms"));
    // Round trip through a generic parser and back to identical bytes.
    CHECK(json::parse(j.dump()) == j);
    const auto again = invoke({"verify", "--q", "99991", "--x", "1000", "--c", "0.24", "--eps", "0.1"});
    CHECK(again.out == r.out);
  }

  TEST_CASE("structured subcommands") {
    const auto res = invoke({"resonate", "--q", "101", "--x", "20", "--y", "7", "--truncation", "2000"});
    REQUIRE(res.code == 0);
    const json j = json::parse(res.out);
    CHECK(j["orthogonality"]["relative"].get<double>() < 1e-8);
    CHECK(j["bound_nonprincipal"].get<double>() <= j["delta_exact"].get<double>() + 1e-9);

    const auto sw = invoke({"sweep", "--q", "1009,7919", "--x", "31", "--format", "json"});
    REQUIRE(sw.code == 0);
    CHECK(json::parse(sw.out)["records"].size() == 2);
    const auto sw_csv = invoke({"sweep", "--q-range", "1000,2000,3", "--sigma", "0.45"});
    CHECK(sw_csv.code == 0);
    CHECK(std::count(sw_csv.out.begin(), sw_csv.out.end(), '\n') == 4);

    CHECK(json::parse(invoke({"conjecture", "--q", "997", "--x", "300", "--A", "1", "--top", "3"}).out)["rows"].size() == 3);
    const auto lv = invoke({"levels", "--q", "1000003", "--x", "1000", "--format", "text"});
    CHECK(lv.out.find("levels[0].name: hough_corollary") != std::string::npos);
  }

  TEST_CASE("output file") {
    const auto path = std::filesystem::temp_directory_path() / "reslab_cli_test.csv";
    const auto r = invoke({"psi", "--x", "10", "--y", "3", "--output", path.string()});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(content == "7\n");
    std::filesystem::remove(path);
    const auto bad = invoke({"psi", "--x", "10", "--y", "3", "--output", "/nonexistent/dir/f"});
    CHECK(bad.code == 1);
    CHECK(bad.err.rfind("error: io: ", 0) == 0);
  }

  TEST_CASE("usage and runtime errors") {
    CHECK(invoke({}).code == 2);
    CHECK(invoke({"frobnicate"}).code == 2);
    CHECK(invoke({"psi", "--x", "10"}).code == 2);
    CHECK(invoke({"psi", "--x", "ten", "--y", "3"}).code == 2);
    CHECK(invoke({"delta", "--q", "2", "--x", "1"}).code == 2);
    CHECK(invoke({"verify", "--q", "101", "--x", "50", "--c", "1.5"}).code == 2);
    CHECK(invoke({"psi", "--x", "10", "--y", "3", "--format", "xml"}).code == 2);
    const auto usage = invoke({"psi"});
    CHECK(usage.err.rfind("error: usage: ", 0) == 0);
    CHECK(std::count(usage.err.begin(), usage.err.end(), '\n') == 1);

    const auto domain = invoke({"verify", "--q", "101", "--x", "50", "--c", "0.2"});
    CHECK(domain.code == 1);
    CHECK(domain.err.rfind("error: domain: ", 0) == 0);
    const auto budget = invoke({"enumerate", "--x", "1000", "--y", "3", "--budget", "10"});
    CHECK(budget.code == 1);
    CHECK(budget.err.rfind("error: budget: ", 0) == 0);
    CHECK(invoke({"psi", "--help"}).code == 0);
  }
}
