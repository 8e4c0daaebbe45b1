#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "doctest.h"

#include "bpl/error.hpp"
#include "demos.hpp"
#include "io.hpp"

namespace fs = std::filesystem;
using namespace bpl;
using namespace bpl::cli;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("bpl-cli-test-" + name);
  fs::remove_all(p);
  return p;
}

int run_tool(const std::string& args, const std::string& env = {}) {
  const std::string cmd = env + " \"" BPL_TOOL_PATH "\" " + args + " > /dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("number formatting and grids") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(1.0 / 0.0) == "inf");
  CHECK(column("v", units::velocity()) == "v [meter*second^-1]");
  CHECK(column("B", {}) == "B [1]");
  const auto g = parse_grid(Json("0.5:1.5:3"), "grid");
  CHECK(g == std::vector<double>{0.5, 1.0, 1.5});
  CHECK(parse_grid(Json::parse("[1, 2]"), "grid") == std::vector<double>{1.0, 2.0});
  CHECK_THROWS_AS(parse_grid(Json("1:2:1"), "grid"), Error);
  CHECK_THROWS_AS(parse_grid(Json("1:2"), "grid"), Error);
}

TEST_CASE("config resolution is strict about keys") {
  const Json d = Json::parse(R"({"a": 1, "b": {"c": 2, "d": 3}})");
  const Json r = resolve_config(d, Json::parse(R"({"b": {"c": 5}})"));
  CHECK(r["b"]["c"] == 5);
  CHECK(r["b"]["d"] == 3);
  CHECK(resolve_config(d, nullptr) == d);
  CHECK_THROWS_AS(resolve_config(d, Json::parse(R"({"e": 1})")), Error);
  CHECK_THROWS_AS(resolve_config(d, Json::parse(R"({"b": {"x": 1}})")), Error);
}

TEST_CASE("every demo verifies in process") {
  for (const std::string& name : demo_names()) {
    if (name == "transdim-uniform") continue;  // Monte Carlo heavy; covered by the binary tests below
    const DemoOutput out = run_demo(name, nullptr, {});
    CHECK_MESSAGE(out.verified(), name);
    CHECK(out.report.at("demo") == name);
  }
  CHECK_THROWS_AS(run_demo("nope", nullptr, {}), Error);
}

TEST_CASE("exit codes") {
  const fs::path out = scratch("codes");
  CHECK(run_tool("demo borel --out " + out.string()) == 0);
  CHECK(fs::exists(out / "report.json"));
  CHECK(fs::exists(out / "meta.json"));
  CHECK(fs::exists(out / "borel_conditionals.csv"));
  CHECK(run_tool("demo borel --v-min 5 --v-max 1 --out " + out.string()) == 1);
  CHECK(run_tool("demo nope --out " + out.string()) == 1);
  CHECK(run_tool("demo borel --config /nonexistent/cfg.json --out " + out.string()) == 1);
  const fs::path bad = out / "bad.json";
  std::ofstream(bad) << "{ not json";
  CHECK(run_tool("demo borel --config " + bad.string() + " --out " + out.string()) == 1);
  const fs::path unknown = out / "unknown.json";
  std::ofstream(unknown) << R"({"no_such_key": 1})";
  CHECK(run_tool("demo borel --config " + unknown.string() + " --out " + out.string()) == 1);
  CHECK(run_tool("demo borel --out /proc/bpl-unwritable") == 1);
  const fs::path fault = out / "fault.json";
  std::ofstream(fault) << R"({"fault_injection": "gaussian-bf-constant"})";
  CHECK(run_tool("verify --level fast --config " + fault.string() + " --out " + out.string()) == 2);
}

TEST_CASE("reports are deterministic across runs and thread counts") {
  const fs::path a = scratch("det-a");
  const fs::path b = scratch("det-b");
  REQUIRE(run_tool("demo transdim-gaussian --seed 7 --out " + a.string(), "BPL_THREADS=1") == 0);
  REQUIRE(run_tool("demo transdim-gaussian --seed 7 --out " + b.string(), "BPL_THREADS=4") == 0);
  CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
  CHECK(slurp(a / "gaussian_evidence.csv") == slurp(b / "gaussian_evidence.csv"));
  const Json meta = Json::parse(slurp(a / "meta.json"));
  CHECK(meta.contains("runtime_seconds"));
}

TEST_CASE("fig7 grid overrides reach the CSV") {
  const fs::path out = scratch("fig7");
  REQUIRE(run_tool("demo fig7 --sigma-d-grid 0.1:3:60 --sigma-s-grid 0.1:3:60 --format csv --out " + out.string()) == 0);
  std::ifstream in(out / "fig7_region.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "sigma_d [second],sigma_s [meter^-1*second],B [1],region [1]");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 3600);
}
