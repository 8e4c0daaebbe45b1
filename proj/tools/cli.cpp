#include "cli.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "bpl/error.hpp"
#include "bpl/parallel.hpp"
#include "demos.hpp"
#include "verify.hpp"

namespace bpl::cli {

namespace {

namespace fs = std::filesystem;

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kVerificationFailed = 2;

Json load_config(const std::string& path) {
  if (path.empty()) return nullptr;
  std::ifstream in(path);
  if (!in) fail(ErrorCode::InvalidArgument, "cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::InvalidArgument, "malformed JSON in " + path + ": " + e.what());
  }
}

fs::path prepare_out(const std::string& dir) {
  const fs::path out(dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec || !fs::is_directory(out)) fail(ErrorCode::InvalidArgument, "unwritable output dir " + dir);
  const fs::path probe = out / ".bpl-write-test";
  {
    std::ofstream f(probe);
    if (!f) fail(ErrorCode::InvalidArgument, "unwritable output dir " + dir);
  }
  fs::remove(probe, ec);
  return out;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_meta(const fs::path& out, const std::string& command, double seconds) {
  const Json meta{{"command", command}, {"timestamp", utc_now()}, {"runtime_seconds", seconds}, {"threads", thread_budget()}};
  write_text(out / "meta.json", meta.dump(2) + "\n");
}

void report_failures(const std::vector<Check>& checks) {
  for (const auto& c : checks) {
    if (c.pass) continue;
    std::cerr << "FAILED: " << c.name;
    if (c.rule == "error") std::cerr << " (" << c.note << ")";
    else if (c.rule != "flag") std::cerr << " value " << format_number(c.value) << " reference " << format_number(c.reference);
    std::cerr << "\n";
  }
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Bayesian inverse-problem demonstrations and verification"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "bpl-out";
  std::uint64_t seed = 1;
  std::vector<std::string> formats{"json", "csv"};
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON parameter file");
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "64-bit seed")->capture_default_str();
    sub->add_option("--format", formats, "json,csv")->delimiter(',')->check(CLI::IsMember({"json", "csv"}));
  };

  CLI::App* demo = app.add_subcommand("demo", "run one demonstration");
  std::string name;
  demo->add_option("name", name, "demo name")->required()->check(CLI::IsMember(demo_names()));
  common(demo);
  RunOptions ro;
  demo->add_option("--v-min", ro.v_min, "borel: lower velocity bound on both axes");
  demo->add_option("--v-max", ro.v_max, "borel: upper velocity bound on both axes");
  demo->add_option("--sigma-d-grid", ro.sigma_d_grid, "fig7: sigma_d grid a:b:n");
  demo->add_option("--sigma-s-grid", ro.sigma_s_grid, "fig7: sigma_s grid a:b:n");

  CLI::App* verify = app.add_subcommand("verify", "run the analytic-vs-oracle regression suite");
  std::string level = "fast";
  verify->add_option("--level", level, "fast or full")->check(CLI::IsMember({"fast", "full"}))->capture_default_str();
  common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }
  const bool want_json = std::find(formats.begin(), formats.end(), "json") != formats.end();
  const bool want_csv = std::find(formats.begin(), formats.end(), "csv") != formats.end();
  ro.seed = seed;
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };

  try {
    const Json user = load_config(config_path);
    if (*demo) {
      const fs::path out = prepare_out(out_dir);
      const DemoOutput result = run_demo(name, user, ro);
      if (want_json) {
        write_text(out / "report.json", result.report.dump(2) + "\n");
        write_meta(out, "demo " + name, elapsed());
      }
      if (want_csv) {
        for (const auto& t : result.tables) write_csv(out / t.file, t);
      }
      for (const auto& line : result.summary) std::cout << line << "\n";
      std::cout << "verification: " << (result.verified() ? "pass" : "FAIL") << " (" << result.checks.size()
                << " checks), output in " << out.string() << "\n";
      if (!result.verified()) {
        report_failures(result.checks);
        return kVerificationFailed;
      }
      return kOk;
    }
    const VerifyOptions vo = verify_options(level, seed, user);
    const fs::path out = prepare_out(out_dir);
    const VerifyOutput result = run_verify(vo);
    if (want_json) {
      write_text(out / "verify_report.json", result.report.dump(2) + "\n");
      write_meta(out, "verify " + level, elapsed());
    }
    std::size_t passed = 0;
    for (const auto& c : result.checks) passed += c.pass ? 1 : 0;
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.2f", elapsed());
    std::cout << "verify " << level << ": " << passed << "/" << result.checks.size() << " checks passed in " << secs
              << " s\n";
    if (!result.pass()) {
      report_failures(result.checks);
      return kVerificationFailed;
    }
    return kOk;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const Json::exception& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return kConfigError;
  }
}

}  // namespace bpl::cli
