#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "steinhaus/steinhaus.hpp"

namespace fs = std::filesystem;
using steinhaus::cli::json;

namespace {

json load_json(const std::string& path) {
  try {
    return json::parse(steinhaus::io::read_file(path));
  } catch (const json::parse_error& e) {
    throw steinhaus::ConfigError(path + ": " + e.what());
  }
}

void print_verdicts(const json& report) {
  std::cout << report["name"].get<std::string>() << ": " << report["status"].get<std::string>() << "\n";
  for (const auto& v : report["verdicts"])
    std::cout << "  " << (v["ok"].get<bool>() ? "ok   " : "FAIL ") << v["name"].get<std::string>()
              << " expected=" << v["expected"].get<std::string>() << " observed=" << v["observed"].get<std::string>()
              << "\n";
  for (const auto& e : report["errors"]) std::cout << "  error: " << e["message"].get<std::string>() << "\n";
}

int run_one(const json& cfg, const std::string& out) {
  auto r = steinhaus::cli::run_experiment(cfg);
  const std::string dir = steinhaus::cli::output_dir(cfg, out);
  steinhaus::cli::write_run(r, dir);
  print_verdicts(r.report);
  std::cout << "  wrote " << dir << "/report.json\n";
  return r.ok ? 0 : 1;
}

int cmd_run(const std::string& config, const std::string& out) { return run_one(load_json(config), out); }

int cmd_verify(const std::string& path) {
  auto outcome = steinhaus::cli::verify_report(load_json(path));
  for (const auto& d : outcome.details)
    std::cout << (d["pass"].get<bool>() ? "ok   " : "FAIL ") << d["check"].get<std::string>() << "\n";
  std::cout << (outcome.ok ? "verified" : "verification failed") << "\n";
  return outcome.ok ? 0 : 1;
}

// Runs are resolved relative to the batch file; each lands in out/<name>.
int cmd_sweep(const std::string& path, const std::string& out_override) {
  const json batch = load_json(path);
  steinhaus::io::check_keys(batch, {"runs", "output"}, "batch");
  const json& runs = steinhaus::io::need(batch, "runs", "batch");
  if (!runs.is_array()) throw steinhaus::ConfigError("batch.runs: expected a list");
  const fs::path base = fs::path(path).parent_path();
  const std::string out = !out_override.empty() ? out_override : batch.value("output", std::string("out/sweep"));
  int worst = 0;
  json summary = json::array();
  for (const auto& entry : runs) {
    json cfg = entry.is_string() ? load_json((base / entry.get<std::string>()).string()) : entry;
    const std::string name = cfg.value("name", cfg.value("kind", std::string("run")));
    int code = 0;
    try {
      code = run_one(cfg, out + "/" + name);
    } catch (const steinhaus::ConfigError& e) {
      std::cerr << name << ": configuration error: " << e.what() << "\n";
      code = 2;
    }
    summary.push_back({{"name", name}, {"exit", code}});
    worst = std::max(worst, code);
  }
  fs::create_directories(out);
  steinhaus::io::write_file(out + "/summary.json", summary.dump(2) + "\n");
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"steinhaus: sumset interior experiments"};
  app.require_subcommand(1);
  std::string config, out, report, batch;
  auto* run = app.add_subcommand("run", "run one experiment config");
  run->add_option("config", config)->required();
  run->add_option("--out", out, "output directory");
  auto* verify = app.add_subcommand("verify", "re-verify certificates in a report");
  verify->add_option("report", report)->required();
  auto* sweep = app.add_subcommand("sweep", "run a batch of configs");
  sweep->add_option("batch", batch)->required();
  sweep->add_option("--out", out, "output directory");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    if (*run) return cmd_run(config, out);
    if (*verify) return cmd_verify(report);
    return cmd_sweep(batch, out);
  } catch (const steinhaus::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
