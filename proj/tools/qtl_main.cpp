// Copyright 2026 The QTL Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qtl/acceptance.hpp"
#include "qtl/errors.hpp"
#include "qtl/harness/config.hpp"
#include "qtl/harness/run.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitToleranceFailure = 1;
constexpr int kExitError = 2;

int report_error(std::string_view code, const std::string& message) {
  nlohmann::json err = {{"error", {{"code", code}, {"message", message}}}};
  std::cerr << err.dump() << std::endl;
  return kExitError;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw qtl::Error(qtl::ErrorCode::Config, "cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qtl: pure-state statistical mechanics laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  bool plots = false;
  auto* run_cmd = app.add_subcommand("run", "Run one experiment from a JSON config");
  run_cmd->add_option("config", config_path, "Experiment config (JSON)")->required();
  run_cmd->add_option("--out", out_dir, "Output directory (overrides the config's out)");
  run_cmd->add_option("--seed", seed, "Seed (overrides the config's seed)");
  run_cmd->add_flag("--plots", plots, "Also write SVG plots");

  auto* list_cmd = app.add_subcommand("list-kinds", "List experiment kinds");

  std::vector<int> only;
  auto* self_cmd = app.add_subcommand("selftest", "Run the acceptance suite");
  self_cmd->add_option("--only", only, "Criterion numbers to run")->check(CLI::Range(1, qtl::kCriterionCount));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitPass : kExitError;
  }

  if (*list_cmd) {
    for (auto kind : qtl::harness::all_kinds()) std::cout << qtl::harness::to_string(kind) << "\n";
    return kExitPass;
  }

  if (*self_cmd) {
    const auto results = qtl::run_acceptance(std::cout, only);
    std::size_t passed = 0;
    for (const auto& r : results) passed += r.pass ? 1 : 0;
    std::cout << passed << "/" << results.size() << " criteria passed" << std::endl;
    return passed == results.size() ? kExitPass : kExitToleranceFailure;
  }

  try {
    auto config = qtl::harness::parse_config(read_file(config_path));
    if (seed) config.seed = *seed;
    if (!out_dir.empty()) config.out = out_dir;
    const auto report = qtl::harness::run(config);
    if (config.out) {
      qtl::harness::write_report(report, *config.out, plots);
    } else {
      std::cout << report.to_json().dump(2) << std::endl;
    }
    for (const auto& c : report.checks)
      std::cerr << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.value << " " << c.relation << " "
                << c.threshold << "\n";
    return report.passed() ? kExitPass : kExitToleranceFailure;
  } catch (const qtl::Error& e) {
    return report_error(qtl::to_string(e.code()), e.what());
  } catch (const std::exception& e) {
    return report_error("internal", e.what());
  }
}
