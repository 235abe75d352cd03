/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "ebpfsim/harness/replay.hpp"
#include "ebpfsim/harness/run.hpp"

namespace {

using namespace ebpfsim;

enum Exit : int { kOk = 0, kUsage = 1, kParse = 2, kValidation = 3, kInvariant = 4 };

int exit_for(const ConfigError &e) {
  switch (e.kind) {
    case ConfigError::Kind::Io: return kUsage;
    case ConfigError::Kind::Parse: return kParse;
    case ConfigError::Kind::Validation: return kValidation;
  }
  return kUsage;
}

int report_error(const ConfigError &e, const std::string &source) {
  std::cerr << "ebpfsim: " << source << ": " << e.to_string() << "\n";
  return exit_for(e);
}

int print_replay(const harness::ReplayReport &r, int verbosity) {
  if (r.ok()) {
    std::cout << "PASS: " << r.records << " records verified\n";
    return kOk;
  }
  for (const auto &v : r.violations) {
    std::cout << "FAIL line " << v.line << ": " << harness::to_string(v.kind) << ": " << v.message << "\n";
    if (verbosity < 2 && &v - r.violations.data() >= 19) {
      std::cout << "... " << r.violations.size() << " violations in total\n";
      break;
    }
  }
  return kInvariant;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Deterministic simulator of eBPF abuse across containers sharing one kernel"};
  std::string scenario_path;
  std::string policies_path;
  std::string policy_name;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
  int verbosity = 1;
  bool matrix = false;
  std::string replay_path;

  app.add_option("-s,--scenario", scenario_path, "Scenario file (JSON)");
  app.add_option("-p,--policies", policies_path, "Policy file (JSON); defaults to the built-in policies");
  app.add_option("--policy", policy_name, "Run under this policy instead of the scenario's");
  app.add_option("--seed", seed, "Override the scenario seed");
  app.add_option("-o,--out", out_dir, "Output root directory")->capture_default_str();
  app.add_option("-v,--verbosity", verbosity, "0 quiet, 1 summary, 2 detailed")->check(CLI::Range(0, 2))->capture_default_str();
  app.add_flag("--matrix", matrix, "Evaluate every attack under every policy");
  app.add_option("--replay", replay_path, "Verify a recorded events.log and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  if (!replay_path.empty()) {
    auto report = harness::verify_log_file(replay_path);
    if (!report) return report_error(report.error(), replay_path);
    return print_replay(*report, verbosity);
  }
  if (scenario_path.empty()) {
    std::cerr << "ebpfsim: --scenario is required (or --replay)\n";
    return kUsage;
  }

  std::vector<policy::Policy> policies;
  if (!policies_path.empty()) {
    auto loaded = policy::load_policy_file(policies_path);
    if (!loaded) return report_error(loaded.error(), policies_path);
    policies = std::move(*loaded);
  }

  // Names a scenario may refer to: the policy file's, else the built-ins.
  std::vector<std::string> known;
  for (const auto &p : policies) known.push_back(p.name());
  if (policies_path.empty()) {
    for (const auto &p : policy::shipped_policies({})) known.push_back(p.name());
  }
  auto scenario = harness::load_scenario(scenario_path, &known);
  if (!scenario) return report_error(scenario.error(), scenario_path);
  if (seed) harness::override_seed(*scenario, *seed);

  try {
    if (matrix) {
      if (policies_path.empty()) policies = policy::shipped_policies(harness::scenario_upfs(*scenario));
      const auto m = harness::run_matrix(*scenario, policies);
      if (verbosity >= 1) std::cout << m.render_table();
      const auto json = m.to_json().dump(2) + "\n";
      if (verbosity >= 2) std::cout << json;
      namespace fs = std::filesystem;
      const auto dir = fs::path(out_dir) / scenario->name / std::to_string(scenario->seed);
      std::error_code ec;
      fs::create_directories(dir, ec);
      std::ofstream out(dir / "matrix.json", std::ios::trunc);
      out << json;
      if (!out) {
        std::cerr << "ebpfsim: cannot write " << (dir / "matrix.json").string() << "\n";
        return kUsage;
      }
      return kOk;
    }

    if (!policy_name.empty()) scenario->policy = policy_name;
    if (!policy_name.empty() && std::find(known.begin(), known.end(), policy_name) == known.end()) {
      std::cerr << "ebpfsim: --policy: unknown policy '" << policy_name << "'\n";
      return kValidation;
    }
    auto p = harness::resolve_policy(*scenario, policies);
    if (!p) return report_error(p.error(), scenario_path);

    const auto result = harness::run_scenario(*scenario, *p);
    auto dir = harness::write_outputs(result, out_dir);
    if (!dir) return report_error(dir.error(), out_dir);

    if (verbosity >= 1) {
      std::cout << "scenario " << result.scenario << " seed " << result.seed << " policy " << result.policy << "\n";
      for (const auto &a : result.attacks) {
        std::cout << "  " << a.spec.id << " (" << attacks::to_string(a.spec.kind) << "): " << a.outcome.to_string()
                  << ", " << a.exfil.size() << " exfil records\n";
      }
      std::cout << "  upf_ok: " << (result.upf_ok ? "true" : "false") << "\n";
      std::cout << "  output: " << *dir << "\n";
    }
    if (verbosity >= 2) std::cout << result.report.dump(2) << "\n";

    auto verified = harness::verify_log(result.events);
    if (!verified) return report_error(verified.error(), "events.log");
    if (!verified->ok()) return print_replay(*verified, verbosity);
    return kOk;
  } catch (const std::exception &e) {
    std::cerr << "ebpfsim: run failed: " << e.what() << "\n";
    return kValidation;
  }
}
