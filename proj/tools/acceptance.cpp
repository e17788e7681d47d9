// Runs the acceptance criteria and prints one PASS/FAIL line for each.
// Exit status 0 iff every selected criterion passed.

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kinklab/acceptance.hpp"
#include "kinklab/error.hpp"

int main(int argc, char** argv) {
  using namespace kinklab;
  CLI::App app{"kinklab acceptance suite"};
  std::vector<std::string> only;
  std::string config_dir;
  app.add_option("--only", only, "criteria to run (default: all)");
  app.add_option("--configs", config_dir, "directory of <name>.cfg files overriding the built-in ones");
  CLI11_PARSE(app, argc, argv);

  const auto& names = only.empty() ? criterion_names() : only;
  int failed = 0;
  for (const auto& name : names) {
    try {
      ExperimentConfig config = default_config(name);
      if (!config_dir.empty()) {
        const auto path = std::filesystem::path(config_dir) / (name + ".cfg");
        if (std::filesystem::exists(path)) config = ExperimentConfig::load(path);
      }
      const auto report = run_criterion(name, config);
      std::fputs(format_report(report).c_str(), stdout);
      std::fflush(stdout);
      if (!report.passed()) ++failed;
    } catch (const KinkError& e) {
      std::fprintf(stdout, "FAIL %s\n    error: %s\n", name.c_str(), e.what());
      ++failed;
    }
  }
  std::printf("%zu criteria, %d failed\n", names.size(), failed);
  return failed == 0 ? 0 : 1;
}
