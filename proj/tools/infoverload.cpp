// infoverload <subcommand> --config <path> --out <dir> [--seed <u64>]

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "infoverload/commands.hpp"
#include "infoverload/config.hpp"

int main(int argc, char** argv) {
  using namespace infoverload;

  CLI::App app{"Information-overload market efficiency simulator", std::string(kToolName)};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;

  const std::pair<std::string_view, std::string_view> descriptions[] = {
      {"agent", "Solve one trader's optimal information level and cross-check it on a grid"},
      {"market", "Classify market efficiency for a sampled population"},
      {"conjectures", "Run the three efficiency conjecture checks"},
      {"figure3", "Write one trader's expected-utility curve"},
      {"sweep", "Phase series over i_max (and cost multipliers, if configured)"},
      {"returns", "Simulate returns around the rational forecast"},
  };
  for (const auto& [name, description] : descriptions) {
    auto* sub = app.add_subcommand(std::string(name), std::string(description));
    sub->add_option("--config", config_path, "JSON configuration file")->required();
    sub->add_option("--out", out_dir, "Output directory")->required();
    sub->add_option("--seed", seed, "Master seed (overrides the config)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << R"({"error":"usage","field":"","message":")" << e.get_name()
              << R"(","exit_code":64})" << '\n';
    return exit_code::kUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    RunConfig config = parse_config(config_path);
    if (seed) config.apply_seed(*seed);
    const auto result = run_command(command, config, out_dir);
    std::cout << result.summary;
    if (!result.summary.empty() && result.summary.back() != '\n') std::cout << '\n';
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << error_record(e) << '\n';
    return exit_code_for(e);
  }
}
