// Command-line runner for the iXY chain experiments.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ixy/experiment.hpp"
#include "ixy/types.hpp"

namespace {

struct Flags {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> sets;
  std::optional<int> threads;
  bool print_config = false;
};

int execute(ixy::Experiment experiment, const Flags& flags) {
  try {
    ixy::ExperimentConfig config(experiment);
    if (!flags.config_path.empty()) config.merge_file(flags.config_path);
    for (const auto& s : flags.sets) config.apply_override(s);
    if (!flags.out_dir.empty()) config.apply_override("output_dir=\"" + flags.out_dir + "\"");
    if (flags.threads) config.apply_override("threads=" + std::to_string(*flags.threads));
    config.validate();

    if (flags.print_config) {
      std::cout << config.values().dump(2) << '\n';
      return 0;
    }
    const auto report = ixy::run(config, std::cout);
    for (const auto& file : report.outputs)
      std::cout << "wrote " << (std::filesystem::path(config.get_string("output_dir")) / file).string() << '\n';
    return report.exit_code;
  } catch (const ixy::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Metrology experiments on the long-range non-Hermitian iXY chain"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ixy::kToolVersion);

  Flags flags;
  std::optional<ixy::Experiment> chosen;
  for (ixy::Experiment e : ixy::all_experiments()) {
    auto* sub = app.add_subcommand(ixy::to_string(e));
    sub->add_option("--config", flags.config_path, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--out", flags.out_dir, "Output directory");
    sub->add_option("--set", flags.sets, "Override a config key (key=value, repeatable)")->allow_extra_args(false);
    sub->add_option("--threads", flags.threads, "Worker threads (0 = hardware concurrency)");
    sub->add_flag("--print-config", flags.print_config, "Print the resolved config and exit");
    sub->callback([&chosen, e] { chosen = e; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  return execute(*chosen, flags);
}
