#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "horolab/error.hpp"
#include "horolab/experiment.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kResourceError = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Horoball, augmentation and coarse-geometry experiments on finite graphs"};
  app.set_version_flag("--version", std::string(horolab::kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool export_dot = false;

  for (const auto& kind : horolab::experiment_kinds()) {
    auto* sub = app.add_subcommand(kind, "Run the " + kind + " experiment");
    sub->add_option("--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Output directory (overrides output.dir)");
    sub->add_option("--seed", seed, "Seed for randomized sampling (overrides the config)");
    sub->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 256u));
    sub->add_flag("--export-dot", export_dot, "Write DOT files for every built graph");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  const std::string kind = app.get_subcommands().front()->get_name();
  const auto* sub = app.get_subcommands().front();
  try {
    auto config = horolab::ExperimentConfig::from_file(config_path);
    if (config.experiment != kind) {
      std::cerr << "error: config describes experiment '" << config.experiment << "', not '" << kind << "'\n";
      return kConfigError;
    }
    if (!out_dir.empty()) config.output_dir = out_dir;
    if (sub->count("--seed") > 0) config.seed = seed;
    if (export_dot) config.export_dot = true;

    horolab::RunOptions options;
    options.threads = threads;
    const auto report = horolab::run(config, options);
    for (const auto& check : report.checks) {
      std::cout << (check.ok ? "ok   " : "FAIL ") << check.name << (check.detail.empty() ? "" : ": " + check.detail) << '\n';
    }
    if (!report.error.empty()) std::cerr << "error: " << report.error << '\n';
    std::cout << "report: " << (config.output_dir / "report.json").string() << '\n';
    return horolab::exit_code(report);
  } catch (const horolab::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const horolab::ResourceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kResourceError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
