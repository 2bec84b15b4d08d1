// semcomp: command-line driver for the locality/accuracy simulation.
#include "semcomp/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kMissingArtifact = 2, kRuntime = 3 };

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Locality-constrained surrogate classifier simulation"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  bool quiet = false;
  app.add_option("--config", config_path, "configuration file")->required();
  auto *out_opt = app.add_option("--out-dir", out_dir, "artifact directory (default ./out)");
  auto *seed_opt = app.add_option("--seed", seed, "override master_seed");
  app.add_option("--jobs", jobs, "parallel experiment cells")->check(CLI::PositiveNumber);
  app.add_flag("--quiet", quiet, "suppress progress messages");

  const std::pair<const char *, const char *> commands[] = {
      {"gen-world", "sample the labeled training set Z"},
      {"train-global", "train the global RBF classifier f"},
      {"gen-trajectory", "sample the observation trajectory"},
      {"simulate", "run the windowed locality experiment"},
      {"aging", "evaluate local classifiers on later windows"},
      {"control", "choose the update period meeting the target accuracy"},
      {"report", "render SVG figures from the CSV tables"},
  };
  for (const auto &[name, help] : commands)
    app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  semcomp::StageContext ctx;
  try {
    ctx.config = semcomp::parse_config(config_path);
  } catch (const semcomp::Error &e) {
    std::cerr << "semcomp: config error: " << e.what() << '\n';
    return kUsage;
  }
  if (seed_opt->count() > 0)
    ctx.config.master_seed = seed;
  if (out_opt->count() > 0)
    ctx.out_dir = out_dir;
  else if (!ctx.config.output_dir.empty())
    ctx.out_dir = ctx.config.output_dir;
  else
    ctx.out_dir = "out";
  ctx.jobs = jobs;
  ctx.log = quiet ? nullptr : &std::cerr;

  try {
    if (command == "gen-world")
      semcomp::stage_gen_world(ctx);
    else if (command == "train-global")
      semcomp::stage_train_global(ctx);
    else if (command == "gen-trajectory")
      semcomp::stage_gen_trajectory(ctx);
    else if (command == "simulate")
      semcomp::stage_simulate(ctx);
    else if (command == "aging")
      semcomp::stage_aging(ctx);
    else if (command == "control")
      semcomp::stage_control(ctx, std::cout);
    else if (command == "report")
      semcomp::stage_report(ctx);
  } catch (const semcomp::Error &e) {
    std::cerr << "semcomp " << command << ": " << e.what() << '\n';
    return e.kind() == semcomp::ErrorKind::MissingArtifact ? kMissingArtifact : kRuntime;
  } catch (const std::exception &e) {
    std::cerr << "semcomp " << command << ": " << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}
