#pragma once

#include "semcomp/config.hpp"
#include "semcomp/io.hpp"

#include <filesystem>
#include <iosfwd>

namespace semcomp {

// On-disk artifacts shared between subcommands.
struct Artifact {
  const char *name;
  const char *file;
  const char *producer; // subcommand that writes it
};

namespace artifacts {
inline constexpr Artifact dataset{"dataset", "dataset.csv", "gen-world"};
inline constexpr Artifact global_model{"global_model", "global_model.txt", "train-global"};
inline constexpr Artifact global_eval{"global_eval", "global_eval.csv", "train-global"};
inline constexpr Artifact trajectory{"trajectory", "trajectory.csv", "gen-trajectory"};
inline constexpr Artifact records{"records", "records.csv", "simulate"};
inline constexpr Artifact summary{"summary", "summary.csv", "simulate"};
inline constexpr Artifact aging{"aging", "aging.csv", "aging"};
inline constexpr Artifact aging_samples{"aging_samples", "aging_samples.csv", "aging"};
inline constexpr Artifact radius_plot{"radius_plot", "radius.svg", "report"};
inline constexpr Artifact accuracy_plot{"accuracy_plot", "accuracy.svg", "report"};
inline constexpr Artifact aging_plot{"aging_plot", "aging.svg", "report"};
} // namespace artifacts

struct StageContext {
  RunConfig config;
  std::filesystem::path out_dir;
  std::size_t jobs = 1;
  std::ostream *log = nullptr; // progress messages; null when quiet

  std::filesystem::path path(const Artifact &artifact) const {
    return out_dir / artifact.file;
  }
  // Throws MissingArtifact naming the artifact and its producer.
  std::filesystem::path require(const Artifact &artifact) const;
};

void stage_gen_world(const StageContext &ctx);
void stage_train_global(const StageContext &ctx);
void stage_gen_trajectory(const StageContext &ctx);
void stage_simulate(const StageContext &ctx);
void stage_aging(const StageContext &ctx);
UpdatePeriodChoice stage_control(const StageContext &ctx, std::ostream &out);
void stage_report(const StageContext &ctx);

Dataset load_dataset(const StageContext &ctx);
KernelModel load_global_model(const StageContext &ctx);
Trajectory load_trajectory(const StageContext &ctx);

} // namespace semcomp
