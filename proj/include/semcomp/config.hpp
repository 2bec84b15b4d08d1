#pragma once

#include "semcomp/experiment.hpp"

#include <filesystem>
#include <optional>

namespace semcomp {

// Error raised while reading a config file; line() is 0 when the problem
// is not tied to one line.
class ConfigError : public Error {
public:
  ConfigError(ErrorKind kind, std::size_t line, const std::string &message);
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

struct GlobalClassifierConfig {
  RbfSvmParams svm;
  std::size_t holdout_size = 5000;
};

struct TrajectoryConfig {
  std::size_t length = 50000;
  MhConfig mh;
};

// Fixed labels for deriving stage seeds from the master seed.
enum class SeedStage : std::uint64_t {
  World = 1,
  Holdout = 2,
  Trajectory = 3,
  Windows = 4,
  Spheres = 5,
  Truth = 6,
};

struct RunConfig {
  std::uint64_t master_seed = 20240601;
  MixtureConfig world;
  std::size_t dataset_size = 20000;
  GlobalClassifierConfig global_classifier;
  TrajectoryConfig trajectory;
  ExperimentConfig experiment;
  LossKind loss;
  ConstraintSpec constraints;
  ControlSpec control; // gamma_grid mirrors experiment.gamma_grid
  std::filesystem::path output_dir; // empty unless set in [output]

  std::uint64_t seed(SeedStage stage) const;
  // Experiment config with stage seeds filled in.
  ExperimentConfig resolved_experiment() const;
  void validate() const;
};

/// Line-based `key = value` text with `[section]` headers and `#`
/// comments. Keys before any header belong to the root (only master_seed).
/// Unknown keys are errors. Relative paths resolve against `base_dir`.
RunConfig parse_config_text(const std::string &text,
                            const std::filesystem::path &base_dir = {});
RunConfig parse_config(const std::filesystem::path &path);

} // namespace semcomp
