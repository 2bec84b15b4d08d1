#pragma once

#include "semcomp/compression.hpp"
#include "semcomp/locality.hpp"
#include "semcomp/trajectory.hpp"

#include <map>

namespace semcomp {

struct ExperimentConfig {
  std::vector<std::size_t> gamma_grid{5, 10, 20, 40, 80, 160, 320};
  double coverage = 0.95;
  std::size_t windows_per_gamma = 200;
  std::size_t min_local_points = 10;
  std::vector<std::size_t> aging_delays{0, 1, 2, 4};
  LinearSvmParams local_svm;
  std::uint64_t window_seed = 1;
  std::uint64_t sphere_seed = 2;
  std::uint64_t truth_seed = 3;
  std::size_t jobs = 1;

  void validate() const;
  std::size_t max_gamma() const;
  std::size_t max_delay() const;
};

// One (gamma, window) cell of the duplex procedure.
struct SubsequenceRecord {
  std::size_t gamma = 0;
  std::size_t t = 0; // index of the last observation in the window
  double radius = 0.0;
  double coverage = 0.0;
  double accuracy = 0.0; // agreement of g_t with f on the window
  std::size_t local_sample_size = 0;
  FallbackKind fallback_kind = FallbackKind::None;
  bool feasible = false;
  double energy_penalty = 0.0;
  double bandwidth_penalty = 0.0;
  double expected_loss = 0.0;
  double global_accuracy = 0.0; // f against ground truth on the window
};

// Accuracy of the classifier trained at window t when used on the window
// ending at t + delay_multiple * gamma.
struct AgingSample {
  std::size_t gamma = 0;
  std::size_t t = 0;
  std::size_t delay_multiple = 0;
  double accuracy = 0.0;
};

struct AgingRecord {
  std::size_t gamma = 0;
  std::size_t delay_multiple = 0;
  double relative_accuracy = 0.0;
  std::size_t n_windows = 0;
};

struct AgingResult {
  std::vector<AgingRecord> records;
  std::vector<AgingSample> samples;
};

struct MetricStats {
  double mean = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  std::size_t n = 0;
};

struct GammaSummary {
  std::size_t gamma = 0;
  MetricStats radius;
  MetricStats accuracy;
  MetricStats global_accuracy;
  std::size_t fallbacks = 0;
  std::size_t infeasible = 0;
};

using SummaryStats = std::vector<GammaSummary>;

struct ExperimentInputs {
  const MixtureSpec &world;
  const KernelModel &f;
  const Dataset &training; // Z
  const Trajectory &trajectory;
};

/// Ends of the sampled windows, shared by every gamma: drawn without
/// replacement from [max_gamma - 1, T - 1 - max_delay * max_gamma] and
/// returned sorted. Throws TrajectoryTooShort.
std::vector<std::size_t> sample_window_ends(std::size_t trajectory_length,
                                            const ExperimentConfig &config);

std::vector<SubsequenceRecord> run_duplex(const ExperimentInputs &inputs,
                                          const ExperimentConfig &config,
                                          const ConstraintSpec &constraints,
                                          const LossKind &loss_kind);

AgingResult run_aging(const ExperimentInputs &inputs, const ExperimentConfig &config,
                      const ConstraintSpec &constraints, const LossKind &loss_kind);

// Relative accuracy per (gamma, delay): mean delayed accuracy over the mean
// accuracy at delay 0.
std::vector<AgingRecord> aggregate_aging(std::span<const AgingSample> samples);

MetricStats describe(std::span<const double> values);

SummaryStats summarize(std::span<const SubsequenceRecord> records);

std::map<std::size_t, std::vector<double>>
accuracies_by_gamma(std::span<const SubsequenceRecord> records);

} // namespace semcomp
