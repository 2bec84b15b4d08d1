#pragma once

#include "semcomp/classifiers.hpp"

#include <map>

namespace semcomp {

// Sensor budgets for one update period.
struct ConstraintSpec {
  double energy_budget = 50.0;      // operations per prediction
  double bandwidth_budget = 1.0;    // payload units per observation
  double energy_tolerance = 0.0;    // epsilon
  double bandwidth_tolerance = 0.0; // beta
  double payload_size = 1.0;        // units sent per positive prediction

  void validate() const;
};

enum class LossType { Squared, Logistic };

struct LossKind {
  LossType type = LossType::Squared;
  double delta = 1e-6; // logistic score clamp, in (0, 0.5)

  void validate() const;
};

enum class FallbackKind { None, ConstantPositive, ConstantNegative, ReusedPrevious };

std::string_view to_string(FallbackKind kind);
FallbackKind parse_fallback_kind(std::string_view text);

struct LocalFitResult {
  LinearModel model;
  double expected_loss = 0.0;
  std::uint64_t energy_ops = 0;
  double energy_penalty = 0.0;
  double expected_bandwidth = 0.0;
  double bandwidth_penalty = 0.0;
  bool feasible = false;
  FallbackKind fallback_kind = FallbackKind::None;
};

/// Loss between f's verdict and g's output. For Squared, `g_value` is g's
/// hard prediction in {0, 1}; for Logistic it is g's score in (0, 1),
/// clamped to [delta, 1 - delta].
double loss(const LossKind &kind, int f_label, double g_value);

// Maps a decision value to what `loss` expects for the given kind.
double loss_input(const LossKind &kind, double decision_value);

// Hinge penalties: zero on and under budget, positive above.
double energy_penalty(std::uint64_t ops, double budget);
double bandwidth_penalty(double expected_bandwidth, double budget);

double expected_bandwidth(const LinearModel &model, std::span<const Point> eval_points,
                          double payload_size);

struct ThresholdChoice {
  double threshold = 0.0;
  double expected_loss = 0.0;
  double expected_bandwidth = 0.0;
  std::size_t false_negatives = 0;
};

/// Scans the candidate thresholds (one below the smallest decision value,
/// the midpoints between consecutive distinct values, one above the
/// largest) and keeps the one with the lowest mean loss among those whose
/// bandwidth penalty stays within tolerance. Ties go to fewer false
/// negatives, then to the threshold nearest zero.
ThresholdChoice select_threshold(std::span<const double> decision_values,
                                 std::span<const int> f_labels,
                                 const ConstraintSpec &constraints,
                                 const LossKind &loss_kind);

/// Constrained local fit with f's verdicts already computed. `local_points`
/// are the training points from the locality; `eval_points` are the
/// observations standing in for x ~ D.
LocalFitResult fit_local_labeled(std::span<const Point> local_points,
                                 std::span<const int> local_verdicts,
                                 std::span<const Point> eval_points,
                                 std::span<const int> eval_verdicts,
                                 const ConstraintSpec &constraints,
                                 const LossKind &loss_kind,
                                 const LinearSvmParams &svm_params);

LocalFitResult fit_local(const KernelModel &f, const Dataset &local_data,
                         const ConstraintSpec &constraints, const LossKind &loss_kind,
                         const LinearSvmParams &svm_params,
                         std::span<const Point> eval_points);

// Fills loss, energy, bandwidth and feasibility for a fixed model.
LocalFitResult evaluate_local(const LinearModel &model, FallbackKind fallback,
                              std::span<const Point> eval_points,
                              std::span<const int> eval_verdicts,
                              const ConstraintSpec &constraints,
                              const LossKind &loss_kind);

LinearModel constant_model(std::size_t dimension, int label);

// --- update-period control ------------------------------------------------

struct ControlSpec {
  double target_accuracy = 0.95;
  std::vector<std::size_t> gamma_grid;

  void validate() const;
  double tolerance() const { return 1.0 - target_accuracy; }
};

/// Mean disagreement with f per update period: the expectation of the
/// per-observation misclassification indicator over the control windows.
std::map<std::size_t, double>
control_quality(const std::map<std::size_t, std::vector<double>> &accuracies_per_gamma,
                const ControlSpec &spec);

struct UpdatePeriodChoice {
  std::size_t gamma = 0;
  bool target_met = false;
};

/// Largest grid period whose quality stays within 1 - target_accuracy;
/// the smallest grid period, flagged unmet, when none does.
UpdatePeriodChoice choose_update_period(const std::map<std::size_t, double> &quality,
                                        const ControlSpec &spec);

} // namespace semcomp
