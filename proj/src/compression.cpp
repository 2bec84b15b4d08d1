#include "semcomp/compression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace semcomp {

void ConstraintSpec::validate() const {
  if (!(energy_budget > 0.0))
    fail(ErrorKind::InvalidParameter, "energy_budget must be positive");
  if (!(bandwidth_budget >= 0.0) || !(energy_tolerance >= 0.0) ||
      !(bandwidth_tolerance >= 0.0))
    fail(ErrorKind::InvalidParameter, "budgets and tolerances must be nonnegative");
  if (!(payload_size > 0.0))
    fail(ErrorKind::InvalidParameter, "payload_size must be positive");
}

void LossKind::validate() const {
  if (type == LossType::Logistic && !(delta > 0.0 && delta < 0.5))
    fail(ErrorKind::InvalidParameter, "logistic clamp must lie in (0, 0.5)");
}

std::string_view to_string(FallbackKind kind) {
  switch (kind) {
  case FallbackKind::None: return "none";
  case FallbackKind::ConstantPositive: return "constant_positive";
  case FallbackKind::ConstantNegative: return "constant_negative";
  case FallbackKind::ReusedPrevious: return "reused_previous";
  }
  return "none";
}

FallbackKind parse_fallback_kind(std::string_view text) {
  for (auto kind : {FallbackKind::None, FallbackKind::ConstantPositive,
                    FallbackKind::ConstantNegative, FallbackKind::ReusedPrevious})
    if (to_string(kind) == text)
      return kind;
  fail(ErrorKind::InvalidValue, "unknown fallback kind '" + std::string(text) + "'");
}

double loss(const LossKind &kind, int f_label, double g_value) {
  const double a = f_label == 1 ? 1.0 : 0.0;
  if (kind.type == LossType::Squared) {
    const double diff = a - g_value;
    return diff * diff;
  }
  const double b = std::clamp(g_value, kind.delta, 1.0 - kind.delta);
  return -a * std::log(b) - (1.0 - a) * std::log(1.0 - b);
}

double loss_input(const LossKind &kind, double decision_value) {
  if (kind.type == LossType::Squared)
    return decision_value >= 0.0 ? 1.0 : 0.0;
  return 1.0 / (1.0 + std::exp(-decision_value));
}

double energy_penalty(std::uint64_t ops, double budget) {
  return std::max(0.0, static_cast<double>(ops) - budget);
}

double bandwidth_penalty(double expected, double budget) {
  return std::max(0.0, expected - budget);
}

double expected_bandwidth(const LinearModel &model, std::span<const Point> eval_points,
                          double payload_size) {
  if (eval_points.empty())
    fail(ErrorKind::EmptyInput, "expected bandwidth over no observations");
  std::size_t positives = 0;
  for (const auto &x : eval_points)
    positives += static_cast<std::size_t>(predict(model, x));
  return payload_size * static_cast<double>(positives) /
         static_cast<double>(eval_points.size());
}

ThresholdChoice select_threshold(std::span<const double> decision_values,
                                 std::span<const int> f_labels,
                                 const ConstraintSpec &constraints,
                                 const LossKind &loss_kind) {
  if (decision_values.empty())
    fail(ErrorKind::EmptyInput, "threshold sweep over no observations");
  if (decision_values.size() != f_labels.size())
    fail(ErrorKind::InvalidParameter, "decision values and verdicts differ in length");

  std::vector<double> sorted(decision_values.begin(), decision_values.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<double> candidates;
  candidates.reserve(sorted.size() + 1);
  candidates.push_back(sorted.front() - 1.0);
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
    candidates.push_back(0.5 * (sorted[i] + sorted[i + 1]));
  candidates.push_back(sorted.back() + 1.0);

  const double n = static_cast<double>(decision_values.size());
  ThresholdChoice best;
  bool have_best = false;
  for (double threshold : candidates) {
    double total_loss = 0.0;
    std::size_t positives = 0;
    std::size_t false_negatives = 0;
    for (std::size_t i = 0; i < decision_values.size(); ++i) {
      const double value = decision_values[i] - threshold;
      const int predicted = value >= 0.0 ? 1 : 0;
      positives += static_cast<std::size_t>(predicted);
      false_negatives += (predicted == 0 && f_labels[i] == 1) ? 1 : 0;
      total_loss += loss(loss_kind, f_labels[i], loss_input(loss_kind, value));
    }
    const double bandwidth = constraints.payload_size * static_cast<double>(positives) / n;
    if (bandwidth_penalty(bandwidth, constraints.bandwidth_budget) >
        constraints.bandwidth_tolerance)
      continue;
    const double mean_loss = total_loss / n;
    const bool better =
        !have_best || mean_loss < best.expected_loss ||
        (mean_loss == best.expected_loss &&
         (false_negatives < best.false_negatives ||
          (false_negatives == best.false_negatives &&
           std::abs(threshold) < std::abs(best.threshold))));
    if (better) {
      best = {threshold, mean_loss, bandwidth, false_negatives};
      have_best = true;
    }
  }
  // The all-negative candidate transmits nothing, so some candidate is
  // always feasible.
  return best;
}

LinearModel constant_model(std::size_t dimension, int label) {
  LinearModel model;
  model.weights.assign(dimension, 0.0);
  model.bias = label == 1 ? 0.0 : -1.0;
  return model;
}

LocalFitResult evaluate_local(const LinearModel &model, FallbackKind fallback,
                              std::span<const Point> eval_points,
                              std::span<const int> eval_verdicts,
                              const ConstraintSpec &constraints,
                              const LossKind &loss_kind) {
  if (eval_points.empty())
    fail(ErrorKind::EmptyInput, "local fit needs at least one observation");
  LocalFitResult result;
  result.model = model;
  result.fallback_kind = fallback;
  double total_loss = 0.0;
  for (std::size_t i = 0; i < eval_points.size(); ++i)
    total_loss += loss(loss_kind, eval_verdicts[i],
                       loss_input(loss_kind, decision_value(model, eval_points[i])));
  result.expected_loss = total_loss / static_cast<double>(eval_points.size());
  result.energy_ops = prediction_ops(model);
  result.energy_penalty = energy_penalty(result.energy_ops, constraints.energy_budget);
  result.expected_bandwidth =
      expected_bandwidth(model, eval_points, constraints.payload_size);
  result.bandwidth_penalty =
      bandwidth_penalty(result.expected_bandwidth, constraints.bandwidth_budget);
  result.feasible = result.energy_penalty <= constraints.energy_tolerance &&
                    result.bandwidth_penalty <= constraints.bandwidth_tolerance;
  return result;
}


LocalFitResult fit_local_labeled(std::span<const Point> local_points,
                                 std::span<const int> local_verdicts,
                                 std::span<const Point> eval_points,
                                 std::span<const int> eval_verdicts,
                                 const ConstraintSpec &constraints,
                                 const LossKind &loss_kind,
                                 const LinearSvmParams &svm_params) {
  constraints.validate();
  loss_kind.validate();
  if (local_points.empty())
    fail(ErrorKind::EmptyLocalData, "no training points inside the locality");
  if (eval_points.empty())
    fail(ErrorKind::EmptyInput, "local fit needs at least one observation");
  if (local_points.size() != local_verdicts.size() ||
      eval_points.size() != eval_verdicts.size())
    fail(ErrorKind::InvalidParameter, "points and verdicts differ in length");
  const std::size_t d = local_points.front().size();
  for (const auto &p : local_points)
    require_dimension(d, p.size(), "local training point");
  for (const auto &p : eval_points)
    require_dimension(d, p.size(), "observation");

  const bool any_positive =
      std::find(local_verdicts.begin(), local_verdicts.end(), 1) != local_verdicts.end();
  const bool any_negative =
      std::find(local_verdicts.begin(), local_verdicts.end(), 0) != local_verdicts.end();

  if (!(any_positive && any_negative)) {
    // Single verdict locally: the family shrinks to the two constants,
    // compared by feasibility, loss, then false negatives.
    const int local_label = any_positive ? 1 : 0;
    std::vector<LocalFitResult> options;
    for (int label : {local_label, 1 - local_label})
      options.push_back(evaluate_local(
          constant_model(d, label),
          label ? FallbackKind::ConstantPositive : FallbackKind::ConstantNegative,
          eval_points, eval_verdicts, constraints, loss_kind));
    const auto key = [&](const LocalFitResult &r) {
      const bool over = r.bandwidth_penalty > constraints.bandwidth_tolerance;
      const auto fn = accuracy(r.model, eval_points, eval_verdicts).false_negatives;
      return std::tuple(over, r.expected_loss, fn);
    };
    return key(options[1]) < key(options[0]) ? options[1] : options[0];
  }

  // Train on standardized coordinates: centered on the local mean and
  // scaled by the RMS distance from it.
  Point mean(d, 0.0);
  for (const auto &p : local_points)
    for (std::size_t c = 0; c < d; ++c)
      mean[c] += p[c];
  for (double &m : mean)
    m /= static_cast<double>(local_points.size());
  double spread = 0.0;
  for (const auto &p : local_points)
    spread += squared_distance(p, mean);
  spread = std::sqrt(spread / static_cast<double>(local_points.size()));
  if (!(spread > 0.0))
    spread = 1.0;

  Dataset scaled;
  scaled.dimension = d;
  scaled.samples.reserve(local_points.size());
  for (std::size_t i = 0; i < local_points.size(); ++i) {
    Point z(d);
    for (std::size_t c = 0; c < d; ++c)
      z[c] = (local_points[i][c] - mean[c]) / spread;
    scaled.samples.push_back({std::move(z), local_verdicts[i]});
  }
  const LinearModel trained = train_linear_svm(scaled, svm_params);

  LinearModel model;
  model.weights.resize(d);
  for (std::size_t c = 0; c < d; ++c)
    model.weights[c] = trained.weights[c] / spread;
  model.bias = trained.bias - dot(model.weights, mean);

  std::vector<double> values;
  values.reserve(eval_points.size());
  for (const auto &x : eval_points)
    values.push_back(decision_value(model, x));
  const ThresholdChoice choice =
      select_threshold(values, eval_verdicts, constraints, loss_kind);
  model.threshold = choice.threshold;
  return evaluate_local(model, FallbackKind::None, eval_points, eval_verdicts, constraints,
                        loss_kind);
}

LocalFitResult fit_local(const KernelModel &f, const Dataset &local_data,
                         const ConstraintSpec &constraints, const LossKind &loss_kind,
                         const LinearSvmParams &svm_params,
                         std::span<const Point> eval_points) {
  if (local_data.empty())
    fail(ErrorKind::EmptyLocalData, "no training points inside the locality");
  const auto local_points = local_data.points();
  const auto local_verdicts = predict_all(f, local_points);
  const auto eval_verdicts = predict_all(f, eval_points);
  return fit_local_labeled(local_points, local_verdicts, eval_points, eval_verdicts,
                           constraints, loss_kind, svm_params);
}

void ControlSpec::validate() const {
  if (!(target_accuracy > 0.0) || target_accuracy > 1.0)
    fail(ErrorKind::InvalidParameter, "target_accuracy must lie in (0, 1]");
  if (gamma_grid.empty())
    fail(ErrorKind::InvalidParameter, "gamma grid is empty");
  for (std::size_t i = 0; i < gamma_grid.size(); ++i) {
    if (gamma_grid[i] < 2)
      fail(ErrorKind::InvalidParameter, "update periods must be at least 2");
    if (i > 0 && gamma_grid[i] <= gamma_grid[i - 1])
      fail(ErrorKind::InvalidParameter, "gamma grid must be strictly increasing");
  }
}

std::map<std::size_t, double>
control_quality(const std::map<std::size_t, std::vector<double>> &accuracies_per_gamma,
                const ControlSpec &spec) {
  if (accuracies_per_gamma.empty())
    fail(ErrorKind::EmptyInput, "no accuracy statistics to control on");
  std::map<std::size_t, double> quality;
  for (const auto &[gamma, accuracies] : accuracies_per_gamma) {
    if (accuracies.empty())
      fail(ErrorKind::EmptyInput, "no accuracy statistics for gamma " + std::to_string(gamma));
    if (!spec.gamma_grid.empty() &&
        std::find(spec.gamma_grid.begin(), spec.gamma_grid.end(), gamma) ==
            spec.gamma_grid.end())
      continue;
    double sum = 0.0;
    for (double a : accuracies)
      sum += a;
    quality[gamma] = 1.0 - sum / static_cast<double>(accuracies.size());
  }
  return quality;
}

UpdatePeriodChoice choose_update_period(const std::map<std::size_t, double> &quality,
                                        const ControlSpec &spec) {
  if (spec.gamma_grid.empty())
    fail(ErrorKind::InvalidParameter, "gamma grid is empty");
  UpdatePeriodChoice choice{spec.gamma_grid.front(), false};
  for (std::size_t gamma : spec.gamma_grid) {
    const auto it = quality.find(gamma);
    if (it != quality.end() && it->second <= spec.tolerance())
      choice = {gamma, true};
  }
  return choice;
}

} // namespace semcomp
