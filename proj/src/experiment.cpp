#include "semcomp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

namespace semcomp {

void ExperimentConfig::validate() const {
  if (gamma_grid.empty())
    fail(ErrorKind::InvalidParameter, "gamma grid is empty");
  for (std::size_t i = 0; i < gamma_grid.size(); ++i) {
    if (gamma_grid[i] < 2)
      fail(ErrorKind::InvalidParameter, "update periods must be at least 2");
    if (i > 0 && gamma_grid[i] <= gamma_grid[i - 1])
      fail(ErrorKind::InvalidParameter, "gamma grid must be strictly increasing");
  }
  if (!(coverage > 0.0) || coverage > 1.0)
    fail(ErrorKind::InvalidParameter, "coverage must lie in (0, 1]");
  if (windows_per_gamma < 1)
    fail(ErrorKind::InvalidParameter, "windows_per_gamma must be at least 1");
  if (jobs < 1)
    fail(ErrorKind::InvalidParameter, "jobs must be at least 1");
}

std::size_t ExperimentConfig::max_gamma() const {
  return gamma_grid.empty() ? 0 : *std::max_element(gamma_grid.begin(), gamma_grid.end());
}

std::size_t ExperimentConfig::max_delay() const {
  return aging_delays.empty() ? 0
                              : *std::max_element(aging_delays.begin(), aging_delays.end());
}

std::vector<std::size_t> sample_window_ends(std::size_t trajectory_length,
                                            const ExperimentConfig &config) {
  config.validate();
  const std::size_t gmax = config.max_gamma();
  const std::size_t reach = gmax + config.max_delay() * gmax;
  if (trajectory_length < reach ||
      trajectory_length - reach + 1 < config.windows_per_gamma)
    fail(ErrorKind::TrajectoryTooShort,
         "trajectory of length " + std::to_string(trajectory_length) + " cannot host " +
             std::to_string(config.windows_per_gamma) + " windows of length " +
             std::to_string(gmax) + " with aging reach " + std::to_string(reach));
  std::vector<std::size_t> ends(trajectory_length - reach + 1);
  std::iota(ends.begin(), ends.end(), gmax - 1);
  // Partial Fisher-Yates: the first windows_per_gamma slots are the sample.
  Rng rng(config.window_seed);
  for (std::size_t i = 0; i < config.windows_per_gamma; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, ends.size() - 1);
    std::swap(ends[i], ends[pick(rng)]);
  }
  ends.resize(config.windows_per_gamma);
  std::sort(ends.begin(), ends.end());
  return ends;
}

namespace {

struct Context {
  const ExperimentInputs &inputs;
  const ExperimentConfig &config;
  const ConstraintSpec &constraints;
  const LossKind &loss_kind;
  std::vector<Point> training_points;
  std::vector<int> training_verdicts; // f on Z
  std::vector<int> trajectory_verdicts; // f on S
  std::vector<int> trajectory_truth;
};

struct CellOutput {
  SubsequenceRecord record;
  std::vector<AgingSample> aging;
};

Context make_context(const ExperimentInputs &inputs, const ExperimentConfig &config,
                     const ConstraintSpec &constraints, const LossKind &loss_kind) {
  config.validate();
  constraints.validate();
  loss_kind.validate();
  if (inputs.training.empty())
    fail(ErrorKind::EmptyInput, "training sample Z is empty");
  require_dimension(inputs.world.dimension, inputs.training.dimension, "training sample");
  require_dimension(inputs.world.dimension, inputs.f.dimension(), "global classifier");
  for (const auto &x : inputs.trajectory.points)
    require_dimension(inputs.world.dimension, x.size(), "trajectory point");

  Context ctx{inputs, config, constraints, loss_kind, {}, {}, {}, {}};
  ctx.training_points = inputs.training.points();
  ctx.training_verdicts = predict_all(inputs.f, ctx.training_points);
  ctx.trajectory_verdicts = predict_all(inputs.f, inputs.trajectory.points);
  Rng truth_rng(config.truth_seed);
  ctx.trajectory_truth =
      draw_posterior_labels(inputs.world, inputs.trajectory.points, truth_rng);
  return ctx;
}

template <class T> std::span<const T> window_of(const std::vector<T> &v, std::size_t end,
                                               std::size_t gamma) {
  return std::span<const T>(v).subspan(end + 1 - gamma, gamma);
}

CellOutput run_cell(const Context &ctx, std::size_t gamma, std::size_t t, bool with_aging) {
  const auto &points = ctx.inputs.trajectory.points;
  const auto window = window_of(points, t, gamma);
  const auto verdicts = window_of(ctx.trajectory_verdicts, t, gamma);
  const auto truth = window_of(ctx.trajectory_truth, t, gamma);

  const std::uint64_t cell_seed =
      derive_seed(derive_seed(ctx.config.sphere_seed, gamma), t);
  const Sphere sphere = enclosing_sphere(window, ctx.config.coverage, cell_seed);
  const auto inside = indices_within(ctx.training_points, sphere);

  LocalFitResult fit;
  if (inside.empty() || inside.size() < ctx.config.min_local_points) {
    // Sparse locality: f's majority verdict on the window, ties positive.
    const auto positives = static_cast<std::size_t>(
        std::count(verdicts.begin(), verdicts.end(), 1));
    const int label = 2 * positives >= verdicts.size() ? 1 : 0;
    fit = evaluate_local(constant_model(ctx.inputs.world.dimension, label),
                         label ? FallbackKind::ConstantPositive
                               : FallbackKind::ConstantNegative,
                         window, verdicts, ctx.constraints, ctx.loss_kind);
  } else {
    std::vector<Point> local_points;
    std::vector<int> local_verdicts;
    local_points.reserve(inside.size());
    local_verdicts.reserve(inside.size());
    for (std::size_t i : inside) {
      local_points.push_back(ctx.training_points[i]);
      local_verdicts.push_back(ctx.training_verdicts[i]);
    }
    fit = fit_local_labeled(local_points, local_verdicts, window, verdicts, ctx.constraints,
                            ctx.loss_kind, ctx.config.local_svm);
  }

  CellOutput out;
  auto &rec = out.record;
  rec.gamma = gamma;
  rec.t = t;
  rec.radius = sphere.radius;
  rec.coverage = sphere.coverage;
  rec.accuracy = accuracy(fit.model, window, verdicts).accuracy;
  rec.local_sample_size = inside.size();
  rec.fallback_kind = fit.fallback_kind;
  rec.feasible = fit.feasible;
  rec.energy_penalty = fit.energy_penalty;
  rec.bandwidth_penalty = fit.bandwidth_penalty;
  rec.expected_loss = fit.expected_loss;
  rec.global_accuracy = agreement(verdicts, truth).accuracy;

  if (with_aging) {
    for (std::size_t k : ctx.config.aging_delays) {
      const std::size_t later = t + k * gamma;
      const double acc =
          k == 0 ? rec.accuracy
                 : accuracy(fit.model, window_of(points, later, gamma),
                            window_of(ctx.trajectory_verdicts, later, gamma))
                       .accuracy;
      out.aging.push_back({gamma, t, k, acc});
    }
  }
  return out;
}

std::vector<CellOutput> run_cells(const ExperimentInputs &inputs,
                                  const ExperimentConfig &config,
                                  const ConstraintSpec &constraints,
                                  const LossKind &loss_kind, bool with_aging) {
  const Context ctx = make_context(inputs, config, constraints, loss_kind);
  const auto ends = sample_window_ends(inputs.trajectory.points.size(), config);

  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t gamma : config.gamma_grid)
    for (std::size_t t : ends)
      cells.emplace_back(gamma, t);

  // Cells are independent; each writes only its own slot, so the output
  // order does not depend on scheduling.
  std::vector<CellOutput> outputs(cells.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size())
        return;
      try {
        outputs[i] = run_cell(ctx, cells[i].first, cells[i].second, with_aging);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error)
          error = std::current_exception();
        next = cells.size();
        return;
      }
    }
  };
  const std::size_t jobs = std::min(config.jobs, std::max<std::size_t>(1, cells.size()));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> threads;
    for (std::size_t j = 0; j < jobs; ++j)
      threads.emplace_back(worker);
  }
  if (error)
    std::rethrow_exception(error);
  return outputs;
}

} // namespace

std::vector<SubsequenceRecord> run_duplex(const ExperimentInputs &inputs,
                                          const ExperimentConfig &config,
                                          const ConstraintSpec &constraints,
                                          const LossKind &loss_kind) {
  auto outputs = run_cells(inputs, config, constraints, loss_kind, false);
  std::vector<SubsequenceRecord> records;
  records.reserve(outputs.size());
  for (auto &o : outputs)
    records.push_back(o.record);
  return records;
}

AgingResult run_aging(const ExperimentInputs &inputs, const ExperimentConfig &config,
                      const ConstraintSpec &constraints, const LossKind &loss_kind) {
  auto outputs = run_cells(inputs, config, constraints, loss_kind, true);
  AgingResult result;
  for (auto &o : outputs)
    result.samples.insert(result.samples.end(), o.aging.begin(), o.aging.end());
  std::sort(result.samples.begin(), result.samples.end(),
            [](const AgingSample &a, const AgingSample &b) {
              return std::tie(a.gamma, a.delay_multiple, a.t) <
                     std::tie(b.gamma, b.delay_multiple, b.t);
            });
  result.records = aggregate_aging(result.samples);
  return result;
}

std::vector<AgingRecord> aggregate_aging(std::span<const AgingSample> samples) {
  // (gamma, delay) -> (sum, count)
  std::map<std::pair<std::size_t, std::size_t>, std::pair<double, std::size_t>> sums;
  for (const auto &s : samples) {
    auto &[sum, count] = sums[{s.gamma, s.delay_multiple}];
    sum += s.accuracy;
    ++count;
  }
  std::vector<AgingRecord> records;
  for (const auto &[key, value] : sums) {
    const auto base = sums.find({key.first, 0});
    if (base == sums.end())
      fail(ErrorKind::InvalidParameter,
           "aging delays must include 0 (gamma " + std::to_string(key.first) + ")");
    const double mean = value.first / static_cast<double>(value.second);
    const double base_mean = base->second.first / static_cast<double>(base->second.second);
    records.push_back({key.first, key.second, mean / base_mean, value.second});
  }
  return records;
}

MetricStats describe(std::span<const double> values) {
  if (values.empty())
    fail(ErrorKind::EmptyInput, "statistics of an empty sample");
  MetricStats stats;
  stats.n = values.size();
  double sum = 0.0;
  for (double v : values)
    sum += v;
  stats.mean = sum / static_cast<double>(values.size());
  const std::vector<double> copy(values.begin(), values.end());
  stats.q25 = nearest_rank_quantile(copy, 0.25);
  stats.q75 = nearest_rank_quantile(copy, 0.75);
  return stats;
}

SummaryStats summarize(std::span<const SubsequenceRecord> records) {
  if (records.empty())
    fail(ErrorKind::EmptyInput, "no records to summarize");
  std::map<std::size_t, std::vector<const SubsequenceRecord *>> by_gamma;
  for (const auto &r : records)
    by_gamma[r.gamma].push_back(&r);
  SummaryStats summary;
  for (const auto &[gamma, group] : by_gamma) {
    std::vector<double> radius, acc, global;
    GammaSummary s;
    s.gamma = gamma;
    for (const auto *r : group) {
      radius.push_back(r->radius);
      acc.push_back(r->accuracy);
      global.push_back(r->global_accuracy);
      s.fallbacks += r->fallback_kind != FallbackKind::None ? 1 : 0;
      s.infeasible += r->feasible ? 0 : 1;
    }
    s.radius = describe(radius);
    s.accuracy = describe(acc);
    s.global_accuracy = describe(global);
    summary.push_back(s);
  }
  return summary;
}

std::map<std::size_t, std::vector<double>>
accuracies_by_gamma(std::span<const SubsequenceRecord> records) {
  std::map<std::size_t, std::vector<double>> out;
  for (const auto &r : records)
    out[r.gamma].push_back(r.accuracy);
  return out;
}

} // namespace semcomp
