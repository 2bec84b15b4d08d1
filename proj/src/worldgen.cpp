#include "semcomp/worldgen.hpp"

#include <cmath>
#include <numbers>

namespace semcomp {

namespace {

constexpr double kBoundsSlack = 1e-12;

void require_positive(double value, const char *name) {
  if (!(value > 0.0) || !std::isfinite(value))
    fail(ErrorKind::InvalidParameter,
         std::string(name) + " must be positive and finite");
}

double gaussian_peak(std::size_t dimension, double stddev) {
  return std::pow(2.0 * std::numbers::pi * stddev * stddev,
                  -0.5 * static_cast<double>(dimension));
}

double class_density(const MixtureSpec &spec, std::span<const double> x,
                     int label) {
  const double inv_two_var =
      1.0 / (2.0 * spec.component_stddev * spec.component_stddev);
  const auto &centers = spec.centers[label];
  const auto &weights = spec.weights[label];
  double sum = 0.0;
  for (std::size_t c = 0; c < centers.size(); ++c)
    sum += weights[c] * std::exp(-squared_distance(x, centers[c]) * inv_two_var);
  return gaussian_peak(spec.dimension, spec.component_stddev) * sum;
}

} // namespace

MixtureSpec build_mixture(const MixtureConfig &config) {
  if (config.dimension < 1)
    fail(ErrorKind::InvalidParameter, "dimension must be at least 1");
  if (config.lines_per_class < 1 || config.components_per_line < 1)
    fail(ErrorKind::InvalidParameter,
         "lines_per_class and components_per_line must be at least 1");
  require_positive(config.component_spacing, "component_spacing");
  require_positive(config.component_stddev, "component_stddev");
  if (!(config.line_offset >= 0.0) || !std::isfinite(config.line_offset))
    fail(ErrorKind::InvalidParameter, "line_offset must be nonnegative");
  if (config.dimension == 1 && config.line_offset != 0.0)
    fail(ErrorKind::InvalidParameter,
         "line_offset must be zero in one dimension");

  MixtureSpec spec;
  spec.dimension = config.dimension;
  spec.lines_per_class = config.lines_per_class;
  spec.components_per_line = config.components_per_line;
  spec.line_offset = config.line_offset;
  spec.component_spacing = config.component_spacing;
  spec.component_stddev = config.component_stddev;

  const std::size_t d = config.dimension;
  const double along_scale = 1.0 / std::sqrt(static_cast<double>(d));
  const double across_scale = 1.0 / std::numbers::sqrt2;
  const std::size_t total_lines = 2 * config.lines_per_class;
  const double mid_component =
      0.5 * static_cast<double>(config.components_per_line - 1);

  for (std::size_t line = 0; line < total_lines; ++line) {
    const int label = static_cast<int>(line % 2);
    const double across =
        (static_cast<double>(total_lines - 1) - 2.0 * static_cast<double>(line)) *
        config.line_offset;
    for (std::size_t c = 0; c < config.components_per_line; ++c) {
      const double along =
          (static_cast<double>(c) - mid_component) * config.component_spacing;
      Point center(d, 0.5 + along * along_scale);
      if (d >= 2) {
        center[0] -= across * across_scale;
        center[1] += across * across_scale;
      }
      for (double coord : center)
        if (coord < -kBoundsSlack || coord > 1.0 + kBoundsSlack)
          fail(ErrorKind::CenterOutOfBounds,
               "component center leaves the unit hypercube (line " +
                   std::to_string(line) + ", component " + std::to_string(c) +
                   ")");
      spec.centers[label].push_back(std::move(center));
    }
  }
  for (int label = 0; label < 2; ++label)
    spec.weights[label].assign(
        spec.centers[label].size(),
        1.0 / static_cast<double>(spec.centers[label].size()));
  return spec;
}

double pdf(const MixtureSpec &spec, std::span<const double> x) {
  return pdf(spec, x, std::nullopt);
}

double pdf(const MixtureSpec &spec, std::span<const double> x,
           std::optional<int> label) {
  require_dimension(spec.dimension, x.size(), "pdf");
  if (label) {
    if (*label != 0 && *label != 1)
      fail(ErrorKind::InvalidParameter, "label must be 0 or 1");
    return class_density(spec, x, *label);
  }
  return 0.5 * class_density(spec, x, 0) + 0.5 * class_density(spec, x, 1);
}

double positive_posterior(const MixtureSpec &spec, std::span<const double> x) {
  const double p0 = pdf(spec, x, 0);
  const double p1 = pdf(spec, x, 1);
  if (p0 + p1 <= 0.0)
    return 0.5;
  return p1 / (p0 + p1);
}

bool Dataset::has_both_labels() const {
  bool seen[2] = {false, false};
  for (const auto &s : samples)
    seen[s.label != 0] = true;
  return seen[0] && seen[1];
}

std::vector<Point> Dataset::points() const {
  std::vector<Point> out;
  out.reserve(samples.size());
  for (const auto &s : samples)
    out.push_back(s.point);
  return out;
}

std::vector<int> Dataset::labels() const {
  std::vector<int> out;
  out.reserve(samples.size());
  for (const auto &s : samples)
    out.push_back(s.label);
  return out;
}

LabeledSample sample_one(const MixtureSpec &spec, Rng &rng) {
  std::bernoulli_distribution fair(0.5);
  const int label = fair(rng) ? 1 : 0;
  std::uniform_int_distribution<std::size_t> pick(
      0, spec.centers[label].size() - 1);
  const Point &center = spec.centers[label][pick(rng)];
  std::normal_distribution<double> noise(0.0, spec.component_stddev);
  LabeledSample sample{center, label};
  for (double &coord : sample.point)
    coord += noise(rng);
  return sample;
}

Dataset sample_labeled(const MixtureSpec &spec, std::size_t n, Rng &rng) {
  if (n < 1)
    fail(ErrorKind::InvalidParameter, "sample size must be at least 1");
  Dataset data;
  data.dimension = spec.dimension;
  data.samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    data.samples.push_back(sample_one(spec, rng));
  return data;
}

std::vector<int> draw_posterior_labels(const MixtureSpec &spec,
                                       std::span<const Point> points,
                                       Rng &rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<int> labels;
  labels.reserve(points.size());
  for (const auto &p : points) {
    const double posterior = positive_posterior(spec, p);
    labels.push_back(unit(rng) < posterior ? 1 : 0);
  }
  return labels;
}

} // namespace semcomp
