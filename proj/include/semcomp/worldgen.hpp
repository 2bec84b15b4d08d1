#pragma once

#include "semcomp/common.hpp"

#include <array>
#include <cstddef>
#include <optional>

namespace semcomp {

// Parameters of the synthetic world: two classes, each a Gaussian mixture
// whose components sit equidistantly on lines parallel to the main diagonal
// of the unit hypercube.
struct MixtureConfig {
  std::size_t dimension = 2;
  std::size_t lines_per_class = 2;
  std::size_t components_per_line = 5;
  double line_offset = 0.12;
  double component_spacing = 0.17;
  double component_stddev = 0.05;
};

struct MixtureSpec {
  std::size_t dimension = 0;
  std::size_t lines_per_class = 0;
  std::size_t components_per_line = 0;
  double line_offset = 0.0;
  double component_spacing = 0.0;
  double component_stddev = 0.0;
  // Indexed by label (0, 1). Centers are grouped line by line.
  std::array<std::vector<Point>, 2> centers;
  std::array<std::vector<double>, 2> weights;

  std::size_t components_per_class() const {
    return lines_per_class * components_per_line;
  }
};

/// Resolves the explicit component centers.
///
/// The 2 * lines_per_class lines sit at signed perpendicular offsets
/// (L - 1 - 2j) * line_offset from the diagonal, j = 0..L-1, and alternate
/// between class 0 (even j) and class 1 (odd j). The perpendicular
/// direction is (e_2 - e_1) / sqrt(2). Components on a line are centered on
/// the projection of the hypercube midpoint and spaced component_spacing
/// apart. In one dimension line_offset must be zero.
MixtureSpec build_mixture(const MixtureConfig &config);

double pdf(const MixtureSpec &spec, std::span<const double> x);
double pdf(const MixtureSpec &spec, std::span<const double> x,
           std::optional<int> label);

// p(label = 1 | x) under equal class priors; 0.5 where both densities
// underflow.
double positive_posterior(const MixtureSpec &spec, std::span<const double> x);

struct LabeledSample {
  Point point;
  int label = 0;
};

struct Dataset {
  std::size_t dimension = 0;
  std::vector<LabeledSample> samples;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  bool has_both_labels() const;
  std::vector<Point> points() const;
  std::vector<int> labels() const;
};

// One draw from the joint distribution: fair class, uniform component,
// isotropic Gaussian.
LabeledSample sample_one(const MixtureSpec &spec, Rng &rng);

Dataset sample_labeled(const MixtureSpec &spec, std::size_t n, Rng &rng);

// Ground-truth labels for unlabeled observations, drawn from p(y | x) so
// that (x, y) follows the joint distribution whenever x does.
std::vector<int> draw_posterior_labels(const MixtureSpec &spec,
                                       std::span<const Point> points,
                                       Rng &rng);

} // namespace semcomp
