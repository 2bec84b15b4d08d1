#pragma once

#include "semcomp/common.hpp"
#include "semcomp/worldgen.hpp"

#include <array>
#include <iosfwd>
#include <variant>

namespace semcomp {

// Local classifier g: w . x + bias - threshold.
struct LinearModel {
  Point weights;
  double bias = 0.0;
  double threshold = 0.0;

  std::size_t dimension() const { return weights.size(); }
};

// Global classifier f: sum_i coef_i * exp(-rbf_gamma * |x - s_i|^2) + bias.
struct KernelModel {
  std::vector<Point> support_points;
  std::vector<double> dual_coefs; // alpha_i * y_i, y in {-1, +1}
  double bias = 0.0;
  double rbf_gamma = 1.0;

  std::size_t dimension() const {
    return support_points.empty() ? 0 : support_points.front().size();
  }
};

using ClassifierModel = std::variant<LinearModel, KernelModel>;

double decision_value(const LinearModel &model, std::span<const double> x);
double decision_value(const KernelModel &model, std::span<const double> x);
double decision_value(const ClassifierModel &model, std::span<const double> x);

// Ties at zero go to the positive class.
template <class Model> int predict(const Model &model, std::span<const double> x) {
  return decision_value(model, x) >= 0.0 ? 1 : 0;
}

// Operation count of one prediction, the energy proxy.
//   linear: 2d + 2
//   kernel: n_sv * (3d + 3) + n_sv + 1
std::uint64_t prediction_ops(const LinearModel &model);
std::uint64_t prediction_ops(const KernelModel &model);
std::uint64_t prediction_ops(const ClassifierModel &model);

template <class Model>
std::vector<int> predict_all(const Model &model, std::span<const Point> points) {
  std::vector<int> out;
  out.reserve(points.size());
  for (const auto &p : points)
    out.push_back(predict(model, p));
  return out;
}

struct Agreement {
  double accuracy = 0.0;
  std::size_t false_positives = 0; // model says 1, reference says 0
  std::size_t false_negatives = 0; // model says 0, reference says 1
  std::size_t n = 0;
};

Agreement agreement(std::span<const int> predicted, std::span<const int> reference);

template <class Model>
Agreement accuracy(const Model &model, std::span<const Point> points,
                   std::span<const int> reference) {
  if (points.size() != reference.size())
    fail(ErrorKind::InvalidParameter, "points and reference labels differ in length");
  if (points.empty())
    fail(ErrorKind::EmptyReference, "accuracy needs a nonempty reference");
  const auto predicted = predict_all(model, points);
  return agreement(predicted, reference);
}

template <class Model>
Agreement accuracy(const Model &model, const Dataset &reference) {
  if (reference.empty())
    fail(ErrorKind::EmptyReference, "accuracy needs a nonempty reference");
  const auto points = reference.points();
  const auto labels = reference.labels();
  return accuracy(model, std::span<const Point>(points), std::span<const int>(labels));
}

struct RbfSvmParams {
  double C = 10.0;
  double gamma = 30.0;
  double tol = 1e-3;
  std::uint64_t max_iterations = 1'000'000; // pair updates
  std::size_t cache_megabytes = 256;
};

struct RbfTrainingResult {
  KernelModel model;
  std::vector<double> alphas; // one per training point, in [0, C]
  std::uint64_t iterations = 0;
};

/// Soft-margin kernel SVM dual solved by SMO with second-order working set
/// selection. Stops once the maximal KKT violating pair gap drops below
/// tol. Throws SingleClassData or NonConvergence.
RbfTrainingResult train_rbf_svm_detailed(const Dataset &data,
                                         const RbfSvmParams &params);
KernelModel train_rbf_svm(const Dataset &data, const RbfSvmParams &params);

struct LinearSvmParams {
  double C = 1.0;
  std::array<double, 2> class_weights{1.0, 1.0}; // cost multiplier per label
  double tol = 1e-3;
  std::size_t max_epochs = 20000;
  std::uint64_t shuffle_seed = 0;
};

/// Linear soft-margin SVM by dual coordinate descent.
///
/// Minimizes 0.5 * (|w|^2 + b^2) + sum_i C * class_weights[y_i] *
/// max(0, 1 - y_i (w . x_i + b)); the bias is carried as a constant
/// feature. Throws SingleClassData or NonConvergence.
LinearModel train_linear_svm(const Dataset &data, const LinearSvmParams &params);

double linear_svm_objective(const Dataset &data, const LinearModel &model,
                            const LinearSvmParams &params);

// Plain-text model files. Versioned header line, one field per line, reals
// with 17 significant digits.
void write_model(std::ostream &out, const KernelModel &model);
void write_model(std::ostream &out, const LinearModel &model);
KernelModel read_kernel_model(std::istream &in);
LinearModel read_linear_model(std::istream &in);

} // namespace semcomp
