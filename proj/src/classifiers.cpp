#include "semcomp/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <list>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace semcomp {

double decision_value(const LinearModel &model, std::span<const double> x) {
  require_dimension(model.dimension(), x.size(), "linear decision value");
  return dot(model.weights, x) + model.bias - model.threshold;
}

double decision_value(const KernelModel &model, std::span<const double> x) {
  require_dimension(model.dimension(), x.size(), "kernel decision value");
  double sum = 0.0;
  for (std::size_t i = 0; i < model.support_points.size(); ++i)
    sum += model.dual_coefs[i] *
           std::exp(-model.rbf_gamma * squared_distance(x, model.support_points[i]));
  return sum + model.bias;
}

double decision_value(const ClassifierModel &model, std::span<const double> x) {
  return std::visit([&](const auto &m) { return decision_value(m, x); }, model);
}

std::uint64_t prediction_ops(const LinearModel &model) {
  return 2 * static_cast<std::uint64_t>(model.dimension()) + 2;
}

std::uint64_t prediction_ops(const KernelModel &model) {
  const auto d = static_cast<std::uint64_t>(model.dimension());
  const auto n_sv = static_cast<std::uint64_t>(model.support_points.size());
  return n_sv * (3 * d + 3) + n_sv + 1;
}

std::uint64_t prediction_ops(const ClassifierModel &model) {
  return std::visit([](const auto &m) { return prediction_ops(m); }, model);
}

Agreement agreement(std::span<const int> predicted, std::span<const int> reference) {
  if (predicted.size() != reference.size())
    fail(ErrorKind::InvalidParameter, "prediction and reference lengths differ");
  if (reference.empty())
    fail(ErrorKind::EmptyReference, "accuracy needs a nonempty reference");
  Agreement out;
  out.n = reference.size();
  for (std::size_t i = 0; i < reference.size(); ++i) {
    if (predicted[i] == 1 && reference[i] == 0)
      ++out.false_positives;
    else if (predicted[i] == 0 && reference[i] == 1)
      ++out.false_negatives;
  }
  out.accuracy = 1.0 - static_cast<double>(out.false_positives + out.false_negatives) /
                           static_cast<double>(out.n);
  return out;
}

namespace {

void validate_training_data(const Dataset &data) {
  if (data.empty())
    fail(ErrorKind::SingleClassData, "training data is empty");
  for (const auto &s : data.samples)
    require_dimension(data.dimension, s.point.size(), "training sample");
  if (!data.has_both_labels())
    fail(ErrorKind::SingleClassData, "training data contains a single label");
}

// Least-recently-used cache of RBF kernel columns.
class KernelColumnCache {
public:
  KernelColumnCache(const std::vector<Point> &points, double gamma,
                    std::size_t megabytes)
      : points_(points), gamma_(gamma) {
    const std::size_t column_bytes = std::max<std::size_t>(1, points.size()) * sizeof(double);
    capacity_ = std::max<std::size_t>(2, (megabytes << 20) / column_bytes);
  }

  const std::vector<double> &column(std::size_t i) {
    if (auto it = index_.find(i); it != index_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second);
      return it->second->second;
    }
    std::vector<double> values;
    if (lru_.size() >= capacity_) {
      auto &victim = lru_.back();
      index_.erase(victim.first);
      values = std::move(victim.second);
      lru_.pop_back();
    }
    values.resize(points_.size());
    const Point &pi = points_[i];
    for (std::size_t k = 0; k < points_.size(); ++k)
      values[k] = std::exp(-gamma_ * squared_distance(pi, points_[k]));
    lru_.emplace_front(i, std::move(values));
    index_[i] = lru_.begin();
    return lru_.front().second;
  }

private:
  using Entry = std::pair<std::size_t, std::vector<double>>;
  const std::vector<Point> &points_;
  double gamma_;
  std::size_t capacity_;
  std::list<Entry> lru_;
  std::unordered_map<std::size_t, std::list<Entry>::iterator> index_;
};

constexpr double kTau = 1e-12;
constexpr double kSupportThreshold = 1e-12;

} // namespace

RbfTrainingResult train_rbf_svm_detailed(const Dataset &data,
                                         const RbfSvmParams &params) {
  if (!(params.C > 0.0) || !(params.gamma > 0.0) || !(params.tol > 0.0))
    fail(ErrorKind::InvalidParameter, "C, gamma and tol must be positive");
  validate_training_data(data);

  const std::size_t n = data.size();
  const std::vector<Point> points = data.points();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i)
    y[i] = data.samples[i].label == 1 ? 1.0 : -1.0;

  const double C = params.C;
  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0); // Q alpha - e
  KernelColumnCache cache(points, params.gamma, params.cache_megabytes);
  // K(x, x) = 1 for the RBF kernel.
  const double diag = 1.0;

  auto upper = [&](std::size_t t) { return alpha[t] >= C; };
  auto lower = [&](std::size_t t) { return alpha[t] <= 0.0; };

  std::uint64_t iterations = 0;
  for (;;) {
    // Select i: maximal violation among the "up" set.
    double gmax = -std::numeric_limits<double>::infinity();
    std::size_t i = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (y[t] > 0) {
        if (!upper(t) && -grad[t] >= gmax) {
          gmax = -grad[t];
          i = t;
        }
      } else if (!lower(t) && grad[t] >= gmax) {
        gmax = grad[t];
        i = t;
      }
    }
    if (i == n)
      break;
    const std::vector<double> &ki = cache.column(i);

    // Select j: largest second-order decrease among the "low" set.
    double gmax2 = -std::numeric_limits<double>::infinity();
    double best_decrease = std::numeric_limits<double>::infinity();
    std::size_t j = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (y[t] > 0) {
        if (!lower(t)) {
          const double grad_diff = gmax + grad[t];
          gmax2 = std::max(gmax2, grad[t]);
          if (grad_diff > 0) {
            double quad = 2.0 * diag - 2.0 * y[i] * ki[t];
            if (quad <= 0)
              quad = kTau;
            const double decrease = -(grad_diff * grad_diff) / quad;
            if (decrease <= best_decrease) {
              best_decrease = decrease;
              j = t;
            }
          }
        }
      } else if (!upper(t)) {
        const double grad_diff = gmax - grad[t];
        gmax2 = std::max(gmax2, -grad[t]);
        if (grad_diff > 0) {
          double quad = 2.0 * diag + 2.0 * y[i] * ki[t];
          if (quad <= 0)
            quad = kTau;
          const double decrease = -(grad_diff * grad_diff) / quad;
          if (decrease <= best_decrease) {
            best_decrease = decrease;
            j = t;
          }
        }
      }
    }
    if (gmax + gmax2 < params.tol || j == n)
      break;
    if (iterations >= params.max_iterations)
      fail(ErrorKind::NonConvergence,
           "SMO did not reach tolerance within " +
               std::to_string(params.max_iterations) + " pair updates");
    ++iterations;

    // Column i sits at the LRU front, so fetching j never evicts it.
    const std::vector<double> &kj = cache.column(j);
    const double q_ij = y[i] * y[j] * ki[j];
    const double old_ai = alpha[i];
    const double old_aj = alpha[j];

    if (y[i] != y[j]) {
      double quad = 2.0 * diag + 2.0 * q_ij;
      if (quad <= 0)
        quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) {
          alpha[j] = 0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = -diff;
      }
      if (diff > 0) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = C - diff;
        }
      } else if (alpha[j] > C) {
        alpha[j] = C;
        alpha[i] = C + diff;
      }
    } else {
      double quad = 2.0 * diag - 2.0 * q_ij;
      if (quad <= 0)
        quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > C) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = sum - C;
        }
      } else if (alpha[j] < 0) {
        alpha[j] = 0;
        alpha[i] = sum;
      }
      if (sum > C) {
        if (alpha[j] > C) {
          alpha[j] = C;
          alpha[i] = sum - C;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = sum;
      }
    }

    const double dai = alpha[i] - old_ai;
    const double daj = alpha[j] - old_aj;
    for (std::size_t t = 0; t < n; ++t)
      grad[t] += y[t] * (y[i] * ki[t] * dai + y[j] * kj[t] * daj);
  }

  // Offset: average over free vectors, else midpoint of the feasible range.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  std::size_t free_count = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (upper(t)) {
      if (y[t] < 0)
        ub = std::min(ub, yg);
      else
        lb = std::max(lb, yg);
    } else if (lower(t)) {
      if (y[t] > 0)
        ub = std::min(ub, yg);
      else
        lb = std::max(lb, yg);
    } else {
      ++free_count;
      free_sum += yg;
    }
  }
  const double rho = free_count > 0 ? free_sum / static_cast<double>(free_count)
                                    : 0.5 * (ub + lb);

  RbfTrainingResult result;
  result.iterations = iterations;
  result.model.rbf_gamma = params.gamma;
  result.model.bias = -rho;
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > kSupportThreshold) {
      result.model.support_points.push_back(points[t]);
      result.model.dual_coefs.push_back(alpha[t] * y[t]);
    }
  }
  result.alphas = std::move(alpha);
  return result;
}

KernelModel train_rbf_svm(const Dataset &data, const RbfSvmParams &params) {
  return train_rbf_svm_detailed(data, params).model;
}

LinearModel train_linear_svm(const Dataset &data, const LinearSvmParams &params) {
  if (!(params.C > 0.0) || !(params.tol > 0.0) || !(params.class_weights[0] > 0.0) ||
      !(params.class_weights[1] > 0.0))
    fail(ErrorKind::InvalidParameter, "C, class weights and tol must be positive");
  validate_training_data(data);

  const std::size_t n = data.size();
  const std::size_t d = data.dimension;
  std::vector<double> w(d + 1, 0.0); // last entry is the bias
  std::vector<double> alpha(n, 0.0);
  std::vector<double> y(n), upper(n), qd(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int label = data.samples[i].label;
    y[i] = label == 1 ? 1.0 : -1.0;
    upper[i] = params.C * params.class_weights[label == 1 ? 1 : 0];
    qd[i] = dot(data.samples[i].point, data.samples[i].point) + 1.0;
  }

  auto margin = [&](std::size_t i) {
    return dot(std::span<const double>(w).first(d), data.samples[i].point) + w[d];
  };

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::size_t active = n;
  Rng rng(params.shuffle_seed);
  double pg_max_old = std::numeric_limits<double>::infinity();
  double pg_min_old = -std::numeric_limits<double>::infinity();

  std::size_t epoch = 0;
  for (;;) {
    if (epoch >= params.max_epochs)
      fail(ErrorKind::NonConvergence,
           "dual coordinate descent did not converge within " +
               std::to_string(params.max_epochs) + " epochs");
    ++epoch;
    double pg_max = -std::numeric_limits<double>::infinity();
    double pg_min = std::numeric_limits<double>::infinity();
    std::shuffle(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(active), rng);

    for (std::size_t s = 0; s < active; ++s) {
      const std::size_t i = order[s];
      const double g = y[i] * margin(i) - 1.0;
      double pg = 0.0;
      if (alpha[i] == 0.0) {
        if (g > pg_max_old) {
          --active;
          std::swap(order[s], order[active]);
          --s;
          continue;
        }
        if (g < 0.0)
          pg = g;
      } else if (alpha[i] == upper[i]) {
        if (g < pg_min_old) {
          --active;
          std::swap(order[s], order[active]);
          --s;
          continue;
        }
        if (g > 0.0)
          pg = g;
      } else {
        pg = g;
      }
      pg_max = std::max(pg_max, pg);
      pg_min = std::min(pg_min, pg);
      if (std::abs(pg) > 1e-12) {
        const double old = alpha[i];
        alpha[i] = std::clamp(alpha[i] - g / qd[i], 0.0, upper[i]);
        const double step = (alpha[i] - old) * y[i];
        const Point &x = data.samples[i].point;
        for (std::size_t k = 0; k < d; ++k)
          w[k] += step * x[k];
        w[d] += step;
      }
    }

    if (pg_max - pg_min <= params.tol) {
      if (active == n)
        break;
      active = n;
      pg_max_old = std::numeric_limits<double>::infinity();
      pg_min_old = -std::numeric_limits<double>::infinity();
      continue;
    }
    pg_max_old = pg_max > 0.0 ? pg_max : std::numeric_limits<double>::infinity();
    pg_min_old = pg_min < 0.0 ? pg_min : -std::numeric_limits<double>::infinity();
  }

  LinearModel model;
  model.weights.assign(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(d));
  model.bias = w[d];
  return model;
}

double linear_svm_objective(const Dataset &data, const LinearModel &model,
                            const LinearSvmParams &params) {
  double value = 0.5 * (dot(model.weights, model.weights) + model.bias * model.bias);
  for (const auto &s : data.samples) {
    const double y = s.label == 1 ? 1.0 : -1.0;
    const double m = dot(model.weights, s.point) + model.bias;
    value += params.C * params.class_weights[s.label == 1 ? 1 : 0] *
             std::max(0.0, 1.0 - y * m);
  }
  return value;
}

// ---------------------------------------------------------------------------
// Model files

namespace {

constexpr const char *kKernelHeader = "semcomp-kernel-model v1";
constexpr const char *kLinearHeader = "semcomp-linear-model v1";

void write_vector(std::ostream &out, std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i)
    out << (i ? " " : "") << format_real(values[i]);
}

std::string next_line(std::istream &in, const char *what) {
  std::string line;
  if (!std::getline(in, line))
    fail(ErrorKind::ParseError, std::string("model file truncated before ") + what);
  return line;
}

std::istringstream expect_field(std::istream &in, const std::string &name) {
  std::istringstream fields(next_line(in, name.c_str()));
  std::string key;
  fields >> key;
  if (key != name)
    fail(ErrorKind::ParseError, "model file: expected '" + name + "', got '" + key + "'");
  return fields;
}

template <class T> T read_scalar(std::istream &in, const std::string &name) {
  auto fields = expect_field(in, name);
  T value{};
  if (!(fields >> value))
    fail(ErrorKind::ParseError, "model file: bad value for '" + name + "'");
  return value;
}

Point read_reals(std::istringstream &fields, std::size_t count, const std::string &name) {
  Point values(count);
  for (auto &v : values) {
    std::string token;
    if (!(fields >> token))
      fail(ErrorKind::ParseError, "model file: too few values for '" + name + "'");
    v = std::stod(token);
  }
  return values;
}

void expect_header(std::istream &in, const char *header) {
  if (next_line(in, "header") != header)
    fail(ErrorKind::ParseError, std::string("model file: expected header '") + header + "'");
}

} // namespace

void write_model(std::ostream &out, const KernelModel &model) {
  out << kKernelHeader << '\n';
  out << "dimension " << model.dimension() << '\n';
  out << "rbf_gamma " << format_real(model.rbf_gamma) << '\n';
  out << "bias " << format_real(model.bias) << '\n';
  out << "support_count " << model.support_points.size() << '\n';
  for (std::size_t i = 0; i < model.support_points.size(); ++i) {
    out << "sv " << format_real(model.dual_coefs[i]) << ' ';
    write_vector(out, model.support_points[i]);
    out << '\n';
  }
}

void write_model(std::ostream &out, const LinearModel &model) {
  out << kLinearHeader << '\n';
  out << "dimension " << model.dimension() << '\n';
  out << "weights ";
  write_vector(out, model.weights);
  out << '\n';
  out << "bias " << format_real(model.bias) << '\n';
  out << "threshold " << format_real(model.threshold) << '\n';
}

KernelModel read_kernel_model(std::istream &in) {
  expect_header(in, kKernelHeader);
  KernelModel model;
  const auto d = read_scalar<std::size_t>(in, "dimension");
  model.rbf_gamma = std::stod(read_scalar<std::string>(in, "rbf_gamma"));
  model.bias = std::stod(read_scalar<std::string>(in, "bias"));
  const auto count = read_scalar<std::size_t>(in, "support_count");
  if (count == 0)
    fail(ErrorKind::ParseError, "model file: kernel model without support points");
  for (std::size_t i = 0; i < count; ++i) {
    auto fields = expect_field(in, "sv");
    const Point values = read_reals(fields, d + 1, "sv");
    model.dual_coefs.push_back(values[0]);
    model.support_points.emplace_back(values.begin() + 1, values.end());
  }
  return model;
}

LinearModel read_linear_model(std::istream &in) {
  expect_header(in, kLinearHeader);
  LinearModel model;
  const auto d = read_scalar<std::size_t>(in, "dimension");
  auto fields = expect_field(in, "weights");
  model.weights = read_reals(fields, d, "weights");
  model.bias = std::stod(read_scalar<std::string>(in, "bias"));
  model.threshold = std::stod(read_scalar<std::string>(in, "threshold"));
  return model;
}

} // namespace semcomp
