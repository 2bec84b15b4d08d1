#include "semcomp/locality.hpp"

#include <algorithm>
#include <cmath>
#include <list>
#include <numeric>

namespace semcomp {

namespace {

// Solves the dense system in place by Gaussian elimination with partial
// pivoting. Returns false when a pivot vanishes.
bool solve_in_place(std::vector<std::vector<double>> &a, std::vector<double> &b) {
  const std::size_t n = b.size();
  double scale = 0.0;
  for (const auto &row : a)
    for (double v : row)
      scale = std::max(scale, std::abs(v));
  const double eps = 1e-13 * std::max(scale, 1e-300);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col]))
        pivot = r;
    if (std::abs(a[pivot][col]) <= eps)
      return false;
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c)
        a[r][c] -= factor * a[col][c];
      b[r] -= factor * b[col];
    }
  }
  for (std::size_t col = n; col-- > 0;) {
    double sum = b[col];
    for (std::size_t c = col + 1; c < n; ++c)
      sum -= a[col][c] * b[c];
    b[col] = sum / a[col][col];
  }
  return true;
}

class MoveToFrontBall {
public:
  MoveToFrontBall(std::span<const Point> points, std::uint64_t seed)
      : points_(points), dim_(points.front().size()) {
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    order_.assign(order.begin(), order.end());
    mtf(order_.end());
  }

  const Point &center() const { return center_; }

private:
  using Iter = std::list<std::size_t>::iterator;

  bool outside(std::size_t idx) const {
    if (sq_radius_ < 0.0)
      return true;
    const double sq = squared_distance(points_[idx], center_);
    return sq > sq_radius_ * (1.0 + 1e-12) + 1e-300;
  }

  // Ball with every support point on its boundary, centered in their
  // affine hull.
  bool push(std::size_t idx) {
    support_.push_back(idx);
    const Point &origin = points_[support_.front()];
    const std::size_t k = support_.size() - 1;
    Point center = origin;
    if (k > 0) {
      std::vector<Point> dirs(k, Point(dim_));
      for (std::size_t j = 0; j < k; ++j)
        for (std::size_t c = 0; c < dim_; ++c)
          dirs[j][c] = points_[support_[j + 1]][c] - origin[c];
      std::vector<std::vector<double>> gram(k, std::vector<double>(k));
      std::vector<double> rhs(k);
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j)
          gram[i][j] = 2.0 * dot(dirs[i], dirs[j]);
        rhs[i] = dot(dirs[i], dirs[i]);
      }
      if (!solve_in_place(gram, rhs)) {
        support_.pop_back();
        return false;
      }
      for (std::size_t j = 0; j < k; ++j)
        for (std::size_t c = 0; c < dim_; ++c)
          center[c] += rhs[j] * dirs[j][c];
    }
    center_ = std::move(center);
    sq_radius_ = 0.0;
    for (std::size_t s : support_)
      sq_radius_ = std::max(sq_radius_, squared_distance(points_[s], center_));
    return true;
  }

  void mtf(Iter end) {
    if (support_.size() == dim_ + 1)
      return;
    for (Iter k = order_.begin(); k != end;) {
      Iter j = k++;
      if (outside(*j) && push(*j)) {
        mtf(j);
        support_.pop_back();
        order_.splice(order_.begin(), order_, j);
      }
    }
  }

  std::span<const Point> points_;
  std::size_t dim_;
  std::list<std::size_t> order_;
  std::vector<std::size_t> support_;
  Point center_;
  double sq_radius_ = -1.0;
};

void validate_points(std::span<const Point> points) {
  if (points.empty())
    fail(ErrorKind::EmptyInput, "enclosing sphere of an empty point set");
  for (const auto &p : points)
    require_dimension(points.front().size(), p.size(), "enclosing sphere");
}

} // namespace

Sphere minimum_enclosing_ball(std::span<const Point> points, std::uint64_t shuffle_seed) {
  validate_points(points);
  MoveToFrontBall ball(points, shuffle_seed);
  Sphere sphere{ball.center(), 0.0, 1.0};
  for (const auto &p : points)
    sphere.radius = std::max(sphere.radius, distance(p, sphere.center));
  return sphere;
}

double nearest_rank_quantile(std::vector<double> values, double q) {
  if (values.empty())
    fail(ErrorKind::EmptyInput, "quantile of an empty sample");
  if (!(q > 0.0) || q > 1.0)
    fail(ErrorKind::InvalidParameter, "quantile level must lie in (0, 1]");
  // The small slack keeps q * n that should be integral from rounding up.
  auto rank = static_cast<std::size_t>(
      std::ceil(q * static_cast<double>(values.size()) - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(rank - 1),
                   values.end());
  return values[rank - 1];
}

Sphere enclosing_sphere(std::span<const Point> points, double coverage,
                        std::uint64_t shuffle_seed) {
  if (!(coverage > 0.0) || coverage > 1.0)
    fail(ErrorKind::InvalidParameter, "coverage must lie in (0, 1]");
  Sphere sphere = minimum_enclosing_ball(points, shuffle_seed);
  if (coverage < 1.0) {
    std::vector<double> dists;
    dists.reserve(points.size());
    for (const auto &p : points)
      dists.push_back(distance(p, sphere.center));
    // Points on the boundary can sit a few ulps apart; treat them as ties.
    const double q = nearest_rank_quantile(dists, coverage);
    const double snap = q * (1.0 + 1e-12);
    sphere.radius = q;
    for (double dd : dists)
      if (dd <= snap)
        sphere.radius = std::max(sphere.radius, dd);
    std::size_t inside = 0;
    for (double dd : dists)
      inside += dd <= sphere.radius ? 1 : 0;
    sphere.coverage = static_cast<double>(inside) / static_cast<double>(points.size());
  }
  return sphere;
}

bool contains(const Sphere &sphere, std::span<const double> x) {
  require_dimension(sphere.dimension(), x.size(), "contains");
  return distance(x, sphere.center) <= sphere.radius;
}

std::vector<std::size_t> indices_within(std::span<const Point> points,
                                        const Sphere &sphere) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (contains(sphere, points[i]))
      out.push_back(i);
  return out;
}

Dataset select_within(const Dataset &data, const Sphere &sphere) {
  require_dimension(sphere.dimension(), data.dimension, "select_within");
  Dataset out;
  out.dimension = data.dimension;
  for (const auto &s : data.samples)
    if (contains(sphere, s.point))
      out.samples.push_back(s);
  return out;
}

} // namespace semcomp
