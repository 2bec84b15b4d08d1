#include "oracles.hpp"

#include "semcomp/locality.hpp"

#include <doctest.h>

#include <numbers>

using namespace semcomp;

namespace {

ErrorKind kind_of(auto &&fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.kind();
  }
  return ErrorKind::Io;
}

} // namespace

TEST_CASE("degenerate enclosing balls") {
  const std::vector<Point> one{{0.3, 0.7}};
  const Sphere s1 = enclosing_sphere(one, 1.0);
  CHECK(s1.center == one[0]);
  CHECK(s1.radius == 0.0);
  CHECK(s1.coverage == 1.0);

  const std::vector<Point> two{{0.1, 0.2}, {0.5, 0.9}};
  const Sphere s2 = enclosing_sphere(two, 1.0);
  CHECK(s2.center[0] == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(s2.center[1] == doctest::Approx(0.55).epsilon(1e-14));
  CHECK(s2.radius == doctest::Approx(0.5 * distance(two[0], two[1])).epsilon(1e-14));

  const std::vector<Point> same(5, Point{0.4, 0.4});
  CHECK(enclosing_sphere(same, 1.0).radius == 0.0);

  const std::vector<Point> collinear{{0.0, 0.0}, {0.25, 0.25}, {0.5, 0.5}, {1.0, 1.0}};
  const Sphere s3 = enclosing_sphere(collinear, 1.0);
  CHECK(s3.radius == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("minimum enclosing ball matches exhaustive support-set search") {
  std::mt19937_64 rng(42);
  for (int set = 0; set < 100; ++set) {
    std::uniform_int_distribution<int> size(1, 40);
    const auto n = static_cast<std::size_t>(size(rng));
    std::vector<Point> pts;
    for (std::size_t i = 0; i < n; ++i)
      pts.push_back(oracle::uniform_point(rng, 2));
    const Sphere s = enclosing_sphere(pts, 1.0, static_cast<std::uint64_t>(set));
    const double expected = oracle::brute_force_meb_radius_2d(pts);
    CAPTURE(set);
    CHECK(std::abs(s.radius - expected) <= 1e-9);
    for (const auto &p : pts)
      CHECK(distance(p, s.center) <= s.radius + 1e-9);
  }
}

TEST_CASE("enclosing balls in higher dimensions contain every point") {
  std::mt19937_64 rng(3);
  for (std::size_t d : {1u, 3u, 5u, 8u}) {
    std::vector<Point> pts;
    for (int i = 0; i < 200; ++i)
      pts.push_back(oracle::uniform_point(rng, d));
    const Sphere s = minimum_enclosing_ball(pts, 1);
    for (const auto &p : pts)
      CHECK(distance(p, s.center) <= s.radius + 1e-9);
    // Some point sits on the boundary, and no other seed finds a smaller ball.
    const Sphere other = minimum_enclosing_ball(pts, 99);
    CHECK(std::abs(other.radius - s.radius) <= 1e-9);
  }
}

TEST_CASE("quantile radius ignores planted outliers") {
  std::mt19937_64 rng(8);
  std::vector<Point> pts;
  for (int i = 0; i < 95; ++i)
    pts.push_back(oracle::uniform_point(rng, 2, 0.45, 0.55));
  // Outliers on a regular pentagon, so the full ball stays centred on the
  // cluster while its radius is set by the outliers.
  for (int i = 0; i < 5; ++i) {
    const double a = 2.0 * std::numbers::pi * i / 5.0;
    pts.push_back({0.5 + 5.0 * std::cos(a), 0.5 + 5.0 * std::sin(a)});
  }
  const Sphere full = enclosing_sphere(pts, 1.0);
  const Sphere partial = enclosing_sphere(pts, 0.95);
  std::size_t inliers_inside = 0;
  for (int i = 0; i < 95; ++i)
    inliers_inside += contains(partial, pts[static_cast<std::size_t>(i)]);
  CHECK(inliers_inside == 95);
  CHECK(partial.radius < full.radius);
  CHECK(partial.center == full.center);
  CHECK(partial.coverage == doctest::Approx(0.95));
}

TEST_CASE("radius is nondecreasing in coverage and coverage is honoured") {
  std::mt19937_64 rng(10);
  for (int set = 0; set < 30; ++set) {
    std::vector<Point> pts;
    const int m = 5 + set * 3;
    for (int i = 0; i < m; ++i)
      pts.push_back(oracle::uniform_point(rng, 2));
    double last = -1.0;
    for (double q : {0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 1.0}) {
      const Sphere s = enclosing_sphere(pts, q, 5);
      CHECK(s.radius >= last);
      last = s.radius;
      std::size_t inside = 0;
      for (const auto &p : pts)
        inside += distance(p, s.center) <= s.radius + 1e-9;
      CHECK(inside >= static_cast<std::size_t>(std::ceil(q * m - 1e-9)));
      CHECK(s.coverage == doctest::Approx(static_cast<double>(inside) / m));
    }
  }
}

TEST_CASE("nearest-rank quantile rounds the rank up") {
  CHECK(nearest_rank_quantile({3.0, 1.0, 2.0}, 0.25) == 1.0);
  CHECK(nearest_rank_quantile({3.0, 1.0, 2.0}, 0.75) == 3.0);
  CHECK(nearest_rank_quantile({4.0, 1.0, 3.0, 2.0}, 0.5) == 2.0);
  CHECK(nearest_rank_quantile({4.0, 1.0, 3.0, 2.0}, 1.0) == 4.0);
  CHECK(kind_of([] { nearest_rank_quantile({}, 0.5); }) == ErrorKind::EmptyInput);
}

TEST_CASE("enclosing sphere input errors") {
  CHECK(kind_of([] { enclosing_sphere(std::vector<Point>{}, 1.0); }) == ErrorKind::EmptyInput);
  const std::vector<Point> mixed{{0.0, 0.0}, {1.0}};
  CHECK(kind_of([&] { enclosing_sphere(mixed, 1.0); }) == ErrorKind::DimensionMismatch);
  const std::vector<Point> ok{{0.0, 0.0}};
  CHECK(kind_of([&] { enclosing_sphere(ok, 0.0); }) == ErrorKind::InvalidParameter);
  CHECK(kind_of([&] { enclosing_sphere(ok, 1.5); }) == ErrorKind::InvalidParameter);
}

TEST_CASE("containment is boundary inclusive") {
  const Sphere s{{0.0, 0.0}, 0.1, 1.0};
  CHECK(contains(s, Point{0.0, 0.0}));
  CHECK(contains(s, Point{0.1, 0.0}));
  CHECK(contains(s, Point{0.0, -0.1}));
  CHECK_FALSE(contains(s, Point{0.1 + 1e-6, 0.0}));
  CHECK(kind_of([&] { contains(s, Point{0.0}); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("selection returns exactly the training points inside the sphere") {
  const auto world = build_mixture(MixtureConfig{});
  Rng rng(5);
  const Dataset z = sample_labeled(world, 2000, rng);

  const Sphere nowhere{{3.0, 3.0}, 0.0, 1.0};
  CHECK(select_within(z, nowhere).empty());

  const Sphere everything{{0.5, 0.5}, 100.0, 1.0};
  const Dataset all = select_within(z, everything);
  REQUIRE(all.size() == z.size());
  for (std::size_t i = 0; i < z.size(); ++i)
    CHECK(all.samples[i].point == z.samples[i].point);

  std::mt19937_64 gen(6);
  for (int trial = 0; trial < 20; ++trial) {
    const Sphere s{oracle::uniform_point(gen, 2), 0.05 + 0.02 * trial, 1.0};
    const Dataset sel = select_within(z, s);
    std::vector<std::size_t> expected;
    for (std::size_t i = 0; i < z.size(); ++i) {
      const double dx = z.samples[i].point[0] - s.center[0];
      const double dy = z.samples[i].point[1] - s.center[1];
      if (std::sqrt(dx * dx + dy * dy) <= s.radius)
        expected.push_back(i);
    }
    REQUIRE(sel.size() == expected.size());
    for (std::size_t k = 0; k < expected.size(); ++k) {
      CHECK(sel.samples[k].point == z.samples[expected[k]].point);
      CHECK(sel.samples[k].label == z.samples[expected[k]].label);
    }
    const Dataset again = select_within(sel, s);
    REQUIRE(again.size() == sel.size());
    for (std::size_t k = 0; k < sel.size(); ++k)
      CHECK(again.samples[k].point == sel.samples[k].point);
    CHECK(indices_within(z.points(), s) == expected);
  }

  Dataset three;
  three.dimension = 3;
  CHECK(kind_of([&] { select_within(three, everything); }) == ErrorKind::DimensionMismatch);
}
