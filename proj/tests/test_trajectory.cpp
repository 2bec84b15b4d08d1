#include "oracles.hpp"

#include "semcomp/trajectory.hpp"

#include <doctest.h>

#include <map>

using namespace semcomp;

namespace {

// Two overlapping components on the unit interval.
MixtureSpec two_component_line() {
  MixtureConfig c;
  c.dimension = 1;
  c.lines_per_class = 1;
  c.components_per_line = 2;
  c.line_offset = 0.0;
  c.component_spacing = 0.15;
  c.component_stddev = 0.05;
  return build_mixture(c);
}

std::vector<double> all_means_1d(const MixtureSpec &spec) {
  std::vector<double> means;
  for (int label : {0, 1})
    for (const auto &c : spec.centers[label])
      means.push_back(c[0]);
  return means;
}

} // namespace

TEST_CASE("uphill proposals are always accepted") {
  // Midway between two well separated modes the density has a strict
  // local minimum, so every small step goes uphill.
  MixtureConfig c;
  c.dimension = 1;
  c.lines_per_class = 1;
  c.components_per_line = 2;
  c.line_offset = 0.0;
  c.component_spacing = 0.3;
  c.component_stddev = 0.05;
  const auto spec = build_mixture(c);
  const Point trough{0.5};
  MhConfig cfg;
  cfg.proposal_stddev = 1e-4;
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const MhStep step = mh_step(spec, trough, cfg, rng);
    CHECK(step.accepted);
    CHECK(pdf(spec, step.next) >= pdf(spec, trough));
  }
}

TEST_CASE("proposals with underflowed density are rejected and repeat the state") {
  const auto spec = two_component_line();
  const Point tail{0.5 + 1.75}; // density tiny but positive
  REQUIRE(pdf(spec, tail) > 0.0);
  MhConfig cfg;
  cfg.proposal_stddev = 1e6;
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const MhStep step = mh_step(spec, tail, cfg, rng);
    CHECK_FALSE(step.accepted);
    CHECK(step.next == tail);
  }
}

TEST_CASE("rejected steps inside a chain repeat the previous state bitwise") {
  const auto spec = build_mixture(MixtureConfig{});
  MhConfig cfg;
  Rng rng(3);
  Rng start_rng(4);
  Point x = sample_one(spec, start_rng).point;
  std::size_t rejected = 0;
  for (int i = 0; i < 5000; ++i) {
    const MhStep step = mh_step(spec, x, cfg, rng);
    if (!step.accepted) {
      ++rejected;
      CHECK(step.next == x);
    }
    x = step.next;
  }
  CHECK(rejected > 0);
}

TEST_CASE("one-dimensional chain matches the analytic density") {
  const auto spec = two_component_line();
  MhConfig cfg;
  cfg.proposal_stddev = 0.1;
  const Trajectory tr = sample_trajectory(spec, 200000, cfg, 5);
  std::vector<double> xs;
  xs.reserve(tr.points.size());
  for (const auto &p : tr.points)
    xs.push_back(p[0]);
  const double tv = oracle::histogram_tv(xs, all_means_1d(spec), 0.05, 0.2, 0.8, 100);
  CHECK(tv <= 0.03);
}

TEST_CASE("empirical flows between bins balance") {
  const auto spec = two_component_line();
  MhConfig cfg;
  cfg.proposal_stddev = 0.1;
  const Trajectory tr = sample_trajectory(spec, 1000000, cfg, 6);
  const double width = 0.05;
  auto bin = [&](double x) { return static_cast<int>(std::floor(x / width)); };
  std::map<std::pair<int, int>, double> flow;
  for (std::size_t i = 1; i < tr.points.size(); ++i)
    flow[{bin(tr.points[i - 1][0]), bin(tr.points[i][0])}] += 1.0;
  // Pairs around both modes and across the trough.
  const std::vector<std::pair<int, int>> pairs{{7, 8}, {8, 9}, {9, 10}, {10, 11},
                                               {11, 12}, {8, 11}, {7, 10}, {9, 12}};
  for (auto [a, b] : pairs) {
    const double ab = flow[{a, b}], ba = flow[{b, a}];
    CAPTURE(a);
    CAPTURE(b);
    REQUIRE(ab + ba > 100.0);
    CHECK(std::abs(ab - ba) <= 3.0 * std::sqrt(ab + ba));
  }
}

TEST_CASE("a one-step trajectory is the first move from the start point") {
  const auto spec = build_mixture(MixtureConfig{});
  MhConfig cfg;
  cfg.burn_in = 0;
  const Trajectory tr = sample_trajectory(spec, 1, cfg, 77);
  REQUIRE(tr.points.size() == 1);
  Rng rng(77);
  const Point x0 = sample_one(spec, rng).point;
  const MhStep step = mh_step(spec, x0, cfg, rng);
  CHECK(tr.points[0] == step.next);
  CHECK(tr.seed == 77);
}

TEST_CASE("trajectories are deterministic given the seed") {
  const auto spec = build_mixture(MixtureConfig{});
  const MhConfig cfg;
  const Trajectory a = sample_trajectory(spec, 2000, cfg, 9);
  const Trajectory b = sample_trajectory(spec, 2000, cfg, 9);
  const Trajectory c = sample_trajectory(spec, 2000, cfg, 10);
  CHECK(a.points == b.points);
  CHECK(a.accept_rate == b.accept_rate);
  CHECK(a.points != c.points);
  CHECK(a.points.size() == 2000);
}

TEST_CASE("default step size neither freezes nor always accepts") {
  const auto spec = build_mixture(MixtureConfig{});
  const Trajectory tr = sample_trajectory(spec, 50000, MhConfig{}, 20240601);
  CHECK(tr.accept_rate >= 0.2);
  CHECK(tr.accept_rate <= 0.8);
  std::size_t moves = 0;
  for (std::size_t i = 1; i < tr.points.size(); ++i)
    moves += tr.points[i] != tr.points[i - 1];
  // Recorded acceptance counts the T steps; the first may or may not move.
  const auto accepted =
      static_cast<std::size_t>(std::llround(tr.accept_rate * static_cast<double>(tr.points.size())));
  CHECK(moves <= accepted);
  CHECK(moves + 1 >= accepted);
}

TEST_CASE("two-dimensional marginals match the analytic mixture per axis") {
  const auto spec = build_mixture(MixtureConfig{});
  const Trajectory tr = sample_trajectory(spec, 1000000, MhConfig{}, 31);
  for (std::size_t axis = 0; axis < 2; ++axis) {
    std::vector<double> xs, means;
    for (const auto &p : tr.points)
      xs.push_back(p[axis]);
    for (int label : {0, 1})
      for (const auto &c : spec.centers[label])
        means.push_back(c[axis]);
    const double tv = oracle::histogram_tv(xs, means, spec.component_stddev, -0.1, 1.1, 60);
    CAPTURE(axis);
    CHECK(tv <= 0.05);
  }
}

TEST_CASE("invalid chain settings are rejected") {
  const auto spec = build_mixture(MixtureConfig{});
  MhConfig bad;
  bad.proposal_stddev = 0.0;
  CHECK_THROWS_AS(sample_trajectory(spec, 10, bad, 1), Error);
  CHECK_THROWS_AS(sample_trajectory(spec, 0, MhConfig{}, 1), Error);
  Rng rng(1);
  CHECK_THROWS_AS(mh_step(spec, Point{0.5}, MhConfig{}, rng), Error);
}
