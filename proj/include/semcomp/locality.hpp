#pragma once

#include "semcomp/worldgen.hpp"

namespace semcomp {

// Locality of an update period: a ball around recent observations.
struct Sphere {
  Point center;
  double radius = 0.0;
  double coverage = 1.0; // realized fraction of generating points enclosed

  std::size_t dimension() const { return center.size(); }
};

/// Exact minimum enclosing ball (Welzl with move-to-front). The points are
/// visited in an order shuffled by `shuffle_seed`. The returned radius is
/// the largest distance from the computed center, so every input point is
/// contained exactly.
Sphere minimum_enclosing_ball(std::span<const Point> points,
                              std::uint64_t shuffle_seed = 0);

/// Coverage 1 yields the minimum enclosing ball. Coverage q < 1 keeps the
/// full-ball center and shrinks the radius to the nearest-rank q-quantile
/// of the distances from it, so at least ceil(q * m) points stay inside.
/// Distances within a relative 1e-12 of that quantile count as ties and
/// are kept inside as well.
Sphere enclosing_sphere(std::span<const Point> points, double coverage,
                        std::uint64_t shuffle_seed = 0);

// Boundary inclusive.
bool contains(const Sphere &sphere, std::span<const double> x);

std::vector<std::size_t> indices_within(std::span<const Point> points,
                                        const Sphere &sphere);

// Subset of `data` inside the sphere, original order preserved.
Dataset select_within(const Dataset &data, const Sphere &sphere);

// Nearest-rank quantile, index ceil(q * n) - 1 of the sorted values.
double nearest_rank_quantile(std::vector<double> values, double q);

} // namespace semcomp
