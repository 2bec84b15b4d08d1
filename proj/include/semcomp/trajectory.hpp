#pragma once

#include "semcomp/worldgen.hpp"

namespace semcomp {

struct MhConfig {
  double proposal_stddev = 0.05; // isotropic Gaussian random walk
  std::size_t burn_in = 1000;
};

struct Trajectory {
  std::vector<Point> points;
  std::uint64_t seed = 0;
  double accept_rate = 0.0; // over the recorded steps
};

struct MhStep {
  Point next;
  bool accepted = false;
};

// One random-walk Metropolis-Hastings step targeting the joint density.
// A rejected step returns the current state unchanged.
MhStep mh_step(const MixtureSpec &spec, std::span<const double> current,
               const MhConfig &config, Rng &rng);

// Chain started at x_0 ~ X; burn_in steps are discarded, then `length`
// consecutive states are kept without thinning.
Trajectory sample_trajectory(const MixtureSpec &spec, std::size_t length,
                             const MhConfig &config, std::uint64_t seed);

} // namespace semcomp
