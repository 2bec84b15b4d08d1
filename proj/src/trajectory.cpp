#include "semcomp/trajectory.hpp"

#include <cmath>

namespace semcomp {

namespace {

void validate(const MhConfig &config) {
  if (!(config.proposal_stddev > 0.0) || !std::isfinite(config.proposal_stddev))
    fail(ErrorKind::InvalidParameter, "proposal_stddev must be positive");
}

// Proposal and acceptance draw, sharing the density of the current state.
bool advance(const MixtureSpec &spec, Point &state, double &state_density,
             const MhConfig &config, Rng &rng) {
  std::normal_distribution<double> noise(0.0, config.proposal_stddev);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Point proposal = state;
  for (double &coord : proposal)
    coord += noise(rng);
  const double proposal_density = pdf(spec, proposal);
  const double u = unit(rng);
  // u < ratio with u in [0, 1): ratio >= 1 always accepts, ratio 0 never.
  if (u * state_density < proposal_density) {
    state = std::move(proposal);
    state_density = proposal_density;
    return true;
  }
  return false;
}

} // namespace

MhStep mh_step(const MixtureSpec &spec, std::span<const double> current,
               const MhConfig &config, Rng &rng) {
  validate(config);
  require_dimension(spec.dimension, current.size(), "mh_step");
  MhStep step{Point(current.begin(), current.end()), false};
  double density = pdf(spec, current);
  step.accepted = advance(spec, step.next, density, config, rng);
  return step;
}

Trajectory sample_trajectory(const MixtureSpec &spec, std::size_t length,
                             const MhConfig &config, std::uint64_t seed) {
  validate(config);
  if (length < 1)
    fail(ErrorKind::InvalidParameter, "trajectory length must be at least 1");

  Rng rng(seed);
  Point state = sample_one(spec, rng).point;
  double density = pdf(spec, state);
  for (std::size_t i = 0; i < config.burn_in; ++i)
    advance(spec, state, density, config, rng);

  Trajectory trajectory;
  trajectory.seed = seed;
  trajectory.points.reserve(length);
  std::size_t accepted = 0;
  for (std::size_t i = 0; i < length; ++i) {
    accepted += advance(spec, state, density, config, rng) ? 1 : 0;
    trajectory.points.push_back(state);
  }
  trajectory.accept_rate = static_cast<double>(accepted) / static_cast<double>(length);
  return trajectory;
}

} // namespace semcomp
