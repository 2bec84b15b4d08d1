#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace semcomp {

using Point = std::vector<double>;
using Rng = std::mt19937_64;

enum class ErrorKind {
  InvalidParameter,
  CenterOutOfBounds,
  DimensionMismatch,
  SingleClassData,
  NonConvergence,
  EmptyReference,
  EmptyInput,
  EmptyLocalData,
  TrajectoryTooShort,
  MissingFile,
  ParseError,
  UnknownKey,
  InvalidValue,
  MissingArtifact,
  Io,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &message);
  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string &message);

void require_dimension(std::size_t expected, std::size_t actual,
                       std::string_view what);

double squared_distance(std::span<const double> a, std::span<const double> b);
double distance(std::span<const double> a, std::span<const double> b);
double dot(std::span<const double> a, std::span<const double> b);

// Stage seeds are derived from the master seed by fixed labels so that
// re-running one stage never perturbs another.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t label);

// Shortest decimal text that round-trips: 17 significant digits.
std::string format_real(double value);

} // namespace semcomp
