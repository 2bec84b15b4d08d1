#include "semcomp/common.hpp"

#include <cmath>
#include <cstdio>

namespace semcomp {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::InvalidParameter: return "InvalidParameter";
  case ErrorKind::CenterOutOfBounds: return "CenterOutOfBounds";
  case ErrorKind::DimensionMismatch: return "DimensionMismatch";
  case ErrorKind::SingleClassData: return "SingleClassData";
  case ErrorKind::NonConvergence: return "NonConvergence";
  case ErrorKind::EmptyReference: return "EmptyReference";
  case ErrorKind::EmptyInput: return "EmptyInput";
  case ErrorKind::EmptyLocalData: return "EmptyLocalData";
  case ErrorKind::TrajectoryTooShort: return "TrajectoryTooShort";
  case ErrorKind::MissingFile: return "MissingFile";
  case ErrorKind::ParseError: return "ParseError";
  case ErrorKind::UnknownKey: return "UnknownKey";
  case ErrorKind::InvalidValue: return "InvalidValue";
  case ErrorKind::MissingArtifact: return "MissingArtifact";
  case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string &message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind) {}

void fail(ErrorKind kind, const std::string &message) {
  throw Error(kind, message);
}

void require_dimension(std::size_t expected, std::size_t actual,
                       std::string_view what) {
  if (expected != actual)
    fail(ErrorKind::DimensionMismatch,
         std::string(what) + ": expected dimension " +
             std::to_string(expected) + ", got " + std::to_string(actual));
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return sum;
}

double distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_distance(a, b));
}

double dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    sum += a[i] * b[i];
  return sum;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t label) {
  // splitmix64 finalizer over (master, label)
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (label + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

} // namespace semcomp
