#include "semcomp/config.hpp"

#include "semcomp/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

namespace semcomp {

ConfigError::ConfigError(ErrorKind kind, std::size_t line, const std::string &message)
    : Error(kind, line ? "line " + std::to_string(line) + ": " + message : message),
      line_(line) {}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

struct Invalid {
  std::string message;
};

double to_real(const std::string &v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception &) {
    throw Invalid{"expected a number, got '" + v + "'"};
  }
  if (used != v.size() || !std::isfinite(out))
    throw Invalid{"expected a number, got '" + v + "'"};
  return out;
}

double to_positive(const std::string &v) {
  const double x = to_real(v);
  if (!(x > 0.0))
    throw Invalid{"expected a positive number, got '" + v + "'"};
  return x;
}

double to_nonnegative(const std::string &v) {
  const double x = to_real(v);
  if (!(x >= 0.0))
    throw Invalid{"expected a nonnegative number, got '" + v + "'"};
  return x;
}

double to_unit_interval(const std::string &v) {
  const double x = to_real(v);
  if (!(x > 0.0) || x > 1.0)
    throw Invalid{"expected a number in (0, 1], got '" + v + "'"};
  return x;
}

std::uint64_t to_u64(const std::string &v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw Invalid{"expected a nonnegative integer, got '" + v + "'"};
  return out;
}

std::size_t to_count(const std::string &v) { return static_cast<std::size_t>(to_u64(v)); }

std::size_t to_positive_count(const std::string &v) {
  const std::size_t n = to_count(v);
  if (n < 1)
    throw Invalid{"expected a positive integer, got '" + v + "'"};
  return n;
}

std::vector<std::size_t> to_count_list(const std::string &v) {
  std::vector<std::size_t> out;
  std::istringstream in(v);
  std::string item;
  while (std::getline(in, item, ','))
    out.push_back(to_count(trim(item)));
  if (out.empty())
    throw Invalid{"expected a comma-separated list of integers"};
  return out;
}

using Setter = std::function<void(RunConfig &, const std::string &)>;

const std::map<std::string, std::map<std::string, Setter>> &key_table() {
  static const std::map<std::string, std::map<std::string, Setter>> table = {
      {"",
       {{"master_seed", [](RunConfig &c, const std::string &v) { c.master_seed = to_u64(v); }}}},
      {"world",
       {{"dimension",
         [](RunConfig &c, const std::string &v) { c.world.dimension = to_positive_count(v); }},
        {"lines_per_class",
         [](RunConfig &c, const std::string &v) {
           c.world.lines_per_class = to_positive_count(v);
         }},
        {"components_per_line",
         [](RunConfig &c, const std::string &v) {
           c.world.components_per_line = to_positive_count(v);
         }},
        {"line_offset",
         [](RunConfig &c, const std::string &v) { c.world.line_offset = to_nonnegative(v); }},
        {"component_spacing",
         [](RunConfig &c, const std::string &v) {
           c.world.component_spacing = to_positive(v);
         }},
        {"component_stddev",
         [](RunConfig &c, const std::string &v) { c.world.component_stddev = to_positive(v); }},
        {"dataset_size",
         [](RunConfig &c, const std::string &v) { c.dataset_size = to_positive_count(v); }}}},
      {"global_classifier",
       {{"C", [](RunConfig &c, const std::string &v) { c.global_classifier.svm.C = to_positive(v); }},
        {"gamma",
         [](RunConfig &c, const std::string &v) { c.global_classifier.svm.gamma = to_positive(v); }},
        {"tol",
         [](RunConfig &c, const std::string &v) { c.global_classifier.svm.tol = to_positive(v); }},
        {"max_iterations",
         [](RunConfig &c, const std::string &v) {
           c.global_classifier.svm.max_iterations = to_positive_count(v);
         }},
        {"cache_megabytes",
         [](RunConfig &c, const std::string &v) {
           c.global_classifier.svm.cache_megabytes = to_positive_count(v);
         }},
        {"holdout_size",
         [](RunConfig &c, const std::string &v) {
           c.global_classifier.holdout_size = to_positive_count(v);
         }}}},
      {"trajectory",
       {{"length",
         [](RunConfig &c, const std::string &v) { c.trajectory.length = to_positive_count(v); }},
        {"proposal_stddev",
         [](RunConfig &c, const std::string &v) {
           c.trajectory.mh.proposal_stddev = to_positive(v);
         }},
        {"burn_in",
         [](RunConfig &c, const std::string &v) { c.trajectory.mh.burn_in = to_count(v); }}}},
      {"experiment",
       {{"gamma_grid",
         [](RunConfig &c, const std::string &v) {
           c.experiment.gamma_grid = to_count_list(v);
           for (std::size_t i = 0; i < c.experiment.gamma_grid.size(); ++i)
             if (c.experiment.gamma_grid[i] < 2 ||
                 (i > 0 && c.experiment.gamma_grid[i] <= c.experiment.gamma_grid[i - 1]))
               throw Invalid{"gamma_grid must be strictly increasing with entries >= 2"};
         }},
        {"coverage",
         [](RunConfig &c, const std::string &v) { c.experiment.coverage = to_unit_interval(v); }},
        {"windows_per_gamma",
         [](RunConfig &c, const std::string &v) {
           c.experiment.windows_per_gamma = to_positive_count(v);
         }},
        {"min_local_points",
         [](RunConfig &c, const std::string &v) { c.experiment.min_local_points = to_count(v); }},
        {"aging_delays",
         [](RunConfig &c, const std::string &v) {
           c.experiment.aging_delays = to_count_list(v);
           if (std::find(c.experiment.aging_delays.begin(), c.experiment.aging_delays.end(),
                         0u) == c.experiment.aging_delays.end())
             throw Invalid{"aging_delays must include 0"};
         }},
        {"local_C",
         [](RunConfig &c, const std::string &v) { c.experiment.local_svm.C = to_positive(v); }},
        {"local_tol",
         [](RunConfig &c, const std::string &v) { c.experiment.local_svm.tol = to_positive(v); }},
        {"local_max_epochs",
         [](RunConfig &c, const std::string &v) {
           c.experiment.local_svm.max_epochs = to_positive_count(v);
         }},
        {"negative_weight",
         [](RunConfig &c, const std::string &v) {
           c.experiment.local_svm.class_weights[0] = to_positive(v);
         }},
        {"positive_weight",
         [](RunConfig &c, const std::string &v) {
           c.experiment.local_svm.class_weights[1] = to_positive(v);
         }},
        {"loss",
         [](RunConfig &c, const std::string &v) {
           if (v == "squared")
             c.loss.type = LossType::Squared;
           else if (v == "logistic")
             c.loss.type = LossType::Logistic;
           else
             throw Invalid{"loss must be 'squared' or 'logistic', got '" + v + "'"};
         }},
        {"logistic_delta",
         [](RunConfig &c, const std::string &v) {
           const double x = to_positive(v);
           if (!(x < 0.5))
             throw Invalid{"logistic_delta must lie in (0, 0.5)"};
           c.loss.delta = x;
         }}}},
      {"constraints",
       {{"energy_budget",
         [](RunConfig &c, const std::string &v) { c.constraints.energy_budget = to_positive(v); }},
        {"bandwidth_budget",
         [](RunConfig &c, const std::string &v) {
           c.constraints.bandwidth_budget = to_nonnegative(v);
         }},
        {"energy_tolerance",
         [](RunConfig &c, const std::string &v) {
           c.constraints.energy_tolerance = to_nonnegative(v);
         }},
        {"bandwidth_tolerance",
         [](RunConfig &c, const std::string &v) {
           c.constraints.bandwidth_tolerance = to_nonnegative(v);
         }},
        {"payload_size",
         [](RunConfig &c, const std::string &v) { c.constraints.payload_size = to_positive(v); }}}},
      {"control",
       {{"target_accuracy",
         [](RunConfig &c, const std::string &v) {
           c.control.target_accuracy = to_unit_interval(v);
         }}}},
      {"output",
       {{"dir", [](RunConfig &c, const std::string &v) {
           if (v.empty())
             throw Invalid{"output dir must not be empty"};
           c.output_dir = v;
         }}}},
  };
  return table;
}

} // namespace

std::uint64_t RunConfig::seed(SeedStage stage) const {
  return derive_seed(master_seed, static_cast<std::uint64_t>(stage));
}

ExperimentConfig RunConfig::resolved_experiment() const {
  ExperimentConfig out = experiment;
  out.window_seed = seed(SeedStage::Windows);
  out.sphere_seed = seed(SeedStage::Spheres);
  out.truth_seed = seed(SeedStage::Truth);
  return out;
}

void RunConfig::validate() const {
  build_mixture(world);
  experiment.validate();
  constraints.validate();
  loss.validate();
  control.validate();
}

RunConfig parse_config_text(const std::string &text, const std::filesystem::path &base_dir) {
  RunConfig config;
  const auto &table = key_table();
  std::string section;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty())
      continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(ErrorKind::ParseError, line_no, "unterminated section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!table.contains(section) || section.empty())
        throw ConfigError(ErrorKind::UnknownKey, line_no, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(ErrorKind::ParseError, line_no, "expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty())
      throw ConfigError(ErrorKind::ParseError, line_no, "missing key before '='");
    const auto &keys = table.at(section);
    const auto setter = keys.find(key);
    if (setter == keys.end())
      throw ConfigError(ErrorKind::UnknownKey, line_no,
                        "unknown key '" + key + "'" +
                            (section.empty() ? std::string() : " in [" + section + "]"));
    try {
      setter->second(config, value);
    } catch (const Invalid &e) {
      throw ConfigError(ErrorKind::InvalidValue, line_no, key + ": " + e.message);
    }
  }
  config.control.gamma_grid = config.experiment.gamma_grid;
  if (!config.output_dir.empty() && config.output_dir.is_relative() && !base_dir.empty())
    config.output_dir = base_dir / config.output_dir;
  try {
    config.validate();
  } catch (const Error &e) {
    throw ConfigError(ErrorKind::InvalidValue, 0, e.what());
  }
  return config;
}

RunConfig parse_config(const std::filesystem::path &path) {
  if (!std::filesystem::is_regular_file(path))
    throw ConfigError(ErrorKind::MissingFile, 0, "config file '" + path.string() + "' not found");
  return parse_config_text(read_file(path), path.parent_path());
}

} // namespace semcomp
