#include "semcomp/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace semcomp {

namespace {

std::vector<std::string> split(const std::string &line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ','))
    fields.push_back(field);
  if (!line.empty() && line.back() == ',')
    fields.emplace_back();
  return fields;
}

void write_point_header(std::ostream &out, const char *first, std::size_t dimension) {
  out << first;
  for (std::size_t c = 0; c < dimension; ++c)
    out << ",x_" << c;
  out << '\n';
}

Point parse_point(const std::vector<std::string> &row, std::size_t offset) {
  Point p;
  for (std::size_t c = offset; c < row.size(); ++c)
    p.push_back(parse_real(row[c]));
  return p;
}

std::size_t point_dimension(const CsvTable &table, const char *first) {
  if (table.header.empty() || table.header.front() != first)
    fail(ErrorKind::ParseError, std::string("CSV header must start with '") + first + "'");
  return table.header.size() - 1;
}

} // namespace

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name)
      return i;
  fail(ErrorKind::ParseError, "CSV column '" + std::string(name) + "' not found");
}

double parse_real(const std::string &text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used == 0 || used != text.size())
    fail(ErrorKind::ParseError, "not a number: '" + text + "'");
  return value;
}

std::size_t parse_count(const std::string &text) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    fail(ErrorKind::ParseError, "not a count: '" + text + "'");
  return value;
}

CsvTable read_csv(std::istream &in) {
  CsvTable table;
  std::string line;
  if (!std::getline(in, line))
    fail(ErrorKind::ParseError, "CSV input is empty");
  table.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    auto row = split(line);
    if (row.size() != table.header.size())
      fail(ErrorKind::ParseError, "CSV row has " + std::to_string(row.size()) +
                                      " fields, header has " +
                                      std::to_string(table.header.size()));
    table.rows.push_back(std::move(row));
  }
  return table;
}

CsvTable read_csv_file(const std::filesystem::path &path) {
  std::istringstream in(read_file(path));
  return read_csv(in);
}

void write_dataset_csv(std::ostream &out, const Dataset &data) {
  write_point_header(out, "label", data.dimension);
  for (const auto &s : data.samples) {
    out << s.label;
    for (double v : s.point)
      out << ',' << format_real(v);
    out << '\n';
  }
}

Dataset read_dataset_csv(std::istream &in) {
  const CsvTable table = read_csv(in);
  Dataset data;
  data.dimension = point_dimension(table, "label");
  for (const auto &row : table.rows) {
    const std::size_t label = parse_count(row[0]);
    if (label > 1)
      fail(ErrorKind::ParseError, "dataset label must be 0 or 1");
    data.samples.push_back({parse_point(row, 1), static_cast<int>(label)});
  }
  return data;
}

void write_trajectory_csv(std::ostream &out, const Trajectory &trajectory) {
  write_point_header(out, "t", trajectory.points.empty() ? 0 : trajectory.points[0].size());
  for (std::size_t t = 0; t < trajectory.points.size(); ++t) {
    out << t;
    for (double v : trajectory.points[t])
      out << ',' << format_real(v);
    out << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream &in) {
  const CsvTable table = read_csv(in);
  point_dimension(table, "t");
  Trajectory trajectory;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (parse_count(table.rows[i][0]) != i)
      fail(ErrorKind::ParseError, "trajectory rows must be numbered 0, 1, 2, ...");
    trajectory.points.push_back(parse_point(table.rows[i], 1));
  }
  return trajectory;
}

void write_records_csv(std::ostream &out, std::span<const SubsequenceRecord> records) {
  out << "gamma,t,radius,accuracy,local_n,fallback,feasible,energy_pen,bandwidth_pen\n";
  for (const auto &r : records)
    out << r.gamma << ',' << r.t << ',' << format_real(r.radius) << ','
        << format_real(r.accuracy) << ',' << r.local_sample_size << ','
        << to_string(r.fallback_kind) << ',' << (r.feasible ? 1 : 0) << ','
        << format_real(r.energy_penalty) << ',' << format_real(r.bandwidth_penalty) << '\n';
}

std::vector<SubsequenceRecord> read_records_csv(std::istream &in) {
  const CsvTable table = read_csv(in);
  const std::size_t gamma = table.column("gamma"), t = table.column("t"),
                    radius = table.column("radius"), acc = table.column("accuracy"),
                    local_n = table.column("local_n"), fallback = table.column("fallback"),
                    feasible = table.column("feasible"),
                    energy = table.column("energy_pen"),
                    bandwidth = table.column("bandwidth_pen");
  std::vector<SubsequenceRecord> records;
  for (const auto &row : table.rows) {
    SubsequenceRecord r;
    r.gamma = parse_count(row[gamma]);
    r.t = parse_count(row[t]);
    r.radius = parse_real(row[radius]);
    r.accuracy = parse_real(row[acc]);
    r.local_sample_size = parse_count(row[local_n]);
    r.fallback_kind = parse_fallback_kind(row[fallback]);
    r.feasible = parse_count(row[feasible]) != 0;
    r.energy_penalty = parse_real(row[energy]);
    r.bandwidth_penalty = parse_real(row[bandwidth]);
    records.push_back(r);
  }
  return records;
}

void write_summary_csv(std::ostream &out, const SummaryStats &summary) {
  out << "gamma,metric,mean,q25,q75,n\n";
  for (const auto &s : summary) {
    const std::pair<const char *, const MetricStats *> metrics[] = {
        {"radius", &s.radius},
        {"accuracy", &s.accuracy},
        {"global_accuracy", &s.global_accuracy}};
    for (const auto &[name, m] : metrics)
      out << s.gamma << ',' << name << ',' << format_real(m->mean) << ','
          << format_real(m->q25) << ',' << format_real(m->q75) << ',' << m->n << '\n';
  }
}

void write_aging_csv(std::ostream &out, std::span<const AgingRecord> records) {
  out << "gamma,delay_multiple,relative_accuracy,n_windows\n";
  for (const auto &r : records)
    out << r.gamma << ',' << r.delay_multiple << ',' << format_real(r.relative_accuracy)
        << ',' << r.n_windows << '\n';
}

std::vector<AgingRecord> read_aging_csv(std::istream &in) {
  const CsvTable table = read_csv(in);
  const std::size_t gamma = table.column("gamma"), delay = table.column("delay_multiple"),
                    rel = table.column("relative_accuracy"), n = table.column("n_windows");
  std::vector<AgingRecord> records;
  for (const auto &row : table.rows)
    records.push_back({parse_count(row[gamma]), parse_count(row[delay]),
                       parse_real(row[rel]), parse_count(row[n])});
  return records;
}

void write_aging_samples_csv(std::ostream &out, std::span<const AgingSample> samples) {
  out << "gamma,t,delay_multiple,accuracy\n";
  for (const auto &s : samples)
    out << s.gamma << ',' << s.t << ',' << s.delay_multiple << ','
        << format_real(s.accuracy) << '\n';
}

std::vector<AgingSample> read_aging_samples_csv(std::istream &in) {
  const CsvTable table = read_csv(in);
  const std::size_t gamma = table.column("gamma"), t = table.column("t"),
                    delay = table.column("delay_multiple"), acc = table.column("accuracy");
  std::vector<AgingSample> samples;
  for (const auto &row : table.rows)
    samples.push_back({parse_count(row[gamma]), parse_count(row[t]),
                       parse_count(row[delay]), parse_real(row[acc])});
  return samples;
}

void write_file(const std::filesystem::path &path, const std::string &contents) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out)
    fail(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  out << contents;
  if (!out)
    fail(ErrorKind::Io, "failed writing '" + path.string() + "'");
}

std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    fail(ErrorKind::MissingFile, "cannot read '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

} // namespace semcomp
