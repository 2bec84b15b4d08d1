#pragma once

#include "semcomp/experiment.hpp"

#include <filesystem>
#include <iosfwd>

namespace semcomp {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;
};

CsvTable read_csv(std::istream &in);
CsvTable read_csv_file(const std::filesystem::path &path);

// label,x_0,...,x_{d-1}
void write_dataset_csv(std::ostream &out, const Dataset &data);
Dataset read_dataset_csv(std::istream &in);

// t,x_0,...,x_{d-1}
void write_trajectory_csv(std::ostream &out, const Trajectory &trajectory);
Trajectory read_trajectory_csv(std::istream &in);

// gamma,t,radius,accuracy,local_n,fallback,feasible,energy_pen,bandwidth_pen
void write_records_csv(std::ostream &out, std::span<const SubsequenceRecord> records);
std::vector<SubsequenceRecord> read_records_csv(std::istream &in);

// gamma,metric,mean,q25,q75,n
void write_summary_csv(std::ostream &out, const SummaryStats &summary);

// gamma,delay_multiple,relative_accuracy,n_windows
void write_aging_csv(std::ostream &out, std::span<const AgingRecord> records);
std::vector<AgingRecord> read_aging_csv(std::istream &in);

// gamma,t,delay_multiple,accuracy
void write_aging_samples_csv(std::ostream &out, std::span<const AgingSample> samples);
std::vector<AgingSample> read_aging_samples_csv(std::istream &in);

double parse_real(const std::string &text);
std::size_t parse_count(const std::string &text);

// Whole-file helpers; failures raise Io / MissingFile.
void write_file(const std::filesystem::path &path, const std::string &contents);
std::string read_file(const std::filesystem::path &path);

} // namespace semcomp
