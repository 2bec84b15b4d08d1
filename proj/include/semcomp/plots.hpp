#pragma once

#include "semcomp/io.hpp"

namespace semcomp {

// Self-contained SVG figures rendered from the CSV tables. Every plotted
// marker carries the CSV text it was drawn from in data-* attributes.

// Mean line over a log-scaled gamma axis with the q25..q75 band shaded,
// from the rows of a summary table whose metric column equals `metric`.
std::string render_band_plot(const CsvTable &summary, const std::string &metric,
                             const std::string &title, const std::string &y_label);

// Relative accuracy against delay multiple, one curve per gamma.
std::string render_aging_plot(const CsvTable &aging, const std::string &title);

} // namespace semcomp
