#include "semcomp/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace semcomp {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 60;

const char *const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string &s) {
  std::string out;
  for (char c : s) {
    switch (c) {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '"': out += "&quot;"; break;
    default: out += c;
    }
  }
  return out;
}

struct Axis {
  double lo, hi;
  bool log_scale;
  double pixel_lo, pixel_hi;

  double map(double v) const {
    const double a = log_scale ? std::log10(lo) : lo;
    const double b = log_scale ? std::log10(hi) : hi;
    const double x = log_scale ? std::log10(v) : v;
    const double frac = b > a ? (x - a) / (b - a) : 0.5;
    return pixel_lo + frac * (pixel_hi - pixel_lo);
  }
};

Axis padded(double lo, double hi, double pixel_lo, double pixel_hi) {
  if (hi <= lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.08 * (hi - lo);
  return {lo - pad, hi + pad, false, pixel_lo, pixel_hi};
}

void open_svg(std::ostringstream &svg, const std::string &title) {
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth)
      << "\" height=\"" << num(kHeight) << "\" viewBox=\"0 0 " << num(kWidth) << ' '
      << num(kHeight) << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << num(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">" << escape(title) << "</text>\n";
}

void draw_axes(std::ostringstream &svg, const Axis &x, const Axis &y,
               const std::vector<double> &x_ticks, const std::string &x_label,
               const std::string &y_label) {
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  svg << "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
  svg << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x1)
      << "\" y2=\"" << num(y0) << "\"/>\n";
  svg << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x0)
      << "\" y2=\"" << num(y1) << "\"/>\n";
  svg << "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (double t : x_ticks) {
    const double px = x.map(t);
    svg << "<line x1=\"" << num(px) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(px)
        << "\" y2=\"" << num(y0 + 5) << "\" stroke=\"black\"/>\n";
    std::ostringstream label;
    label << t;
    svg << "<text x=\"" << num(px) << "\" y=\"" << num(y0 + 18)
        << "\" text-anchor=\"middle\">" << label.str() << "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const double v = y.lo + (y.hi - y.lo) * i / 4.0;
    const double py = y.map(v);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    svg << "<line x1=\"" << num(x0 - 5) << "\" y1=\"" << num(py) << "\" x2=\"" << num(x0)
        << "\" y2=\"" << num(py) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << num(x0 - 8) << "\" y=\"" << num(py + 4)
        << "\" text-anchor=\"end\">" << buf << "</text>\n";
  }
  svg << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(kHeight - 18)
      << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(x_label) << "</text>\n";
  svg << "<text transform=\"translate(18," << num((y0 + y1) / 2)
      << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"13\">" << escape(y_label)
      << "</text>\n</g>\n";
}

} // namespace

std::string render_band_plot(const CsvTable &summary, const std::string &metric,
                             const std::string &title, const std::string &y_label) {
  const std::size_t c_gamma = summary.column("gamma"), c_metric = summary.column("metric"),
                    c_mean = summary.column("mean"), c_q25 = summary.column("q25"),
                    c_q75 = summary.column("q75");
  struct Row {
    double gamma, mean, q25, q75;
    const std::vector<std::string> *raw;
  };
  std::vector<Row> rows;
  for (const auto &r : summary.rows)
    if (r[c_metric] == metric)
      rows.push_back({parse_real(r[c_gamma]), parse_real(r[c_mean]), parse_real(r[c_q25]),
                      parse_real(r[c_q75]), &r});
  if (rows.empty())
    fail(ErrorKind::EmptyInput, "summary has no rows for metric '" + metric + "'");
  std::sort(rows.begin(), rows.end(),
            [](const Row &a, const Row &b) { return a.gamma < b.gamma; });

  double lo = rows.front().q25, hi = rows.front().q75;
  for (const auto &r : rows) {
    lo = std::min({lo, r.q25, r.mean});
    hi = std::max({hi, r.q75, r.mean});
  }
  const Axis y = padded(lo, hi, kHeight - kBottom, kTop);
  Axis x{rows.front().gamma, rows.back().gamma, true, kLeft + 15, kWidth - kRight - 15};
  if (x.hi <= x.lo)
    x.log_scale = false;

  std::ostringstream svg;
  open_svg(svg, title);
  std::vector<double> ticks;
  for (const auto &r : rows)
    ticks.push_back(r.gamma);
  draw_axes(svg, x, y, ticks, "update period (observations)", y_label);

  svg << "<polygon class=\"quantile-band\" fill=\"#bbbbbb\" fill-opacity=\"0.6\" "
         "stroke=\"none\" points=\"";
  for (const auto &r : rows)
    svg << num(x.map(r.gamma)) << ',' << num(y.map(r.q75)) << ' ';
  for (auto it = rows.rbegin(); it != rows.rend(); ++it)
    svg << num(x.map(it->gamma)) << ',' << num(y.map(it->q25)) << ' ';
  svg << "\"/>\n";

  svg << "<polyline class=\"mean\" fill=\"none\" stroke=\"black\" stroke-width=\"2\" "
         "points=\"";
  for (const auto &r : rows)
    svg << num(x.map(r.gamma)) << ',' << num(y.map(r.mean)) << ' ';
  svg << "\"/>\n";
  for (const auto &r : rows) {
    const auto &raw = *r.raw;
    svg << "<circle cx=\"" << num(x.map(r.gamma)) << "\" cy=\"" << num(y.map(r.mean))
        << "\" r=\"3\" fill=\"black\" data-gamma=\"" << escape(raw[c_gamma])
        << "\" data-metric=\"" << escape(raw[c_metric]) << "\" data-mean=\""
        << escape(raw[c_mean]) << "\" data-q25=\"" << escape(raw[c_q25])
        << "\" data-q75=\"" << escape(raw[c_q75]) << "\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string render_aging_plot(const CsvTable &aging, const std::string &title) {
  const std::size_t c_gamma = aging.column("gamma"), c_delay = aging.column("delay_multiple"),
                    c_rel = aging.column("relative_accuracy");
  struct Row {
    double delay, rel;
    const std::vector<std::string> *raw;
  };
  std::map<double, std::vector<Row>> curves;
  for (const auto &r : aging.rows)
    curves[parse_real(r[c_gamma])].push_back(
        {parse_real(r[c_delay]), parse_real(r[c_rel]), &r});
  if (curves.empty())
    fail(ErrorKind::EmptyInput, "aging table is empty");

  double lo = 1.0, hi = 1.0, dmax = 0.0;
  std::vector<double> ticks;
  for (auto &[gamma, rows] : curves) {
    std::sort(rows.begin(), rows.end(),
              [](const Row &a, const Row &b) { return a.delay < b.delay; });
    for (const auto &r : rows) {
      lo = std::min(lo, r.rel);
      hi = std::max(hi, r.rel);
      dmax = std::max(dmax, r.delay);
      if (std::find(ticks.begin(), ticks.end(), r.delay) == ticks.end())
        ticks.push_back(r.delay);
    }
  }
  std::sort(ticks.begin(), ticks.end());
  const Axis y = padded(lo, hi, kHeight - kBottom, kTop);
  const Axis x{0.0, std::max(dmax, 1.0), false, kLeft + 15, kWidth - kRight - 110};

  std::ostringstream svg;
  open_svg(svg, title);
  draw_axes(svg, x, y, ticks, "delay / update period", "relative accuracy");

  std::size_t color = 0;
  for (const auto &[gamma, rows] : curves) {
    const char *stroke = kPalette[color++ % std::size(kPalette)];
    const std::string gamma_text = (*rows.front().raw)[c_gamma];
    svg << "<g class=\"curve\" data-gamma=\"" << escape(gamma_text) << "\">\n";
    svg << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"2\" points=\"";
    for (const auto &r : rows)
      svg << num(x.map(r.delay)) << ',' << num(y.map(r.rel)) << ' ';
    svg << "\"/>\n";
    for (const auto &r : rows)
      svg << "<circle cx=\"" << num(x.map(r.delay)) << "\" cy=\"" << num(y.map(r.rel))
          << "\" r=\"3\" fill=\"" << stroke << "\" data-gamma=\""
          << escape((*r.raw)[c_gamma]) << "\" data-delay=\"" << escape((*r.raw)[c_delay])
          << "\" data-relative=\"" << escape((*r.raw)[c_rel]) << "\"/>\n";
    const double ly = kTop + 14.0 * static_cast<double>(color);
    svg << "<text x=\"" << num(kWidth - kRight - 90) << "\" y=\"" << num(ly)
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << stroke
        << "\">gamma = " << escape(gamma_text) << "</text>\n</g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

} // namespace semcomp
