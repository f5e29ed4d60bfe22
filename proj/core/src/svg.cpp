#include "rtsim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "rtsim/errors.hpp"

namespace rtsim::svg {

namespace {

std::ofstream open(const std::filesystem::path& path) {
  if (!path.parent_path().empty()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw rtsim::ConfigError("cannot open for writing: " + path.string());
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

const char* kPalette[] = {"#4e79a7", "#f28e2b", "#76b7b2", "#e15759",
                          "#59a14f", "#edc948", "#b07aa1"};

}  // namespace

void write_grouped_bars(const std::filesystem::path& path, const std::string& title,
                        const std::vector<std::string>& series,
                        const std::vector<BarGroup>& groups) {
  const double bar_w = 22.0, gap = 18.0, chart_h = 260.0, left = 60.0, top = 50.0;
  const double group_w = bar_w * series.size() + gap;
  const double width = left + groups.size() * group_w + 40.0;
  const double height = top + chart_h + 70.0;

  double vmax = 0.0;
  for (const auto& g : groups)
    for (double v : g.values) vmax = std::max(vmax, v);
  if (vmax <= 0.0) vmax = 1.0;

  auto out = open(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\">\n";
  out << "<text x=\"" << left << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">"
      << title << "</text>\n";
  // y axis with four gridlines
  for (int i = 0; i <= 4; ++i) {
    const double frac = i / 4.0;
    const double y = top + chart_h * (1.0 - frac);
    out << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << width - 20 << "\" y2=\""
        << y << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << left - 8 << "\" y=\"" << y + 4
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
        << fmt(vmax * frac) << "</text>\n";
  }
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const BarGroup& g = groups[gi];
    const double gx = left + gi * group_w;
    for (std::size_t si = 0; si < g.values.size(); ++si) {
      const double h = chart_h * g.values[si] / vmax;
      out << "<rect x=\"" << gx + si * bar_w << "\" y=\"" << top + chart_h - h
          << "\" width=\"" << bar_w - 2 << "\" height=\"" << h << "\" fill=\""
          << kPalette[si % 7] << "\"/>\n";
    }
    out << "<text x=\"" << gx + bar_w * series.size() / 2 << "\" y=\"" << top + chart_h + 16
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">"
        << g.label << "</text>\n";
  }
  // legend
  for (std::size_t si = 0; si < series.size(); ++si) {
    const double lx = left + si * 120.0;
    out << "<rect x=\"" << lx << "\" y=\"" << top + chart_h + 34 << "\" width=\"12\" height=\""
        << 12 << "\" fill=\"" << kPalette[si % 7] << "\"/>\n";
    out << "<text x=\"" << lx + 16 << "\" y=\"" << top + chart_h + 44
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << series[si] << "</text>\n";
  }
  out << "</svg>\n";
}

void write_heatmap(const std::filesystem::path& path, const std::string& title,
                   const std::vector<std::string>& row_labels,
                   const std::vector<std::vector<double>>& rows) {
  const double cell = 26.0, left = 70.0, top = 50.0;
  std::size_t ncols = 0;
  for (const auto& r : rows) ncols = std::max(ncols, r.size());
  const double width = left + ncols * cell + 30.0;
  const double height = top + rows.size() * cell + 50.0;

  auto out = open(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\">\n";
  out << "<text x=\"" << left << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">"
      << title << "</text>\n";
  for (std::size_t ri = 0; ri < rows.size(); ++ri) {
    out << "<text x=\"" << left - 8 << "\" y=\"" << top + ri * cell + cell * 0.65
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
        << row_labels[ri] << "</text>\n";
    for (std::size_t ci = 0; ci < rows[ri].size(); ++ci) {
      const double v = std::clamp(rows[ri][ci], 0.0, 1.0);
      const int red = 255;
      const int other = static_cast<int>(255.0 * (1.0 - v));
      out << "<rect x=\"" << left + ci * cell << "\" y=\"" << top + ri * cell << "\" width=\""
          << cell - 1 << "\" height=\"" << cell - 1 << "\" fill=\"rgb(" << red << ","
          << other << "," << other << ")\"/>\n";
      out << "<text x=\"" << left + ci * cell + cell / 2 << "\" y=\""
          << top + ri * cell + cell * 0.65
          << "\" font-family=\"sans-serif\" font-size=\"9\" text-anchor=\"middle\">"
          << static_cast<int>(std::lround(v * 100)) << "</text>\n";
    }
  }
  for (std::size_t ci = 0; ci < ncols; ++ci)
    out << "<text x=\"" << left + ci * cell + cell / 2 << "\" y=\""
        << top + rows.size() * cell + 16
        << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">" << ci + 1
        << "</text>\n";
  out << "</svg>\n";
}

}  // namespace rtsim::svg
