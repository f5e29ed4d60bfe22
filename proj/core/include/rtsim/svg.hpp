#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace rtsim::svg {

struct BarGroup {
  std::string label;
  std::vector<double> values;  // one per series
};

// Grouped bar chart, one group per label, one bar per series.
void write_grouped_bars(const std::filesystem::path& path, const std::string& title,
                        const std::vector<std::string>& series,
                        const std::vector<BarGroup>& groups);

// Heatmap of values in [0,1]; one row per label, columns 1..N.
void write_heatmap(const std::filesystem::path& path, const std::string& title,
                   const std::vector<std::string>& row_labels,
                   const std::vector<std::vector<double>>& rows);

}  // namespace rtsim::svg
