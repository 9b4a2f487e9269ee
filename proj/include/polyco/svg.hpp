#pragma once

#include <string>
#include <vector>

namespace polyco {

// Row-major field values (rows × cols) drawn as coloured cells, row 0 at the
// bottom. Large grids are subsampled to at most `max_cells` per side.
std::string heat_map_svg(const std::vector<double>& values, int rows, int cols, const std::string& title,
                         const std::string& row_label, const std::string& col_label, int max_cells = 120);

struct Series {
  std::string name;
  std::vector<double> y;
};

// Polylines over a shared abscissa.
std::string line_plot_svg(const std::vector<double>& x, const std::vector<Series>& series, const std::string& title,
                          const std::string& x_label);

}  // namespace polyco
