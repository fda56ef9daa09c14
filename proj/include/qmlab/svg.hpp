#pragma once

#include <string>
#include <utility>
#include <vector>

namespace qmlab {

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<PlotSeries> series;
  std::vector<std::string> annotations;  // free-form lines under the title
};

// Self-contained SVG 1.1 document.  Each series is also embedded as a
// machine-readable comment (<!--data:name x,y;x,y;...-->) so the plotted
// points can be recovered exactly from the file.
std::string render_svg(const PlotSpec& spec);

// Recover the embedded data points, in document order.
std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>>
parse_svg_data(const std::string& svg);

}  // namespace qmlab
