#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace projlab::cli {

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;  // (x, y), both positive
};

// log-log line plot; the raw data is repeated in comments so a plot can be re-read
void write_loglog_svg(std::ostream& os, const std::string& title, const std::string& xlabel,
                      const std::string& ylabel, const std::vector<Series>& series);

}  // namespace projlab::cli
