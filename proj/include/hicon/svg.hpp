#ifndef HICON_SVG_HPP
#define HICON_SVG_HPP

#include <string>
#include <vector>

namespace hicon {

// Minimal log-log polyline plot (axes, decade ticks, markers); no plotting
// dependency, deterministic output.
std::string loglog_svg(const std::vector<double>& xs, const std::vector<double>& ys,
                       const std::string& xlabel, const std::string& ylabel,
                       const std::string& title);

} // namespace hicon

#endif
