#include "hicon/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace hicon {

namespace {
std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}
} // namespace

std::string loglog_svg(const std::vector<double>& xs, const std::vector<double>& ys,
                       const std::string& xlabel, const std::string& ylabel,
                       const std::string& title) {
    const int w = 560, h = 420, ml = 70, mr = 20, mt = 40, mb = 50;
    double lx0 = 0.0, lx1 = 1.0, ly0 = 0.0, ly1 = 1.0;
    bool first = true;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] <= 0.0 || ys[i] <= 0.0) continue;
        const double lx = std::log10(xs[i]), ly = std::log10(ys[i]);
        if (first) {
            lx0 = lx1 = lx;
            ly0 = ly1 = ly;
            first = false;
        } else {
            lx0 = std::min(lx0, lx);
            lx1 = std::max(lx1, lx);
            ly0 = std::min(ly0, ly);
            ly1 = std::max(ly1, ly);
        }
    }
    lx0 = std::floor(lx0 - 0.05);
    lx1 = std::ceil(lx1 + 0.05);
    ly0 = std::floor(ly0 - 0.05);
    ly1 = std::ceil(ly1 + 0.05);
    auto px = [&](double lx) { return ml + (lx - lx0) / (lx1 - lx0) * (w - ml - mr); };
    auto py = [&](double ly) { return h - mb - (ly - ly0) / (ly1 - ly0) * (h - mt - mb); };

    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w) +
                    "\" height=\"" + std::to_string(h) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<text x=\"" + std::to_string(w / 2) + "\" y=\"24\" text-anchor=\"middle\" "
         "font-size=\"14\">" + title + "</text>\n";

    // decade grid and tick labels
    for (int d = static_cast<int>(lx0); d <= static_cast<int>(lx1); ++d) {
        const double x = px(d);
        s += "<line x1=\"" + num(x) + "\" y1=\"" + num(py(ly0)) + "\" x2=\"" + num(x) +
             "\" y2=\"" + num(py(ly1)) + "\" stroke=\"#ddd\"/>\n";
        s += "<text x=\"" + num(x) + "\" y=\"" + num(h - mb + 18.0) +
             "\" text-anchor=\"middle\" font-size=\"11\">1e" + std::to_string(d) + "</text>\n";
    }
    for (int d = static_cast<int>(ly0); d <= static_cast<int>(ly1); ++d) {
        const double y = py(d);
        s += "<line x1=\"" + num(px(lx0)) + "\" y1=\"" + num(y) + "\" x2=\"" + num(px(lx1)) +
             "\" y2=\"" + num(y) + "\" stroke=\"#ddd\"/>\n";
        s += "<text x=\"" + num(ml - 8.0) + "\" y=\"" + num(y + 4.0) +
             "\" text-anchor=\"end\" font-size=\"11\">1e" + std::to_string(d) + "</text>\n";
    }
    // axes
    s += "<line x1=\"" + num(px(lx0)) + "\" y1=\"" + num(py(ly0)) + "\" x2=\"" + num(px(lx1)) +
         "\" y2=\"" + num(py(ly0)) + "\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + num(px(lx0)) + "\" y1=\"" + num(py(ly0)) + "\" x2=\"" + num(px(lx0)) +
         "\" y2=\"" + num(py(ly1)) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + std::to_string(w / 2) + "\" y=\"" + std::to_string(h - 12) +
         "\" text-anchor=\"middle\" font-size=\"12\">" + xlabel + "</text>\n";
    s += "<text x=\"16\" y=\"" + std::to_string(h / 2) +
         "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 " +
         std::to_string(h / 2) + ")\">" + ylabel + "</text>\n";

    // polyline and markers
    std::string pts;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] <= 0.0 || ys[i] <= 0.0) continue;
        pts += num(px(std::log10(xs[i]))) + "," + num(py(std::log10(ys[i]))) + " ";
    }
    s += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] <= 0.0 || ys[i] <= 0.0) continue;
        s += "<circle cx=\"" + num(px(std::log10(xs[i]))) + "\" cy=\"" +
             num(py(std::log10(ys[i]))) + "\" r=\"3\" fill=\"#1f77b4\"/>\n";
    }
    s += "</svg>\n";
    return s;
}

} // namespace hicon
