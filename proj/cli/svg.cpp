#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace projlab::cli {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string px(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
    return out;
}

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

void write_loglog_svg(std::ostream& os, const std::string& title, const std::string& xlabel,
                      const std::string& ylabel, const std::vector<Series>& series) {
    const double w = 640, h = 480, ml = 70, mr = 20, mt = 40, mb = 60;
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (auto& s : series)
        for (auto& [x, y] : s.points) {
            if (!(x > 0) || !(y > 0)) continue;
            x0 = std::min(x0, std::log10(x));
            x1 = std::max(x1, std::log10(x));
            y0 = std::min(y0, std::log10(y));
            y1 = std::max(y1, std::log10(y));
        }
    if (!(x0 <= x1)) x0 = 0, x1 = 1;
    if (!(y0 <= y1)) y0 = 0, y1 = 1;
    if (x1 - x0 < 1e-9) x1 = x0 + 1;
    if (y1 - y0 < 1e-9) y1 = y0 + 1;
    auto sx = [&](double x) { return ml + (std::log10(x) - x0) / (x1 - x0) * (w - ml - mr); };
    auto sy = [&](double y) { return h - mb - (std::log10(y) - y0) / (y1 - y0) * (h - mt - mb); };

    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
       << ' ' << h << "\">\n";
    os << "<!-- data: series,x,y -->\n";
    for (auto& s : series)
        for (auto& [x, y] : s.points) os << "<!-- " << escape(s.label) << ',' << num(x) << ',' << num(y) << " -->\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << escape(title)
       << "</text>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\"" << h - mb
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb
       << "\" stroke=\"black\"/>\n";
    for (int k = static_cast<int>(std::ceil(x0)); k <= static_cast<int>(std::floor(x1)); ++k) {
        double x = sx(std::pow(10.0, k));
        os << "<text x=\"" << px(x) << "\" y=\"" << h - mb + 18 << "\" text-anchor=\"middle\" font-size=\"11\">1e"
           << k << "</text>\n";
    }
    for (int k = static_cast<int>(std::ceil(y0)); k <= static_cast<int>(std::floor(y1)); ++k) {
        double y = sy(std::pow(10.0, k));
        os << "<text x=\"" << ml - 6 << "\" y=\"" << px(y + 4) << "\" text-anchor=\"end\" font-size=\"11\">1e" << k
           << "</text>\n";
    }
    os << "<text x=\"" << w / 2 << "\" y=\"" << h - 15 << "\" text-anchor=\"middle\" font-size=\"13\">"
       << escape(xlabel) << "</text>\n";
    os << "<text x=\"16\" y=\"" << h / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
       << h / 2 << ")\">" << escape(ylabel) << "</text>\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kColors[i % (sizeof kColors / sizeof kColors[0])];
        std::string pts;
        for (auto& [x, y] : series[i].points) {
            if (!(x > 0) || !(y > 0)) continue;
            if (!pts.empty()) pts += ' ';
            pts += px(sx(x)) + "," + px(sy(y));
        }
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"" << pts << "\"/>\n";
        os << "<text x=\"" << w - mr - 4 << "\" y=\"" << mt + 14 * (i + 1) << "\" text-anchor=\"end\" font-size=\"11\" fill=\""
           << color << "\">" << escape(series[i].label) << "</text>\n";
    }
    os << "</svg>\n";
}

}  // namespace projlab::cli
