#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "vesim/csv.hpp"
#include "vesim/errors.hpp"

namespace vesim {

// Minimal deterministic line-chart writer. Emits a fixed-size SVG with axis
// box, tick labels, optional log-scaled x axis, an optional horizontal
// reference line, and one polyline per series. Output bytes depend only on
// the data, so repeated runs produce identical files.
class SvgChart {
  public:
    SvgChart(std::string title, std::string x_label, std::string y_label, bool log_x = false)
        : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)),
          log_x_(log_x) {}

    void add_series(std::string name, std::vector<double> x, std::vector<double> y) {
        if (x.size() != y.size() || x.empty())
            throw ConfigError("chart series needs matching non-empty x/y");
        series_.push_back({std::move(name), std::move(x), std::move(y)});
    }

    void add_reference_line(double y) { ref_lines_.push_back(y); }

    void write(const std::string& path) const;

  private:
    struct Series {
        std::string name;
        std::vector<double> x, y;
    };

    static constexpr double kW = 720.0, kH = 480.0;
    static constexpr double kL = 80.0, kR = 24.0, kT = 40.0, kB = 56.0;

    double tx(double x, double x0, double x1) const {
        const double u = log_x_ ? (std::log(x) - std::log(x0)) / (std::log(x1) - std::log(x0))
                                : (x - x0) / (x1 - x0);
        return kL + u * (kW - kL - kR);
    }
    static double ty(double y, double y0, double y1) {
        return kH - kB - (y - y0) / (y1 - y0) * (kH - kT - kB);
    }

    std::string title_, x_label_, y_label_;
    bool log_x_;
    std::vector<Series> series_;
    std::vector<double> ref_lines_;
};

inline void SvgChart::write(const std::string& path) const {
    if (series_.empty()) throw ConfigError("chart has no series");
    double x0 = series_[0].x[0], x1 = x0, y0 = series_[0].y[0], y1 = y0;
    for (const auto& s : series_) {
        for (double v : s.x) { x0 = std::min(x0, v); x1 = std::max(x1, v); }
        for (double v : s.y) { y0 = std::min(y0, v); y1 = std::max(y1, v); }
    }
    for (double r : ref_lines_) { y0 = std::min(y0, r); y1 = std::max(y1, r); }
    if (log_x_ && !(x0 > 0.0)) throw ConfigError("log-scale x axis needs positive x values");
    if (x1 == x0) { x1 = x0 + 1.0; }
    const double pad = (y1 == y0) ? std::max(1e-12, std::fabs(y0) * 1e-3) : 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;

    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file: " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
        << "\" viewBox=\"0 0 " << kW << ' ' << kH << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\""
        << " font-size=\"16\">" << title_ << "</text>\n";

    // Axis box and ticks (5 per axis; log axes tick at round decades when possible).
    out << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\"" << kW - kL - kR << "\" height=\""
        << kH - kT - kB << "\" fill=\"none\" stroke=\"black\"/>\n";
    const int kTicks = 5;
    for (int i = 0; i <= kTicks; ++i) {
        const double u = static_cast<double>(i) / kTicks;
        const double xv = log_x_ ? x0 * std::pow(x1 / x0, u) : x0 + u * (x1 - x0);
        const double px = tx(xv, x0, x1);
        out << "<line x1=\"" << px << "\" y1=\"" << kT << "\" x2=\"" << px << "\" y2=\""
            << kH - kB << "\" stroke=\"#dddddd\"/>\n"
            << "<text x=\"" << px << "\" y=\"" << kH - kB + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << format_double(std::round(xv * 1000.0) / 1000.0) << "</text>\n";
        const double yv = y0 + u * (y1 - y0);
        const double py = ty(yv, y0, y1);
        out << "<line x1=\"" << kL << "\" y1=\"" << py << "\" x2=\"" << kW - kR << "\" y2=\"" << py
            << "\" stroke=\"#dddddd\"/>\n"
            << "<text x=\"" << kL - 6 << "\" y=\"" << py + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << format_double(std::round(yv * 10000.0) / 10000.0) << "</text>\n";
    }
    out << "<text x=\"" << (kL + kW - kR) / 2 << "\" y=\"" << kH - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << x_label_
        << "</text>\n"
        << "<text x=\"18\" y=\"" << (kT + kH - kB) / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\""
        << " transform=\"rotate(-90 18 " << (kT + kH - kB) / 2 << ")\">" << y_label_ << "</text>\n";

    for (double r : ref_lines_) {
        const double py = ty(r, y0, y1);
        out << "<line x1=\"" << kL << "\" y1=\"" << py << "\" x2=\"" << kW - kR << "\" y2=\"" << py
            << "\" stroke=\"#888888\" stroke-dasharray=\"6 4\"/>\n";
    }

    static const char* kColors[] = {"#1f6fb2", "#c23b22", "#2a9d5c", "#8a4fbf"};
    for (std::size_t si = 0; si < series_.size(); ++si) {
        const auto& s = series_[si];
        out << "<polyline fill=\"none\" stroke=\"" << kColors[si % 4]
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (i) out << ' ';
            out << format_double(tx(s.x[i], x0, x1)) << ',' << format_double(ty(s.y[i], y0, y1));
        }
        out << "\"/>\n";
        out << "<text x=\"" << kL + 10 << "\" y=\"" << kT + 16 + 16 * static_cast<double>(si)
            << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << kColors[si % 4] << "\">"
            << s.name << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace vesim
