#ifndef AIRHEAT_COMPARE_HPP
#define AIRHEAT_COMPARE_HPP

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include "airheat/cycles.hpp"

namespace airheat {

/// Grid of constant-load to Otto efficiency ratios over (x, r).
/// Infeasible cells (r >= max constant-load expansion ratio) hold NaN.
struct RatioGrid {
    std::vector<double> x_axis; // temperature ratios, ascending
    std::vector<double> r_axis; // expansion ratios, ascending
    std::vector<double> cells;  // row-major: cells[i * nr + j] for (x_i, r_j)
    double gamma;
    double c_v;

    double cell(std::size_t i, std::size_t j) const {
        return cells[i * r_axis.size() + j];
    }
    bool feasible(std::size_t i, std::size_t j) const {
        return !std::isnan(cell(i, j));
    }
};

/// Ratio at a single grid point, NaN when r is at or beyond the
/// constant-load bound r < x.
inline double efficiency_ratio_cell(double x, double r, double gamma, double c_v) {
    if (r >= max_expansion_ratio_cl(x))
        return std::numeric_limits<double>::quiet_NaN();
    return efficiency_cl_ideal(x, r, c_v) / efficiency_otto_ideal(r, gamma);
}

inline std::vector<double> uniform_axis(double lo, double hi, std::size_t count) {
    std::vector<double> axis(count);
    for (std::size_t k = 0; k < count; ++k)
        axis[k] = lo + (hi - lo) * static_cast<double>(k) /
                           static_cast<double>(count - 1);
    return axis;
}

/// Sweep the efficiency ratio over uniform inclusive grids. Rows may be
/// evaluated on several threads; cells are stored row-major so the result
/// is identical for any thread count.
inline RatioGrid sweep_ratio_grid(double x_min, double x_max, double r_min,
                                  double r_max, std::size_t nx, std::size_t nr,
                                  double gamma, double c_v,
                                  unsigned threads = 1) {
    if (!(x_min > 1.0) || !(x_max > x_min))
        throw DomainError("sweep_ratio_grid: requires 1 < x_min < x_max");
    if (!(r_min > 1.0) || !(r_max > r_min))
        throw DomainError("sweep_ratio_grid: requires 1 < r_min < r_max");
    if (nx < 2 || nr < 2)
        throw DomainError("sweep_ratio_grid: grid needs at least 2 points per axis");
    require_gas_consistency(gamma, c_v);

    RatioGrid g;
    g.gamma = gamma;
    g.c_v = c_v;
    g.x_axis = uniform_axis(x_min, x_max, nx);
    g.r_axis = uniform_axis(r_min, r_max, nr);
    g.cells.resize(nx * nr);

    auto eval_rows = [&](std::size_t i_begin, std::size_t i_end) {
        for (std::size_t i = i_begin; i < i_end; ++i)
            for (std::size_t j = 0; j < nr; ++j)
                g.cells[i * nr + j] =
                    efficiency_ratio_cell(g.x_axis[i], g.r_axis[j], gamma, c_v);
    };

    if (threads <= 1) {
        eval_rows(0, nx);
    } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (nx + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            std::size_t lo = std::min<std::size_t>(t * chunk, nx);
            std::size_t hi = std::min<std::size_t>(lo + chunk, nx);
            if (lo < hi) pool.emplace_back(eval_rows, lo, hi);
        }
        for (std::thread& th : pool) th.join();
    }
    return g;
}

/// 9 significant digits, locale-independent.
inline std::string format_sig9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

/// CSV layout: header row of r values, first column of x values,
/// `NA` for infeasible cells.
inline void write_grid_csv(const RatioGrid& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("write_grid_csv: cannot open " + path);
    out << "x\\r";
    for (double r : g.r_axis) out << ',' << format_sig9(r);
    out << '\n';
    for (std::size_t i = 0; i < g.x_axis.size(); ++i) {
        out << format_sig9(g.x_axis[i]);
        for (std::size_t j = 0; j < g.r_axis.size(); ++j) {
            double v = g.cell(i, j);
            out << ',' << (std::isnan(v) ? std::string("NA") : format_sig9(v));
        }
        out << '\n';
    }
    if (!out)
        throw IoError("write_grid_csv: write failed for " + path);
}

struct ColorScale {
    double min = 0.0;
    double max = 1.0;
    unsigned char low[3] = {33, 30, 110};    // deep blue
    unsigned char high[3] = {250, 235, 60};  // yellow
    const char* infeasible_fill = "#dddddd";
};

inline std::string interpolate_color(const ColorScale& cs, double v) {
    double t = (v - cs.min) / (cs.max - cs.min);
    t = std::clamp(t, 0.0, 1.0);
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                  static_cast<unsigned>(std::lround(cs.low[0] + t * (cs.high[0] - cs.low[0]))),
                  static_cast<unsigned>(std::lround(cs.low[1] + t * (cs.high[1] - cs.low[1]))),
                  static_cast<unsigned>(std::lround(cs.low[2] + t * (cs.high[2] - cs.low[2]))));
    return buf;
}

/// One rectangle per cell, axes labeled with r (horizontal) and x (vertical).
/// x increases upward, matching the usual heat-map orientation.
inline void render_heatmap_svg(const RatioGrid& g, const std::string& path,
                               const ColorScale& cs = {}) {
    std::size_t feasible = 0;
    for (double v : g.cells)
        if (!std::isnan(v)) ++feasible;
    if (feasible == 0)
        throw ConstraintError("render_heatmap_svg: grid has no feasible cells");

    const double margin_left = 70.0, margin_bottom = 50.0, margin_top = 20.0,
                 margin_right = 20.0;
    const double plot_w = 600.0, plot_h = 600.0;
    const std::size_t nx = g.x_axis.size(), nr = g.r_axis.size();
    const double cw = plot_w / static_cast<double>(nr);
    const double ch = plot_h / static_cast<double>(nx);
    const double width = margin_left + plot_w + margin_right;
    const double height = margin_top + plot_h + margin_bottom;

    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("render_heatmap_svg: cannot open " + path);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
        << format_sig9(width) << "\" height=\"" << format_sig9(height) << "\">\n";
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < nr; ++j) {
            double v = g.cell(i, j);
            std::string fill =
                std::isnan(v) ? std::string(cs.infeasible_fill) : interpolate_color(cs, v);
            double px = margin_left + static_cast<double>(j) * cw;
            double py = margin_top + plot_h - static_cast<double>(i + 1) * ch;
            out << "<rect class=\"cell\" x=\"" << format_sig9(px) << "\" y=\""
                << format_sig9(py) << "\" width=\"" << format_sig9(cw)
                << "\" height=\"" << format_sig9(ch) << "\" fill=\"" << fill
                << "\"/>\n";
        }
    }
    // axes
    out << "<line x1=\"" << format_sig9(margin_left) << "\" y1=\""
        << format_sig9(margin_top + plot_h) << "\" x2=\""
        << format_sig9(margin_left + plot_w) << "\" y2=\""
        << format_sig9(margin_top + plot_h) << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << format_sig9(margin_left) << "\" y1=\""
        << format_sig9(margin_top) << "\" x2=\"" << format_sig9(margin_left)
        << "\" y2=\"" << format_sig9(margin_top + plot_h)
        << "\" stroke=\"black\"/>\n";
    auto tick_label = [&](double px, double py, double value, const char* anchor) {
        out << "<text x=\"" << format_sig9(px) << "\" y=\"" << format_sig9(py)
            << "\" font-size=\"12\" font-family=\"sans-serif\" text-anchor=\""
            << anchor << "\">" << format_sig9(value) << "</text>\n";
    };
    tick_label(margin_left, margin_top + plot_h + 16.0, g.r_axis.front(), "middle");
    tick_label(margin_left + plot_w, margin_top + plot_h + 16.0, g.r_axis.back(), "middle");
    tick_label(margin_left - 6.0, margin_top + plot_h, g.x_axis.front(), "end");
    tick_label(margin_left - 6.0, margin_top + 12.0, g.x_axis.back(), "end");
    out << "<text x=\"" << format_sig9(margin_left + plot_w / 2.0) << "\" y=\""
        << format_sig9(height - 12.0)
        << "\" font-size=\"14\" font-family=\"sans-serif\" text-anchor=\"middle\">"
           "expansion ratio r</text>\n"
        << "<text x=\"16\" y=\"" << format_sig9(margin_top + plot_h / 2.0)
        << "\" font-size=\"14\" font-family=\"sans-serif\" text-anchor=\"middle\" "
           "transform=\"rotate(-90 16 "
        << format_sig9(margin_top + plot_h / 2.0)
        << ")\">temperature ratio x</text>\n"
        << "</svg>\n";
    if (!out)
        throw IoError("render_heatmap_svg: write failed for " + path);
}

} // namespace airheat

#endif
