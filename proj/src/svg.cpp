#include "plssvd/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace plssvd::svg {
namespace {

struct Frame {
    double x0, x1, y0, y1;  // data limits
    double px0, px1, py0, py1;  // pixel box (py0 is top)

    double sx(double x) const {
        return px0 + (x - x0) / (x1 - x0) * (px1 - px0);
    }
    double sy(double y) const {
        return py1 - (y - y0) / (y1 - y0) * (py1 - py0);
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

void open_svg(std::ostringstream& os, int width, int height) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
       << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
       << height << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void axes(std::ostringstream& os, const Frame& f, const std::string& title,
          const std::string& x_label, const std::string& y_label) {
    os << "<rect x=\"" << fmt(f.px0) << "\" y=\"" << fmt(f.py0) << "\" width=\""
       << fmt(f.px1 - f.px0) << "\" height=\"" << fmt(f.py1 - f.py0)
       << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n";
    // tick labels at the four data corners plus midpoints
    for (int i = 0; i <= 4; ++i) {
        double x = f.x0 + (f.x1 - f.x0) * i / 4.0;
        double px = f.sx(x);
        os << "<line x1=\"" << fmt(px) << "\" y1=\"" << fmt(f.py1) << "\" x2=\""
           << fmt(px) << "\" y2=\"" << fmt(f.py1 + 5) << "\" stroke=\"#333\"/>\n"
           << "<text x=\"" << fmt(px) << "\" y=\"" << fmt(f.py1 + 18)
           << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt(x)
           << "</text>\n";
        double y = f.y0 + (f.y1 - f.y0) * i / 4.0;
        double py = f.sy(y);
        os << "<line x1=\"" << fmt(f.px0 - 5) << "\" y1=\"" << fmt(py)
           << "\" x2=\"" << fmt(f.px0) << "\" y2=\"" << fmt(py)
           << "\" stroke=\"#333\"/>\n"
           << "<text x=\"" << fmt(f.px0 - 8) << "\" y=\"" << fmt(py + 4)
           << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(y)
           << "</text>\n";
    }
    os << "<text x=\"" << fmt((f.px0 + f.px1) / 2) << "\" y=\"20\""
       << " font-size=\"14\" text-anchor=\"middle\">" << title << "</text>\n"
       << "<text x=\"" << fmt((f.px0 + f.px1) / 2) << "\" y=\""
       << fmt(f.py1 + 36) << "\" font-size=\"12\" text-anchor=\"middle\">"
       << x_label << "</text>\n"
       << "<text x=\"16\" y=\"" << fmt((f.py0 + f.py1) / 2)
       << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
       << fmt((f.py0 + f.py1) / 2) << ")\">" << y_label << "</text>\n";
}

void polyline(std::ostringstream& os, const Frame& f, const Series& s) {
    os << "<polyline fill=\"none\" stroke=\"" << s.color
       << "\" stroke-width=\"" << s.width << "\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        double y = std::clamp(s.y[i], f.y0, f.y1);
        os << fmt(f.sx(s.x[i])) << "," << fmt(f.sy(y)) << " ";
    }
    os << "\"/>\n";
}

}  // namespace

std::string render_histogram(const HistogramPlot& plot, int width, int height) {
    if (plot.bin_edges.size() < 2 ||
        plot.counts.size() + 1 != plot.bin_edges.size()) {
        throw std::invalid_argument("render_histogram: inconsistent histogram");
    }
    double x_lo = plot.bin_edges.front();
    double x_hi = plot.bin_edges.back();
    double y_hi = 0.0;
    for (double c : plot.counts) y_hi = std::max(y_hi, c);
    for (const auto& s : plot.curves)
        for (double y : s.y) y_hi = std::max(y_hi, y);
    for (const auto& m : plot.markers)
        for (double x : m.x) {
            x_lo = std::min(x_lo, x);
            x_hi = std::max(x_hi, x * 1.02);
        }
    if (y_hi <= 0.0) y_hi = 1.0;
    Frame f{x_lo, x_hi, 0.0, y_hi * 1.08,
            70.0, width - 20.0, 34.0, height - 50.0};

    std::ostringstream os;
    open_svg(os, width, height);
    for (std::size_t i = 0; i < plot.counts.size(); ++i) {
        double a = f.sx(plot.bin_edges[i]);
        double b = f.sx(plot.bin_edges[i + 1]);
        double top = f.sy(plot.counts[i]);
        os << "<rect x=\"" << fmt(a) << "\" y=\"" << fmt(top) << "\" width=\""
           << fmt(std::max(0.5, b - a)) << "\" height=\""
           << fmt(std::max(0.0, f.py1 - top))
           << "\" fill=\"#9ec5e8\" stroke=\"#5b8db8\" stroke-width=\"0.5\"/>\n";
    }
    for (const auto& s : plot.curves) polyline(os, f, s);
    for (const auto& m : plot.markers) {
        for (double x : m.x) {
            os << "<line x1=\"" << fmt(f.sx(x)) << "\" y1=\"" << fmt(f.py0)
               << "\" x2=\"" << fmt(f.sx(x)) << "\" y2=\"" << fmt(f.py1)
               << "\" stroke=\"" << m.color
               << "\" stroke-width=\"1.2\" stroke-dasharray=\"6 4\"/>\n";
        }
    }
    axes(os, f, plot.title, plot.x_label, plot.y_label);
    os << "</svg>\n";
    return os.str();
}

std::string render_stems(const StemPlot& plot, int width, int height) {
    if (plot.values.empty())
        throw std::invalid_argument("render_stems: empty vector");
    int n = static_cast<int>(plot.values.size());
    double y_lo = 0.0, y_hi = 0.0;
    for (double v : plot.values) {
        y_lo = std::min(y_lo, v);
        y_hi = std::max(y_hi, v);
    }
    for (double v : plot.reference) {
        y_lo = std::min(y_lo, v);
        y_hi = std::max(y_hi, v);
    }
    if (y_hi - y_lo < 1e-12) y_hi = y_lo + 1.0;
    double pad = 0.08 * (y_hi - y_lo);
    Frame f{-0.5, n - 0.5, y_lo - pad, y_hi + pad,
            70.0, width - 20.0, 34.0, height - 50.0};

    std::ostringstream os;
    open_svg(os, width, height);
    double base = f.sy(0.0);
    os << "<line x1=\"" << fmt(f.px0) << "\" y1=\"" << fmt(base) << "\" x2=\""
       << fmt(f.px1) << "\" y2=\"" << fmt(base)
       << "\" stroke=\"#999\" stroke-width=\"0.8\"/>\n";
    if (!plot.reference.empty()) {
        Series ref;
        for (std::size_t i = 0; i < plot.reference.size(); ++i) {
            ref.x.push_back(static_cast<double>(i));
            ref.y.push_back(plot.reference[i]);
        }
        ref.color = "#c03030";
        ref.width = 1.0;
        polyline(os, f, ref);
    }
    for (int i = 0; i < n; ++i) {
        double px = f.sx(i);
        double py = f.sy(plot.values[i]);
        os << "<line x1=\"" << fmt(px) << "\" y1=\"" << fmt(base) << "\" x2=\""
           << fmt(px) << "\" y2=\"" << fmt(py)
           << "\" stroke=\"#1f5fbf\" stroke-width=\"1\"/>\n"
           << "<circle cx=\"" << fmt(px) << "\" cy=\"" << fmt(py)
           << "\" r=\"1.8\" fill=\"#1f5fbf\"/>\n";
    }
    axes(os, f, plot.title, plot.x_label, plot.y_label);
    os << "</svg>\n";
    return os.str();
}

std::string render_heatmap(const HeatmapPlot& plot, int width, int height) {
    std::size_t nx = plot.x_grid.size(), ny = plot.y_grid.size();
    if (nx < 2 || ny < 2 || plot.values.size() != nx * ny)
        throw std::invalid_argument("render_heatmap: inconsistent grid");
    Frame f{plot.x_grid.front(), plot.x_grid.back(),
            plot.y_grid.front(), plot.y_grid.back(),
            70.0, width - 20.0, 34.0, height - 50.0};

    std::ostringstream os;
    open_svg(os, width, height);
    auto cell_edge = [](const std::vector<double>& g, std::size_t i,
                        bool upper) {
        if (!upper)
            return i == 0 ? g[0] - 0.5 * (g[1] - g[0])
                          : 0.5 * (g[i - 1] + g[i]);
        return i + 1 == g.size() ? g[i] + 0.5 * (g[i] - g[i - 1])
                                 : 0.5 * (g[i] + g[i + 1]);
    };
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            double v = plot.values[j * nx + i];
            double t = std::clamp((v - plot.v_min) /
                                      std::max(1e-300, plot.v_max - plot.v_min),
                                  0.0, 1.0);
            // diverging blue -> white -> red
            int r, g, b;
            if (t < 0.5) {
                double u = t / 0.5;
                r = static_cast<int>(40 + (255 - 40) * u);
                g = static_cast<int>(80 + (255 - 80) * u);
                b = 255;
            } else {
                double u = (t - 0.5) / 0.5;
                r = 255;
                g = static_cast<int>(255 - (255 - 60) * u);
                b = static_cast<int>(255 - (255 - 40) * u);
            }
            double xa = f.sx(std::max(f.x0, cell_edge(plot.x_grid, i, false)));
            double xb = f.sx(std::min(f.x1, cell_edge(plot.x_grid, i, true)));
            double yb = f.sy(std::max(f.y0, cell_edge(plot.y_grid, j, false)));
            double ya = f.sy(std::min(f.y1, cell_edge(plot.y_grid, j, true)));
            os << "<rect x=\"" << fmt(xa) << "\" y=\"" << fmt(ya)
               << "\" width=\"" << fmt(xb - xa) << "\" height=\""
               << fmt(yb - ya) << "\" fill=\"rgb(" << r << "," << g << "," << b
               << ")\"/>\n";
        }
    }
    for (const auto& s : plot.contours) {
        Series clipped = s;
        for (auto& v : clipped.x) v = std::clamp(v, f.x0, f.x1);
        polyline(os, f, clipped);
    }
    axes(os, f, plot.title, plot.x_label, plot.y_label);
    os << "</svg>\n";
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << content;
}

}  // namespace plssvd::svg
