#pragma once

#include <string>
#include <vector>

// Minimal dependency-free SVG plotting: spectrum histograms with theory
// overlays, stem plots for vector components, and heatmaps with threshold
// contours. Output is deterministic (no timestamps).

namespace plssvd::svg {

struct Series {
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f5fbf";
    double width = 1.5;
    std::string label;
};

struct Markers {
    std::vector<double> x;  // vertical dashed lines (spike locations)
    std::string color = "#c03030";
    std::string label;
};

struct HistogramPlot {
    std::vector<double> bin_edges;
    std::vector<double> counts;
    std::vector<Series> curves;    // theory density overlays
    std::vector<Markers> markers;  // predicted / empirical spikes
    std::string title;
    std::string x_label = "x";
    std::string y_label = "density";
};

std::string render_histogram(const HistogramPlot& plot, int width = 860,
                             int height = 520);

struct StemPlot {
    std::vector<double> values;     // empirical mean-direction components
    std::vector<double> reference;  // optional overlay, same length or empty
    std::string title;
    std::string x_label = "coordinate";
    std::string y_label = "component";
};

std::string render_stems(const StemPlot& plot, int width = 860,
                         int height = 520);

struct HeatmapPlot {
    std::vector<double> x_grid;   // column coordinates
    std::vector<double> y_grid;   // row coordinates
    std::vector<double> values;   // row-major, y outer, x inner
    std::vector<Series> contours; // threshold curves drawn on top
    std::string title;
    std::string x_label;
    std::string y_label;
    double v_min = 0.0;
    double v_max = 1.0;
};

std::string render_heatmap(const HeatmapPlot& plot, int width = 860,
                           int height = 520);

void write_file(const std::string& path, const std::string& content);

}  // namespace plssvd::svg
