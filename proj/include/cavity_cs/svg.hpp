#pragma once

#include <string>
#include <vector>

namespace cavity_cs::svg {

// Minimal deterministic SVG plotting: no external dependency, no
// timestamps, byte-stable output for identical inputs.

struct Curve {
    std::string label;
    std::string color;
    std::vector<double> x;
    std::vector<double> y;
    bool dashed = false;
};

struct LinePlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Curve> curves;
    int width = 900;
    int height = 420;
};

std::string render_line_plot(const LinePlot& plot);

// several stacked panels in one document
std::string render_panels(const std::vector<LinePlot>& panels);

struct HeatMap {
    std::string title;
    std::string x_label;  // flips
    std::string y_label;  // measurements
    std::vector<int> x_values;
    std::vector<int> y_values;
    std::vector<std::vector<double>> cells;  // [y][x], values in [0,1]
    int width = 760;
    int height = 520;
};

std::string render_heat_map(const HeatMap& map);

}  // namespace cavity_cs::svg
