#include "cavity_cs/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace cavity_cs::svg {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (const char ch : s) {
        switch (ch) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += ch;
        }
    }
    return out;
}

struct Range {
    double lo = 0.0;
    double hi = 1.0;
};

Range find_range(const std::vector<Curve>& curves, bool use_y) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const Curve& c : curves) {
        for (const double v : use_y ? c.y : c.x) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (!(lo <= hi)) return {0.0, 1.0};  // no data
    if (lo == hi) return {lo - 1.0, hi + 1.0};
    const double pad = 0.05 * (hi - lo);
    return {lo - pad, hi + pad};
}

std::vector<double> ticks(const Range& r, int target = 6) {
    const double span = r.hi - r.lo;
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (const double mult : {1.0, 2.0, 5.0, 10.0}) {
        if (mag * mult >= raw) {
            step = mag * mult;
            break;
        }
    }
    std::vector<double> out;
    for (double v = std::ceil(r.lo / step) * step; v <= r.hi + 1e-12 * span; v += step) {
        out.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
    }
    return out;
}

// one chart area with axes, ticks, curves and legend, offset vertically
void render_panel(std::ostringstream& out, const LinePlot& p, double y_offset) {
    const double ml = 72.0, mr = 24.0, mt = 40.0, mb = 46.0;
    const double w = p.width - ml - mr;
    const double h = p.height - mt - mb;
    const Range rx = find_range(p.curves, false);
    const Range ry = find_range(p.curves, true);
    const auto sx = [&](double v) { return ml + w * (v - rx.lo) / (rx.hi - rx.lo); };
    const auto sy = [&](double v) { return y_offset + mt + h * (1.0 - (v - ry.lo) / (ry.hi - ry.lo)); };

    out << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<text x=\"" << num(ml) << "\" y=\"" << num(y_offset + 22.0)
        << "\" font-size=\"14\">" << escape(p.title) << "</text>\n";

    // frame
    out << "<rect x=\"" << num(ml) << "\" y=\"" << num(y_offset + mt) << "\" width=\"" << num(w)
        << "\" height=\"" << num(h) << "\" fill=\"none\" stroke=\"#333\"/>\n";

    for (const double t : ticks(rx)) {
        const double x = sx(t);
        out << "<line x1=\"" << num(x) << "\" y1=\"" << num(y_offset + mt + h) << "\" x2=\""
            << num(x) << "\" y2=\"" << num(y_offset + mt + h + 5.0) << "\" stroke=\"#333\"/>\n";
        out << "<text x=\"" << num(x) << "\" y=\"" << num(y_offset + mt + h + 18.0)
            << "\" text-anchor=\"middle\">" << num(t) << "</text>\n";
    }
    for (const double t : ticks(ry)) {
        const double y = sy(t);
        out << "<line x1=\"" << num(ml - 5.0) << "\" y1=\"" << num(y) << "\" x2=\"" << num(ml)
            << "\" y2=\"" << num(y) << "\" stroke=\"#333\"/>\n";
        out << "<text x=\"" << num(ml - 8.0) << "\" y=\"" << num(y + 4.0)
            << "\" text-anchor=\"end\">" << num(t) << "</text>\n";
    }
    out << "<text x=\"" << num(ml + w / 2.0) << "\" y=\"" << num(y_offset + mt + h + 36.0)
        << "\" text-anchor=\"middle\">" << escape(p.x_label) << "</text>\n";
    out << "<text x=\"" << num(16.0) << "\" y=\"" << num(y_offset + mt + h / 2.0)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << num(y_offset + mt + h / 2.0) << ")\">" << escape(p.y_label) << "</text>\n";

    for (const Curve& c : p.curves) {
        if (c.x.empty()) continue;
        out << "<polyline fill=\"none\" stroke=\"" << c.color << "\" stroke-width=\"1.3\"";
        if (c.dashed) out << " stroke-dasharray=\"6 4\"";
        out << " points=\"";
        for (std::size_t i = 0; i < c.x.size(); ++i) {
            if (i > 0) out << ' ';
            out << num(sx(c.x[i])) << ',' << num(sy(c.y[i]));
        }
        out << "\"/>\n";
    }

    double ly = y_offset + mt + 14.0;
    for (const Curve& c : p.curves) {
        const double lx = ml + w - 170.0;
        out << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly - 4.0) << "\" x2=\""
            << num(lx + 28.0) << "\" y2=\"" << num(ly - 4.0) << "\" stroke=\"" << c.color
            << "\" stroke-width=\"1.3\"" << (c.dashed ? " stroke-dasharray=\"6 4\"" : "")
            << "/>\n";
        out << "<text x=\"" << num(lx + 34.0) << "\" y=\"" << num(ly) << "\">" << escape(c.label)
            << "</text>\n";
        ly += 16.0;
    }
    out << "</g>\n";
}

std::string heat_color(double v) {
    // blue (0) -> white (0.5) -> red (1)
    v = std::clamp(v, 0.0, 1.0);
    int r, g, b;
    if (v < 0.5) {
        const double t = v / 0.5;
        r = static_cast<int>(40 + t * 215);
        g = static_cast<int>(60 + t * 195);
        b = 255;
    } else {
        const double t = (v - 0.5) / 0.5;
        r = 255;
        g = static_cast<int>(255 - t * 195);
        b = static_cast<int>(255 - t * 215);
    }
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

}  // namespace

std::string render_line_plot(const LinePlot& plot) {
    return render_panels({plot});
}

std::string render_panels(const std::vector<LinePlot>& panels) {
    int width = 0;
    int height = 0;
    for (const LinePlot& p : panels) {
        width = std::max(width, p.width);
        height += p.height;
    }
    if (panels.empty()) {
        width = 400;
        height = 200;
    }
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    double y = 0.0;
    for (const LinePlot& p : panels) {
        render_panel(out, p, y);
        y += p.height;
    }
    out << "</svg>\n";
    return out.str();
}

std::string render_heat_map(const HeatMap& map) {
    const double ml = 86.0, mr = 92.0, mt = 48.0, mb = 56.0;
    const double w = map.width - ml - mr;
    const double h = map.height - mt - mb;
    const auto nx = static_cast<double>(std::max<std::size_t>(1, map.x_values.size()));
    const auto ny = static_cast<double>(std::max<std::size_t>(1, map.y_values.size()));
    const double cw = w / nx;
    const double ch = h / ny;

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << map.width << "\" height=\""
        << map.height << "\" viewBox=\"0 0 " << map.width << ' ' << map.height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<text x=\"" << num(ml) << "\" y=\"24\" font-size=\"14\">" << escape(map.title)
        << "</text>\n";

    for (std::size_t yi = 0; yi < map.cells.size(); ++yi) {
        for (std::size_t xi = 0; xi < map.cells[yi].size(); ++xi) {
            // row 0 at the bottom so larger M sits higher
            const double px = ml + cw * static_cast<double>(xi);
            const double py = mt + h - ch * static_cast<double>(yi + 1);
            out << "<rect x=\"" << num(px) << "\" y=\"" << num(py) << "\" width=\"" << num(cw)
                << "\" height=\"" << num(ch) << "\" fill=\"" << heat_color(map.cells[yi][xi])
                << "\" stroke=\"#666\" stroke-width=\"0.5\"/>\n";
            char label[16];
            std::snprintf(label, sizeof(label), "%.3f", map.cells[yi][xi]);
            out << "<text x=\"" << num(px + cw / 2.0) << "\" y=\"" << num(py + ch / 2.0 + 4.0)
                << "\" text-anchor=\"middle\" font-size=\"10\">" << label << "</text>\n";
        }
    }
    for (std::size_t xi = 0; xi < map.x_values.size(); ++xi) {
        out << "<text x=\"" << num(ml + cw * (static_cast<double>(xi) + 0.5)) << "\" y=\""
            << num(mt + h + 18.0) << "\" text-anchor=\"middle\">" << map.x_values[xi]
            << "</text>\n";
    }
    for (std::size_t yi = 0; yi < map.y_values.size(); ++yi) {
        out << "<text x=\"" << num(ml - 8.0) << "\" y=\""
            << num(mt + h - ch * (static_cast<double>(yi) + 0.5) + 4.0)
            << "\" text-anchor=\"end\">" << map.y_values[yi] << "</text>\n";
    }
    out << "<text x=\"" << num(ml + w / 2.0) << "\" y=\"" << num(mt + h + 40.0)
        << "\" text-anchor=\"middle\">" << escape(map.x_label) << "</text>\n";
    out << "<text x=\"18\" y=\"" << num(mt + h / 2.0)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << num(mt + h / 2.0) << ")\">"
        << escape(map.y_label) << "</text>\n";

    // color scale
    const double bx = ml + w + 18.0;
    for (int i = 0; i < 40; ++i) {
        const double v = 1.0 - static_cast<double>(i) / 39.0;
        out << "<rect x=\"" << num(bx) << "\" y=\"" << num(mt + h * i / 40.0) << "\" width=\"14\" height=\""
            << num(h / 40.0 + 0.5) << "\" fill=\"" << heat_color(v) << "\"/>\n";
    }
    out << "<text x=\"" << num(bx + 18.0) << "\" y=\"" << num(mt + 10.0) << "\">1</text>\n";
    out << "<text x=\"" << num(bx + 18.0) << "\" y=\"" << num(mt + h) << "\">0</text>\n";
    out << "</g>\n</svg>\n";
    return out.str();
}

}  // namespace cavity_cs::svg
