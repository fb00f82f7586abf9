#include "tapgrowth/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace tapgrowth {

namespace {

constexpr double kPanelWidth = 480.0;
constexpr double kPanelHeight = 300.0;
constexpr double kMarginLeft = 80.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 30.0;
constexpr double kMarginBottom = 40.0;

std::string fixed(double v, int digits = 2) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

std::string label(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

void draw_panel(std::ostringstream& svg, const PlotPanel& panel, double ox, double oy) {
    const double plot_w = kPanelWidth - kMarginLeft - kMarginRight;
    const double plot_h = kPanelHeight - kMarginTop - kMarginBottom;
    const double left = ox + kMarginLeft;
    const double top = oy + kMarginTop;

    svg << "  <g>\n";
    svg << "    <text x=\"" << fixed(ox + kPanelWidth / 2) << "\" y=\"" << fixed(oy + 18)
        << "\" text-anchor=\"middle\" font-size=\"14\">" << escape(panel.title) << "</text>\n";
    svg << "    <rect x=\"" << fixed(left) << "\" y=\"" << fixed(top) << "\" width=\""
        << fixed(plot_w) << "\" height=\"" << fixed(plot_h)
        << "\" fill=\"none\" stroke=\"#444\"/>\n";

    const std::size_t n = std::min(panel.x.size(), panel.y.size());
    if (n == 0) {
        svg << "  </g>\n";
        return;
    }
    auto transform = [&](double v) { return panel.log_y ? std::log10(v) : v; };
    double x_min = panel.x.front();
    double x_max = panel.x.front();
    double y_min = transform(panel.y.front());
    double y_max = y_min;
    for (std::size_t i = 0; i < n; ++i) {
        x_min = std::min(x_min, panel.x[i]);
        x_max = std::max(x_max, panel.x[i]);
        y_min = std::min(y_min, transform(panel.y[i]));
        y_max = std::max(y_max, transform(panel.y[i]));
    }
    if (x_max == x_min) {
        x_max = x_min + 1.0;
    }
    if (y_max == y_min) {
        const double pad = std::max(std::abs(y_min) * 0.05, 1e-9);
        y_min -= pad;
        y_max += pad;
    }
    auto px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * plot_w; };
    auto py = [&](double y) { return top + plot_h - (transform(y) - y_min) / (y_max - y_min) * plot_h; };

    svg << "    <polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < n; ++i) {
        svg << (i == 0 ? "" : " ") << fixed(px(panel.x[i])) << ',' << fixed(py(panel.y[i]));
    }
    svg << "\"/>\n";

    const auto y_text = [&](double v) { return panel.log_y ? label(std::pow(10.0, v)) : label(v); };
    svg << "    <text x=\"" << fixed(left - 6) << "\" y=\"" << fixed(top + plot_h)
        << "\" text-anchor=\"end\" font-size=\"11\">" << y_text(y_min) << "</text>\n";
    svg << "    <text x=\"" << fixed(left - 6) << "\" y=\"" << fixed(top + 10)
        << "\" text-anchor=\"end\" font-size=\"11\">" << y_text(y_max) << "</text>\n";
    svg << "    <text x=\"" << fixed(left) << "\" y=\"" << fixed(top + plot_h + 16)
        << "\" text-anchor=\"start\" font-size=\"11\">" << label(x_min) << "</text>\n";
    svg << "    <text x=\"" << fixed(left + plot_w) << "\" y=\"" << fixed(top + plot_h + 16)
        << "\" text-anchor=\"end\" font-size=\"11\">" << label(x_max) << "</text>\n";
    svg << "  </g>\n";
}

}  // namespace

std::string render_svg(const std::vector<PlotPanel>& panels) {
    const std::size_t columns = panels.size() > 1 ? 2 : 1;
    const std::size_t rows = (panels.size() + columns - 1) / columns;
    const double width = kPanelWidth * static_cast<double>(columns);
    const double height = kPanelHeight * static_cast<double>(std::max<std::size_t>(rows, 1));

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width, 0)
        << "\" height=\"" << fixed(height, 0) << "\" viewBox=\"0 0 " << fixed(width, 0) << ' '
        << fixed(height, 0) << "\" font-family=\"sans-serif\">\n";
    svg << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t i = 0; i < panels.size(); ++i) {
        draw_panel(svg, panels[i], kPanelWidth * static_cast<double>(i % columns),
                   kPanelHeight * static_cast<double>(i / columns));
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace tapgrowth
