#include "kaonpair/cli/svg.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>

namespace kaonpair::cli {

namespace {

std::string escape(const std::string& text)
{
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string_view dash_array(LineStyle style)
{
    switch (style) {
    case LineStyle::dashed: return " stroke-dasharray=\"8,5\"";
    case LineStyle::dotted: return " stroke-dasharray=\"2,4\"";
    case LineStyle::solid: break;
    }
    return "";
}

// Tick spacing of 1, 2 or 5 times a power of ten giving about `target` intervals.
double nice_step(double span, int target)
{
    const double raw = span / target;
    const double magnitude = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (raw <= m * magnitude)
            return m * magnitude;
    return 10.0 * magnitude;
}

} // namespace

std::string LinePlot::render(int width, int height) const
{
    double x_min = std::numeric_limits<double>::infinity();
    double x_max = -x_min;
    double y_min = 0.0;
    double y_max = -x_min;
    for (const auto& s : series) {
        for (double v : s.x) {
            x_min = std::min(x_min, v);
            x_max = std::max(x_max, v);
        }
        for (double v : s.y) {
            y_min = std::min(y_min, v);
            y_max = std::max(y_max, v);
        }
    }
    if (!(x_max > x_min)) {
        x_min = 0.0;
        x_max = 1.0;
    }
    if (!(y_max > y_min))
        y_max = y_min + 1.0;

    const double left = 70;
    const double right = width - 20;
    const double top = 40;
    const double bottom = height - 55;
    auto px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * (right - left); };
    auto py = [&](double y) { return bottom - (y - y_min) / (y_max - y_min) * (bottom - top); };

    fmt::memory_buffer out;
    auto it = std::back_inserter(out);
    fmt::format_to(it, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n", width, height,
                   width, height);
    fmt::format_to(it, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    fmt::format_to(it, "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n");
    fmt::format_to(it, "<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n", width / 2, escape(title));

    // Axes and ticks.
    fmt::format_to(it, "<path d=\"M{:.2f},{:.2f} L{:.2f},{:.2f} L{:.2f},{:.2f}\" fill=\"none\" stroke=\"black\"/>\n", left, top, left,
                   bottom, right, bottom);
    const double xs = nice_step(x_max - x_min, 6);
    for (double x = std::ceil(x_min / xs) * xs; x <= x_max + 1e-9 * xs; x += xs) {
        fmt::format_to(it, "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n", px(x), bottom,
                       bottom + 5);
        fmt::format_to(it, "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{:g}</text>\n", px(x), bottom + 18, x);
    }
    const double ys = nice_step(y_max - y_min, 5);
    for (double y = std::ceil(y_min / ys) * ys; y <= y_max + 1e-9 * ys; y += ys) {
        fmt::format_to(it, "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"black\"/>\n", left - 5, py(y), left);
        fmt::format_to(it, "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{:g}</text>\n", left - 8, py(y) + 4, y);
    }
    fmt::format_to(it, "<text x=\"{:.2f}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", (left + right) / 2, height - 15, escape(x_label));
    fmt::format_to(it, "<text x=\"18\" y=\"{:.2f}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {:.2f})\">{}</text>\n",
                   (top + bottom) / 2, (top + bottom) / 2, escape(y_label));
    fmt::format_to(it, "</g>\n");

    for (const auto& s : series) {
        fmt::format_to(it, "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"{} points=\"", dash_array(s.style));
        const std::size_t n = std::min(s.x.size(), s.y.size());
        for (std::size_t i = 0; i < n; ++i)
            fmt::format_to(it, "{}{:.2f},{:.2f}", i ? " " : "", px(s.x[i]), py(s.y[i]));
        fmt::format_to(it, "\"/>\n");
    }

    // Legend, top right.
    double ly = top + 15;
    for (const auto& s : series) {
        fmt::format_to(it, "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\" stroke-width=\"1.5\"{}/>\n",
                       right - 230, ly, right - 190, ly, dash_array(s.style));
        fmt::format_to(it, "<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n", right - 182,
                       ly + 4, escape(s.label));
        ly += 18;
    }
    fmt::format_to(it, "</svg>\n");
    return fmt::to_string(out);
}

} // namespace kaonpair::cli
