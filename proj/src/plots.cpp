#include "wpl/plots.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace wpl {

namespace {

constexpr std::array<const char*, 4> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// 1, 2 or 5 times a power of ten, giving about `target` ticks.
double nice_step(double span, int target) {
    if (!(span > 0.0)) {
        return 1.0;
    }
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double r = raw / mag;
    return (r < 1.5 ? 1.0 : r < 3.5 ? 2.0 : r < 7.5 ? 5.0 : 10.0) * mag;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (lo == hi) {
            lo -= 1.0;
            hi += 1.0;
        }
    }
};

}  // namespace

std::string render_chart_svg(const Chart& chart, int width, int height) {
    if (chart.series.empty()) {
        throw std::invalid_argument("chart has no series");
    }
    Range xr, yr;
    for (const auto& s : chart.series) {
        if (s.x.size() != s.y.size() || s.x.empty()) {
            throw std::invalid_argument(fmt::format("series '{}' has mismatched or empty coordinates", s.label));
        }
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            xr.add(s.x[i]);
            yr.add(s.y[i]);
        }
        if (s.style == SeriesStyle::Bars) {
            yr.add(0.0);
        }
    }
    // bars need half a slot of room on each side
    double bar_width = 0.0;
    for (const auto& s : chart.series) {
        if (s.style == SeriesStyle::Bars) {
            double w = std::numeric_limits<double>::infinity();
            for (std::size_t i = 1; i < s.x.size(); ++i) {
                w = std::min(w, std::abs(s.x[i] - s.x[i - 1]));
            }
            bar_width = std::max(bar_width, std::isfinite(w) && w > 0.0 ? w : 1.0);
        }
    }
    if (bar_width > 0.0) {
        xr.lo -= bar_width / 2;
        xr.hi += bar_width / 2;
    }
    xr.pad();
    yr.pad();
    const double ystep = nice_step(yr.hi - yr.lo, 5);
    yr.lo = std::floor(yr.lo / ystep) * ystep;
    yr.hi = std::ceil(yr.hi / ystep) * ystep;
    const double xstep = nice_step(xr.hi - xr.lo, 8);

    const double left = 70, right = width - 20.0, top = 40, bottom = height - 50.0;
    auto px = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * (right - left); };
    auto py = [&](double y) { return bottom - (y - yr.lo) / (yr.hi - yr.lo) * (bottom - top); };

    std::string svg = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
        "font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        width, height);
    svg += fmt::format("<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n", width / 2,
                       escape(chart.title));

    // grid and ticks
    for (double y = yr.lo; y <= yr.hi + ystep * 1e-9; y += ystep) {
        svg += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#e0e0e0\"/>\n", left,
                           py(y), right, py(y));
        svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{:g}</text>\n", left - 6, py(y) + 4,
                           std::abs(y) < ystep * 1e-9 ? 0.0 : y);
    }
    for (double x = std::ceil(xr.lo / xstep) * xstep; x <= xr.hi + xstep * 1e-9; x += xstep) {
        svg += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"#333\"/>\n",
                           px(x), bottom, bottom + 4);
        svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{:g}</text>\n", px(x), bottom + 18,
                           std::abs(x) < xstep * 1e-9 ? 0.0 : x);
    }
    svg += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#333\"/>\n", left, top,
                       right - left, bottom - top);
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", (left + right) / 2, height - 12,
                       escape(chart.x_label));
    svg += fmt::format("<text x=\"16\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {0})\">{1}</text>\n",
                       (top + bottom) / 2, escape(chart.y_label));

    std::size_t bar_series = 0;
    std::size_t bar_count = 0;
    for (const auto& s : chart.series) {
        bar_count += s.style == SeriesStyle::Bars ? 1 : 0;
    }
    for (std::size_t k = 0; k < chart.series.size(); ++k) {
        const auto& s = chart.series[k];
        const char* color = kPalette[k % kPalette.size()];
        svg += fmt::format("<g class=\"series\" data-label=\"{}\">\n", escape(s.label));
        switch (s.style) {
            case SeriesStyle::Line: {
                svg += "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" + std::string(color) + "\" points=\"";
                for (std::size_t i = 0; i < s.x.size(); ++i) {
                    svg += fmt::format("{}{:.2f},{:.2f}", i ? " " : "", px(s.x[i]), py(s.y[i]));
                }
                svg += "\"/>\n";
                break;
            }
            case SeriesStyle::Points:
                for (std::size_t i = 0; i < s.x.size(); ++i) {
                    svg += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\"/>\n", px(s.x[i]),
                                       py(s.y[i]), color);
                }
                break;
            case SeriesStyle::Bars: {
                const double slot = (px(bar_width) - px(0.0)) * 0.8;
                const double w = slot / static_cast<double>(bar_count);
                const double offset = -slot / 2 + w * static_cast<double>(bar_series++);
                for (std::size_t i = 0; i < s.x.size(); ++i) {
                    const double y0 = py(std::max(0.0, yr.lo));
                    const double y1 = py(s.y[i]);
                    svg += fmt::format(
                        "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"{}\" "
                        "fill-opacity=\"0.75\"/>\n",
                        px(s.x[i]) + offset, std::min(y0, y1), w, std::abs(y0 - y1), color);
                }
                break;
            }
        }
        svg += "</g>\n";
        const double ly = top + 16 + 16 * static_cast<double>(k);
        svg += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"12\" height=\"4\" fill=\"{}\"/>\n", right - 170,
                           ly - 6, color);
        svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n", right - 152, ly, escape(s.label));
    }
    svg += "</svg>\n";
    return svg;
}

Chart pmf_chart(const ModelSpec& model, std::int64_t max_letter) {
    if (max_letter < 1) {
        throw std::invalid_argument("max letter must be at least 1");
    }
    Series letters{"P(x = i)", {}, {}, SeriesStyle::Bars};
    Series gaps{"P(|x1 - x0| = u)", {}, {}, SeriesStyle::Bars};
    for (std::int64_t i = 0; i <= max_letter; ++i) {
        letters.x.push_back(static_cast<double>(i));
        letters.y.push_back(i == 0 ? 0.0 : to_double(letter_pmf(model, i)));
        gaps.x.push_back(static_cast<double>(i));
        gaps.y.push_back(to_double(gap_pmf(model, i)));
    }
    return {"Letter and gap distributions, " + model.describe(), "value", "probability", {letters, gaps}};
}

Chart trajectory_chart(const TrajectoryEnsemble& ensemble, std::size_t trajectory) {
    const auto path = ensemble.path(trajectory);
    const double m = to_double(ensemble.mean_gap);
    Series q{"Q(j)", {}, {}, SeriesStyle::Line};
    Series drift{"j M", {}, {}, SeriesStyle::Line};
    for (std::size_t j = 0; j < path.size(); ++j) {
        q.x.push_back(static_cast<double>(j));
        q.y.push_back(static_cast<double>(path[j]));
    }
    drift.x = {0.0, static_cast<double>(path.size() - 1)};
    drift.y = {0.0, m * static_cast<double>(path.size() - 1)};
    return {fmt::format("Gap partial sums, trajectory {}, {}", trajectory, ensemble.config.model.describe()), "j",
            "Q(j)", {q, drift}};
}

Chart normalized_path_chart(const TrajectoryEnsemble& ensemble, std::size_t trajectory, std::size_t points) {
    if (points < 2) {
        throw std::invalid_argument("need at least two grid points");
    }
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i) {
        grid[i] = static_cast<double>(i) / static_cast<double>(points - 1);
    }
    Series w{"W(t)", grid, normalized_path(ensemble, trajectory, grid), SeriesStyle::Line};
    return {fmt::format("Normalized path, trajectory {}", trajectory), "t", "W(t)", {w}};
}

Chart histogram_chart(const Histogram& histogram) {
    Series freq{"empirical frequency", {}, {}, SeriesStyle::Bars};
    Series gauss{"Gaussian cell mass", {}, {}, SeriesStyle::Points};
    for (std::size_t i = 0; i < histogram.layout.size(); ++i) {
        const double c = histogram.layout.center(i);
        freq.x.push_back(c);
        freq.y.push_back(histogram.frequency(i));
        gauss.x.push_back(c);
        gauss.y.push_back(gaussian_cell_mass(histogram.layout, i));
    }
    return {fmt::format("Normalized endpoints, N = {}, delta = {:g}", histogram.total, histogram.layout.delta()),
            "cell center", "frequency", {freq, gauss}};
}

Chart cumulative_chart(const Histogram& histogram) {
    Series emp{"cumulative frequency", {}, {}, SeriesStyle::Points};
    Series phi{"Phi", {}, {}, SeriesStyle::Line};
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < histogram.layout.size(); ++i) {
        acc += histogram.frequency(i);
        const double r = histogram.layout.right(i);
        emp.x.push_back(r);
        emp.y.push_back(acc);
    }
    const double lo = histogram.layout.left(0);
    const double hi = histogram.layout.right(histogram.layout.size() - 1);
    for (int i = 0; i <= 200; ++i) {
        const double x = lo + (hi - lo) * i / 200.0;
        phi.x.push_back(x);
        phi.y.push_back(normal_cdf(x));
    }
    return {"Cumulative distribution of normalized endpoints", "z", "F(z)", {emp, phi}};
}

}  // namespace wpl
