#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "wpl/distributions.hpp"
#include "wpl/empirics.hpp"
#include "wpl/simulation.hpp"

namespace wpl {

enum class SeriesStyle { Line, Bars, Points };

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    SeriesStyle style = SeriesStyle::Line;
};

struct Chart {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
};

/// Standalone SVG with axes, ticks and a legend. Throws
/// std::invalid_argument when a series has mismatched or empty coordinates.
std::string render_chart_svg(const Chart& chart, int width = 720, int height = 440);

/// Letter pmf on 1..max_letter and gap pmf on 0..max_letter-1.
Chart pmf_chart(const ModelSpec& model, std::int64_t max_letter);

/// Q_m(j) for one trajectory against the drift line jM.
Chart trajectory_chart(const TrajectoryEnsemble& ensemble, std::size_t trajectory);

/// W(t) on a uniform grid of `points` values over [0,1].
Chart normalized_path_chart(const TrajectoryEnsemble& ensemble, std::size_t trajectory, std::size_t points = 501);

/// Cell frequencies against the Gaussian cell masses.
Chart histogram_chart(const Histogram& histogram);

/// Cumulative cell frequency at each right edge against Phi.
Chart cumulative_chart(const Histogram& histogram);

}  // namespace wpl
