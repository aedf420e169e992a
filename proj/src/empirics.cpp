#include "wpl/empirics.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

#include "wpl/errors.hpp"

namespace wpl {

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

CellLayout::CellLayout(double delta) : delta_(delta), cells_(0) {
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw std::invalid_argument("histogram cell width must be positive");
    }
    const double ratio = 6.0 / delta;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio) || rounded < 1.0) {
        throw std::invalid_argument(fmt::format("6/delta must be an integer, got 6/{} = {}", delta, ratio));
    }
    cells_ = static_cast<std::size_t>(rounded) + 3;
}

double CellLayout::left(std::size_t i) const {
    return static_cast<double>(i) * delta_ - 3.0 - 1.5 * delta_;
}

double CellLayout::right(std::size_t i) const {
    return static_cast<double>(i) * delta_ - 3.0 - 0.5 * delta_;
}

double CellLayout::center(std::size_t i) const {
    return static_cast<double>(i) * delta_ - 3.0 - delta_;
}

std::size_t CellLayout::cell_of(double x) const {
    if (std::isnan(x)) {
        throw std::invalid_argument("cannot bin NaN");
    }
    if (x < right(0)) {
        return 0;
    }
    if (x >= left(cells_ - 1)) {
        return cells_ - 1;
    }
    auto i = static_cast<std::size_t>(std::floor((x - left(0)) / delta_));
    // floating division can land one cell off right at an edge
    while (i > 0 && x < left(i)) {
        --i;
    }
    while (i + 1 < cells_ && x >= right(i)) {
        ++i;
    }
    return i;
}

Histogram build_histogram(std::span<const double> z, double delta) {
    if (z.empty()) {
        throw std::invalid_argument("histogram needs a nonempty sample");
    }
    Histogram h{CellLayout{delta}, {}, 0};
    h.counts.assign(h.layout.size(), 0);
    for (double v : z) {
        ++h.counts[h.layout.cell_of(v)];
    }
    h.total = static_cast<std::int64_t>(z.size());
    return h;
}

double gaussian_cell_mass(const CellLayout& layout, std::size_t i) {
    if (i >= layout.size()) {
        throw std::out_of_range("cell index out of range");
    }
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const bool first = i == 0;
    const bool last = i + 1 == layout.size();
    if (first && last) {
        return 1.0;
    }
    if (first) {
        return 0.5 * std::erfc(-layout.right(i) * inv_sqrt2);
    }
    if (last) {
        return 0.5 * std::erfc(layout.left(i) * inv_sqrt2);
    }
    const double a = layout.left(i);
    const double b = layout.right(i);
    // take the difference on the tail side that avoids cancellation
    if (a >= 0.0) {
        return 0.5 * (std::erfc(a * inv_sqrt2) - std::erfc(b * inv_sqrt2));
    }
    if (b <= 0.0) {
        return 0.5 * (std::erfc(-b * inv_sqrt2) - std::erfc(-a * inv_sqrt2));
    }
    return 0.5 * (std::erf(b * inv_sqrt2) - std::erf(a * inv_sqrt2));
}

double gaussian_cell_mass(std::size_t i, double delta) {
    return gaussian_cell_mass(CellLayout{delta}, i);
}

double ks_statistic(std::span<const double> z) {
    if (z.empty()) {
        throw std::invalid_argument("KS statistic needs a nonempty sample");
    }
    std::vector<double> sorted(z.begin(), z.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double phi = normal_cdf(sorted[i]);
        const double above = static_cast<double>(i + 1) / n - phi;
        const double below = phi - static_cast<double>(i) / n;
        d = std::max({d, above, below});
    }
    return d;
}

GofReport goodness_of_fit(std::span<const double> z, double delta) {
    const Histogram h = build_histogram(z, delta);
    GofReport r;
    r.ks_statistic = ks_statistic(z);
    for (std::size_t i = 0; i < h.layout.size(); ++i) {
        r.max_cell_abs_error = std::max(r.max_cell_abs_error, std::abs(h.frequency(i) - gaussian_cell_mass(h.layout, i)));
    }
    return r;
}

void write_histogram_csv(std::ostream& out, const Histogram& histogram) {
    out << "i,left,right,center,count,freq,gauss_mass\n";
    const auto& L = histogram.layout;
    for (std::size_t i = 0; i < L.size(); ++i) {
        out << fmt::format("{},{},{},{},{},{},{}\n", i, L.left(i), L.right(i), L.center(i), histogram.counts[i],
                           histogram.frequency(i), gaussian_cell_mass(L, i));
    }
}

std::vector<HistogramRow> read_histogram_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw SchemaError("empty histogram file");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != "i,left,right,center,count,freq,gauss_mass") {
        throw SchemaError("expected header 'i,left,right,center,count,freq,gauss_mass'");
    }
    std::vector<HistogramRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            fields.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) {
                break;
            }
            start = comma + 1;
        }
        if (fields.size() != 7) {
            throw SchemaError(fmt::format("line {}: expected 7 fields, found {}", line_no, fields.size()));
        }
        try {
            HistogramRow r;
            r.index = static_cast<std::size_t>(std::stoull(fields[0]));
            r.left = std::stod(fields[1]);
            r.right = std::stod(fields[2]);
            r.center = std::stod(fields[3]);
            r.count = std::stoll(fields[4]);
            r.freq = std::stod(fields[5]);
            r.gauss_mass = std::stod(fields[6]);
            if (r.index != rows.size()) {
                throw SchemaError(fmt::format("line {}: cell index out of sequence", line_no));
            }
            rows.push_back(r);
        } catch (const SchemaError&) {
            throw;
        } catch (const std::exception&) {
            throw SchemaError(fmt::format("line {}: malformed number", line_no));
        }
    }
    if (rows.empty()) {
        throw SchemaError("histogram table has no rows");
    }
    return rows;
}

nlohmann::json to_json(const GofReport& report) {
    return {{"ks_statistic", report.ks_statistic}, {"max_cell_abs_error", report.max_cell_abs_error}};
}

}  // namespace wpl
