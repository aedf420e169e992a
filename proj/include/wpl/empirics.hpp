#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

namespace wpl {

/// Standard normal CDF.
double normal_cdf(double x);

/// Cell layout for normalized endpoints: cells i = 0..(6/delta + 2), cell i
/// spanning I(i) = [i delta - 3 - 3 delta/2, i delta - 3 - delta/2) and
/// centered on i delta - 3 - delta. Values left of cell 0 belong to cell 0 and
/// values right of the last cell to the last cell.
class CellLayout {
  public:
    /// Throws std::invalid_argument unless delta > 0 and 6/delta is an
    /// integer (to within 1e-9).
    explicit CellLayout(double delta);

    double delta() const { return delta_; }
    std::size_t size() const { return cells_; }
    double left(std::size_t i) const;
    double right(std::size_t i) const;
    double center(std::size_t i) const;
    /// Cell holding x after clamping. NaN is rejected.
    std::size_t cell_of(double x) const;

  private:
    double delta_;
    std::size_t cells_;
};

struct Histogram {
    CellLayout layout;
    std::vector<std::int64_t> counts;
    std::int64_t total = 0;

    double frequency(std::size_t i) const {
        return static_cast<double>(counts[i]) / static_cast<double>(total);
    }
};

/// Throws std::invalid_argument for an empty sample or a bad delta.
Histogram build_histogram(std::span<const double> z, double delta);

/// Standard normal mass of cell i; the two end cells take the clamped
/// semi-infinite tails so the masses sum to 1.
double gaussian_cell_mass(const CellLayout& layout, std::size_t i);
double gaussian_cell_mass(std::size_t i, double delta);

/// One-sample Kolmogorov-Smirnov distance to the standard normal:
/// max over sorted samples of |F(z-) - Phi(z)| and |F(z) - Phi(z)|.
double ks_statistic(std::span<const double> z);

struct GofReport {
    double ks_statistic = 0.0;
    double max_cell_abs_error = 0.0;
};

GofReport goodness_of_fit(std::span<const double> z, double delta);

/// Header "i,left,right,center,count,freq,gauss_mass".
void write_histogram_csv(std::ostream& out, const Histogram& histogram);

struct HistogramRow {
    std::size_t index = 0;
    double left = 0.0;
    double right = 0.0;
    double center = 0.0;
    std::int64_t count = 0;
    double freq = 0.0;
    double gauss_mass = 0.0;
};

/// Throws SchemaError on malformed input.
std::vector<HistogramRow> read_histogram_csv(std::istream& in);

nlohmann::json to_json(const GofReport& report);

}  // namespace wpl
