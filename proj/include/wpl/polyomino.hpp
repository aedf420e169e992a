#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace wpl {

/// Sequence of positive letters x_0..x_m, seen as a column polyomino: column
/// i holds the unit cells at heights 1..x_i on a common baseline.
class Word {
  public:
    /// Throws std::invalid_argument for an empty word or a letter < 1.
    explicit Word(std::vector<std::int64_t> letters);

    std::span<const std::int64_t> letters() const { return letters_; }
    std::int64_t length() const { return static_cast<std::int64_t>(letters_.size()); }
    std::int64_t front() const { return letters_.front(); }
    std::int64_t back() const { return letters_.back(); }
    std::int64_t max_letter() const;

    /// "2,3,1,3"
    std::string str() const;
    /// Inverse of str(); throws std::invalid_argument on bad input.
    static Word parse(const std::string& text);

  private:
    std::vector<std::int64_t> letters_;
};

struct PerimeterBreakdown {
    std::int64_t gap_sum = 0;   // Q_m
    std::int64_t vertical = 0;  // R_n = Q_m + x_0 + x_m
    std::int64_t total = 0;     // P_n = R_n + 2n
};

PerimeterBreakdown perimeter_decomposed(const Word& word);

/// Counts unit edges lying between a cell of the polyomino and a cell
/// outside it, scanning horizontal and vertical unit segments separately.
std::int64_t perimeter_geometric_oracle(const Word& word);

struct RenderOptions {
    double cell_size = 24.0;
    double margin = 12.0;
};

/// Self-contained SVG: one <rect> per unit cell (class "cell") and the
/// outline as a single closed <path> (class "perimeter") made of axis-aligned
/// unit-grid moves. Throws std::invalid_argument for letters above 10^4.
std::string render_svg(const Word& word, const RenderOptions& options = {});

}  // namespace wpl
