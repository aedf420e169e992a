#include "wpl/polyomino.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

#include <fmt/format.h>

namespace wpl {

Word::Word(std::vector<std::int64_t> letters) : letters_(std::move(letters)) {
    if (letters_.empty()) {
        throw std::invalid_argument("a word needs at least one letter");
    }
    for (auto x : letters_) {
        if (x < 1) {
            throw std::invalid_argument("letters must be positive, got " + std::to_string(x));
        }
    }
}

std::int64_t Word::max_letter() const {
    return *std::max_element(letters_.begin(), letters_.end());
}

std::string Word::str() const {
    std::string s;
    for (std::size_t i = 0; i < letters_.size(); ++i) {
        if (i > 0) {
            s += ',';
        }
        s += std::to_string(letters_[i]);
    }
    return s;
}

Word Word::parse(const std::string& text) {
    std::vector<std::int64_t> letters;
    const char* pos = text.data();
    const char* end = text.data() + text.size();
    while (pos < end) {
        std::int64_t v = 0;
        auto [next, ec] = std::from_chars(pos, end, v);
        if (ec != std::errc{} || next == pos) {
            throw std::invalid_argument("malformed word '" + text + "'");
        }
        letters.push_back(v);
        pos = next;
        if (pos < end) {
            if (*pos != ',' || pos + 1 == end) {
                throw std::invalid_argument("malformed word '" + text + "'");
            }
            ++pos;
        }
    }
    return Word{std::move(letters)};
}

PerimeterBreakdown perimeter_decomposed(const Word& word) {
    const auto x = word.letters();
    PerimeterBreakdown b;
    for (std::size_t i = 1; i < x.size(); ++i) {
        b.gap_sum += x[i] > x[i - 1] ? x[i] - x[i - 1] : x[i - 1] - x[i];
    }
    b.vertical = b.gap_sum + word.front() + word.back();
    b.total = b.vertical + 2 * word.length();
    return b;
}

std::int64_t perimeter_geometric_oracle(const Word& word) {
    const auto x = word.letters();
    const auto columns = static_cast<std::int64_t>(x.size());
    const std::int64_t height = word.max_letter();

    // column -1 and column n are empty, as are rows 0 and height+1
    auto filled = [&](std::int64_t col, std::int64_t row) {
        return col >= 0 && col < columns && row >= 1 && row <= x[static_cast<std::size_t>(col)];
    };

    std::int64_t edges = 0;
    // horizontal segments: between row h and h+1 of one column
    for (std::int64_t col = 0; col < columns; ++col) {
        for (std::int64_t h = 0; h <= height; ++h) {
            edges += filled(col, h) != filled(col, h + 1) ? 1 : 0;
        }
    }
    // vertical segments: between column c-1 and c within one row
    for (std::int64_t col = 0; col <= columns; ++col) {
        for (std::int64_t row = 1; row <= height; ++row) {
            edges += filled(col - 1, row) != filled(col, row) ? 1 : 0;
        }
    }
    return edges;
}

std::string render_svg(const Word& word, const RenderOptions& options) {
    constexpr std::int64_t kMaxLetter = 10'000;
    if (word.max_letter() > kMaxLetter) {
        throw std::invalid_argument("render refuses letters above 10000");
    }
    const auto x = word.letters();
    const double s = options.cell_size;
    const double pad = options.margin;
    const auto n = static_cast<double>(x.size());
    const auto h = static_cast<double>(word.max_letter());
    const double width = n * s + 2 * pad;
    const double height = h * s + 2 * pad;

    // grid y runs upward from the baseline; SVG y runs downward
    auto sx = [&](double gx) { return pad + gx * s; };
    auto sy = [&](double gy) { return pad + (h - gy) * s; };

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n", width,
        height, width, height);
    out += fmt::format("  <title>Word {} (perimeter {})</title>\n", word.str(), perimeter_decomposed(word).total);
    out += "  <g class=\"cells\" fill=\"#cfe3f7\" stroke=\"#7a9cc6\" stroke-width=\"1\">\n";
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::int64_t row = 1; row <= x[i]; ++row) {
            out += fmt::format("    <rect class=\"cell\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/>\n",
                               sx(static_cast<double>(i)), sy(static_cast<double>(row)), s, s);
        }
    }
    out += "  </g>\n";

    // Outline: up the left side, across the tops with vertical steps between
    // columns, down the right side, back along the baseline.
    std::string d = fmt::format("M {} {}", sx(0), sy(0));
    d += fmt::format(" V {}", sy(static_cast<double>(x[0])));
    for (std::size_t i = 0; i < x.size(); ++i) {
        d += fmt::format(" H {}", sx(static_cast<double>(i + 1)));
        const double next = i + 1 < x.size() ? static_cast<double>(x[i + 1]) : 0.0;
        d += fmt::format(" V {}", sy(next));
    }
    d += " Z";
    out += fmt::format("  <path class=\"perimeter\" d=\"{}\" fill=\"none\" stroke=\"#1f3b63\" stroke-width=\"3\"/>\n",
                       d);
    out += "</svg>\n";
    return out;
}

}  // namespace wpl
