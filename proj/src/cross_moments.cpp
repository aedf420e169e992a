#include "wpl/cross_moments.hpp"

#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <tuple>
#include <vector>

namespace wpl {

MultiIndex::MultiIndex(int a, int b, int c, int d) : alpha(a), beta(b), gamma(c), delta(d) {
    for (int e : {a, b, c, d}) {
        if (e < 0 || e > 3) {
            throw std::invalid_argument("cross-moment exponents must lie in [0,3]");
        }
    }
    if (weight() > 4) {
        throw std::invalid_argument("cross-moment total weight must be at most 4");
    }
}

std::string MultiIndex::label(bool centered) const {
    std::string s = centered ? "Tbar_{" : "T_{";
    s += std::to_string(alpha) + "," + std::to_string(beta) + "," + std::to_string(gamma) + "," +
         std::to_string(delta) + "}";
    return s;
}

MultiIndex MultiIndex::parse(std::string_view text) {
    if (text.starts_with("Tbar_{")) {
        text.remove_prefix(6);
    } else if (text.starts_with("T_{")) {
        text.remove_prefix(3);
    }
    if (text.ends_with("}")) {
        text.remove_suffix(1);
    }
    std::array<int, 4> e{};
    std::size_t slot = 0;
    while (!text.empty()) {
        if (slot == 4) {
            throw std::invalid_argument("too many exponents in multi-index");
        }
        auto comma = text.find(',');
        std::string_view part = text.substr(0, comma);
        if (part.size() != 1 || part[0] < '0' || part[0] > '9') {
            throw std::invalid_argument("malformed multi-index exponent '" + std::string(part) + "'");
        }
        e[slot++] = part[0] - '0';
        if (comma == std::string_view::npos) {
            break;
        }
        text.remove_prefix(comma + 1);
        if (text.empty()) {
            throw std::invalid_argument("trailing comma in multi-index");
        }
    }
    if (slot == 0) {
        throw std::invalid_argument("empty multi-index");
    }
    return MultiIndex{e[0], e[1], e[2], e[3]};
}

namespace {

struct Centering {
    mpz_class numerator{0};
    mpz_class denominator{1};
};

Centering centering_for(const ModelSpec& model, bool centered) {
    if (!centered) {
        return {};
    }
    // The uniform mean gap comes from the exact sum itself; the truncated
    // geometric sum is not exact, so its centering uses the exact mean.
    const MultiIndex mean_gap{0, 1, 0, 0};
    const ExactScalar m = model.is_uniform() ? cross_moment_oracle(model, mean_gap, false).value
                                             : cross_moment_closed(model, mean_gap, false);
    return {m.get_num(), m.get_den()};
}

// pw[e][d] = (D*d - N)^e for gaps d in [0, span)
std::array<std::vector<mpz_class>, 4> gap_factor_powers(std::int64_t span, const Centering& c) {
    std::array<std::vector<mpz_class>, 4> pw;
    for (auto& row : pw) {
        row.resize(static_cast<std::size_t>(span));
    }
    for (std::int64_t d = 0; d < span; ++d) {
        const mpz_class f = c.denominator * d - c.numerator;
        mpz_class acc = 1;
        for (int e = 0; e < 4; ++e) {
            pw[static_cast<std::size_t>(e)][static_cast<std::size_t>(d)] = acc;
            acc *= f;
        }
    }
    return pw;
}

std::size_t gap(std::int64_t a, std::int64_t b) {
    return static_cast<std::size_t>(a > b ? a - b : b - a);
}

ExactScalar uniform_quadruple_sum(std::int64_t k, const MultiIndex& idx, const Centering& c) {
    if (k > 64) {
        throw std::invalid_argument("uniform oracle is limited to k <= 64");
    }
    const auto pw = gap_factor_powers(k, c);
    const auto& fb = pw[static_cast<std::size_t>(idx.beta)];
    const auto& fc = pw[static_cast<std::size_t>(idx.gamma)];
    const auto& fd = pw[static_cast<std::size_t>(idx.delta)];

    mpz_class total = 0;
    mpz_class term;
    for (std::int64_t i = 1; i <= k; ++i) {
        mpz_class xi;
        mpz_ui_pow_ui(xi.get_mpz_t(), static_cast<unsigned long>(i), static_cast<unsigned long>(idx.alpha));
        for (std::int64_t j = 1; j <= k; ++j) {
            for (std::int64_t l = 1; l <= k; ++l) {
                for (std::int64_t r = 1; r <= k; ++r) {
                    term = xi * fb[gap(j, i)];
                    term *= fc[gap(l, j)];
                    term *= fd[gap(r, l)];
                    total += term;
                }
            }
        }
    }

    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), static_cast<unsigned long>(k), 4);
    mpz_class center_scale;
    mpz_pow_ui(center_scale.get_mpz_t(), c.denominator.get_mpz_t(), static_cast<unsigned long>(idx.gap_weight()));
    ExactScalar value{total, scale * center_scale};
    value.canonicalize();
    return value;
}

// Truncated geometric sum over [1,U]^4. The nested sums are distributed
// innermost-first: g(x_2) = sum_{x_3} w(x_3) F(|x_3 - x_2|), and so on
// outward. Weights are scaled to integers W(i) = a c^(i-1) b^(U-i) where
// p = a/b and q = c/b.
ExactScalar geometric_quadruple_sum(const ModelSpec& model, std::int64_t cutoff, const MultiIndex& idx,
                                    const Centering& c) {
    const ExactScalar& p = model.p();
    const mpz_class a = p.get_num();
    const mpz_class b = p.get_den();
    const mpz_class cq = b - a;
    const auto U = static_cast<std::size_t>(cutoff);

    std::vector<mpz_class> weight(U + 1);
    {
        std::vector<mpz_class> cpow(U + 1);
        std::vector<mpz_class> bpow(U + 1);
        cpow[0] = 1;
        bpow[0] = 1;
        for (std::size_t t = 1; t <= U; ++t) {
            cpow[t] = cpow[t - 1] * cq;
            bpow[t] = bpow[t - 1] * b;
        }
        for (std::size_t i = 1; i <= U; ++i) {
            weight[i] = a * cpow[i - 1] * bpow[U - i];
        }
    }

    const auto pw = gap_factor_powers(cutoff, c);

    // inner[l] holds the scaled value of the sums nested inside variable l
    std::vector<mpz_class> inner(U + 1, mpz_class{1});
    std::vector<mpz_class> next(U + 1);
    for (int e : {idx.delta, idx.gamma, idx.beta}) {
        const auto& f = pw[static_cast<std::size_t>(e)];
        std::vector<mpz_class> h(U + 1);
        for (std::size_t l = 1; l <= U; ++l) {
            h[l] = weight[l] * inner[l];
        }
        for (std::size_t j = 1; j <= U; ++j) {
            mpz_class acc = 0;
            for (std::size_t l = 1; l <= U; ++l) {
                mpz_addmul(acc.get_mpz_t(), f[j > l ? j - l : l - j].get_mpz_t(), h[l].get_mpz_t());
            }
            next[j] = std::move(acc);
        }
        inner.swap(next);
    }

    mpz_class total = 0;
    for (std::size_t i = 1; i <= U; ++i) {
        mpz_class xi;
        mpz_ui_pow_ui(xi.get_mpz_t(), static_cast<unsigned long>(i), static_cast<unsigned long>(idx.alpha));
        total += weight[i] * xi * inner[i];
    }

    mpz_class scale;
    mpz_pow_ui(scale.get_mpz_t(), b.get_mpz_t(), 4 * static_cast<unsigned long>(cutoff));
    mpz_class center_scale;
    mpz_pow_ui(center_scale.get_mpz_t(), c.denominator.get_mpz_t(), static_cast<unsigned long>(idx.gap_weight()));
    ExactScalar value{total, scale * center_scale};
    value.canonicalize();
    return value;
}

// Every omitted tuple has a largest letter t > U; P(largest = t) <= 4 p q^(t-1)
// and every factor of the product is at most (t + shift) in absolute value.
double geometric_tail_bound(const ModelSpec& model, std::int64_t cutoff, int weight, double shift) {
    const double p = to_double(model.p());
    const double q = 1.0 - p;
    double sum = 0.0;
    double qpow = std::pow(q, static_cast<double>(cutoff));
    for (std::int64_t t = cutoff + 1;; ++t) {
        const double term = qpow * std::pow(static_cast<double>(t) + shift, weight);
        sum += term;
        qpow *= q;
        if (t > 2 * cutoff + 64 && term < 1e-30 * sum) {
            break;
        }
    }
    return 4.0 * p * sum;
}

using ClosedFn = ExactScalar (*)(const ExactScalar&);

struct ClosedFormEntry {
    MultiIndex index;
    bool centered;
    ClosedFn uniform;    // of k
    ClosedFn geometric;  // of p, null when not tabulated
};

// clang-format off
const std::array<ClosedFormEntry, 14> kClosedForms{{
    {{1, 0, 0, 0}, false,
     [](const ExactScalar& k) -> ExactScalar { return (k + 1) / 2; },
     [](const ExactScalar& p) -> ExactScalar { return 1 / p; }},
    {{2, 0, 0, 0}, false,
     [](const ExactScalar& k) -> ExactScalar { return (k + 1) * (2 * k + 1) / 6; },
     [](const ExactScalar& p) -> ExactScalar { return (2 - p) / (p * p); }},
    {{1, 1, 0, 0}, false,
     [](const ExactScalar& k) -> ExactScalar { return (k - 1) * (k + 1) * (k + 1) / (6 * k); },
     [](const ExactScalar& p) -> ExactScalar {
         return (1 - p) * (p * p - 4 * p + 6) / (p * p * (2 - p) * (2 - p));
     }},
    {{0, 1, 0, 0}, false,
     [](const ExactScalar& k) -> ExactScalar { return (k - 1) * (k + 1) / (3 * k); },
     [](const ExactScalar& p) -> ExactScalar { return 2 * (1 - p) / (p * (2 - p)); }},
    {{0, 2, 0, 0}, false,
     [](const ExactScalar& k) -> ExactScalar { return (k - 1) * (k + 1) / 6; },
     [](const ExactScalar& p) -> ExactScalar { return 2 * (1 - p) / (p * p); }},
    {{0, 3, 0, 0}, false,
     [](const ExactScalar& k) -> ExactScalar { return (k - 1) * (k + 1) * (3 * k * k - 2) / (30 * k); },
     [](const ExactScalar& p) -> ExactScalar {
         return 2 * (1 - p) * (p * p - 6 * p + 6) / (ipow(p, 3) * (2 - p));
     }},
    {{0, 1, 1, 0}, false,
     [](const ExactScalar& k) -> ExactScalar { return (k - 1) * (k + 1) * (7 * k * k - 8) / (60 * k * k); },
     [](const ExactScalar& p) -> ExactScalar {
         return (1 - p) * (ipow(p, 4) - 7 * ipow(p, 3) + 23 * p * p - 32 * p + 16) /
                (p * p * (2 - p) * (2 - p) * (p * p + 3 - 3 * p));
     }},
    {{0, 1, 2, 0}, false,
     [](const ExactScalar& k) -> ExactScalar { return (k - 1) * (k + 1) * (11 * k * k - 14) / (180 * k); },
     [](const ExactScalar& p) -> ExactScalar {
         return (28 - 56 * p + 38 * p * p - 10 * ipow(p, 3) + ipow(p, 4)) * (1 - p) / (ipow(p, 3) * ipow(2 - p, 3));
     }},
    {{0, 1, 1, 1}, false,
     [](const ExactScalar& k) -> ExactScalar {
         return (k - 1) * (k + 1) * (17 * ipow(k, 4) - 39 * k * k + 24) / (420 * ipow(k, 3));
     },
     [](const ExactScalar& p) -> ExactScalar {
         const ExactScalar poly = 28 - 84 * p + 113 * p * p - 86 * ipow(p, 3) + 39 * ipow(p, 4) -
                                  10 * ipow(p, 5) + ipow(p, 6);
         return 2 * poly * (1 - p) * (1 - p) /
                (ipow(p, 3) * (p * p - 2 * p + 2) * (2 - p) * ipow(p * p + 3 - 3 * p, 2));
     }},
    {{0, 2, 0, 0}, true,
     [](const ExactScalar& k) -> ExactScalar { return (k - 1) * (k + 1) * (k * k + 2) / (18 * k * k); },
     nullptr},
    {{0, 1, 1, 0}, true,
     [](const ExactScalar& k) -> ExactScalar { return (k - 1) * (k - 2) * (k + 2) * (k + 1) / (180 * k * k); },
     nullptr},
    {{0, 3, 0, 0}, true,
     [](const ExactScalar& k) -> ExactScalar {
         return (k - 1) * (k - 2) * (k + 2) * (k + 1) * (2 * k * k - 5) / (270 * ipow(k, 3));
     },
     nullptr},
    {{0, 1, 1, 1}, true,
     [](const ExactScalar& k) -> ExactScalar {
         return -(k - 1) * (k - 2) * (k + 2) * (k + 1) * (k * k + 5) / (3780 * ipow(k, 3));
     },
     nullptr},
    {{0, 1, 2, 0}, true,
     [](const ExactScalar& k) -> ExactScalar {
         return (k - 1) * (k - 2) * (k + 2) * (k + 1) * (k * k + 2) / (540 * ipow(k, 3));
     },
     nullptr},
}};
// clang-format on

const std::array<MultiIndex, 10> kTabulated{{
    {1, 0, 0, 0}, {2, 0, 0, 0}, {1, 1, 0, 0}, {0, 1, 0, 0}, {0, 2, 0, 0},
    {0, 3, 0, 0}, {0, 1, 1, 0}, {0, 1, 2, 0}, {0, 2, 1, 0}, {0, 1, 1, 1},
}};

const std::array<MultiIndex, 6> kTabulatedCentered{{
    {0, 2, 0, 0}, {0, 1, 1, 0}, {0, 3, 0, 0}, {0, 1, 1, 1}, {0, 1, 2, 0}, {0, 2, 1, 0},
}};

const ClosedFormEntry* find_entry(const ModelSpec& model, MultiIndex idx, bool centered) {
    // y_i y_{i+1} is reversible: T_{0,2,1} = T_{0,1,2}, likewise centered
    if (idx == MultiIndex{0, 2, 1, 0}) {
        idx = MultiIndex{0, 1, 2, 0};
    }
    for (const auto& entry : kClosedForms) {
        if (entry.index == idx && entry.centered == centered) {
            const ClosedFn fn = model.is_uniform() ? entry.uniform : entry.geometric;
            if (fn != nullptr) {
                return &entry;
            }
        }
    }
    return nullptr;
}

}  // namespace

CrossMomentResult cross_moment_oracle(const ModelSpec& model, const MultiIndex& idx, bool centered) {
    if (centered && idx.alpha > 0) {
        throw std::invalid_argument("centered cross-moments are only defined for the gap variables (alpha = 0)");
    }
    const Centering c = centering_for(model, centered);
    CrossMomentResult result;
    result.index = idx;
    result.centered = centered;
    result.method = Method::BruteForce;
    if (model.is_uniform()) {
        result.value = uniform_quadruple_sum(model.k(), idx, c);
        return result;
    }
    const std::int64_t cutoff = tail_cutoff(model);
    result.value = geometric_quadruple_sum(model, cutoff, idx, c);
    const double shift = centered ? std::ceil(to_double(ExactScalar{c.numerator, c.denominator})) : 0.0;
    result.truncation_bound = geometric_tail_bound(model, cutoff, idx.weight(), shift);
    return result;
}

bool has_closed_form(const ModelSpec& model, const MultiIndex& idx, bool centered) {
    return find_entry(model, idx, centered) != nullptr;
}

ExactScalar cross_moment_closed(const ModelSpec& model, const MultiIndex& idx, bool centered) {
    const ClosedFormEntry* entry = find_entry(model, idx, centered);
    if (entry == nullptr) {
        throw NoClosedForm("no closed form for " + idx.label(centered) + " under " + model.describe() +
                           "; use the brute-force oracle");
    }
    if (model.is_uniform()) {
        return entry->uniform(ExactScalar{mpz_class{std::to_string(model.k())}});
    }
    return entry->geometric(model.p());
}

std::span<const MultiIndex> tabulated_indices() {
    return kTabulated;
}

std::span<const MultiIndex> tabulated_centered_indices() {
    return kTabulatedCentered;
}

bool reversibility_check(const ModelSpec& model) {
    const ExactScalar forward = cross_moment_oracle(model, MultiIndex{0, 1, 2, 0}, false).value;
    const ExactScalar backward = cross_moment_oracle(model, MultiIndex{0, 2, 1, 0}, false).value;
    if (model.is_uniform()) {
        return forward == backward;
    }
    const double scale = std::max(1.0, std::abs(to_double(forward)));
    return std::abs(to_double(ExactScalar{forward - backward})) <= 1e-12 * scale;
}

CrossMomentResult separated_gap_product_oracle(const ModelSpec& model) {
    return cross_moment_oracle(model, MultiIndex{0, 1, 0, 1}, false);
}

CrossMomentSource closed_form_source(const ModelSpec& model) {
    return [model](const MultiIndex& idx, bool centered) { return cross_moment_closed(model, idx, centered); };
}

CrossMomentSource oracle_source(const ModelSpec& model) {
    auto cache = std::make_shared<std::map<std::tuple<int, int, int, int, bool>, ExactScalar>>();
    return [model, cache](const MultiIndex& idx, bool centered) {
        const auto key = std::make_tuple(idx.alpha, idx.beta, idx.gamma, idx.delta, centered);
        if (auto it = cache->find(key); it != cache->end()) {
            return it->second;
        }
        ExactScalar v = cross_moment_oracle(model, idx, centered).value;
        cache->emplace(key, v);
        return v;
    };
}

}  // namespace wpl
