#include "wpl/moment_formulas.hpp"

#include <stdexcept>
#include <string>

namespace wpl {

namespace {

const MultiIndex kT1{1, 0, 0, 0};
const MultiIndex kT2{2, 0, 0, 0};
const MultiIndex kT11{1, 1, 0, 0};
const MultiIndex kM{0, 1, 0, 0};
const MultiIndex kT02{0, 2, 0, 0};
const MultiIndex kT03{0, 3, 0, 0};
const MultiIndex kT011{0, 1, 1, 0};
const MultiIndex kT012{0, 1, 2, 0};
const MultiIndex kT021{0, 2, 1, 0};
const MultiIndex kT0111{0, 1, 1, 1};

void require_length(std::int64_t n, std::int64_t minimum) {
    if (n < minimum) {
        throw std::invalid_argument("word length n must be at least " + std::to_string(minimum) + ", got " +
                                    std::to_string(n));
    }
}

ExactScalar as_exact(std::int64_t v) {
    return ExactScalar{mpz_class{std::to_string(v)}};
}

ExactScalar k_of(const ModelSpec& model) {
    return as_exact(model.k());
}

void require_agreement(const ExactScalar& closed, const ExactScalar& assembled, const char* what) {
    if (closed != assembled) {
        throw std::logic_error(std::string(what) + ": closed form " + to_string(closed) +
                               " disagrees with cross-moment assembly " + to_string(assembled));
    }
}

}  // namespace

ExactScalar mean_perimeter(const ModelSpec& model, std::int64_t n) {
    require_length(n, 2);
    const ExactScalar nn = as_exact(n);
    ExactScalar closed;
    if (model.is_uniform()) {
        const ExactScalar k = k_of(model);
        closed = ((3 * k + 2 * k * k + 1) + (k * k + 6 * k - 1) * nn) / (3 * k);
    } else {
        const ExactScalar& p = model.p();
        closed = (2 + (2 + 2 * p - 2 * p * p) * nn) / (p * (2 - p));
    }
    require_agreement(closed, mean_perimeter_assembled(closed_form_source(model), n), "mean of P_n");
    return closed;
}

ExactScalar mean_perimeter_assembled(const CrossMomentSource& source, std::int64_t n) {
    require_length(n, 2);
    const ExactScalar nn = as_exact(n);
    return ExactScalar{(nn - 1) * source(kM, false) + 2 * nn + 2 * source(kT1, false)};
}

ExactScalar mean_vertical(const ModelSpec& model, std::int64_t n) {
    require_length(n, 2);
    return ExactScalar{mean_gap_sum(model, n - 1) + 2 * cross_moment_closed(model, kT1, false)};
}

ExactScalar mean_gap_sum(const ModelSpec& model, std::int64_t m) {
    if (m < 0) {
        throw std::invalid_argument("gap count must be nonnegative");
    }
    return ExactScalar{as_exact(m) * cross_moment_closed(model, kM, false)};
}

ExactScalar variance_perimeter(const ModelSpec& model, std::int64_t n) {
    require_length(n, 2);
    const ExactScalar nn = as_exact(n);
    ExactScalar closed;
    if (model.is_uniform()) {
        const ExactScalar k = k_of(model);
        const ExactScalar k2 = k * k;
        const ExactScalar k4 = k2 * k2;
        closed = ((4 * k4 - 5 * k2 + 1) + (3 * k4 - 3) * nn) / (45 * k2);
    } else {
        const ExactScalar& p = model.p();
        const ExactScalar q = 1 - p;
        const ExactScalar slope = 4 * q * (ipow(p, 4) + 9 * p * p - 4 * ipow(p, 3) - 10 * p + 5);
        const ExactScalar intercept = 4 * (3 * p * p - 5 * p + 5) * q * q;
        closed = (nn * slope + intercept) / (p * p * (2 - p) * (2 - p) * (p * p + 3 - 3 * p));
    }
    if (n >= 4) {
        require_agreement(closed, variance_assembled(closed_form_source(model), n), "variance of P_n");
    }
    return closed;
}

ExactScalar variance_assembled(const CrossMomentSource& source, std::int64_t n) {
    require_length(n, 4);
    const ExactScalar nn = as_exact(n);
    const ExactScalar t1 = source(kT1, false);
    const ExactScalar m = source(kM, false);
    const ExactScalar mean_r = (nn - 1) * m + 2 * t1;
    return ExactScalar{(nn - 1) * source(kT02, false) + 2 * source(kT2, false) + (nn - 2) * 2 * source(kT011, false) +
                       4 * source(kT11, false) + (nn - 2) * (nn - 3) * m * m + 2 * t1 * t1 + 4 * t1 * m * (nn - 2) -
                       mean_r * mean_r};
}

ExactScalar mu3_star(const ModelSpec& model) {
    ExactScalar closed;
    if (model.is_uniform()) {
        const ExactScalar k = k_of(model);
        closed = 4 * (k - 2) * (1 + 2 * k) * (2 * k - 1) * (k + 2) * (k - 1) * (k + 1) / (945 * ipow(k, 3));
    } else {
        const ExactScalar& p = model.p();
        const ExactScalar poly = 114 - 570 * p + 1332 * ipow(p, 2) - 1908 * ipow(p, 3) + 1849 * ipow(p, 4) -
                                 1263 * ipow(p, 5) + 616 * ipow(p, 6) - 213 * ipow(p, 7) + 52 * ipow(p, 8) -
                                 9 * ipow(p, 9) + ipow(p, 10);
        closed = 8 * (1 - p) * poly /
                 (ipow(2 - p, 3) * ipow(p, 3) * (p * p - 2 * p + 2) * ipow(p * p + 3 - 3 * p, 2));
    }
    require_agreement(closed, mu3_star_combination(closed_form_source(model)), "mu3*");
    if (model.is_uniform()) {
        require_agreement(closed, mu3_star_centered(closed_form_source(model)), "mu3* (centered route)");
    }
    return closed;
}

ExactScalar mu3_star_combination(const CrossMomentSource& source) {
    const ExactScalar m = source(kM, false);
    const ExactScalar cubic = source(kT03, false) + 3 * source(kT012, false) + 6 * source(kT0111, false) +
                              3 * source(kT021, false);
    const ExactScalar quadratic = -9 * source(kT02, false) - 24 * source(kT011, false) - 6 * m * m;
    return ExactScalar{cubic + quadratic * m + 26 * m * m * m};
}

ExactScalar mu3_star_centered(const CrossMomentSource& source) {
    return ExactScalar{source(kT03, true) + 3 * source(kT012, true) + 6 * source(kT0111, true) +
                       3 * source(kT021, true)};
}

ExactScalar mu3_dominant(const ModelSpec& model, std::int64_t n) {
    require_length(n, 2);
    return ExactScalar{as_exact(n) * mu3_star(model)};
}

ExactScalar vstar_closed(const ModelSpec& model) {
    if (model.is_uniform()) {
        const ExactScalar k = k_of(model);
        return ExactScalar{(k - 1) * (k + 1) * (k * k + 1) / (15 * k * k)};
    }
    const ExactScalar& p = model.p();
    return ExactScalar{4 * (1 - p) * (ipow(p, 4) + 9 * p * p - 4 * ipow(p, 3) - 10 * p + 5) /
                       (p * p * (2 - p) * (2 - p) * (p * p + 3 - 3 * p))};
}

ExactScalar vstar_assembled(const CrossMomentSource& source) {
    const ExactScalar m = source(kM, false);
    return ExactScalar{(source(kT02, false) - m * m) + 2 * (source(kT011, false) - m * m)};
}

double exact_sqrt(const ExactScalar& value) {
    if (value < 0) {
        throw std::domain_error("square root of a negative value");
    }
    mpf_class x{value, 256};
    mpf_class r{0, 256};
    mpf_sqrt(r.get_mpf_t(), x.get_mpf_t());
    return r.get_d();
}

VStar vstar_sigma(const ModelSpec& model) {
    const ExactScalar closed = vstar_closed(model);
    require_agreement(closed, vstar_assembled(closed_form_source(model)), "V*");
    return VStar{closed, exact_sqrt(closed)};
}

MomentReport moment_report(const ModelSpec& model, std::int64_t n) {
    require_length(n, 2);
    MomentReport r{.model = model};
    r.n = n;
    r.m = n - 1;
    r.mean_P = mean_perimeter(model, n);
    r.mean_R = mean_vertical(model, n);
    r.mean_Q = mean_gap_sum(model, n - 1);
    r.var_P = variance_perimeter(model, n);
    r.mu3_star = mu3_star(model);
    r.mu3_dominant = mu3_dominant(model, n);
    const VStar vs = vstar_sigma(model);
    r.vstar = vs.vstar;
    r.sigma = vs.sigma;
    return r;
}

}  // namespace wpl
