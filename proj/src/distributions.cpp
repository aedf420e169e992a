#include "wpl/distributions.hpp"

#include <limits>
#include <stdexcept>

namespace wpl {

ModelSpec ModelSpec::uniform(std::int64_t k) {
    if (k < 1) {
        throw std::invalid_argument("uniform model requires k >= 1, got " + std::to_string(k));
    }
    if (k > std::numeric_limits<std::int32_t>::max()) {
        throw std::invalid_argument("uniform model k is too large");
    }
    return ModelSpec{ModelKind::Uniform, k, ExactScalar{0}};
}

ModelSpec ModelSpec::geometric(const ExactScalar& p) {
    if (p <= 0 || p >= 1) {
        throw std::invalid_argument("geometric model requires 0 < p < 1, got " + to_string(p));
    }
    return ModelSpec{ModelKind::Geometric, 0, p};
}

std::string ModelSpec::describe() const {
    if (is_uniform()) {
        return "uniform(k=" + std::to_string(k_) + ")";
    }
    return "geometric(p=" + to_string(p_) + ")";
}

ExactScalar letter_pmf(const ModelSpec& model, std::int64_t i) {
    if (i < 1) {
        throw std::invalid_argument("letters are positive integers");
    }
    if (model.is_uniform()) {
        return i <= model.k() ? make_exact(1, model.k()) : ExactScalar{0};
    }
    return model.p() * ipow(model.q(), static_cast<unsigned>(i - 1));
}

ExactScalar gap_pmf(const ModelSpec& model, std::int64_t u) {
    if (u < 0) {
        throw std::invalid_argument("gap values are nonnegative");
    }
    if (model.is_uniform()) {
        const std::int64_t k = model.k();
        if (u == 0) {
            return make_exact(1, k);
        }
        if (u >= k) {
            return ExactScalar{0};
        }
        return make_exact(2 * (k - u), k * k);
    }
    const ExactScalar& p = model.p();
    const ExactScalar two_minus_p = ExactScalar{2} - p;
    if (u == 0) {
        return p / two_minus_p;
    }
    return ExactScalar{2 * p * ipow(model.q(), static_cast<unsigned>(u)) / two_minus_p};
}

std::int64_t tail_cutoff(const ModelSpec& model) {
    if (model.is_uniform()) {
        return model.k();
    }
    // q = c/b; find the smallest U with 10^15 c^U < b^U.
    const ExactScalar q = model.q();
    const mpz_class c = q.get_num();
    const mpz_class b = q.get_den();
    mpz_class lhs;
    mpz_ui_pow_ui(lhs.get_mpz_t(), 10, 15);
    mpz_class rhs = 1;
    std::int64_t u = 0;
    while (lhs >= rhs) {
        lhs *= c;
        rhs *= b;
        ++u;
    }
    return u;
}

LetterSampler::LetterSampler(const ModelSpec& model)
    : uniform_(model.is_uniform()),
      k_(model.k()),
      log_q_(model.is_geometric() ? std::log(to_double(model.q())) : 0.0) {}

std::int64_t sample_letter(const ModelSpec& model, CounterStream& stream) {
    return LetterSampler{model}(stream);
}

}  // namespace wpl
