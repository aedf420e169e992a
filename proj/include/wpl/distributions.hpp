#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "wpl/exact.hpp"
#include "wpl/rng.hpp"

namespace wpl {

enum class ModelKind { Uniform, Geometric };

/// Letter distribution of a random word: uniform on [1,k], or geometric(p)
/// with P(x = i) = p q^(i-1), i >= 1.
class ModelSpec {
  public:
    /// Throws std::invalid_argument unless k >= 1.
    static ModelSpec uniform(std::int64_t k);
    /// Throws std::invalid_argument unless 0 < p < 1.
    static ModelSpec geometric(const ExactScalar& p);

    ModelKind kind() const { return kind_; }
    bool is_uniform() const { return kind_ == ModelKind::Uniform; }
    bool is_geometric() const { return kind_ == ModelKind::Geometric; }

    /// Upper bound of the uniform support. Only meaningful for Uniform.
    std::int64_t k() const { return k_; }
    /// Success probability. Only meaningful for Geometric.
    const ExactScalar& p() const { return p_; }
    ExactScalar q() const { return ExactScalar{1} - p_; }

    /// "uniform(k=6)" or "geometric(p=1/2)".
    std::string describe() const;

    friend bool operator==(const ModelSpec& a, const ModelSpec& b) {
        return a.kind_ == b.kind_ && a.k_ == b.k_ && a.p_ == b.p_;
    }

  private:
    ModelSpec(ModelKind kind, std::int64_t k, ExactScalar p) : kind_(kind), k_(k), p_(std::move(p)) {}

    ModelKind kind_;
    std::int64_t k_ = 0;
    ExactScalar p_;
};

/// P(x = i).
ExactScalar letter_pmf(const ModelSpec& model, std::int64_t i);

/// f(u) = P(|x_1 - x_0| = u) for two independent letters.
ExactScalar gap_pmf(const ModelSpec& model, std::int64_t u);

/// Series cutoff used by every truncated geometric evaluation: the smallest
/// U with q^U < 1e-15 (decided in exact arithmetic). Returns k for Uniform,
/// which is already the full support.
std::int64_t tail_cutoff(const ModelSpec& model);

/// Draws letters from a model. Uniform uses an unbiased bounded integer
/// draw; geometric inverts the CDF 1 - q^i.
class LetterSampler {
  public:
    explicit LetterSampler(const ModelSpec& model);

    std::int64_t operator()(CounterStream& stream) const {
        if (uniform_) {
            return 1 + static_cast<std::int64_t>(stream.bounded(static_cast<std::uint32_t>(k_)));
        }
        // 1 - u lies in (0,1], so the log is finite.
        const double u = stream.unit();
        const double i = std::ceil(std::log1p(-u) / log_q_);
        return i < 1.0 ? 1 : static_cast<std::int64_t>(i);
    }

  private:
    bool uniform_;
    std::int64_t k_;
    double log_q_;
};

std::int64_t sample_letter(const ModelSpec& model, CounterStream& stream);

}  // namespace wpl
