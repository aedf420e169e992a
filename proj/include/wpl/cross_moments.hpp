#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "wpl/distributions.hpp"
#include "wpl/exact.hpp"

namespace wpl {

/// Exponents (alpha, beta, gamma, delta) selecting
/// T = E(x_0^alpha * y_1^beta * y_2^gamma * y_3^delta), where y_i = |x_i - x_{i-1}|.
/// A zero exponent drops the variable.
struct MultiIndex {
    int alpha = 0;
    int beta = 0;
    int gamma = 0;
    int delta = 0;

    /// Throws std::invalid_argument unless each exponent is in [0,3] and the
    /// total weight is at most 4.
    MultiIndex(int a, int b, int c, int d);
    MultiIndex() = default;

    int weight() const { return alpha + beta + gamma + delta; }
    int gap_weight() const { return beta + gamma + delta; }

    /// "T_{0,1,1,0}" (or "Tbar_{...}" when centered).
    std::string label(bool centered = false) const;

    /// Accepts "0,1,1,0" or "0,1,1,0" wrapped in T_{...}; missing trailing
    /// exponents are zero ("0,2" is T_{0,2}).
    static MultiIndex parse(std::string_view text);

    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
};

enum class Method { ClosedForm, BruteForce };

struct CrossMomentResult {
    MultiIndex index;
    bool centered = false;
    ExactScalar value;
    Method method = Method::BruteForce;
    /// Bound on the series truncation error; zero for exact (uniform) sums.
    double truncation_bound = 0.0;
};

class NoClosedForm : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Brute-force expectation over (x_0, x_1, x_2, x_3). Uniform: the literal
/// quadruple sum over [1,k]^4, exact. Geometric: the same sum with every index
/// truncated at tail_cutoff(model); the value is exact for the truncated sum
/// and `truncation_bound` bounds what the tail omits.
///
/// Centered requests replace each |x_i - x_{i-1}| by |x_i - x_{i-1}| - M.
/// Throws std::invalid_argument for centered requests with alpha > 0, and for
/// uniform k > 64 (the literal sum is O(k^4)).
CrossMomentResult cross_moment_oracle(const ModelSpec& model, const MultiIndex& idx, bool centered);

/// Tabulated rational closed form, evaluated exactly. Throws NoClosedForm for
/// indices without one.
ExactScalar cross_moment_closed(const ModelSpec& model, const MultiIndex& idx, bool centered);

bool has_closed_form(const ModelSpec& model, const MultiIndex& idx, bool centered);

/// Indices with a closed form in both models (uncentered).
std::span<const MultiIndex> tabulated_indices();
/// Indices with a centered closed form (uniform only).
std::span<const MultiIndex> tabulated_centered_indices();

/// Oracle check that T_{0,1,2} = T_{0,2,1}: exact for uniform, within
/// 1e-12 relative for geometric.
bool reversibility_check(const ModelSpec& model);

/// E(y_1 * y_3) by a dedicated quadruple sum in which x_2 is marginalized.
/// Equals M^2 because y_1 and y_3 share no letter.
CrossMomentResult separated_gap_product_oracle(const ModelSpec& model);

/// Source of cross-moment values used by the moment assemblies.
using CrossMomentSource = std::function<ExactScalar(const MultiIndex&, bool centered)>;

CrossMomentSource closed_form_source(const ModelSpec& model);
/// Memoizing oracle source. Not thread-safe.
CrossMomentSource oracle_source(const ModelSpec& model);

}  // namespace wpl
