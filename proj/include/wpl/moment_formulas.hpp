#pragma once

#include <cstdint>

#include "wpl/cross_moments.hpp"
#include "wpl/distributions.hpp"
#include "wpl/exact.hpp"

namespace wpl {

/// Exact moments of the perimeter P_n = Q_m + x_0 + x_m + 2n of a random
/// word of length n (m = n - 1 gaps), where Q_m is the sum of the gaps and
/// R_n = Q_m + x_0 + x_m is the vertical perimeter.
///
/// Every quantity has two routes: a closed form and an assembly from
/// cross-moments. The public functions return the closed form and throw
/// std::logic_error if the assembly from closed-form cross-moments disagrees.
/// Callers checking against independent values use the *_assembled variants
/// with an oracle source.

struct MomentReport {
    ModelSpec model;
    std::int64_t n = 0;
    std::int64_t m = 0;
    ExactScalar mean_P{};
    ExactScalar mean_R{};
    ExactScalar mean_Q{};
    ExactScalar var_P{};
    /// n * mu3*, the part of the third centered moment that grows with n.
    ExactScalar mu3_dominant{};
    ExactScalar mu3_star{};
    ExactScalar vstar{};
    double sigma = 0.0;
};

/// M_{P,n}. Uniform: ((3k + 2k^2 + 1) + (k^2 + 6k - 1) n) / (3k);
/// geometric: (2 + (2 + 2p - 2p^2) n) / (p (2 - p)). Requires n >= 2.
ExactScalar mean_perimeter(const ModelSpec& model, std::int64_t n);
/// (n - 1) M + 2n + 2 T_1.
ExactScalar mean_perimeter_assembled(const CrossMomentSource& source, std::int64_t n);

/// M_{R,n} = M_{Q,m} + 2 E(x_0).
ExactScalar mean_vertical(const ModelSpec& model, std::int64_t n);
/// M_{Q,m} = m M.
ExactScalar mean_gap_sum(const ModelSpec& model, std::int64_t m);

/// V(P_n) = V(R_n). Uniform: ((4k^4 - 5k^2 + 1) + (3k^4 - 3) n) / (45 k^2);
/// geometric: the rational in p with numerator
/// 4(1-p)(p^4 - 4p^3 + 9p^2 - 10p + 5) n + 4(3p^2 - 5p + 5)(1-p)^2.
/// Requires n >= 2.
ExactScalar variance_perimeter(const ModelSpec& model, std::int64_t n);

/// Tuple-counting assembly of V(R_n) from cross-moments:
///   (n-1) T_{0,2} + 2 T_2 + 2 (n-2) T_{0,1,1} + 4 T_{1,1} + (n-2)(n-3) M^2
///   + 2 T_1^2 + 4 T_1 M (n-2) - M_{R,n}^2.
/// Term counts assume n >= 4; smaller n is rejected.
ExactScalar variance_assembled(const CrossMomentSource& source, std::int64_t n);

/// mu3*, the per-step constant of the third centered moment, closed form.
ExactScalar mu3_star(const ModelSpec& model);
/// (T_{0,3} + 3 T_{0,1,2} + 6 T_{0,1,1,1} + 3 T_{0,2,1})
///   + (-9 T_{0,2} - 24 T_{0,1,1} - 6 M^2) M + 26 M^3.
ExactScalar mu3_star_combination(const CrossMomentSource& source);
/// Tbar_{0,3} + 3 Tbar_{0,1,2} + 6 Tbar_{0,1,1,1} + 3 Tbar_{0,2,1} (centered
/// cross-moments must be available from `source`).
ExactScalar mu3_star_centered(const CrossMomentSource& source);

/// n * mu3*. Requires n >= 2.
ExactScalar mu3_dominant(const ModelSpec& model, std::int64_t n);

struct VStar {
    ExactScalar vstar;
    double sigma = 0.0;
};

/// V* = (T_{0,2} - M^2) + 2 (T_{0,1,1} - M^2) and sigma = sqrt(V*).
VStar vstar_sigma(const ModelSpec& model);
ExactScalar vstar_closed(const ModelSpec& model);
ExactScalar vstar_assembled(const CrossMomentSource& source);

/// sqrt of a nonnegative exact value, correct to double precision.
double exact_sqrt(const ExactScalar& value);

MomentReport moment_report(const ModelSpec& model, std::int64_t n);

}  // namespace wpl
