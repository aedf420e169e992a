#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace wpl {

/// Arbitrary-precision rational. GMP keeps every value canonical (reduced,
/// positive denominator) after each arithmetic operation.
using ExactScalar = mpq_class;

/// Parses "a", "-a/b" or a finite decimal such as "0.25" into an exact value.
/// Throws std::invalid_argument on malformed input or a zero denominator.
ExactScalar parse_rational(std::string_view text);

/// "a" when the denominator is 1, "a/b" otherwise.
std::string to_string(const ExactScalar& value);

/// Decimal rendering rounded (half away from zero) to `significant` digits.
/// The rounding is done in exact arithmetic.
std::string to_decimal(const ExactScalar& value, int significant = 15);

double to_double(const ExactScalar& value);

ExactScalar ipow(const ExactScalar& base, unsigned exponent);

inline ExactScalar make_exact(std::int64_t numerator, std::int64_t denominator = 1) {
    ExactScalar r{mpz_class{std::to_string(numerator)}, mpz_class{std::to_string(denominator)}};
    r.canonicalize();
    return r;
}

}  // namespace wpl
