#include "wpl/exact.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace wpl {

namespace {

bool is_integer_literal(std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        s.remove_prefix(1);
    }
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

mpz_class parse_integer(std::string_view s) {
    if (!is_integer_literal(s)) {
        throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
    }
    if (s.front() == '+') {
        s.remove_prefix(1);
    }
    return mpz_class{std::string(s), 10};
}

mpz_class pow10(unsigned long e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
    return r;
}

}  // namespace

ExactScalar parse_rational(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
        text.remove_prefix(1);
    }
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
        text.remove_suffix(1);
    }
    if (text.empty()) {
        throw std::invalid_argument("empty rational");
    }

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        mpz_class num = parse_integer(text.substr(0, slash));
        mpz_class den = parse_integer(text.substr(slash + 1));
        if (den == 0) {
            throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        }
        ExactScalar r{num, den};
        r.canonicalize();
        return r;
    }

    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view whole = text.substr(0, dot);
        std::string_view frac = text.substr(dot + 1);
        bool negative = !whole.empty() && whole.front() == '-';
        std::string_view digits_whole = whole;
        if (!digits_whole.empty() && (digits_whole.front() == '-' || digits_whole.front() == '+')) {
            digits_whole.remove_prefix(1);
        }
        if ((digits_whole.empty() && frac.empty()) ||
            (!digits_whole.empty() && !is_integer_literal(digits_whole)) ||
            (!frac.empty() && !is_integer_literal(frac)) || (!frac.empty() && (frac.front() == '-' || frac.front() == '+'))) {
            throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
        }
        mpz_class num = digits_whole.empty() ? mpz_class{0} : parse_integer(digits_whole);
        mpz_class scale = pow10(frac.size());
        num = num * scale + (frac.empty() ? mpz_class{0} : parse_integer(frac));
        if (negative) {
            num = -num;
        }
        ExactScalar r{num, scale};
        r.canonicalize();
        return r;
    }

    return ExactScalar{parse_integer(text)};
}

std::string to_string(const ExactScalar& value) {
    if (value.get_den() == 1) {
        return value.get_num().get_str();
    }
    return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string to_decimal(const ExactScalar& value, int significant) {
    if (significant < 1) {
        throw std::invalid_argument("significant digits must be positive");
    }
    if (value == 0) {
        return "0";
    }
    const bool negative = value < 0;
    const ExactScalar mag = abs(value);

    // exponent e with 10^e <= mag < 10^(e+1)
    long e = static_cast<long>(mag.get_num().get_str().size()) - static_cast<long>(mag.get_den().get_str().size());
    auto ten_pow = [](long k) {
        return k >= 0 ? ExactScalar{pow10(static_cast<unsigned long>(k))}
                      : ExactScalar{mpz_class{1}, pow10(static_cast<unsigned long>(-k))};
    };
    while (ten_pow(e) > mag) {
        --e;
    }
    while (ten_pow(e + 1) <= mag) {
        ++e;
    }

    long shift = significant - 1 - e;
    ExactScalar scaled = mag * ten_pow(shift);
    mpz_class digits = scaled.get_num() / scaled.get_den();
    ExactScalar remainder = scaled - ExactScalar{digits};
    if (remainder * 2 >= 1) {
        digits += 1;
    }
    if (digits == pow10(static_cast<unsigned long>(significant))) {
        digits /= 10;
        ++e;
        --shift;
    }

    std::string s = digits.get_str();
    std::string out;
    if (e >= 0 && e < 21) {
        // shift = significant - 1 - e digits after the point
        if (shift <= 0) {
            out = s + std::string(static_cast<std::size_t>(-shift), '0');
        } else {
            out = s.substr(0, s.size() - static_cast<std::size_t>(shift)) + "." + s.substr(s.size() - static_cast<std::size_t>(shift));
        }
    } else if (e < 0 && e > -7) {
        out = "0." + std::string(static_cast<std::size_t>(-e - 1), '0') + s;
    } else {
        out = s.substr(0, 1);
        if (s.size() > 1) {
            out += "." + s.substr(1);
        }
        out += "e" + std::to_string(e);
    }

    if (auto dot = out.find('.'); dot != std::string::npos) {
        auto exp_pos = out.find('e');
        std::string mantissa = out.substr(0, exp_pos);
        std::string exponent = exp_pos == std::string::npos ? "" : out.substr(exp_pos);
        while (!mantissa.empty() && mantissa.back() == '0') {
            mantissa.pop_back();
        }
        if (!mantissa.empty() && mantissa.back() == '.') {
            mantissa.pop_back();
        }
        out = mantissa + exponent;
    }
    return negative ? "-" + out : out;
}

double to_double(const ExactScalar& value) {
    return value.get_d();
}

ExactScalar ipow(const ExactScalar& base, unsigned exponent) {
    mpz_class num;
    mpz_class den;
    mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exponent);
    mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exponent);
    ExactScalar result{num, den};
    result.canonicalize();
    return result;
}

}  // namespace wpl
