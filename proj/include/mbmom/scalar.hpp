#ifndef MBMOM_SCALAR_HPP
#define MBMOM_SCALAR_HPP

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "error.hpp"

namespace mbmom {

/// Arbitrary-precision rational. GMP keeps every value canonical
/// (reduced, positive denominator), so equality is exact.
using ExactScalar = mpq_class;
using ExactInteger = mpz_class;
using ExactVector = std::vector<ExactScalar>;

inline ExactInteger binomial(long n, long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    ExactInteger out;
    mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return out;
}

/// Binomial coefficient for counting; callers keep arguments small.
inline std::uint64_t binomial_u64(long n, long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (long i = 1; i <= k; ++i) {
        r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    return r;
}

inline ExactInteger factorial(long n) {
    ExactInteger out;
    mpz_fac_ui(out.get_mpz_t(), static_cast<unsigned long>(n));
    return out;
}

inline ExactScalar pow(const ExactScalar& base, long exponent) {
    ExactScalar out;
    mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exponent));
    mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exponent));
    return out;
}

inline bool is_zero(const ExactScalar& x) { return sgn(x) == 0; }

/// Parses "7", "-3/10", "0.25" or "1.5e-2" into an exact rational.
inline ExactScalar parse_exact(std::string_view text) {
    auto fail = [&](const char* why) {
        return ParseError("cannot parse rational '" + std::string(text) + "': " + why);
    };
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    }
    if (s.empty()) throw fail("empty");

    auto digits_only = [](std::string_view v) {
        if (v.empty()) return false;
        for (char c : v) {
            if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        }
        return true;
    };

    bool negative = false;
    std::string_view body(s);
    if (body.front() == '+' || body.front() == '-') {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }

    ExactScalar value;
    if (auto slash = body.find('/'); slash != std::string_view::npos) {
        auto num = body.substr(0, slash);
        auto den = body.substr(slash + 1);
        if (!digits_only(num) || !digits_only(den)) throw fail("malformed fraction");
        ExactInteger d(std::string(den), 10);
        if (d == 0) throw fail("zero denominator");
        value = ExactScalar(ExactInteger(std::string(num), 10), d);
        value.canonicalize();
    } else {
        long exponent = 0;
        if (auto e = body.find_first_of("eE"); e != std::string_view::npos) {
            auto exp_text = body.substr(e + 1);
            bool exp_negative = false;
            if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
                exp_negative = exp_text.front() == '-';
                exp_text.remove_prefix(1);
            }
            if (!digits_only(exp_text) || exp_text.size() > 6) throw fail("malformed exponent");
            exponent = std::stol(std::string(exp_text));
            if (exp_negative) exponent = -exponent;
            body = body.substr(0, e);
        }
        std::string_view int_part = body;
        std::string_view frac_part;
        if (auto dot = body.find('.'); dot != std::string_view::npos) {
            int_part = body.substr(0, dot);
            frac_part = body.substr(dot + 1);
        }
        if (int_part.empty() && frac_part.empty()) throw fail("no digits");
        if (!int_part.empty() && !digits_only(int_part)) throw fail("malformed number");
        if (!frac_part.empty() && !digits_only(frac_part)) throw fail("malformed number");
        std::string all_digits = std::string(int_part) + std::string(frac_part);
        ExactInteger mantissa(all_digits.empty() ? std::string("0") : all_digits, 10);
        exponent -= static_cast<long>(frac_part.size());
        ExactInteger scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
        value = exponent < 0 ? ExactScalar(mantissa, scale) : ExactScalar(mantissa * scale);
        value.canonicalize();
    }
    return negative ? ExactScalar(-value) : value;
}

/// Canonical text form: "p" for integers, "p/q" otherwise.
inline std::string to_string(const ExactScalar& x) { return x.get_str(); }

/// Fixed-point rendering rounded half away from zero.
inline std::string to_decimal(const ExactScalar& x, int digits = 12) {
    ExactInteger scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
    ExactScalar scaled = abs(x) * scale + ExactScalar(1, 2);
    ExactInteger q = scaled.get_num() / scaled.get_den();
    std::string s = q.get_str();
    if (digits > 0) {
        if (s.size() <= static_cast<std::size_t>(digits)) {
            s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
        }
        s.insert(s.size() - static_cast<std::size_t>(digits), 1, '.');
    }
    if (sgn(x) < 0 && q != 0) s.insert(0, 1, '-');
    return s;
}

}  // namespace mbmom

#endif  // MBMOM_SCALAR_HPP
