#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ttlab {

// Exact nonnegative rational, kept normalized. Comparisons avoid overflow by
// cross-multiplying in 128-bit arithmetic; inputs in this codebase stay far
// below the point where that would be unsafe.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
        if (den == 0) throw std::invalid_argument("rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    static Rational of(std::uint64_t n, std::uint64_t d) {
        return Rational(static_cast<std::int64_t>(n), static_cast<std::int64_t>(d));
    }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator<=(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num) * b.den <= static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }

    Rational operator-(const Rational& o) const {
        __int128 n = static_cast<__int128>(num) * o.den - static_cast<__int128>(o.num) * den;
        __int128 d = static_cast<__int128>(den) * o.den;
        if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
            throw std::overflow_error("rational: difference overflow");
        return Rational(static_cast<std::int64_t>(n), static_cast<std::int64_t>(d));
    }

    Rational operator+(const Rational& o) const {
        __int128 n = static_cast<__int128>(num) * o.den + static_cast<__int128>(o.num) * den;
        __int128 d = static_cast<__int128>(den) * o.den;
        if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
            throw std::overflow_error("rational: sum overflow");
        return Rational(static_cast<std::int64_t>(n), static_cast<std::int64_t>(d));
    }

    Rational div(std::int64_t k) const {
        if (k == 0) throw std::invalid_argument("rational: division by zero");
        __int128 d = static_cast<__int128>(den) * k;
        if (d > INT64_MAX || d < INT64_MIN)
            throw std::overflow_error("rational: quotient overflow");
        return Rational(num, static_cast<std::int64_t>(d));
    }

    // Deterministic fixed-point rendering, round toward zero.
    std::string to_decimal(int digits = 6) const {
        bool neg = num < 0;
        std::uint64_t n = static_cast<std::uint64_t>(neg ? -num : num);
        std::uint64_t d = static_cast<std::uint64_t>(den);
        std::string out = neg ? "-" : "";
        out += std::to_string(n / d);
        n %= d;
        if (digits > 0) {
            out += '.';
            for (int i = 0; i < digits; ++i) {
                n *= 10;
                out += static_cast<char>('0' + n / d);
                n %= d;
            }
        }
        return out;
    }

    std::string to_fraction_string() const {
        return std::to_string(num) + "/" + std::to_string(den);
    }
};

} // namespace ttlab
