#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include "tightspan/errors.hpp"

namespace tightspan {

/// Exact rational arithmetic on 64-bit numerator/denominator.
///
/// Values are kept reduced with a positive denominator. Comparisons
/// cross-multiply in 128-bit, so bound checks at threshold boundaries are
/// exact. Never construct one from a float except through
/// from_double_above(), which documents its tolerance.
class Rational {
  public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t value) : num_(value) {}  // NOLINT: implicit by design
    Rational(std::int64_t num, std::int64_t den) {
        if (den == 0) throw Error("rational with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        num_ = num;
        den_ = den;
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }

    /// Largest integer <= value.
    std::int64_t floor() const {
        if (num_ >= 0) return num_ / den_;
        return -((-num_ + den_ - 1) / den_);
    }

    Rational reciprocal() const {
        if (num_ == 0) throw Error("reciprocal of zero");
        return Rational(den_, num_);
    }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    /// Parses "n" or "n/d".
    static Rational parse(const std::string& text) {
        auto slash = text.find('/');
        try {
            if (slash == std::string::npos) return Rational(std::stoll(text));
            std::int64_t num = std::stoll(text.substr(0, slash));
            std::int64_t den = std::stoll(text.substr(slash + 1));
            return Rational(num, den);
        } catch (const std::exception&) {
            throw Error("cannot parse rational from '" + text + "'");
        }
    }

    /// Smallest value on the 2^-20 grid that is >= value + slack.
    ///
    /// This is the one sanctioned float-to-rational conversion: rounding is
    /// always upward, so using the result as a budget or bound keeps the
    /// true quantity on the safe side of it.
    static Rational from_double_above(double value, double slack) {
        if (!std::isfinite(value) || value < 0) throw Error("cannot convert non-finite or negative value");
        constexpr std::int64_t grid = std::int64_t{1} << 20;
        long double scaled = (static_cast<long double>(value) + static_cast<long double>(slack)) * grid;
        auto num = static_cast<__int128>(ceill(scaled));
        return make(num, grid);
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return make(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return make(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return make(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw Error("rational division by zero");
        return make(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    }
    Rational operator-() const {
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }

    friend bool operator==(const Rational& a, const Rational& b) = default;
    friend auto operator<=>(const Rational& a, const Rational& b) {
        return i128(a.num_) * b.den_ <=> i128(b.num_) * a.den_;
    }

  private:
    using i128 = __int128;

    static i128 gcd128(i128 a, i128 b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b != 0) {
            i128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    static std::int64_t narrow(i128 v) {
        if (v > INT64_MAX || v < INT64_MIN) throw Error("rational overflow");
        return static_cast<std::int64_t>(v);
    }

    static Rational make(i128 num, i128 den) {
        if (den == 0) throw Error("rational with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        i128 g = gcd128(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        Rational r;
        r.num_ = narrow(num);
        r.den_ = narrow(den);
        return r;
    }

    std::int64_t num_{0};
    std::int64_t den_{1};
};

}  // namespace tightspan
