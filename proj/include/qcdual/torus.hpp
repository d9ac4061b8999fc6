#pragma once

#include <compare>
#include <string>

#include "qcdual/rational.hpp"

namespace qcdual {

// A point of the circle group Q/Z, stored as the unique rational
// representative in (-1/2, 1/2]. Equality is representative equality.
//
// The closed arc T_+ is {t : |t| <= 1/4} and T_m is {t : |t| <= 1/(4m)};
// "outside T_+" therefore always means the strict inequality |t| > 1/4.
class TorusPoint {
public:
    TorusPoint() : value_(0) {}

    static TorusPoint normalize(const Rational& q) {
        // The unique integer z with q - z in (-1/2, 1/2] is ceil(q - 1/2).
        BigInt z = ceil_rat(q - Rational(1, 2));
        return TorusPoint(q - Rational(z), private_tag{});
    }

    const Rational& value() const noexcept { return value_; }

    Rational abs() const { return abs_rat(value_); }

    bool is_zero() const noexcept { return value_ == 0; }

    bool in_t_plus() const { return abs() <= Rational(1, 4); }

    bool in_t_m(const BigInt& m) const {
        if (m < 1) fail(ErrorKind::invalid_params, "in_t_m requires m >= 1");
        return abs() <= Rational(1, 4 * m);
    }

    friend TorusPoint operator+(const TorusPoint& a, const TorusPoint& b) {
        return normalize(a.value_ + b.value_);
    }
    friend TorusPoint operator-(const TorusPoint& a, const TorusPoint& b) {
        return normalize(a.value_ - b.value_);
    }
    TorusPoint operator-() const { return normalize(-value_); }

    friend TorusPoint int_mul(const BigInt& k, const TorusPoint& a) {
        return normalize(Rational(k) * a.value_);
    }

    friend bool operator==(const TorusPoint& a, const TorusPoint& b) = default;
    friend std::strong_ordering operator<=>(const TorusPoint& a, const TorusPoint& b) {
        if (a.value_ < b.value_) return std::strong_ordering::less;
        if (a.value_ > b.value_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    std::string str() const { return to_pq(value_); }

private:
    struct private_tag {};
    TorusPoint(Rational v, private_tag) : value_(std::move(v)) {}

    Rational value_;
};

inline TorusPoint torus(const Rational& q) { return TorusPoint::normalize(q); }
inline TorusPoint torus(const BigInt& p, const BigInt& q) { return TorusPoint::normalize(Rational(p, q)); }
inline TorusPoint torus(long p, long q) { return TorusPoint::normalize(Rational(p, q)); }

inline Rational torus_abs(const TorusPoint& a) { return a.abs(); }
inline bool in_t_plus(const TorusPoint& a) { return a.in_t_plus(); }
inline bool in_t_m(const TorusPoint& a, const BigInt& m) { return a.in_t_m(m); }

} // namespace qcdual
