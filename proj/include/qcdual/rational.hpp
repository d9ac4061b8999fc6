#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "qcdual/errors.hpp"

namespace qcdual {

// All arithmetic in the library is exact. cpp_rational keeps fractions
// reduced with a positive denominator, which is exactly the "p/q, q>0,
// fully reduced" serialization contract.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt floor_div(const BigInt& a, const BigInt& b) {
    // b > 0 assumed.
    BigInt q = a / b;
    if (a % b != 0 && a < 0) --q;
    return q;
}

inline BigInt floor_rat(const Rational& q) { return floor_div(numerator(q), denominator(q)); }

inline BigInt ceil_rat(const Rational& q) { return -floor_rat(-q); }

inline Rational abs_rat(const Rational& q) { return q < 0 ? Rational(-q) : q; }

// "p/q" with q always written, even for integers ("0/1").
inline std::string to_pq(const Rational& q) {
    return numerator(q).str() + "/" + denominator(q).str();
}

inline Rational parse_rational(const std::string& s) {
    auto bad = [&] { fail(ErrorKind::parse_error, "expected rational 'p' or 'p/q', got '" + s + "'"); };
    if (s.empty()) bad();
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(s));
        BigInt num(s.substr(0, slash));
        BigInt den(s.substr(slash + 1));
        if (den == 0) bad();
        if (den < 0) {
            num = -num;
            den = -den;
        }
        return Rational(num, den);
    } catch (const std::exception&) {
        bad();
    }
    return Rational(0); // unreachable
}

} // namespace qcdual
