#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace dicycle {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::string to_decimal(const BigInt& v) { return v.str(); }

/// "p/q", or "p" when the denominator is one.
inline std::string to_fraction_string(const Rational& r)
{
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(const BigInt& v) { return v.convert_to<double>(); }

inline BigInt ipow(const BigInt& base, unsigned exp)
{
    return boost::multiprecision::pow(base, exp);
}

inline Rational rpow(const Rational& base, unsigned exp)
{
    Rational out = 1;
    for (unsigned i = 0; i < exp; ++i) out *= base;
    return out;
}

/// x (x-1) ... (x-r+1); zero when r > x.
inline BigInt falling_factorial(std::uint64_t x, std::uint64_t r)
{
    if (r > x) return 0;
    BigInt out = 1;
    for (std::uint64_t i = 0; i < r; ++i) out *= (x - i);
    return out;
}

inline BigInt binomial(std::uint64_t n, std::uint64_t r)
{
    if (r > n) return 0;
    BigInt num = falling_factorial(n, r);
    BigInt den = falling_factorial(r, r);
    return num / den;
}

inline BigInt factorial(std::uint64_t n) { return falling_factorial(n, n); }

/// Parses "p", "p/q" or a finite decimal such as "0.3" into an exact rational.
inline Rational parse_rational(const std::string& text)
{
    const auto slash = text.find('/');
    if (slash != std::string::npos)
        return Rational(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
    const auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(BigInt(text));
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    const bool negative = !digits.empty() && digits.front() == '-';
    if (negative) digits.erase(0, 1);
    if (digits.empty()) digits = "0";
    BigInt den = ipow(BigInt(10), static_cast<unsigned>(text.size() - dot - 1));
    Rational r(BigInt(digits), den);
    return negative ? Rational(-r) : r;
}

} // namespace dicycle
