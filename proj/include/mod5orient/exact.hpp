#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace mod5 {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// n!, cached across calls. Thread-safe.
const BigInt& factorial(std::int64_t n);

BigInt binomial(std::int64_t n, std::int64_t k);

// Falling factorial n (n-1) ... (n-k+1).
BigInt falling_factorial(std::int64_t n, std::int64_t k);

BigInt int_pow(const BigInt& base, std::int64_t exp);
Rational rational_pow(const Rational& base, std::int64_t exp);

double to_double(const Rational& r);

// Natural log of a positive integer / rational, usable far beyond double range.
double log_big(const BigInt& x);
double log_big(const Rational& r);

// "num/den" (or just "num" when den == 1).
std::string rational_string(const Rational& r);
Rational parse_rational(std::string_view text);

}  // namespace mod5
