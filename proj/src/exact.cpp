#include "mod5orient/exact.hpp"

#include <cmath>
#include <deque>
#include <mutex>

namespace mod5 {

namespace {
std::mutex fact_mutex;
// deque keeps element addresses stable while the cache grows, so returned
// references survive later extensions
std::deque<BigInt> fact_cache{BigInt(1)};  // fact_cache[i] = i!
}  // namespace

const BigInt& factorial(std::int64_t n) {
  if (n < 0) throw std::invalid_argument("factorial: negative argument");
  std::lock_guard<std::mutex> lock(fact_mutex);
  while (static_cast<std::int64_t>(fact_cache.size()) <= n) {
    fact_cache.push_back(fact_cache.back() * static_cast<std::int64_t>(fact_cache.size()));
  }
  return fact_cache[static_cast<std::size_t>(n)];
}

BigInt binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return BigInt(0);
  k = std::min(k, n - k);
  BigInt result = 1;
  for (std::int64_t i = 0; i < k; ++i) {
    result *= (n - i);
    result /= (i + 1);  // exact: product of j consecutive integers is divisible by j!
  }
  return result;
}

BigInt falling_factorial(std::int64_t n, std::int64_t k) {
  if (k < 0) throw std::invalid_argument("falling_factorial: negative k");
  BigInt result = 1;
  for (std::int64_t i = 0; i < k; ++i) result *= (n - i);
  return result;
}

BigInt int_pow(const BigInt& base, std::int64_t exp) {
  if (exp < 0) throw std::invalid_argument("int_pow: negative exponent");
  BigInt result = 1, b = base;
  while (exp > 0) {
    if (exp & 1) result *= b;
    b *= b;
    exp >>= 1;
  }
  return result;
}

Rational rational_pow(const Rational& base, std::int64_t exp) {
  if (exp < 0) {
    if (base == 0) throw std::domain_error("rational_pow: zero to negative power");
    Rational inv(denominator(base), numerator(base));
    return rational_pow(inv, -exp);
  }
  Rational result = 1, b = base;
  while (exp > 0) {
    if (exp & 1) result *= b;
    b *= b;
    exp >>= 1;
  }
  return result;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

double log_big(const BigInt& x) {
  if (x <= 0) throw std::domain_error("log_big: non-positive argument");
  const auto bits = msb(x);  // index of highest set bit
  if (bits <= 52) return std::log(x.convert_to<double>());
  const BigInt top = x >> (bits - 52);
  return std::log(top.convert_to<double>()) + static_cast<double>(bits - 52) * std::log(2.0);
}

double log_big(const Rational& r) {
  if (r <= 0) throw std::domain_error("log_big: non-positive argument");
  return log_big(numerator(r)) - log_big(denominator(r));
}

std::string rational_string(const Rational& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) {
    s += "/";
    s += denominator(r).str();
  }
  return s;
}

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string_view::npos) return Rational(BigInt(std::string(text)));
    BigInt num{std::string(text.substr(0, slash))};
    BigInt den{std::string(text.substr(slash + 1))};
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
  } catch (const std::exception&) {
    throw std::invalid_argument("parse_rational: bad input '" + std::string(text) + "'");
  }
}

}  // namespace mod5
