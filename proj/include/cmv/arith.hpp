#pragma once

// Exact integer/rational primitives: factorization, valuations, Kronecker and
// local Hilbert symbols, and FactoredLog, the exact value type for finite
// rational combinations of log p.

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace cmv {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
using Prime = std::int64_t;

/// Place label for the archimedean place in local-symbol calls.
inline constexpr Prime kInfinity = 0;

class ArithmeticError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

Rational parse_rational(std::string_view text);
std::string format_rational(const Rational& r);

inline BigInt numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }
bool is_integer(const Rational& r);
std::int64_t to_int64(const BigInt& n);

bool is_prime(std::int64_t n);
bool is_squarefree(std::int64_t n);

/// Prime factorization with strictly increasing primes. factorize(1) is empty.
std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n);

/// Big-integer factorization: trial division, then Pollard-rho (Brent) on
/// cofactors above 10^12.
std::vector<std::pair<BigInt, int>> factorize(const BigInt& n);

/// ord_p(n) for n != 0.
int valuation(const BigInt& n, Prime p);
/// ord_p(t) for rational t != 0; throws ArithmeticError for t == 0.
int valuation(const Rational& t, Prime p);

/// Kronecker symbol (a|n) for n >= 1.
int kronecker(const BigInt& a, std::int64_t n);

/// Local quadratic Hilbert symbol (a, b)_p; pass kInfinity for the real place.
int hilbert_symbol(const Rational& a, const Rational& b, Prime p);

/// Exact finite combination sum_p e_p * log(p), e_p rational.
class FactoredLog {
 public:
  FactoredLog() = default;

  /// e * log(p).
  static FactoredLog log_of(Prime p, const Rational& e = 1);
  /// log |r| for a nonzero rational r.
  static FactoredLog of_rational(const Rational& r);
  /// Parses the "p^(a/b)*q^(c)" serialization; "1" is the empty combination.
  static FactoredLog parse(std::string_view text);

  const std::map<Prime, Rational>& terms() const { return terms_; }
  Rational exponent(Prime p) const;
  bool is_zero() const { return terms_.empty(); }
  std::vector<Prime> primes() const;

  FactoredLog& operator+=(const FactoredLog& other);
  FactoredLog& operator-=(const FactoredLog& other);
  FactoredLog& operator*=(const Rational& c);

  friend FactoredLog operator+(FactoredLog a, const FactoredLog& b) { return a += b; }
  friend FactoredLog operator-(FactoredLog a, const FactoredLog& b) { return a -= b; }
  friend FactoredLog operator*(const Rational& c, FactoredLog a) { return a *= c; }
  friend FactoredLog operator-(FactoredLog a) { return a *= Rational(-1); }
  friend bool operator==(const FactoredLog& a, const FactoredLog& b) { return a.terms_ == b.terms_; }

  /// Canonical serialization: "3^(2)*5^(-1/2)", empty -> "1".
  std::string serialize() const;
  /// Display form: "-2*log(7) + 1/2*log(3)", empty -> "0".
  std::string to_log_string() const;
  /// exp(this) rendered as a factored rational, e.g. "3^3 * 5^-1".
  std::string to_power_string() const;
  /// True when every exponent is an integer, i.e. exp(this) is rational.
  bool exponentiates_to_rational() const;

 private:
  void add_term(Prime p, const Rational& e);
  std::map<Prime, Rational> terms_;
};

FactoredLog flog_combine(std::span<const std::pair<Rational, FactoredLog>> parts);

}  // namespace cmv
