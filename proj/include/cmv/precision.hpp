#pragma once

// Arbitrary-precision reals (MPFR through Boost.Multiprecision) and the
// helpers shared by the analytic modules.

#include <stdexcept>
#include <string>

#include <boost/multiprecision/mpfr.hpp>

#include "cmv/arith.hpp"

namespace cmv {

using Real = boost::multiprecision::mpfr_float;

class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sets the default MPFR precision (decimal digits) for the enclosing scope.
class ScopedPrecision {
 public:
  explicit ScopedPrecision(unsigned digits);
  ~ScopedPrecision();
  ScopedPrecision(const ScopedPrecision&) = delete;
  ScopedPrecision& operator=(const ScopedPrecision&) = delete;

 private:
  unsigned saved_;
};

/// Guard digits added on top of every requested output precision.
inline constexpr unsigned kGuardDigits = 20;

Real real_pi();
Real real_euler_gamma();
Real real_log(const Real& x);
Real real_log(std::int64_t n);
Real real_from(const Rational& r);
Real real_pow10(int e);

/// sum_p e_p log p at the current default precision.
Real evaluate(const FactoredLog& f);

/// Fixed-notation rendering with `digits` significant digits.
std::string format_real(const Real& x, unsigned digits);

}  // namespace cmv
