#include "cmv/precision.hpp"

#include <sstream>

#include <mpfr.h>

namespace cmv {

ScopedPrecision::ScopedPrecision(unsigned digits) : saved_(Real::default_precision()) {
  Real::default_precision(digits);
}

ScopedPrecision::~ScopedPrecision() { Real::default_precision(saved_); }

Real real_pi() {
  Real r;
  mpfr_const_pi(r.backend().data(), MPFR_RNDN);
  return r;
}

Real real_euler_gamma() {
  Real r;
  mpfr_const_euler(r.backend().data(), MPFR_RNDN);
  return r;
}

Real real_log(const Real& x) { return boost::multiprecision::log(x); }

Real real_log(std::int64_t n) { return boost::multiprecision::log(Real(n)); }

Real real_from(const Rational& r) {
  Real num(numerator_of(r));
  Real den(denominator_of(r));
  return num / den;
}

Real real_pow10(int e) { return boost::multiprecision::pow(Real(10), e); }

Real evaluate(const FactoredLog& f) {
  Real sum = 0;
  for (auto& [p, e] : f.terms()) sum += real_from(e) * real_log(p);
  return sum;
}

std::string format_real(const Real& x, unsigned digits) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

}  // namespace cmv
