#pragma once

// Singular moduli from the exact q-expansion of j and the product of their
// differences over two imaginary quadratic orders.

#include <cstdint>
#include <utility>
#include <vector>

#include "cmv/arith.hpp"
#include "cmv/precision.hpp"
#include "cmv/quadfield.hpp"

namespace cmv {

struct Complex {
  Real re;
  Real im;
};

class RoundingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// j((-b + sqrt(-d)) / 2a) to `prec` digits; the truncation of the q-series is
/// chosen from c(n) <= exp(4 pi sqrt n).
Complex j_value(const ReducedForm& form, std::int64_t d, unsigned prec);

struct GZResult {
  std::int64_t d1 = 0;
  std::int64_t d2 = 0;
  BigInt product;
  std::vector<std::pair<BigInt, int>> factorization;  // of |product|
  unsigned precision_used = 0;
  double log10_margin = 0;  // log10 of the larger of |x - round(x)| and |Im|
};

/// prod over reduced forms of (j(tau1) - j(tau2)); retries with doubled
/// working precision while the rounding test fails.
GZResult gz_product(std::int64_t d1, std::int64_t d2, unsigned prec = 64);

struct GZSupport {
  bool ok = true;
  std::vector<BigInt> violations;
};

/// Every prime factor is non-split in both fields and at most d1 d2 / 4.
GZSupport gz_support_check(const GZResult& result);

}  // namespace cmv
