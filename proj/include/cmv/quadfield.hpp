#pragma once

// Imaginary quadratic fields k = Q(sqrt(-d)) with -d an odd fundamental
// discriminant: character, splitting, ideal counting, class number, and the
// L-function constants feeding kappa(0, 0) and the transcendental factor.

#include <cstdint>
#include <string>
#include <vector>

#include "cmv/arith.hpp"
#include "cmv/precision.hpp"

namespace cmv {

class UnsupportedDiscriminant : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Splitting { split, inert, ramified };
std::string to_string(Splitting s);

/// Reduced primitive positive-definite form a x^2 + b x y + c y^2.
struct ReducedForm {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t c = 0;
  friend bool operator==(const ReducedForm&, const ReducedForm&) = default;
};

/// True when -d is an odd fundamental discriminant (d squarefree, d = 3 mod 4).
bool is_odd_fundamental(std::int64_t d);

/// Reduced forms of discriminant -d ordered by (a, b). Accepts every odd
/// fundamental -d, including d = 3.
std::vector<ReducedForm> reduced_forms(std::int64_t d);

/// Splitting of p in Q(sqrt(-d)) for any odd fundamental -d.
Splitting splitting_type(std::int64_t d, Prime p);

class QuadField {
 public:
  /// make_field: requires d > 3 squarefree with d = 3 (mod 4).
  static QuadField make(std::int64_t d);

  std::int64_t d() const { return d_; }
  std::int64_t discriminant() const { return -d_; }
  const std::vector<Prime>& ramified_primes() const { return ramified_; }
  std::int64_t class_number() const { return h_; }
  int roots_of_unity() const { return 2; }
  bool is_ramified(Prime p) const { return d_ % p == 0; }

  /// Global character at a prime: Kronecker (-d | p), zero when p | d.
  int chi_of_prime(Prime p) const;
  /// Local character chi_p(t) = (t, -d)_p; p may be kInfinity.
  int chi(const Rational& t, Prime p) const;
  Splitting splitting(Prime p) const;

  /// rho_p(p^a): number of integral ideals of norm p^a.
  std::int64_t rho_local(Prime p, int a) const;
  /// rho(t) = #{integral ideals of norm t}; zero unless t is a positive integer.
  std::int64_t rho(const Rational& t) const;

 private:
  explicit QuadField(std::int64_t d);

  std::int64_t d_;
  std::vector<Prime> ramified_;
  std::int64_t h_ = 0;
};

/// L(1, chi_d) from the character series, summed period by period with an
/// Euler-Maclaurin tail and an explicit remainder bound.
Real L_at_one(const QuadField& field, unsigned prec);
/// L'(1, chi_d) by the same summation.
Real L_deriv_at_one(const QuadField& field, unsigned prec);

/// L'(0)/L(0) through Lerch's formula with log Gamma at a/d (the
/// Chowla-Selberg route):  -log d + (w / 2h) sum_a chi(a) log Gamma(a/d).
Real chowla_selberg_log_deriv(const QuadField& field, unsigned prec);

/// (w / 2h) sum_a chi(a) log Gamma(a/d), the bare Gamma-sum.
Real chowla_selberg_gamma_sum(const QuadField& field, unsigned prec);

/// L'(0)/L(0) from the series values at s = 1 and the functional equation:
/// log(2 pi / d) + gamma - L'(1)/L(1).  Independent of log Gamma.
Real log_deriv_at_zero_series(const QuadField& field, unsigned prec);

/// log d + 2 Lambda'(1)/Lambda(1) for Lambda(s) = pi^{-(s+1)/2} Gamma((s+1)/2) L(s).
struct KZeroConstant {
  Real value;
  std::string tag;  // "k0(d=<d>)"
};
KZeroConstant kappa_zero_constant(const QuadField& field, unsigned prec);

/// Symbolic tag of k0 for a field, used in KappaValue serialization.
std::string kzero_tag(std::int64_t d);
/// Inverse of kzero_tag; throws std::invalid_argument on malformed tags.
std::int64_t parse_kzero_tag(const std::string& tag);

}  // namespace cmv
