#include <doctest.h>

#include <numeric>

#include "cmv/quadfield.hpp"

using namespace cmv;

namespace {

int count_reduced_forms(std::int64_t d) {
  int h = 0;
  for (std::int64_t a = 1; 3 * a * a <= d; ++a)
    for (std::int64_t b = -a + 1; b <= a; ++b) {
      if ((b * b + d) % (4 * a)) continue;
      const std::int64_t c = (b * b + d) / (4 * a);
      if (c < a) continue;
      if (c == a && b < 0) continue;
      if (std::gcd(std::gcd(a, std::abs(b)), c) != 1) continue;
      ++h;
    }
  return h;
}

bool minus_d_is_square_mod(std::int64_t d, std::int64_t p) {
  const std::int64_t m = p == 2 ? 8 : p;
  for (std::int64_t x = 0; x < m; ++x)
    if (((x * x + d) % m) == 0) return true;
  return false;
}

int chi_by_ideal_count(std::int64_t d, std::int64_t n) {
  // chi(n) for a prime n from the splitting of x^2 + x + (1+d)/4.
  if (d % n == 0) return 0;
  int roots = 0;
  const std::int64_t c = (1 + d) / 4;
  for (std::int64_t x = 0; x < n; ++x)
    if ((x * x + x + c) % n == 0) ++roots;
  return roots - 1;
}

std::int64_t divisor_sum_rho(std::int64_t d, std::int64_t t) {
  std::int64_t s = 0;
  for (std::int64_t n = 1; n <= t; ++n) {
    if (t % n) continue;
    int chi = 1;
    std::int64_t m = n;
    for (std::int64_t p = 2; p <= m; ++p)
      while (m % p == 0) m /= p, chi *= chi_by_ideal_count(d, p);
    s += chi;
  }
  return s;
}

Real close_enough(unsigned digits) { return real_pow10(-static_cast<int>(digits)); }

}  // namespace

TEST_CASE("class numbers") {
  CHECK(QuadField::make(7).class_number() == 1);
  CHECK(QuadField::make(23).class_number() == 3);
  CHECK(QuadField::make(15).class_number() == 2);
  for (std::int64_t d : {11, 19, 31, 35, 39, 43, 47, 51, 55, 59, 67, 71, 79, 83, 163, 231, 255})
    CHECK(QuadField::make(d).class_number() == count_reduced_forms(d));
  CHECK(reduced_forms(7) == std::vector<ReducedForm>{{1, 1, 2}});
  CHECK(reduced_forms(23).size() == 3);
  CHECK(reduced_forms(3) == std::vector<ReducedForm>{{1, 1, 1}});
}

TEST_CASE("unsupported fields") {
  CHECK_THROWS_AS(QuadField::make(3), UnsupportedDiscriminant);
  CHECK_THROWS_AS(QuadField::make(8), UnsupportedDiscriminant);
  CHECK_THROWS_AS(QuadField::make(5), UnsupportedDiscriminant);
  CHECK_THROWS_AS(QuadField::make(63), UnsupportedDiscriminant);
  CHECK_THROWS_AS(QuadField::make(-7), UnsupportedDiscriminant);
}

TEST_CASE("local character") {
  const QuadField f = QuadField::make(7);
  CHECK(f.chi(-1, 7) == -1);
  CHECK(f.chi(-3, 7) == 1);
  CHECK(f.chi(4, 3) == 1);
  CHECK(f.chi(Rational(-4), 7) == -1);
  // Product formula over all places.
  for (std::int64_t t = 1; t <= 200; ++t) {
    int prod = f.chi(t, kInfinity);
    for (Prime p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
                    101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193,
                    197, 199})
      prod *= f.chi(t, p);
    CHECK(prod == 1);
  }
}

TEST_CASE("splitting types") {
  CHECK(splitting_type(7, 7) == Splitting::ramified);
  CHECK(splitting_type(7, 3) == Splitting::inert);
  CHECK(splitting_type(7, 2) == Splitting::split);
  for (std::int64_t d : {7, 15, 23, 31})
    for (Prime p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31}) {
      const Splitting want = d % p == 0 ? Splitting::ramified
                             : minus_d_is_square_mod(d, p) ? Splitting::split
                                                            : Splitting::inert;
      CHECK(splitting_type(d, p) == want);
      CHECK(QuadField::make(d).chi_of_prime(p) == chi_by_ideal_count(d, p));
    }
}

TEST_CASE("ideal counts") {
  const QuadField f = QuadField::make(7);
  CHECK(f.rho(1) == 1);
  CHECK(f.rho(4) == 3);
  CHECK(f.rho(3) == 0);
  CHECK(f.rho(Rational(3, 7)) == 0);
  CHECK(f.rho(0) == 0);
  CHECK(f.rho(-2) == 0);
  for (std::int64_t d : {15, 23})
    for (std::int64_t t = 1; t <= 300; ++t) CHECK(QuadField::make(d).rho(t) == divisor_sum_rho(d, t));
}

TEST_CASE("L(1) matches the class number formula") {
  for (std::int64_t d : {7, 15, 23}) {
    const QuadField f = QuadField::make(d);
    ScopedPrecision scope(100);
    const Real want = real_pi() * f.class_number() / sqrt(Real(d));
    CHECK(Real(abs(L_at_one(f, 60) - want)) < close_enough(55));
  }
  ScopedPrecision scope(40);
  CHECK(Real(abs(L_at_one(QuadField::make(7), 20) - Real("1.18741041172372"))) < Real("1e-13"));
}

TEST_CASE("two routes to L'(0)/L(0) and the k0 constant") {
  for (std::int64_t d : {7, 11, 15, 23, 31}) {
    const QuadField f = QuadField::make(d);
    const unsigned prec = 50;
    ScopedPrecision scope(prec + kGuardDigits);
    const Real cs = chowla_selberg_log_deriv(f, prec);
    const Real series = log_deriv_at_zero_series(f, prec);
    CAPTURE(d);
    CHECK(Real(abs(cs - series)) < close_enough(prec - 10));
    CHECK(Real(abs(cs - (chowla_selberg_gamma_sum(f, prec) - real_log(d)))) < close_enough(prec - 10));
    // k0 = log d + 2 L'(1)/L(1) - log pi - gamma equals log(4 pi/d) + gamma - 2 L'(0)/L(0).
    const Real k0 = kappa_zero_constant(f, prec).value;
    const Real direct =
        real_log(d) + 2 * L_deriv_at_one(f, prec) / L_at_one(f, prec) - log(real_pi()) - real_euler_gamma();
    CHECK(Real(abs(k0 - direct)) < close_enough(prec - 10));
    const Real other = log(4 * real_pi() / d) + real_euler_gamma() - 2 * cs;
    CHECK(Real(abs(k0 - other)) < close_enough(prec - 10));
  }
}

TEST_CASE("k0 tags") {
  CHECK(kzero_tag(7) == "k0(d=7)");
  CHECK(parse_kzero_tag("k0(d=23)") == 23);
  CHECK_THROWS(parse_kzero_tag("k0(7)"));
  CHECK_THROWS(parse_kzero_tag("k0(d=07)"));
}
