#include <doctest.h>

#include "cmv/gzoracle.hpp"

using namespace cmv;

namespace {

bool near(const Real& x, const Real& y, int digits) { return Real(abs(x - y)) < real_pow10(-digits); }

}  // namespace

TEST_CASE("singular moduli of class number one") {
  ScopedPrecision scope(120);
  const std::vector<std::pair<std::int64_t, std::int64_t>> cube_roots{
      {3, 0}, {7, -15}, {11, -32}, {19, -96}, {43, -960}, {67, -5280}, {163, -640320}};
  for (auto& [d, r] : cube_roots) {
    const auto forms = reduced_forms(d);
    REQUIRE(forms.size() == 1);
    const Complex j = j_value(forms[0], d, 60);
    CAPTURE(d);
    CHECK(near(j.re, Real(r) * r * r, 40));
    CHECK(near(j.im, Real(0), 40));
  }
}

TEST_CASE("class polynomial of discriminant -23") {
  // H(x) = x^3 + 3491750 x^2 - 5151296875 x + 12771880859375.
  ScopedPrecision scope(120);
  Real sr = 0, si = 0, pr = 1, pi = 0;
  for (auto& f : reduced_forms(23)) {
    const Complex j = j_value(f, 23, 60);
    sr += j.re;
    si += j.im;
    const Real nr = pr * j.re - pi * j.im;
    pi = pr * j.im + pi * j.re;
    pr = nr;
  }
  CHECK(near(sr, Real(-3491750), 30));
  CHECK(near(si, Real(0), 30));
  CHECK(near(pr, Real("-12771880859375"), 25));
  CHECK(near(pi, Real(0), 25));
}

TEST_CASE("products of differences") {
  const GZResult a = gz_product(3, 7);
  CHECK(a.product == 3375);
  CHECK(a.factorization == std::vector<std::pair<BigInt, int>>{{3, 3}, {5, 3}});
  CHECK(a.log10_margin < -20);
  CHECK(gz_support_check(a).ok);

  const GZResult b = gz_product(7, 43);
  CHECK(b.product == 884732625);
  CHECK(b.factorization == std::vector<std::pair<BigInt, int>>{{3, 6}, {5, 3}, {7, 1}, {19, 1}, {73, 1}});
  CHECK(gz_support_check(b).ok);

  CHECK(gz_product(7, 3).product == -3375);
  // Swapping the discriminants multiplies by (-1)^(h1 h2).
  const GZResult c = gz_product(7, 23), c_swapped = gz_product(23, 7);
  CHECK(c_swapped.product == -c.product);
  const GZResult e = gz_product(15, 23), e_swapped = gz_product(23, 15);
  CHECK(e_swapped.product == e.product);
  CHECK(gz_support_check(c).ok);
  CHECK(gz_support_check(e).ok);

  CHECK_THROWS(gz_product(7, 7));
  CHECK_THROWS(gz_product(7, 21));
  CHECK_THROWS(gz_product(4, 7));
  CHECK_THROWS(gz_product(7, 8));
}

TEST_CASE("support check rejects split and large primes") {
  GZResult fake;
  fake.d1 = 3;
  fake.d2 = 7;
  fake.product = 11;
  fake.factorization = {{11, 1}};
  GZSupport s = gz_support_check(fake);
  CHECK_FALSE(s.ok);
  CHECK(s.violations == std::vector<BigInt>{11});

  fake.product = 17;
  fake.factorization = {{17, 1}};
  CHECK_FALSE(gz_support_check(fake).ok);  // inert in both fields but above 21/4
}
