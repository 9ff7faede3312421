#include <doctest.h>

#include "cmv/cmvalue.hpp"
#include "cmv/verify.hpp"

using namespace cmv;

namespace {

FourierForm form_over(std::shared_ptr<const SplitLattice> sl, std::map<FourierForm::Key, Rational> c) {
  return FourierForm(std::move(sl), "test", std::move(c));
}

std::shared_ptr<const SplitLattice> rank1(std::int64_t d, std::int64_t two_a) {
  const IdealLattice unit = IdealLattice::make(QuadField::make(d), "unit");
  return std::make_shared<const SplitLattice>(SplitLattice::make(PosLattice::make({{Rational(two_a)}}), unit, {}));
}

}  // namespace

TEST_CASE("contraction coefficients") {
  const auto sl = rank1(7, 2);
  const FourierForm F = form_over(sl, {{{0, -1}, 1}});
  const auto C = contraction_coeffs(F);
  CHECK(C.at({0, 0, Rational(0)}) == 2);
  CHECK(C.at({0, 0, Rational(-1)}) == 1);
  CHECK(c00_contraction(F) == 2);

  const auto triv = std::make_shared<const SplitLattice>(
      SplitLattice::trivial(IdealLattice::make(QuadField::make(7), "unit")));
  const FourierForm G = form_over(triv, {{{0, -1}, 3}, {{0, 0}, 5}});
  const auto CG = contraction_coeffs(G);
  CHECK(CG.at({0, 0, Rational(-1)}) == 3);
  CHECK(CG.at({0, 0, Rational(0)}) == 5);
  CHECK(c00_contraction(G) == 5);

  const FourierForm H = parse_form("d=7\nlattice=glued14.lat\n0 -1 1\n0 0 2\n", CMV_DATA_DIR);
  CHECK(c00_contraction(H) == 2);
  CHECK(c00_contraction(H) == verify::brute_force_c00(H));
}

TEST_CASE("kappa over eta classes") {
  const auto sl = rank1(7, 2);
  const IdealLattice& unit = sl->minus();
  const KappaValue k = kappa_eta(*sl, 0, 1);
  KappaValue want = kappa_at(unit, unit.coset(0), 1);
  want += Rational(2) * kappa_at(unit, unit.coset(0), 0);
  CHECK(k == want);
  CHECK(k.kzero_multiple == 2);
  CHECK(kappa_eta(*sl, 0, -1).is_zero());

  const auto triv = std::make_shared<const SplitLattice>(SplitLattice::trivial(unit));
  for (int mu = 0; mu < 7; ++mu)
    for (std::int64_t a = 0; a <= 70; ++a)
      CHECK(kappa_eta(*triv, mu, Rational(a, 7)) == kappa_at(unit, unit.coset(mu), Rational(a, 7)));
}

TEST_CASE("averages over the CM cycle") {
  const auto triv = std::make_shared<const SplitLattice>(
      SplitLattice::trivial(IdealLattice::make(QuadField::make(7), "unit")));
  const PhiAverage stub = phi_average(form_over(triv, {{{0, -1}, 1}}));
  CHECK(stub.integral.log_part == FactoredLog::log_of(7, -4));
  CHECK(stub.integral.kzero_multiple == 0);
  CHECK(stub.cycle_sum == stub.integral);
  CHECK(stub.vol_KT == 2);

  const PhiAverage with_const = phi_average(form_over(triv, {{{0, -1}, 1}, {{0, 0}, 3}}));
  CHECK(with_const.integral.kzero_multiple == 6);
  CHECK(with_const.integral.log_part == FactoredLog::log_of(7, -4));

  CHECK(phi_average(form_over(triv, {{{0, 1}, 9}})).sum.is_zero());
  CHECK(phi_average(form_over(triv, {{{0, -1}, 1}}), Rational(1, 3)).cycle_sum.log_part == FactoredLog::log_of(7, -24));
  CHECK_THROWS(phi_average(form_over(triv, {{{0, -1}, 1}}), Rational(0)));
}

TEST_CASE("linearity and the reduction to ideal lattices") {
  const auto corpus = verify::random_corpus(99, 30);
  for (std::size_t i = 0; i + 1 < corpus.size(); ++i) {
    const FourierForm& F = corpus[i];
    const PhiAverage a = phi_average(F);
    const PhiAverage b = phi_average(F.scaled(Rational(-3)));
    CHECK(b.sum == Rational(-3) * a.sum);
    CHECK(phi_average(F.plus(F)).sum == Rational(2) * a.sum);
    if (F.lattice().n() == 0) {
      KappaValue direct;
      for (auto& [eta, m, c] : F.nonpositive_part())
        direct += c * kappa_at(F.lattice().minus(), F.lattice().minus().coset(eta), -m);
      CHECK(a.sum == direct);
    }
    CHECK(c00_contraction(F) == verify::brute_force_c00(F));
  }
}

TEST_CASE("reports") {
  const FourierForm stub = parse_form("d=7\nlattice=unit\n0 -1 1\n");
  const CMValueReport r = log_psi_product(stub, std::nullopt, 30);
  CHECK(r.rational_part == FactoredLog::log_of(7, 2));
  CHECK(r.rational_part.exponentiates_to_rational());
  CHECK(r.c00 == 0);
  CHECK(r.kzero_coeff == 0);
  CHECK(r.degree == 2);
  CHECK(r.exponents_sign_definite);
  CHECK(r.integrality_hypothesis);
  CHECK_FALSE(r.vol_overridden);
  REQUIRE(r.numeric);
  {
    ScopedPrecision scope(60);
    CHECK(Real(abs(*r.numeric - 2 * real_log(7))) < real_pow10(-30));
  }
  CHECK(check_prime_support(r, stub).ok);

  const FourierForm glued = load_form(std::string(CMV_DATA_DIR) + "/glued14.form");
  const CMValueReport g = log_psi_product(glued, std::nullopt, 40);
  CHECK(g.c00 == 2);
  CHECK(g.transcendental_exponent == 2);
  CHECK(g.kzero_coeff == -2);
  CHECK_FALSE(g.integrality_hypothesis);
  REQUIRE(g.base);
  CHECK(g.base->agree);
  {
    ScopedPrecision scope(70);
    const Real want = evaluate(g.rational_part) + real_from(g.transcendental_exponent) * log(g.base->direct);
    CHECK(Real(abs(*g.numeric - want)) < real_pow10(-35));
  }

  const FourierForm d15 = load_form(std::string(CMV_DATA_DIR) + "/stub15.form");
  const CMValueReport r15 = log_psi_product(d15);
  CHECK(r15.h == 2);
  CHECK(r15.degree == 4);
  CHECK(r15.vol_KT == 1);
  CHECK(check_prime_support(r15, d15).ok);
  CHECK(log_psi_product(d15, Rational(3)).vol_overridden);
}

TEST_CASE("prime support") {
  const QuadField f = QuadField::make(7);
  CHECK(check_prime_support(FactoredLog::log_of(7, 4), f, 1).ok);
  CHECK(check_prime_support(FactoredLog::log_of(3, -4), f, 1).ok);
  CHECK(check_prime_support(FactoredLog::log_of(5), f, Rational(5, 7)).ok);
  const SupportCheck small = check_prime_support(FactoredLog::log_of(5), f, Rational(4, 7));
  CHECK_FALSE(small.ok);
  CHECK(small.violations == std::vector<Prime>{5});
  const SupportCheck split = check_prime_support(FactoredLog::log_of(2) + FactoredLog::log_of(11), f, 10);
  CHECK_FALSE(split.ok);
  CHECK(split.violations == std::vector<Prime>{2, 11});
}
