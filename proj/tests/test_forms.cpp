#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "cmv/forms.hpp"

using namespace cmv;

namespace {

FormError::Kind kind_of(const std::string& text) {
  try {
    parse_form(text);
  } catch (const FormError& e) {
    return e.kind();
  }
  FAIL("no FormError for:\n" << text);
  return FormError::Kind::malformed;
}

std::vector<BigInt> delta_by_product(std::size_t n) {
  // q prod (1 - q^k)^24, coefficients of q^1 .. q^n.
  std::vector<BigInt> c(n, 0);
  c[0] = 1;
  for (std::size_t k = 1; k < n; ++k)
    for (int r = 0; r < 24; ++r)
      for (std::size_t i = n - 1; i >= k; --i) c[i] -= c[i - k];
  return c;
}

BigInt sigma(std::int64_t n, int power) {
  BigInt s = 0;
  for (std::int64_t k = 1; k <= n; ++k)
    if (n % k == 0) {
      BigInt p = 1;
      for (int i = 0; i < power; ++i) p *= k;
      s += p;
    }
  return s;
}

}  // namespace

TEST_CASE("valid forms") {
  const FourierForm F = parse_form("d=7\nlattice=unit\n0 -1 1\n0 0 24\n");
  CHECK(F.d() == 7);
  CHECK(F.coeff(0, -1) == 1);
  CHECK(F.coeff(0, 0) == 24);
  CHECK(F.coeff(3, Rational(-1, 7)) == 0);
  CHECK(F.principal_part().size() == 1);
  CHECK(F.nonpositive_part().size() == 2);
  CHECK(m_max(F) == 1);
  const FourierForm G = F.scaled(2).plus(F);
  CHECK(G.coeff(0, 0) == 72);
  CHECK(parse_form("# comment\nd=15\nlattice=prime:2\n\n0 -1 3 # trailing\n").coeff(0, -1) == 3);
}

TEST_CASE("invalid forms") {
  CHECK(kind_of("d=7\nlattice=unit\n0 -1 1/2\n") == FormError::Kind::integrality);
  CHECK(kind_of("d=7\nlattice=unit\n0 -1/7 1\n") == FormError::Kind::congruence);
  CHECK(kind_of("lattice=unit\n0 -1 1\n") == FormError::Kind::malformed);
  CHECK(kind_of("d=7\nlattice=unit\n0 -1\n") == FormError::Kind::malformed);
  CHECK(kind_of("d=7\nlattice=unit\n0 -1 1\n0 -1 2\n") == FormError::Kind::malformed);
  CHECK(kind_of("d=7\nlattice=unit\n9 -1 1\n") == FormError::Kind::malformed);
  CHECK(kind_of("d=7\nlattice=nowhere.lat\n0 -1 1\n") == FormError::Kind::malformed);
  CHECK(kind_of("d=8\nlattice=unit\n0 -1 1\n") == FormError::Kind::malformed);
  std::string big = "d=7\nlattice=unit\n";
  for (std::size_t k = 1; k <= kMaxPrincipalRecords + 1; ++k) big += "0 -" + std::to_string(k) + " 1\n";
  CHECK(kind_of(big) == FormError::Kind::infinite_principal_part);
  // Positive-index coefficients need not be integral.
  CHECK_NOTHROW(parse_form("d=7\nlattice=unit\n0 -1 1\n0 1 1/3\n"));
}

TEST_CASE("largest pole order") {
  const IdealLattice unit = IdealLattice::make(QuadField::make(7), "unit");
  int eta = -1;
  for (auto& c : unit.cosets())
    if (c.q_mod_one == Rational(3, 7)) eta = c.label;
  REQUIRE(eta > 0);
  CHECK(m_max(parse_form("d=7\nlattice=unit\n" + std::to_string(eta) + " -3/7 1\n0 -2 1\n")) == 2);
  CHECK(m_max(parse_form("d=7\nlattice=unit\n0 -1 1\n")) == 1);
  CHECK(m_max(parse_form("d=7\nlattice=unit\n0 0 5\n0 1 7\n")) == 0);
}

TEST_CASE("files round-trip") {
  const auto dir = std::filesystem::temp_directory_path() / "cmv_forms_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "g.lat") << "d 7\ngram 14\nglue 1/7 1/7 5/7\n";
    std::ofstream(dir / "f.form") << "d=7\nlattice=g.lat\n0 -1 1\n1 -3/4 -3\n0 0 2\n";
  }
  const FourierForm F = load_form((dir / "f.form").string());
  CHECK(F.lattice().etas().size() == 2);
  CHECK(F.coeff(1, Rational(-3, 4)) == -3);
  const std::string saved = save_form(F);
  const FourierForm G = parse_form(saved, dir.string());
  CHECK(G.coeffs() == F.coeffs());
  CHECK(save_form(G) == saved);
  std::filesystem::remove_all(dir);
}

TEST_CASE("classical q-expansions") {
  CHECK(classical_qexp("delta", 3).to_string() == "q - 24*q^2 + 252*q^3");
  CHECK(classical_qexp("j", 2).to_string() == "q^-1 + 744 + 196884*q");
  CHECK(classical_qexp("e4", 2).to_string() == "1 + 240*q");
  CHECK_THROWS(classical_qexp("e8", 3));

  const std::size_t N = 120;
  CHECK(classical_qexp("delta", N).coeffs() == delta_by_product(N));
  const QExpansion e4 = classical_qexp("e4", N), e6 = classical_qexp("e6", N);
  for (std::size_t n = 1; n < N; ++n) {
    CHECK(e4.coeff(static_cast<int>(n)) == 240 * sigma(static_cast<std::int64_t>(n), 3));
    CHECK(e6.coeff(static_cast<int>(n)) == -504 * sigma(static_cast<std::int64_t>(n), 5));
  }
  // 1728 delta = e4^3 - e6^2.
  const QExpansion lhs = (e4 * e4 * e4 - e6 * e6).truncated(N);
  const QExpansion delta = classical_qexp("delta", N);
  for (std::size_t n = 1; n < N; ++n) CHECK(lhs.coeff(static_cast<int>(n)) == 1728 * delta.coeff(static_cast<int>(n)));
}

TEST_CASE("series arithmetic") {
  const QExpansion delta = classical_qexp("delta", 60);
  const QExpansion one = (delta * delta.inverse()).truncated(60);
  CHECK(one.valuation() == 0);
  CHECK(one.coeff(0) == 1);
  for (int n = 1; n < 60; ++n) CHECK(one.coeff(n) == 0);
  const QExpansion j = classical_qexp("j", 59);
  const QExpansion e4 = classical_qexp("e4", 60);
  CHECK((e4 * e4 * e4 / delta).truncated(60) == j);
  CHECK_THROWS(j.coeff(500));
  CHECK_THROWS(QExpansion(0, {BigInt(2), BigInt(1)}).inverse());
}

TEST_CASE("j coefficients satisfy Lehner's congruences") {
  const auto c = j_coefficients(200);  // c[k] is the coefficient of q^(k-1)
  REQUIRE(c.size() == 201);
  CHECK(c[0] == 1);
  CHECK(c[1] == 744);
  CHECK(c[2] == 196884);
  CHECK(c[3] == 21493760);
  for (std::size_t n = 1; n < 200; ++n) {
    const BigInt& cn = c[n + 1];
    if (n % 2 == 0) CHECK(cn % 2048 == 0);
    if (n % 5 == 0) CHECK(cn % 25 == 0);
    if (n % 7 == 0) CHECK(cn % 7 == 0);
    if (n % 11 == 0) CHECK(cn % 11 == 0);
    CHECK(cn > 0);
  }
}
