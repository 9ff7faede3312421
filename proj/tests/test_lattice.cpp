#include <doctest.h>

#include <random>

#include "cmv/lattice.hpp"

using namespace cmv;

namespace {

std::map<Rational, std::int64_t> box_counts(const RMat& g, const RVec& coset, const Rational& bound, int box) {
  std::map<Rational, std::int64_t> out;
  const std::size_t n = g.size();
  std::vector<int> idx(n, -box);
  while (true) {
    RVec x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = coset[i] + idx[i];
    const Rational q = bilinear(g, x, x) / 2;
    if (q <= bound) ++out[q];
    std::size_t i = 0;
    while (i < n && ++idx[i] > box) idx[i++] = -box;
    if (i == n) break;
  }
  return out;
}

const char* kGlued14 =
    "d 7\n"
    "ideal unit\n"
    "gram 14\n"
    "glue 1/7 1/7 5/7\n";

}  // namespace

TEST_CASE("ideal lattices") {
  const QuadField f7 = QuadField::make(7);
  const IdealLattice unit = IdealLattice::make(f7, "unit");
  CHECK(unit.norm() == 1);
  CHECK(unit.cosets().size() == 7);
  int zero_at_7 = 0;
  for (auto& c : unit.cosets()) zero_at_7 += c.local_zero.at(7);
  CHECK(zero_at_7 == 1);
  CHECK(unit.q_element({1, 0}) == -1);

  const IdealLattice p2 = IdealLattice::make(f7, "prime:2");
  CHECK(p2.norm() == 2);
  CHECK(p2.cosets().size() == 7);
  CHECK(IdealLattice::make(f7, "prime:3").norm() == 9);

  CHECK_THROWS_AS(IdealLattice::make(f7, "basis:1,0,0,2"), LatticeError);
  CHECK_THROWS_AS(IdealLattice::make(f7, "basis:1,0,2,0"), LatticeError);
  CHECK_THROWS_AS(IdealLattice::make(f7, "cube"), LatticeError);
}

TEST_CASE("dual cosets of d = 15 factor through CRT") {
  const IdealLattice lat = IdealLattice::make(QuadField::make(15), "unit");
  REQUIRE(lat.cosets().size() == 15);
  int z3 = 0, z5 = 0, both = 0;
  for (auto& c : lat.cosets()) {
    z3 += c.local_zero.at(3);
    z5 += c.local_zero.at(5);
    both += c.local_zero.at(3) && c.local_zero.at(5);
    CHECK(c.local_zero.at(3) == (c.label % 3 == 0));
    CHECK(c.local_zero.at(5) == (c.label % 5 == 0));
  }
  CHECK(z3 == 5);
  CHECK(z5 == 3);
  CHECK(both == 1);
}

TEST_CASE("Q on dual cosets") {
  for (std::int64_t d : {7, 15, 23}) {
    const QuadField f = QuadField::make(d);
    for (const std::string spec : {"unit", "prime:2", "prime:3"}) {
      const IdealLattice lat = IdealLattice::make(f, spec);
      CHECK(lat.coset(0).q_mod_one == 0);
      for (auto& c : lat.cosets()) {
        CHECK(Rational(d) * c.q_mod_one == floor_of(Rational(d) * c.q_mod_one));
        CHECK(frac(lat.q(c.coords)) == c.q_mod_one);
        // Labels are additive: the group is cyclic with generator label 1.
        for (auto& e : lat.cosets())
          CHECK(lat.label_of(add(c.coords, e.coords)) == (c.label + e.label) % d);
      }
    }
  }
  // mu = 1/sqrt(-7) mod O_k has Q(mu) = -1/7 = 6/7 mod 1.
  const IdealLattice unit = IdealLattice::make(QuadField::make(7), "unit");
  const KElement inv_sqrt{Rational(1, 7), Rational(-2, 7)};
  CHECK(k_mul(inv_sqrt, {Rational(-1), Rational(2)}, 7) == KElement{1, 0});
  const int label = unit.label_of(unit.coords_of(inv_sqrt));
  CHECK(unit.coset(label).q_mod_one == Rational(6, 7));
}

TEST_CASE("vector counts on positive lattices") {
  const PosLattice z = PosLattice::make({{Rational(2)}});
  CHECK(z.count_vectors({Rational(0)}, 0) == 1);
  CHECK(z.count_vectors({Rational(0)}, 1) == 2);
  CHECK(z.count_vectors({Rational(0)}, -1) == 0);
  const auto theta = z.theta_counts({Rational(0)}, 2500);
  for (std::int64_t m = 0; m <= 2500; ++m) {
    std::int64_t r = 0;
    while ((r + 1) * (r + 1) <= m) ++r;
    const std::int64_t want = m == 0 ? 1 : (r * r == m ? 2 : 0);
    CHECK((theta.count(m) ? theta.at(m) : 0) == want);
  }
  const PosLattice a2 = PosLattice::make({{Rational(2), Rational(1)}, {Rational(1), Rational(2)}});
  CHECK(a2.count_vectors({Rational(0), Rational(0)}, 1) == 6);
  CHECK(a2.dual_cosets().size() == 3);
  CHECK_THROWS_AS(PosLattice::make({{Rational(2), Rational(3)}, {Rational(3), Rational(2)}}), LatticeError);
  CHECK_THROWS_AS(PosLattice::make({{Rational(0)}}), LatticeError);
}

TEST_CASE("enumeration agrees with a box search") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 40; ++i) {
    const std::int64_t a = 1 + rng() % 4, c = 1 + rng() % 4;
    std::int64_t b = static_cast<std::int64_t>(rng() % 5) - 2;
    if (b * b >= 4 * a * c) b = 0;
    const RMat g{{Rational(2 * a), Rational(b)}, {Rational(b), Rational(2 * c)}};
    const PosLattice lat = PosLattice::make(g);
    for (auto& coset : lat.dual_cosets()) {
      const Rational bound(6);
      const auto got = lat.theta_counts(coset, bound);
      CHECK(got == box_counts(g, coset, bound, 8));
      const auto vecs = lat.enumerate(coset, bound);
      for (std::size_t k = 1; k < vecs.size(); ++k) CHECK(lex_less(vecs[k - 1].x, vecs[k].x));
    }
  }
}

TEST_CASE("split lattices") {
  const IdealLattice unit = IdealLattice::make(QuadField::make(7), "unit");
  const SplitLattice triv = SplitLattice::trivial(unit);
  CHECK(triv.glue().size() == 1);
  CHECK(triv.etas().size() == 7);
  for (auto& e : triv.etas()) CHECK(e.components.size() == 1);

  const SplitLattice plain = SplitLattice::make(PosLattice::make({{Rational(2)}}), unit, {});
  CHECK(plain.etas().size() == 14);
  CHECK(plain.glue().size() == 1);

  const SplitLattice glued = parse_lattice(kGlued14);
  CHECK(glued.glue().size() == 7);
  CHECK(glued.etas().size() == 2);
  for (auto& e : glued.etas()) {
    CHECK(e.components.size() == 7);
    CHECK(glued.label_of(e.rep) == e.label);
  }
  const RVec g{Rational(1, 7), Rational(1, 7), Rational(5, 7)};
  CHECK(glued.contains(g));
  CHECK(frac(glued.q(g)) == 0);
  CHECK_FALSE(glued.contains({Rational(1, 14), Rational(0), Rational(0)}));
  CHECK_FALSE(glued.label_of({Rational(1, 14), Rational(0), Rational(0)}).has_value());  // pairs to 1/7 with g
  CHECK(glued.label_of({Rational(1, 2), Rational(0), Rational(0)}) == std::optional<int>(1));
  CHECK_FALSE(glued.label_of({Rational(1, 28), Rational(0), Rational(0)}).has_value());

  CHECK(parse_lattice(serialize_lattice(glued)).etas().size() == 2);
  CHECK(serialize_lattice(parse_lattice(serialize_lattice(glued))) == serialize_lattice(glued));
}

TEST_CASE("malformed lattices") {
  CHECK_THROWS_AS(parse_lattice("d 7\ngram 14\nglue 1/7 0 0\n"), LatticeError);      // not isotropic
  CHECK_THROWS_AS(parse_lattice("d 7\ngram 14\nglue 1/28 0 0\n"), LatticeError);     // not in the dual
  CHECK_THROWS_AS(parse_lattice("d 7\ngram 3\n"), LatticeError);                     // odd
  CHECK_THROWS_AS(parse_lattice("d 7\nrank 2\ngram 2\n"), LatticeError);
  CHECK_THROWS_AS(parse_lattice("gram 2\n"), LatticeError);
  CHECK_THROWS_AS(parse_lattice("d 7\ncolour red\n"), LatticeError);
  CHECK_THROWS_AS(parse_lattice("d 7\ngram 14\nglue 1/7 1/7\n"), LatticeError);
}

TEST_CASE("field arithmetic in the omega basis") {
  const std::int64_t d = 23;
  const KElement omega{0, 1};
  // omega^2 = omega - (1+d)/4.
  CHECK(k_mul(omega, omega, d) == KElement{Rational(-6), Rational(1)});
  CHECK(k_norm(omega, d) == 6);
  CHECK(k_norm({Rational(2), Rational(-1)}, d) == 4 - 2 + 6);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    auto r = [&] { return Rational(static_cast<std::int64_t>(rng() % 21) - 10, 1 + rng() % 3); };
    const KElement a{r(), r()}, b{r(), r()};
    CHECK(k_norm(k_mul(a, b, d), d) == k_norm(a, d) * k_norm(b, d));
    CHECK(k_trace_pair(a, a, d) == 2 * k_norm(a, d));
  }
}
