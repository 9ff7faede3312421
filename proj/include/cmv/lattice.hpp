#pragma once

// Lattices on both sides of V = V+ (+) U: ideal lattices in Q(sqrt(-d)) with
// Q(x) = -N(x)/N(a), positive-definite lattices with vector enumeration, and
// glued lattices L with L+ (+) L- of finite index.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cmv/arith.hpp"
#include "cmv/quadfield.hpp"

namespace cmv {

using RVec = std::vector<Rational>;
using RMat = std::vector<RVec>;

class LatticeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

BigInt floor_of(const Rational& r);
/// r - floor(r), in [0, 1).
Rational frac(const Rational& r);
RVec frac(const RVec& v);
bool is_integral(const RVec& v);
/// Lexicographic comparison of equal-length vectors.
bool lex_less(const RVec& a, const RVec& b);
RVec add(const RVec& a, const RVec& b);
RVec scale(const Rational& c, const RVec& v);
RVec mat_vec(const RMat& m, const RVec& v);
Rational dot(const RVec& a, const RVec& b);
/// x^T G y.
Rational bilinear(const RMat& g, const RVec& x, const RVec& y);
/// Exact inverse; throws LatticeError when singular.
RMat inverse(const RMat& m);
Rational determinant(const RMat& m);
/// Columns of the inverse, i.e. a basis of the dual lattice in lattice coordinates.
std::vector<RVec> columns(const RMat& m);
/// Closure of the generators in (Q/Z)^n, as reduced representatives. Throws
/// LatticeError once the group exceeds `limit` elements.
std::vector<RVec> closure_mod_one(const std::vector<RVec>& gens, std::size_t n, std::size_t limit = 200000);

/// x + y*omega with omega = (1 + sqrt(-d))/2.
struct KElement {
  Rational x;
  Rational y;
  friend bool operator==(const KElement&, const KElement&) = default;
};

KElement k_mul(const KElement& a, const KElement& b, std::int64_t d);
Rational k_norm(const KElement& a, std::int64_t d);
/// Tr(a * conj(b)).
Rational k_trace_pair(const KElement& a, const KElement& b, std::int64_t d);
std::string format_k(const KElement& a);

struct DualCoset {
  KElement representative;   // element of D^{-1} a, reduced mod a
  RVec coords;               // the same, in ideal-basis coordinates, in [0,1)^2
  int label = 0;
  std::map<Prime, bool> local_zero;  // mu_q = 0
  Rational q_mod_one;        // Q(mu) mod 1

  bool is_zero() const { return label == 0; }
};

class IdealLattice {
 public:
  /// spec: "unit", "prime:p" (the prime above p with smallest root, or p*O_k
  /// for inert p), or "basis:x1,y1,x2,y2" in coordinates of {1, omega}.
  static IdealLattice make(const QuadField& field, const std::string& spec);
  static IdealLattice from_basis(const QuadField& field, const KElement& b1, const KElement& b2);

  const QuadField& field() const { return field_; }
  std::int64_t d() const { return field_.d(); }
  const KElement& basis(int i) const { return basis_[static_cast<std::size_t>(i)]; }
  const Rational& norm() const { return norm_; }
  std::string spec() const { return spec_; }
  /// Gram matrix of (x, y) = -Tr(x conj y)/N(a) in the ideal basis.
  const RMat& gram() const { return gram_; }

  KElement to_element(const RVec& coords) const;
  RVec coords_of(const KElement& a) const;
  Rational q(const RVec& coords) const;
  Rational q_element(const KElement& a) const;

  const std::vector<DualCoset>& cosets() const { return cosets_; }
  const DualCoset& coset(int label) const;
  /// Label of the coset containing a dual vector given in ideal coordinates.
  int label_of(const RVec& coords) const;
  /// t lies in Q(mu_q) + Z_q.
  bool local_condition(const DualCoset& mu, const Rational& t, Prime q) const;

 private:
  IdealLattice(QuadField field, KElement b1, KElement b2, std::string spec);

  QuadField field_;
  KElement basis_[2];
  Rational norm_;
  std::string spec_;
  RMat gram_;
  std::vector<DualCoset> cosets_;
  std::map<RVec, int> label_index_;
};

struct LatticeVector {
  RVec x;
  Rational q;
};

class PosLattice {
 public:
  /// Positive-definite Gram matrix of the bilinear form; rank 0 is allowed.
  static PosLattice make(const RMat& gram);

  std::size_t rank() const { return gram_.size(); }
  const RMat& gram() const { return gram_; }
  Rational q(const RVec& x) const;
  /// Reduced representatives of L^dual / L (requires integral Gram).
  std::vector<RVec> dual_cosets() const;

  /// All x in coset + Z^n with Q(x) <= bound, in lexicographic order.
  std::vector<LatticeVector> enumerate(const RVec& coset, const Rational& bound) const;
  std::int64_t count_vectors(const RVec& coset, const Rational& m) const;
  /// m -> #{x in coset + L : Q(x) = m} for Q(x) <= bound.
  std::map<Rational, std::int64_t> theta_counts(const RVec& coset, const Rational& bound) const;

 private:
  explicit PosLattice(RMat gram);
  RMat gram_;
  std::vector<std::vector<long double>> fp_;  // Fincke-Pohst coefficients
};

/// A glue class lambda of L/(L+ + L-).
struct GlueClass {
  RVec full;
  RVec plus;
  RVec minus;
};

/// One piece (eta+ + lambda+ + L+) + (eta- + lambda- + L-) of eta + L.
struct EtaComponent {
  int glue_index = 0;
  RVec plus_shift;
  int minus_label = 0;
};

struct Eta {
  int label = 0;
  RVec rep;
  RVec plus;
  RVec minus;
  Rational q_mod_one;
  std::vector<EtaComponent> components;
};

class SplitLattice {
 public:
  /// L = Z^{n+2} + sum Z*g over the glue generators, written in the basis of
  /// L+ (+) L-.  Checks that L is even, that L meets V+ and U exactly in L+ and
  /// L-, and that the dual decomposition tiles each eta + L.
  static SplitLattice make(PosLattice plus, IdealLattice minus, const std::vector<RVec>& glue_generators);
  static SplitLattice trivial(IdealLattice minus);

  const PosLattice& plus() const { return plus_; }
  const IdealLattice& minus() const { return minus_; }
  const QuadField& field() const { return minus_.field(); }
  std::size_t n() const { return plus_.rank(); }
  const std::vector<GlueClass>& glue() const { return glue_; }
  const std::vector<RVec>& glue_generators() const { return generators_; }
  const std::vector<Eta>& etas() const { return etas_; }
  const Eta& eta(int label) const;
  /// Label of the class of a dual vector, or nullopt if v is not in L^dual.
  std::optional<int> label_of(const RVec& v) const;
  bool contains(const RVec& v) const;
  /// Q on the ambient space in L+ (+) L- coordinates.
  Rational q(const RVec& v) const;
  const RMat& gram() const { return gram_; }

 private:
  SplitLattice(PosLattice plus, IdealLattice minus);
  RVec canonical(const RVec& v) const;
  bool key_less(const RVec& a, const RVec& b) const;

  PosLattice plus_;
  IdealLattice minus_;
  RMat gram_;
  std::vector<RVec> generators_;
  std::vector<GlueClass> glue_;
  std::vector<Eta> etas_;
  std::map<RVec, int> label_index_;
};

/// Lattice file: lines "d <n>", "ideal <spec>", "rank <n>", n lines
/// "gram <row>", and any number of "glue <vector>"; '#' starts a comment.
SplitLattice parse_lattice(const std::string& text);
SplitLattice load_lattice(const std::string& path);
std::string serialize_lattice(const SplitLattice& sl);

}  // namespace cmv
