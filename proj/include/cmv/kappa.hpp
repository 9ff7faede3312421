#pragma once

// Closed-form kappa(t, mu, a) for an integral ideal lattice, with k0 kept
// symbolic.

#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "cmv/arith.hpp"
#include "cmv/lattice.hpp"

namespace cmv {

struct KappaValue {
  FactoredLog log_part;
  Rational kzero_multiple;
  std::int64_t d = 0;  // field of the symbolic k0; 0 only for a default-constructed value

  bool is_zero() const { return log_part.is_zero() && kzero_multiple == 0; }
  KappaValue& operator+=(const KappaValue& other);
  KappaValue& operator*=(const Rational& c);
  friend KappaValue operator+(KappaValue a, const KappaValue& b) { return a += b; }
  friend KappaValue operator*(const Rational& c, KappaValue a) { return a *= c; }
  friend bool operator==(const KappaValue& a, const KappaValue& b) {
    return a.log_part == b.log_part && a.kzero_multiple == b.kzero_multiple;
  }

  /// "-2*log(7)" or "-2*log(7) + 3*k0(d=7)".
  std::string to_string() const;
  /// "<FactoredLog> + (<c>)*k0(d=<d>)"; parse() inverts it.
  std::string serialize() const;
  static KappaValue parse(const std::string& text);
  Real numeric(unsigned prec) const;
};

/// (1 - chi_q(-t N(a))) prod_{q' != q, mu_q' = 0} (1 + chi_q'(-t N(a))).
int eta_q(const IdealLattice& lattice, const Rational& t, const DualCoset& mu, Prime q);
/// prod_{mu_q = 0} (1 + chi_q(-t N(a))), and 1 over an empty index set.
int eta_0(const IdealLattice& lattice, const Rational& t, const DualCoset& mu);

KappaValue kappa_positive(const IdealLattice& lattice, const DualCoset& mu, const Rational& t);
/// Zero for m < 0, [mu = 0] k0 for m = 0, kappa_positive for m > 0.
KappaValue kappa_at(const IdealLattice& lattice, const DualCoset& mu, const Rational& m);

/// Memoized kappa_at for one lattice; thread-safe.
class KappaCache {
 public:
  explicit KappaCache(const IdealLattice& lattice) : lattice_(lattice) {}
  KappaValue at(int mu_label, const Rational& m);

 private:
  const IdealLattice& lattice_;
  std::mutex mutex_;
  std::map<std::pair<int, Rational>, KappaValue> cache_;
};

}  // namespace cmv
