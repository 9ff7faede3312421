#include "cmv/kappa.hpp"

#include <set>

namespace cmv {

KappaValue& KappaValue::operator+=(const KappaValue& other) {
  log_part += other.log_part;
  kzero_multiple += other.kzero_multiple;
  if (d == 0) d = other.d;
  return *this;
}

KappaValue& KappaValue::operator*=(const Rational& c) {
  log_part *= c;
  kzero_multiple *= c;
  return *this;
}

std::string KappaValue::to_string() const {
  if (kzero_multiple == 0) return log_part.to_log_string();
  std::string k0 = format_rational(kzero_multiple) + "*" + kzero_tag(d);
  if (log_part.is_zero()) return k0;
  return log_part.to_log_string() + " + " + k0;
}

std::string KappaValue::serialize() const {
  return log_part.serialize() + " + (" + format_rational(kzero_multiple) + ")*" + kzero_tag(d);
}

KappaValue KappaValue::parse(const std::string& text) {
  const auto plus = text.rfind(" + (");
  const auto close = text.rfind(")*");
  if (plus == std::string::npos || close == std::string::npos || close < plus)
    throw std::invalid_argument("malformed kappa value '" + text + "'");
  KappaValue v;
  v.log_part = FactoredLog::parse(text.substr(0, plus));
  v.kzero_multiple = parse_rational(text.substr(plus + 4, close - plus - 4));
  v.d = parse_kzero_tag(text.substr(close + 2));
  return v;
}

Real KappaValue::numeric(unsigned prec) const {
  ScopedPrecision scope(prec + kGuardDigits);
  Real x = evaluate(log_part);
  if (kzero_multiple != 0) x += real_from(kzero_multiple) * kappa_zero_constant(QuadField::make(d), prec).value;
  return x;
}

namespace {

void require_local_zero(const DualCoset& mu, Prime q) {
  auto it = mu.local_zero.find(q);
  if (it == mu.local_zero.end()) throw std::invalid_argument("eta_q: q does not divide d");
  if (!it->second) throw std::logic_error("eta_q called with mu_q != 0");
}

}  // namespace

int eta_q(const IdealLattice& lattice, const Rational& t, const DualCoset& mu, Prime q) {
  require_local_zero(mu, q);
  const QuadField& field = lattice.field();
  const Rational arg = -t * lattice.norm();
  int v = 1 - field.chi(arg, q);
  for (auto& [q2, zero] : mu.local_zero)
    if (q2 != q && zero) v *= 1 + field.chi(arg, q2);
  return v;
}

int eta_0(const IdealLattice& lattice, const Rational& t, const DualCoset& mu) {
  const QuadField& field = lattice.field();
  const Rational arg = -t * lattice.norm();
  int v = 1;
  for (auto& [q, zero] : mu.local_zero)
    if (zero) v *= 1 + field.chi(arg, q);
  return v;
}

KappaValue kappa_positive(const IdealLattice& lattice, const DualCoset& mu, const Rational& t) {
  if (t <= 0) throw std::invalid_argument("kappa_positive needs t > 0");
  const QuadField& field = lattice.field();
  KappaValue out;
  out.d = field.d();
  for (Prime q : field.ramified_primes())
    if (!lattice.local_condition(mu, t, q)) return out;

  const Rational dt = Rational(field.d()) * t;
  FactoredLog sum;
  const std::int64_t rho_dt = field.rho(dt);
  if (rho_dt != 0) {
    for (Prime q : field.ramified_primes()) {
      if (!mu.local_zero.at(q)) continue;
      const int e = eta_q(lattice, t, mu, q);
      if (e == 0) continue;
      sum += FactoredLog::log_of(q, Rational(e) * (valuation(t, q) + 1) * rho_dt);
    }
  }
  const int e0 = eta_0(lattice, t, mu);
  if (e0 != 0 && is_integer(dt)) {
    for (auto& [pb, k] : factorize(numerator_of(dt))) {
      const Prime p = to_int64(pb);
      if (field.is_ramified(p) || field.splitting(p) != Splitting::inert) continue;
      const std::int64_t r = field.rho(dt / p);
      if (r == 0) continue;
      sum += FactoredLog::log_of(p, Rational(e0) * (valuation(t, p) + 1) * r);
    }
  }
  out.log_part = Rational(-1, field.class_number()) * sum;
  return out;
}

KappaValue kappa_at(const IdealLattice& lattice, const DualCoset& mu, const Rational& m) {
  if (m > 0) return kappa_positive(lattice, mu, m);
  KappaValue v;
  v.d = lattice.d();
  if (m == 0 && mu.is_zero()) v.kzero_multiple = 1;
  return v;
}

KappaValue KappaCache::at(int mu_label, const Rational& m) {
  const auto key = std::make_pair(mu_label, m);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  KappaValue v = kappa_at(lattice_, lattice_.coset(mu_label), m);
  std::lock_guard<std::mutex> lock(mutex_);
  cache_.emplace(key, v);
  return v;
}

}  // namespace cmv
