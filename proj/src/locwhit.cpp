#include "cmv/locwhit.hpp"

#include <set>
#include <sstream>

namespace cmv {

bool WhittakerPoly::is_zero() const { return degree() < 0; }

int WhittakerPoly::degree() const {
  for (int r = static_cast<int>(coeffs.size()) - 1; r >= 0; --r)
    if (coeffs[static_cast<std::size_t>(r)] != 0) return r;
  return -1;
}

Rational WhittakerPoly::at(const Rational& x) const {
  Rational acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::string WhittakerPoly::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t r = 0; r < coeffs.size(); ++r) {
    const Rational& c = coeffs[r];
    if (c == 0) continue;
    Rational mag = c < 0 ? Rational(-c) : c;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (r == 0) {
      os << format_rational(mag);
      continue;
    }
    if (mag != 1) os << format_rational(mag) << "*";
    os << "X";
    if (r > 1) os << "^" << r;
  }
  return os.str();
}

WhittakerPoly whit_unramified(const QuadField& field, Prime p, const Rational& t) {
  WhittakerPoly w{p, {}, Prefactor::none};
  const int ord = valuation(t, p);
  if (ord < 0) return w;
  const int c = field.chi_of_prime(p);
  Rational term = 1;
  for (int r = 0; r <= ord; ++r) {
    w.coeffs.push_back(term);
    term *= c;
  }
  return w;
}

WhittakerPoly whit_ramified_zero(const QuadField& field, Prime q, const Rational& t, const Rational& lattice_norm) {
  WhittakerPoly w{q, {}, Prefactor::gamma_q_root_q};
  const int ord = valuation(t, q);
  if (ord < 0) return w;
  w.coeffs.assign(static_cast<std::size_t>(ord + 2), Rational(0));
  w.coeffs[0] = 1;
  w.coeffs[static_cast<std::size_t>(ord + 1)] = field.chi(-t * lattice_norm, q);
  return w;
}

WhittakerPoly whit_ramified_nonzero(const QuadField&, Prime q, const Rational& t, const Rational& q_mu) {
  WhittakerPoly w{q, {}, Prefactor::gamma_q_root_q};
  const Rational diff = t - q_mu;
  if (diff == 0 || valuation(diff, q) >= 0) w.coeffs.push_back(1);
  return w;
}

ValueDeriv value_deriv_at_zero(const WhittakerPoly& w) {
  ValueDeriv out;
  out.value = w.at(1);
  Rational dp = 0;  // P'(1)
  for (std::size_t r = 1; r < w.coeffs.size(); ++r) dp += Rational(static_cast<long>(r)) * w.coeffs[r];
  // d/ds P(p^{-s}) = -log(p) X P'(X).
  if (dp != 0) out.derivative = FactoredLog::log_of(w.p, -dp);
  return out;
}

EisensteinCoeff eisenstein_deriv_coeff(const IdealLattice& lattice, const DualCoset& mu, const Rational& t) {
  if (t <= 0) throw std::invalid_argument("eisenstein_deriv_coeff needs t > 0");
  const QuadField& field = lattice.field();
  EisensteinCoeff out;

  std::set<Prime> primes(field.ramified_primes().begin(), field.ramified_primes().end());
  for (auto& [p, e] : factorize(numerator_of(t))) primes.insert(to_int64(p));
  for (auto& [p, e] : factorize(denominator_of(t))) primes.insert(to_int64(p));

  for (Prime p : primes) {
    WhittakerPoly w;
    if (!field.is_ramified(p)) {
      w = whit_unramified(field, p, t);
    } else if (mu.local_zero.at(p)) {
      w = whit_ramified_zero(field, p, t, lattice.norm());
    } else {
      w = whit_ramified_nonzero(field, p, t, mu.q_mod_one);
    }
    out.factors.push_back({w, value_deriv_at_zero(w)});
  }

  std::vector<std::size_t> vanishing;
  for (std::size_t i = 0; i < out.factors.size(); ++i) {
    if (out.factors[i].poly.is_zero()) return out;
    if (out.factors[i].at_zero.value == 0) vanishing.push_back(i);
  }
  if (vanishing.empty()) {
    out.nonvanishing_value = true;
    return out;
  }
  if (vanishing.size() > 1) return out;

  Rational others = 1;
  for (std::size_t i = 0; i < out.factors.size(); ++i)
    if (i != vanishing[0]) others *= out.factors[i].at_zero.value;
  // Archimedean value -2 after the gamma and d^{1/2} normalizers cancel.
  const Rational scale_factor = Rational(-2) * others / Rational(field.class_number());
  out.kappa = scale_factor * out.factors[vanishing[0]].at_zero.derivative;
  return out;
}

}  // namespace cmv
