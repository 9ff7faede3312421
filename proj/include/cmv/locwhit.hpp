#pragma once

// Normalized local Whittaker functions as exact polynomials in X = p^{-s},
// and the reassembled derivative of the incoherent Eisenstein coefficient.

#include <string>
#include <vector>

#include "cmv/arith.hpp"
#include "cmv/lattice.hpp"

namespace cmv {

enum class Prefactor { none, gamma_q_root_q };

struct WhittakerPoly {
  Prime p = 0;
  std::vector<Rational> coeffs;  // coeffs[r] multiplies X^r
  Prefactor prefactor = Prefactor::none;

  bool is_zero() const;
  int degree() const;  // -1 for the zero polynomial
  Rational at(const Rational& x) const;
  std::string to_string() const;
};

/// Geometric sum over r <= ord_p(t) of (chi_p(p) X)^r; zero when ord_p(t) < 0.
WhittakerPoly whit_unramified(const QuadField& field, Prime p, const Rational& t);

/// 1 + chi_q(-t N(a)) X^{ord_q(t)+1}; zero when ord_q(t) < 0.  N(a) = 1 is
/// the unit ideal.
WhittakerPoly whit_ramified_zero(const QuadField& field, Prime q, const Rational& t,
                                 const Rational& lattice_norm = 1);

/// Constant 1 when t lies in Q(mu_q) + Z_q, else zero.  q_mu is Q(mu) for any
/// global representative; only its class mod Z_q matters.
WhittakerPoly whit_ramified_nonzero(const QuadField& field, Prime q, const Rational& t, const Rational& q_mu);

struct ValueDeriv {
  Rational value;
  FactoredLog derivative;  // d/ds at s = 0
};
ValueDeriv value_deriv_at_zero(const WhittakerPoly& w);

struct LocalFactor {
  WhittakerPoly poly;
  ValueDeriv at_zero;
};

struct EisensteinCoeff {
  FactoredLog kappa;
  bool nonvanishing_value = false;
  std::vector<LocalFactor> factors;
};

/// Derivative of the t-th coefficient assembled from local data, scaled so it
/// is directly comparable with kappa(t, mu, a).
EisensteinCoeff eisenstein_deriv_coeff(const IdealLattice& lattice, const DualCoset& mu, const Rational& t);

}  // namespace cmv
