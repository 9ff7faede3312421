#pragma once

// Contraction coefficients, kappa_eta(m), the averaged Phi value and the
// rational/transcendental split of log prod ||Psi||^2 over the CM cycle.

#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "cmv/forms.hpp"
#include "cmv/kappa.hpp"

namespace cmv {

/// (eta label, glue index of lambda, m) -> C_{eta, lambda+}(m).
using ContractionTable = std::map<std::tuple<int, int, Rational>, Rational>;

/// Convolution of c_eta with the vector counts of eta+ + lambda+ + L+ for all
/// m <= m_hi, using the coefficients of F present in its table.
ContractionTable contraction_coeffs(const FourierForm& F, const Rational& m_hi = 0);

/// sum_eta sum_{lambda : eta- + lambda- = 0} C_{eta, lambda+}(0).
Rational c00_contraction(const FourierForm& F);

/// sum_lambda sum_{x in eta+ + lambda+ + L+} kappa_{eta- + lambda-}(m - Q(x)).
KappaValue kappa_eta(const SplitLattice& sl, int eta, const Rational& m, KappaCache& cache);
KappaValue kappa_eta(const SplitLattice& sl, int eta, const Rational& m);

struct PhiAverage {
  KappaValue sum;          // sum_eta sum_{m >= 0} c_eta(-m) kappa_eta(m)
  KappaValue integral;     // 2 * sum
  KappaValue cycle_sum;    // (4 / vol) * sum
  Rational vol_KT;
};

/// vol(K_T) defaults to 2/h.
PhiAverage phi_average(const FourierForm& F, std::optional<Rational> vol_KT = std::nullopt);

struct TranscendentalBase {
  Real k0;
  Real direct;   // exp(-k0)
  Real series;   // (d / 4 pi) e^{-gamma} exp(2 L'(0)/L(0)), L'(0)/L(0) from the series at s = 1
  Real gamma;    // (4 d pi)^{-1} e^{-gamma} prod Gamma(a/d)^{w chi(a)/h}
  bool agree = false;
};

struct CMValueReport {
  std::int64_t d = 0;
  std::int64_t h = 0;
  FactoredLog rational_part;            // log rat
  Rational c00;                         // c_0(0)(<F, theta+>)
  Rational transcendental_exponent;     // (2 / vol) c00; equals h c00 at the default volume
  Rational kzero_coeff;                 // coefficient of k0 in the log of the product
  std::int64_t degree = 0;              // 2h
  Rational vol_KT;
  bool vol_overridden = false;
  PhiAverage phi;
  bool exponents_sign_definite = true;
  bool integrality_hypothesis = false;  // all c_eta(-m) >= 0 for m > 0 and c00 = 0
  std::optional<Real> numeric;          // log prod ||Psi||^2
  std::optional<TranscendentalBase> base;
  unsigned digits = 0;
};

TranscendentalBase transcendental_base(const QuadField& field, unsigned prec);

/// prec = 0 skips the numeric evaluation.
CMValueReport log_psi_product(const FourierForm& F, std::optional<Rational> vol_KT = std::nullopt,
                              unsigned prec = 0);

struct SupportCheck {
  bool ok = true;
  Rational bound;               // d * m_max
  std::vector<Prime> violations;
};

/// Every prime of the rational part is ramified, or inert and at most d m_max.
SupportCheck check_prime_support(const FactoredLog& rational_part, const QuadField& field, const Rational& mmax);
SupportCheck check_prime_support(const CMValueReport& report, const FourierForm& F);

}  // namespace cmv
