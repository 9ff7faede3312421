#include "cmv/cmvalue.hpp"

namespace cmv {

ContractionTable contraction_coeffs(const FourierForm& F, const Rational& m_hi) {
  const SplitLattice& sl = F.lattice();
  ContractionTable out;
  for (auto& [key, c] : F.coeffs()) {
    const auto& [eta_label, m1] = key;
    if (m1 > m_hi) continue;
    for (auto& comp : sl.eta(eta_label).components) {
      for (auto& v : sl.plus().enumerate(comp.plus_shift, m_hi - m1))
        out[{eta_label, comp.glue_index, m1 + v.q}] += c;
    }
  }
  return out;
}

Rational c00_contraction(const FourierForm& F) {
  const SplitLattice& sl = F.lattice();
  Rational total = 0;
  for (auto& [key, c] : contraction_coeffs(F, 0)) {
    const auto& [eta_label, glue_index, m] = key;
    if (m != 0) continue;
    const auto& comp = sl.eta(eta_label).components[static_cast<std::size_t>(glue_index)];
    if (comp.minus_label == 0) total += c;
  }
  return total;
}

KappaValue kappa_eta(const SplitLattice& sl, int eta, const Rational& m, KappaCache& cache) {
  KappaValue total;
  total.d = sl.field().d();
  if (m < 0) return total;
  for (auto& comp : sl.eta(eta).components)
    for (auto& v : sl.plus().enumerate(comp.plus_shift, m)) total += cache.at(comp.minus_label, m - v.q);
  return total;
}

KappaValue kappa_eta(const SplitLattice& sl, int eta, const Rational& m) {
  KappaCache cache(sl.minus());
  return kappa_eta(sl, eta, m, cache);
}

PhiAverage phi_average(const FourierForm& F, std::optional<Rational> vol_KT) {
  const SplitLattice& sl = F.lattice();
  PhiAverage out;
  out.vol_KT = vol_KT.value_or(Rational(2, sl.field().class_number()));
  if (out.vol_KT <= 0) throw std::invalid_argument("vol(K_T) must be positive");
  KappaCache cache(sl.minus());
  for (auto& [eta, m, c] : F.nonpositive_part()) out.sum += c * kappa_eta(sl, eta, -m, cache);
  out.sum.d = sl.field().d();
  out.integral = Rational(2) * out.sum;
  out.cycle_sum = (Rational(4) / out.vol_KT) * out.sum;
  return out;
}

TranscendentalBase transcendental_base(const QuadField& field, unsigned prec) {
  ScopedPrecision scope(prec + kGuardDigits);
  TranscendentalBase b;
  const Real pi = real_pi();
  const Real eg = real_euler_gamma();
  const Real d(field.d());
  b.k0 = kappa_zero_constant(field, prec).value;
  b.direct = exp(-b.k0);
  b.series = d / (4 * pi) * exp(-eg) * exp(2 * log_deriv_at_zero_series(field, prec));
  b.gamma = exp(-eg) * exp(2 * chowla_selberg_gamma_sum(field, prec)) / (4 * d * pi);
  const Real tol = real_pow10(-static_cast<int>(prec) + 5) * b.direct;
  b.agree = abs(b.series - b.direct) < tol && abs(b.gamma - b.direct) < tol;
  return b;
}

CMValueReport log_psi_product(const FourierForm& F, std::optional<Rational> vol_KT, unsigned prec) {
  const QuadField& field = F.lattice().field();
  CMValueReport r;
  r.d = field.d();
  r.h = field.class_number();
  r.degree = 2 * r.h;
  r.vol_overridden = vol_KT.has_value();
  r.phi = phi_average(F, vol_KT);
  r.vol_KT = r.phi.vol_KT;
  r.c00 = c00_contraction(F);
  if (r.phi.sum.kzero_multiple != r.c00)
    throw std::logic_error("k0 multiple of the Phi sum disagrees with the contraction coefficient c00");
  const Rational scale = Rational(-2) / r.vol_KT;
  r.rational_part = scale * r.phi.sum.log_part;
  r.kzero_coeff = scale * r.c00;
  r.transcendental_exponent = -r.kzero_coeff;

  bool pos = false, neg = false;
  for (auto& [p, e] : r.rational_part.terms()) (e > 0 ? pos : neg) = true;
  r.exponents_sign_definite = !(pos && neg);
  bool nonneg = true;
  for (auto& [eta, m, c] : F.principal_part())
    if (c < 0) nonneg = false;
  r.integrality_hypothesis = nonneg && r.c00 == 0;

  if (prec > 0) {
    ScopedPrecision scope(prec + kGuardDigits);
    r.digits = prec;
    Real total = evaluate(r.rational_part);
    if (r.kzero_coeff != 0) {
      r.base = transcendental_base(field, prec);
      total += real_from(r.kzero_coeff) * r.base->k0;
    }
    r.numeric = total;
  }
  return r;
}

SupportCheck check_prime_support(const FactoredLog& rational_part, const QuadField& field, const Rational& mmax) {
  SupportCheck out;
  out.bound = Rational(field.d()) * mmax;
  for (Prime p : rational_part.primes()) {
    const bool allowed = field.is_ramified(p) || (field.splitting(p) == Splitting::inert && Rational(p) <= out.bound);
    if (!allowed) out.violations.push_back(p);
  }
  out.ok = out.violations.empty();
  return out;
}

SupportCheck check_prime_support(const CMValueReport& report, const FourierForm& F) {
  return check_prime_support(report.rational_part, F.lattice().field(), m_max(F));
}

}  // namespace cmv
