#include "cmv/gzoracle.hpp"

#include <cmath>
#include <numeric>

#include <mpfr.h>

#include "cmv/forms.hpp"

namespace cmv {

namespace {

constexpr int kMaxRetries = 4;

Complex mul(const Complex& a, const Complex& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }

// Smallest N with sum_{n >= N} exp(4 pi sqrt(n) - alpha n) < 10^{-digits}.
std::size_t truncation(double alpha, unsigned digits) {
  const double target = -static_cast<double>(digits) * std::log(10.0) - 2;
  for (std::size_t n = 1;; ++n) {
    const double x = static_cast<double>(n);
    const double slope = 2 * M_PI / std::sqrt(x) - alpha;
    if (slope >= 0) continue;
    const double f = 4 * M_PI * std::sqrt(x) - alpha * x;
    // Concavity: the tail is dominated by a geometric series with this ratio.
    const double tail = f - std::log1p(-std::exp(slope));
    if (tail < target) return n;
    if (n > 200000) throw PrecisionError("j series truncation too long");
  }
}

}  // namespace

Complex j_value(const ReducedForm& form, std::int64_t d, unsigned prec) {
  if (!is_odd_fundamental(d)) throw UnsupportedDiscriminant("-" + std::to_string(d) + " is not an odd fundamental discriminant");
  if (prec < 30) throw std::invalid_argument("j_value needs prec >= 30");
  if (form.b * form.b - 4 * form.a * form.c != -d) throw std::invalid_argument("form does not have discriminant -d");
  ScopedPrecision scope(prec + kGuardDigits);
  const Real pi = real_pi();
  const double alpha = M_PI * std::sqrt(static_cast<double>(d)) / static_cast<double>(form.a);
  const std::size_t N = truncation(alpha, prec + kGuardDigits);
  const auto coeffs = j_coefficients(N);  // c(-1), ..., c(N-1)

  const Real radius = exp(-pi * sqrt(Real(d)) / Real(form.a));
  const Real angle = -pi * Real(form.b) / Real(form.a);
  const Complex q{radius * cos(angle), radius * sin(angle)};

  // Horner on sum_{n=0}^{N-1} c(n) q^n.
  Complex acc{Real(0), Real(0)};
  for (std::size_t k = coeffs.size(); k-- > 1;) {
    acc = mul(acc, q);
    acc.re += Real(coeffs[k]);
  }
  // q^{-1} = conj(q) / |q|^2.
  const Real r2 = radius * radius;
  acc.re += q.re / r2;
  acc.im -= q.im / r2;
  return acc;
}

GZResult gz_product(std::int64_t d1, std::int64_t d2, unsigned prec) {
  for (auto d : {d1, d2})
    if (!is_odd_fundamental(d))
      throw UnsupportedDiscriminant("-" + std::to_string(d) + " is not an odd fundamental discriminant");
  if (std::gcd(d1, d2) != 1) throw std::invalid_argument("gz_product needs coprime discriminants");
  if (prec < 30) prec = 30;
  const auto f1 = reduced_forms(d1);
  const auto f2 = reduced_forms(d2);
  const double size_bound = static_cast<double>(f1.size() * f2.size()) *
                            (M_PI * std::sqrt(static_cast<double>(std::max(d1, d2))) + 30) / std::log(10.0);
  unsigned work = static_cast<unsigned>(std::ceil(size_bound)) + prec + 10;

  for (int attempt = 0; attempt <= kMaxRetries; ++attempt, work *= 2) {
    ScopedPrecision scope(work + kGuardDigits);
    std::vector<Complex> j1, j2;
    for (auto& f : f1) j1.push_back(j_value(f, d1, work));
    for (auto& f : f2) j2.push_back(j_value(f, d2, work));
    Complex prod{Real(1), Real(0)};
    for (auto& a : j1)
      for (auto& b : j2) prod = mul(prod, {a.re - b.re, a.im - b.im});
    const Real rounded = round(prod.re);
    const Real err_re = abs(prod.re - rounded);
    const Real err_im = abs(prod.im);
    const Real margin = err_re > err_im ? err_re : err_im;
    const Real threshold = real_pow10(-static_cast<int>(prec) / 2);
    if (margin < threshold) {
      GZResult r;
      r.d1 = d1;
      r.d2 = d2;
      mpfr_get_z(r.product.backend().data(), rounded.backend().data(), MPFR_RNDN);
      r.precision_used = work;
      r.log10_margin = margin == 0 ? -static_cast<double>(work) : static_cast<double>(log10(margin));
      BigInt mag = r.product < 0 ? BigInt(-r.product) : r.product;
      if (mag != 0) r.factorization = factorize(mag);
      return r;
    }
  }
  throw RoundingError("product did not round to an integer within the precision cap");
}

GZSupport gz_support_check(const GZResult& result) {
  GZSupport out;
  for (auto& [p, e] : result.factorization) {
    const std::int64_t pp = to_int64(p);
    const bool nonsplit = splitting_type(result.d1, pp) != Splitting::split &&
                          splitting_type(result.d2, pp) != Splitting::split;
    const bool small = 4 * pp <= result.d1 * result.d2;
    if (!nonsplit || !small) out.violations.push_back(p);
  }
  out.ok = out.violations.empty();
  return out;
}

}  // namespace cmv
