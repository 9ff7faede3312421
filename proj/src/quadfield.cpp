#include "cmv/quadfield.hpp"

#include <cmath>
#include <numeric>

#include <mpfr.h>

namespace cmv {

namespace {

void require_prec(unsigned prec) {
  if (prec < 10) throw std::invalid_argument("precision must be at least 10 digits");
}

std::vector<int> character_table(std::int64_t d) {
  std::vector<int> chi(static_cast<std::size_t>(d), 0);
  for (std::int64_t a = 1; a < d; ++a) chi[static_cast<std::size_t>(a)] = kronecker(BigInt(-d), a);
  return chi;
}

// Even-index Bernoulli numbers B_0, B_2, ..., B_{2n} (Akiyama-Tanigawa).
std::vector<Rational> bernoulli_even(int n) {
  const int m_max = 2 * n;
  std::vector<Rational> a(static_cast<std::size_t>(m_max + 1));
  std::vector<Rational> b(static_cast<std::size_t>(m_max + 1));
  for (int m = 0; m <= m_max; ++m) {
    a[static_cast<std::size_t>(m)] = Rational(1, m + 1);
    for (int j = m; j >= 1; --j)
      a[static_cast<std::size_t>(j - 1)] = j * (a[static_cast<std::size_t>(j - 1)] - a[static_cast<std::size_t>(j)]);
    b[static_cast<std::size_t>(m)] = a[0];
  }
  std::vector<Rational> even;
  for (int k = 0; k <= n; ++k) even.push_back(b[static_cast<std::size_t>(2 * k)]);
  return even;
}

enum class SeriesKind { reciprocal, log_over };

// sum_{n>=1} chi(n) f(n) with f(y) = 1/y or log(y)/y.
Real character_series(const QuadField& field, unsigned prec, SeriesKind kind) {
  require_prec(prec);
  const unsigned work = prec + kGuardDigits;
  ScopedPrecision scope(work);
  const std::int64_t d = field.d();
  const auto chi = character_table(d);

  // Euler-Maclaurin order and starting number of periods.
  const int order = static_cast<int>(std::ceil(work / 1.5)) + 5;
  double harmonic = 0;
  for (int r = 1; r <= 2 * order; ++r) harmonic += 1.0 / r;

  // log10 of the remainder bound summed over the d-1 residue classes:
  // (d-1) * 2 zeta(2P)/(2 pi)^{2P} * (2P-1)! d^{2P-1} (log y + H) / y^{2P}, y = K d.
  auto log10_bound = [&](double periods) {
    const double y = periods * static_cast<double>(d);
    const double two_p = 2.0 * order;
    double lb = std::log10(static_cast<double>(d - 1)) + std::log10(4.0) - two_p * std::log10(2 * M_PI) +
                std::lgamma(two_p) / std::log(10.0) + (two_p - 1) * std::log10(static_cast<double>(d)) -
                two_p * std::log10(y);
    if (kind == SeriesKind::log_over) lb += std::log10(std::log(y + d) + harmonic);
    return lb;
  };
  double periods = std::max(2.0 * order, std::ceil((std::exp(harmonic) + 10.0) / static_cast<double>(d)));
  while (log10_bound(periods) > -static_cast<double>(work) - 2) periods *= 1.1;
  const double cutoff = std::ceil(periods) * static_cast<double>(d);
  if (cutoff > 1e7) throw PrecisionError("character series cannot reach the requested precision");
  const auto K = static_cast<std::int64_t>(std::ceil(periods));
  const std::int64_t N = K * d;

  Real direct = 0;
  for (std::int64_t n = 1; n < N; ++n) {
    const int c = chi[static_cast<std::size_t>(n % d)];
    if (c == 0) continue;
    Real term = Real(1) / Real(n);
    if (kind == SeriesKind::log_over) term *= real_log(n);
    direct += c > 0 ? term : Real(-term);
  }

  const auto bern = bernoulli_even(order);
  std::vector<Real> em_coeff(static_cast<std::size_t>(order + 1));
  {
    Rational fact = 1;
    for (int j = 1; j <= order; ++j) {
      fact *= (2 * j - 1) * (2 * j);
      em_coeff[static_cast<std::size_t>(j)] = real_from(bern[static_cast<std::size_t>(j)] / fact);
    }
  }
  std::vector<Real> harm(static_cast<std::size_t>(2 * order + 1));
  harm[0] = 0;
  for (int r = 1; r <= 2 * order; ++r) harm[static_cast<std::size_t>(r)] = harm[static_cast<std::size_t>(r - 1)] + Real(1) / Real(r);

  Real tail = 0;
  const Real dd(d);
  for (std::int64_t a = 1; a < d; ++a) {
    const int c = chi[static_cast<std::size_t>(a)];
    if (c == 0) continue;
    const Real y = Real(N + a);
    const Real logy = real_log(y);
    // Antiderivative at the lower limit; the upper-limit terms cancel since sum chi(a) = 0.
    Real t = kind == SeriesKind::reciprocal ? Real(-logy / dd) : Real(-logy * logy / (2 * dd));
    const Real fy = kind == SeriesKind::reciprocal ? Real(1 / y) : Real(logy / y);
    t += fy / 2;
    // g^{(r)}(K) = d^r f^{(r)}(y); f^{(r)}(y) = (-1)^r r! / y^{r+1} (times log y - H_r).
    Real ratio = Real(1) / y;  // d^r r! / y^{r+1} accumulated
    for (int j = 1; j <= order; ++j) {
      const int r = 2 * j - 1;
      if (j == 1) {
        ratio = dd / (y * y);
      } else {
        ratio *= dd * dd * Real((r - 1) * r) / (y * y);
      }
      Real deriv = -ratio;  // (-1)^r with r odd
      if (kind == SeriesKind::log_over) deriv *= logy - harm[static_cast<std::size_t>(r)];
      t -= em_coeff[static_cast<std::size_t>(j)] * deriv;
    }
    tail += c > 0 ? t : Real(-t);
  }
  return direct + tail;
}

}  // namespace

std::string to_string(Splitting s) {
  switch (s) {
    case Splitting::split:
      return "split";
    case Splitting::inert:
      return "inert";
    case Splitting::ramified:
      return "ramified";
  }
  return "?";
}

bool is_odd_fundamental(std::int64_t d) { return d >= 3 && d % 4 == 3 && is_squarefree(d); }

std::vector<ReducedForm> reduced_forms(std::int64_t d) {
  if (!is_odd_fundamental(d))
    throw UnsupportedDiscriminant("-" + std::to_string(d) + " is not an odd fundamental discriminant");
  std::vector<ReducedForm> out;
  for (std::int64_t a = 1; 3 * a * a <= d; ++a) {
    for (std::int64_t b = -a + 1; b <= a; ++b) {
      if ((b * b + d) % (4 * a) != 0) continue;
      const std::int64_t c = (b * b + d) / (4 * a);
      if (c < a) continue;
      if ((b < 0) && (-b == a || a == c)) continue;
      if (std::gcd(std::gcd(a, std::abs(b)), c) != 1) continue;
      out.push_back({a, b, c});
    }
  }
  return out;
}

Splitting splitting_type(std::int64_t d, Prime p) {
  if (!is_prime(p)) throw ArithmeticError("splitting needs a prime");
  if (d % p == 0) return Splitting::ramified;
  return kronecker(BigInt(-d), p) == 1 ? Splitting::split : Splitting::inert;
}

QuadField::QuadField(std::int64_t d) : d_(d) {
  for (auto [p, e] : factorize(d)) ramified_.push_back(p);
  h_ = static_cast<std::int64_t>(reduced_forms(d).size());
}

QuadField QuadField::make(std::int64_t d) {
  if (d <= 3 || !is_odd_fundamental(d))
    throw UnsupportedDiscriminant("Q(sqrt(-" + std::to_string(d) +
                                  ")) unsupported: need d > 3 squarefree with d = 3 mod 4");
  return QuadField(d);
}

int QuadField::chi_of_prime(Prime p) const {
  if (d_ % p == 0) return 0;
  return kronecker(BigInt(-d_), p);
}

int QuadField::chi(const Rational& t, Prime p) const { return hilbert_symbol(t, Rational(-d_), p); }

Splitting QuadField::splitting(Prime p) const { return splitting_type(d_, p); }

std::int64_t QuadField::rho_local(Prime p, int a) const {
  if (a < 0) return 0;
  switch (splitting(p)) {
    case Splitting::ramified:
      return 1;
    case Splitting::split:
      return a + 1;
    case Splitting::inert:
      return a % 2 == 0 ? 1 : 0;
  }
  return 0;
}

std::int64_t QuadField::rho(const Rational& t) const {
  if (t <= 0 || !is_integer(t)) return 0;
  std::int64_t r = 1;
  for (auto& [p, e] : factorize(numerator_of(t))) {
    r *= rho_local(to_int64(p), e);
    if (r == 0) return 0;
  }
  return r;
}

Real L_at_one(const QuadField& field, unsigned prec) {
  return character_series(field, prec, SeriesKind::reciprocal);
}

Real L_deriv_at_one(const QuadField& field, unsigned prec) {
  Real s = character_series(field, prec, SeriesKind::log_over);
  return -s;
}

Real chowla_selberg_gamma_sum(const QuadField& field, unsigned prec) {
  require_prec(prec);
  ScopedPrecision scope(prec + kGuardDigits);
  const std::int64_t d = field.d();
  Real sum = 0;
  for (std::int64_t a = 1; a < d; ++a) {
    const int c = kronecker(BigInt(-d), a);
    if (c == 0) continue;
    Real x = Real(a) / Real(d);
    Real lg;
    int sign = 0;
    mpfr_lgamma(lg.backend().data(), &sign, x.backend().data(), MPFR_RNDN);
    sum += c > 0 ? lg : Real(-lg);
  }
  return Real(field.roots_of_unity()) / Real(2 * field.class_number()) * sum;
}

Real chowla_selberg_log_deriv(const QuadField& field, unsigned prec) {
  ScopedPrecision scope(prec + kGuardDigits);
  Real gamma_sum = chowla_selberg_gamma_sum(field, prec);
  return gamma_sum - real_log(field.d());
}

Real log_deriv_at_zero_series(const QuadField& field, unsigned prec) {
  ScopedPrecision scope(prec + kGuardDigits);
  Real l1 = L_at_one(field, prec);
  Real dl1 = L_deriv_at_one(field, prec);
  return real_log(Real(2) * real_pi() / Real(field.d())) + real_euler_gamma() - dl1 / l1;
}

KZeroConstant kappa_zero_constant(const QuadField& field, unsigned prec) {
  ScopedPrecision scope(prec + kGuardDigits);
  Real l1 = L_at_one(field, prec);
  Real dl1 = L_deriv_at_one(field, prec);
  // Lambda'(1)/Lambda(1) = -log(pi)/2 + psi(1)/2 + L'(1)/L(1), psi(1) = -gamma.
  Real lambda_log_deriv = -real_log(real_pi()) / 2 - real_euler_gamma() / 2 + dl1 / l1;
  return {real_log(field.d()) + 2 * lambda_log_deriv, kzero_tag(field.d())};
}

std::string kzero_tag(std::int64_t d) { return "k0(d=" + std::to_string(d) + ")"; }

std::int64_t parse_kzero_tag(const std::string& tag) {
  const std::string prefix = "k0(d=";
  if (tag.rfind(prefix, 0) != 0 || tag.back() != ')') throw std::invalid_argument("malformed k0 tag '" + tag + "'");
  const auto d = std::stoll(tag.substr(prefix.size(), tag.size() - prefix.size() - 1));
  if (kzero_tag(d) != tag) throw std::invalid_argument("malformed k0 tag '" + tag + "'");
  return d;
}

}  // namespace cmv
