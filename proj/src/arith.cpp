#include "cmv/arith.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include <gmp.h>

namespace cmv {

namespace {

constexpr std::int64_t kTrialLimit = 1'000'000;
constexpr std::int64_t kRhoThreshold = 1'000'000'000'000;  // 10^12

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

BigInt parse_integer(std::string_view s, std::string_view whole) {
  s = trim(s);
  std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (start == s.size())
    throw ArithmeticError("malformed rational '" + std::string(whole) + "'");
  for (std::size_t i = start; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      throw ArithmeticError("malformed rational '" + std::string(whole) + "'");
  std::string digits(s[0] == '+' ? s.substr(1) : s);
  return BigInt(digits);
}

BigInt mod_positive(const BigInt& a, const BigInt& m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return r;
}

// Residue of the p-unit part of t modulo m (m = p for odd p, m = 8 for p = 2).
BigInt unit_residue(const Rational& t, Prime p, const BigInt& m) {
  BigInt num = numerator_of(t);
  BigInt den = denominator_of(t);
  while (num % p == 0) num /= p;
  while (den % p == 0) den /= p;
  return mod_positive(mod_positive(num, m) * mod_positive(den, m), m);
}

BigInt gcd_big(const BigInt& a, const BigInt& b) {
  return boost::multiprecision::gcd(a, b);
}

BigInt pollard_brent(const BigInt& n) {
  if (n % 2 == 0) return BigInt(2);
  for (unsigned long c = 1;; ++c) {
    BigInt y = 2, x, ys, q = 1, g = 1;
    const unsigned long m = 128;
    unsigned long r = 1;
    auto f = [&](const BigInt& v) { return (v * v + c) % n; };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = f(y);
      unsigned long k = 0;
      do {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = (q * abs(BigInt(x - y))) % n;
        }
        g = gcd_big(q, n);
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = gcd_big(abs(BigInt(x - ys)), n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

bool probably_prime(const BigInt& n) {
  return mpz_probab_prime_p(n.backend().data(), 40) != 0;
}

void split_large(const BigInt& n, std::map<BigInt, int>& out) {
  if (n == 1) return;
  if (n < BigInt(kTrialLimit) * kTrialLimit || probably_prime(n)) {
    ++out[n];
    return;
  }
  BigInt f = pollard_brent(n);
  split_large(f, out);
  split_large(n / f, out);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) throw ArithmeticError("empty rational");
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(s, text));
  BigInt num = parse_integer(s.substr(0, slash), text);
  BigInt den = parse_integer(s.substr(slash + 1), text);
  if (den == 0) throw ArithmeticError("zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

std::string format_rational(const Rational& r) {
  if (denominator_of(r) == 1) return numerator_of(r).str();
  return numerator_of(r).str() + "/" + denominator_of(r).str();
}

bool is_integer(const Rational& r) { return denominator_of(r) == 1; }

std::int64_t to_int64(const BigInt& n) {
  if (n > BigInt(std::numeric_limits<std::int64_t>::max()) ||
      n < BigInt(std::numeric_limits<std::int64_t>::min()))
    throw ArithmeticError("integer " + n.str() + " exceeds 64-bit range");
  return n.convert_to<std::int64_t>();
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0 || n % 3 == 0) return false;
  for (std::int64_t f = 5; f * f <= n; f += 6)
    if (n % f == 0 || n % (f + 2) == 0) return false;
  return true;
}

bool is_squarefree(std::int64_t n) {
  if (n < 1) return false;
  for (auto [p, e] : factorize(n))
    if (e > 1) return false;
  return true;
}

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
  if (n < 1) throw ArithmeticError("factorize expects n >= 1");
  std::vector<std::pair<std::int64_t, int>> out;
  if (n > kRhoThreshold) {
    for (auto& [p, e] : factorize(BigInt(n))) out.emplace_back(to_int64(p), e);
    return out;
  }
  auto take = [&](std::int64_t p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) out.emplace_back(p, e);
  };
  take(2);
  take(3);
  for (std::int64_t f = 5; f * f <= n; f += 6) {
    take(f);
    take(f + 2);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

std::vector<std::pair<BigInt, int>> factorize(const BigInt& n_in) {
  if (n_in < 1) throw ArithmeticError("factorize expects n >= 1");
  BigInt n = n_in;
  std::map<BigInt, int> found;
  auto take = [&](std::int64_t p) {
    while (n % p == 0) {
      n /= p;
      ++found[BigInt(p)];
    }
  };
  take(2);
  take(3);
  for (std::int64_t f = 5; f <= kTrialLimit && BigInt(f) * f <= n; f += 6) {
    take(f);
    take(f + 2);
  }
  if (n > 1) {
    if (n <= BigInt(kTrialLimit) * kTrialLimit)
      ++found[n];
    else
      split_large(n, found);
  }
  return {found.begin(), found.end()};
}

int valuation(const BigInt& n, Prime p) {
  if (n == 0) throw ArithmeticError("valuation of zero is undefined");
  if (p < 2) throw ArithmeticError("valuation needs a prime");
  BigInt m = abs(n);
  int v = 0;
  while (m % p == 0) {
    m /= p;
    ++v;
  }
  return v;
}

int valuation(const Rational& t, Prime p) {
  if (t == 0) throw ArithmeticError("valuation of zero is undefined");
  return valuation(numerator_of(t), p) - valuation(denominator_of(t), p);
}

int kronecker(const BigInt& a, std::int64_t n) {
  if (n < 1) throw ArithmeticError("kronecker expects n >= 1");
  BigInt nn(n);
  return mpz_kronecker(a.backend().data(), nn.backend().data());
}

int hilbert_symbol(const Rational& a, const Rational& b, Prime p) {
  if (a == 0 || b == 0) throw ArithmeticError("Hilbert symbol needs nonzero arguments");
  if (p == kInfinity) return (a < 0 && b < 0) ? -1 : 1;
  if (!is_prime(p)) throw ArithmeticError("Hilbert symbol place must be a prime or infinity");
  const int alpha = valuation(a, p);
  const int beta = valuation(b, p);
  if (p == 2) {
    const BigInt eight(8);
    const auto u = unit_residue(a, 2, eight).convert_to<int>();
    const auto v = unit_residue(b, 2, eight).convert_to<int>();
    auto eps = [](int x) { return ((x - 1) / 2) & 1; };
    auto omega = [](int x) { return ((x * x - 1) / 8) & 1; };
    const int e = eps(u) * eps(v) + (alpha & 1) * omega(v) + (beta & 1) * omega(u);
    return (e & 1) ? -1 : 1;
  }
  const BigInt pp(p);
  const int leg_u = kronecker(unit_residue(a, p, pp), p);
  const int leg_v = kronecker(unit_residue(b, p, pp), p);
  int s = 1;
  if ((alpha & 1) && (beta & 1) && ((p - 1) / 2) % 2 == 1) s = -s;
  if (beta & 1) s *= leg_u;
  if (alpha & 1) s *= leg_v;
  return s;
}

FactoredLog FactoredLog::log_of(Prime p, const Rational& e) {
  if (!is_prime(p)) throw ArithmeticError("FactoredLog key " + std::to_string(p) + " is not prime");
  FactoredLog f;
  f.add_term(p, e);
  return f;
}

FactoredLog FactoredLog::of_rational(const Rational& r) {
  if (r == 0) throw ArithmeticError("log of zero");
  FactoredLog f;
  for (auto& [p, e] : factorize(abs(numerator_of(r)))) f.add_term(to_int64(p), e);
  for (auto& [p, e] : factorize(denominator_of(r))) f.add_term(to_int64(p), -e);
  return f;
}

FactoredLog FactoredLog::parse(std::string_view text) {
  std::string_view s = trim(text);
  FactoredLog f;
  if (s == "1" || s.empty()) return f;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    auto star = s.find('*', pos);
    std::string_view item = trim(s.substr(pos, star == std::string_view::npos ? std::string_view::npos : star - pos));
    auto caret = item.find("^(");
    if (caret == std::string_view::npos || item.back() != ')')
      throw ArithmeticError("malformed FactoredLog term '" + std::string(item) + "'");
    const auto p = to_int64(parse_integer(item.substr(0, caret), text));
    const Rational e = parse_rational(item.substr(caret + 2, item.size() - caret - 3));
    if (!is_prime(p)) throw ArithmeticError("FactoredLog key " + std::to_string(p) + " is not prime");
    f.add_term(p, e);
    if (star == std::string_view::npos) break;
    pos = star + 1;
  }
  return f;
}

Rational FactoredLog::exponent(Prime p) const {
  auto it = terms_.find(p);
  return it == terms_.end() ? Rational(0) : it->second;
}

std::vector<Prime> FactoredLog::primes() const {
  std::vector<Prime> out;
  for (auto& [p, e] : terms_) out.push_back(p);
  return out;
}

void FactoredLog::add_term(Prime p, const Rational& e) {
  if (e == 0) return;
  auto [it, inserted] = terms_.try_emplace(p, e);
  if (!inserted) {
    it->second += e;
    if (it->second == 0) terms_.erase(it);
  }
}

FactoredLog& FactoredLog::operator+=(const FactoredLog& other) {
  for (auto& [p, e] : other.terms_) add_term(p, e);
  return *this;
}

FactoredLog& FactoredLog::operator-=(const FactoredLog& other) {
  for (auto& [p, e] : other.terms_) add_term(p, -e);
  return *this;
}

FactoredLog& FactoredLog::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [p, e] : terms_) e *= c;
  return *this;
}

std::string FactoredLog::serialize() const {
  if (terms_.empty()) return "1";
  std::string out;
  for (auto& [p, e] : terms_) {
    if (!out.empty()) out += "*";
    out += std::to_string(p) + "^(" + format_rational(e) + ")";
  }
  return out;
}

std::string FactoredLog::to_log_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto& [p, e] : terms_) {
    Rational mag = abs(e);
    if (first) {
      if (e < 0) out += "-";
    } else {
      out += e < 0 ? " - " : " + ";
    }
    if (mag != 1) out += format_rational(mag) + "*";
    out += "log(" + std::to_string(p) + ")";
    first = false;
  }
  return out;
}

std::string FactoredLog::to_power_string() const {
  if (terms_.empty()) return "1";
  std::string out;
  for (auto& [p, e] : terms_) {
    if (!out.empty()) out += " * ";
    out += std::to_string(p);
    if (e == 1) continue;
    out += is_integer(e) ? "^" + format_rational(e) : "^(" + format_rational(e) + ")";
  }
  return out;
}

bool FactoredLog::exponentiates_to_rational() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& kv) { return is_integer(kv.second); });
}

FactoredLog flog_combine(std::span<const std::pair<Rational, FactoredLog>> parts) {
  FactoredLog out;
  for (auto& [c, f] : parts) out += c * f;
  return out;
}

}  // namespace cmv
