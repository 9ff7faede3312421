#include "cmv/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace cmv {

BigInt floor_of(const Rational& r) {
  BigInt n = numerator_of(r);
  BigInt dd = denominator_of(r);
  BigInt q = n / dd;
  if (n < 0 && q * dd != n) q -= 1;
  return q;
}

Rational frac(const Rational& r) { return r - Rational(floor_of(r)); }

RVec frac(const RVec& v) {
  RVec out;
  out.reserve(v.size());
  for (auto& x : v) out.push_back(frac(x));
  return out;
}

bool is_integral(const RVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return is_integer(x); });
}

bool lex_less(const RVec& a, const RVec& b) { return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end()); }

RVec add(const RVec& a, const RVec& b) {
  RVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

RVec scale(const Rational& c, const RVec& v) {
  RVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = c * v[i];
  return out;
}

RVec mat_vec(const RMat& m, const RVec& v) {
  RVec out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = dot(m[i], v);
  return out;
}

Rational dot(const RVec& a, const RVec& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Rational bilinear(const RMat& g, const RVec& x, const RVec& y) { return dot(x, mat_vec(g, y)); }

RMat inverse(const RMat& m) {
  const std::size_t n = m.size();
  RMat a = m;
  RMat inv(n, RVec(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) throw LatticeError("singular matrix");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    const Rational p = a[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] /= p;
      inv[col][j] /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const Rational f = a[r][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

Rational determinant(const RMat& m) {
  const std::size_t n = m.size();
  RMat a = m;
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != col) {
      std::swap(a[piv], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a[r][col] == 0) continue;
      const Rational f = a[r][col] / a[col][col];
      for (std::size_t j = col; j < n; ++j) a[r][j] -= f * a[col][j];
    }
  }
  return det;
}

std::vector<RVec> columns(const RMat& m) {
  std::vector<RVec> cols;
  if (m.empty()) return cols;
  for (std::size_t j = 0; j < m[0].size(); ++j) {
    RVec c;
    for (auto& row : m) c.push_back(row[j]);
    cols.push_back(c);
  }
  return cols;
}

std::vector<RVec> closure_mod_one(const std::vector<RVec>& gens, std::size_t n, std::size_t limit) {
  std::set<RVec> seen;
  std::vector<RVec> out;
  std::deque<RVec> queue;
  RVec zero(n, Rational(0));
  seen.insert(zero);
  out.push_back(zero);
  queue.push_back(zero);
  while (!queue.empty()) {
    RVec cur = queue.front();
    queue.pop_front();
    for (auto& g : gens) {
      RVec next = frac(add(cur, g));
      if (seen.insert(next).second) {
        if (seen.size() > limit) throw LatticeError("finite quotient too large");
        out.push_back(next);
        queue.push_back(next);
      }
    }
  }
  return out;
}

KElement k_mul(const KElement& a, const KElement& b, std::int64_t d) {
  const Rational c((d + 1) / 4);
  return {a.x * b.x - c * a.y * b.y, a.x * b.y + a.y * b.x + a.y * b.y};
}

Rational k_norm(const KElement& a, std::int64_t d) {
  const Rational c((d + 1) / 4);
  return a.x * a.x + a.x * a.y + c * a.y * a.y;
}

Rational k_trace_pair(const KElement& a, const KElement& b, std::int64_t d) {
  const Rational c((d + 1) / 4);
  return 2 * a.x * b.x + a.x * b.y + a.y * b.x + 2 * c * a.y * b.y;
}

std::string format_k(const KElement& a) {
  return "(" + format_rational(a.x) + ")+(" + format_rational(a.y) + ")w";
}

// ---------------------------------------------------------------------------
// IdealLattice

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

BigInt order_mod_one(const RVec& v) {
  BigInt l = 1;
  for (auto& x : v) {
    BigInt den = denominator_of(x);
    l = l / boost::multiprecision::gcd(l, den) * den;
  }
  return l;
}

}  // namespace

IdealLattice IdealLattice::make(const QuadField& field, const std::string& spec) {
  const std::int64_t d = field.d();
  if (spec == "unit") return IdealLattice(field, {1, 0}, {0, 1}, "unit");
  if (spec.rfind("prime:", 0) == 0) {
    std::int64_t p = 0;
    try {
      p = std::stoll(spec.substr(6));
    } catch (const std::exception&) {
      throw LatticeError("malformed ideal spec '" + spec + "'");
    }
    if (p < 2 || !is_prime(p)) throw LatticeError("ideal spec '" + spec + "' needs a prime");
    if (field.splitting(p) == Splitting::inert) return IdealLattice(field, {p, 0}, {0, p}, spec);
    const std::int64_t c = (d + 1) / 4;
    for (std::int64_t r = 0; r < p; ++r) {
      if ((r * r + r + c) % p == 0) return IdealLattice(field, {p, 0}, {r, 1}, spec);
    }
    throw LatticeError("no prime ideal found above " + std::to_string(p));
  }
  if (spec.rfind("basis:", 0) == 0) {
    auto parts = split(spec.substr(6), ',');
    if (parts.size() != 4) throw LatticeError("basis spec needs four rationals: '" + spec + "'");
    RVec r;
    for (auto& s : parts) r.push_back(parse_rational(s));
    return from_basis(field, {r[0], r[1]}, {r[2], r[3]});
  }
  throw LatticeError("unknown ideal spec '" + spec + "'");
}

IdealLattice IdealLattice::from_basis(const QuadField& field, const KElement& b1, const KElement& b2) {
  std::string spec = "basis:" + format_rational(b1.x) + "," + format_rational(b1.y) + "," + format_rational(b2.x) +
                     "," + format_rational(b2.y);
  return IdealLattice(field, b1, b2, spec);
}

IdealLattice::IdealLattice(QuadField field, KElement b1, KElement b2, std::string spec)
    : field_(std::move(field)), basis_{b1, b2}, spec_(std::move(spec)) {
  const std::int64_t d = field_.d();
  for (auto& b : basis_) {
    if (!is_integer(b.x) || !is_integer(b.y)) throw LatticeError("ideal basis must lie in O_k");
  }
  const Rational det = b1.x * b2.y - b1.y * b2.x;
  if (det == 0) throw LatticeError("ideal basis is degenerate");
  norm_ = det < 0 ? Rational(-det) : det;
  for (auto& b : basis_) {
    const KElement w = k_mul({0, 1}, b, d);
    if (!is_integral(coords_of(w))) throw LatticeError("basis is not stable under omega: not an O_k-ideal");
  }
  gram_.assign(2, RVec(2));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) gram_[i][j] = -k_trace_pair(basis_[i], basis_[j], d) / norm_;

  auto dual = closure_mod_one(columns(inverse(gram_)), 2);
  if (static_cast<std::int64_t>(dual.size()) != d) throw LatticeError("dual quotient has unexpected order");
  std::sort(dual.begin(), dual.end(), lex_less);
  RVec gen;
  for (auto& v : dual) {
    if (order_mod_one(v) == d) {
      gen = v;
      break;
    }
  }
  if (gen.empty()) throw LatticeError("dual quotient is not cyclic");
  for (std::int64_t k = 0; k < d; ++k) {
    DualCoset mu;
    mu.coords = frac(scale(Rational(k), gen));
    mu.representative = to_element(mu.coords);
    mu.label = static_cast<int>(k);
    for (Prime q : field_.ramified_primes()) mu.local_zero[q] = is_integral(scale(Rational(d / q), mu.coords));
    mu.q_mod_one = frac(q(mu.coords));
    label_index_[mu.coords] = mu.label;
    cosets_.push_back(std::move(mu));
  }
}

KElement IdealLattice::to_element(const RVec& c) const {
  return {c[0] * basis_[0].x + c[1] * basis_[1].x, c[0] * basis_[0].y + c[1] * basis_[1].y};
}

RVec IdealLattice::coords_of(const KElement& a) const {
  // Solve a = u b1 + v b2.
  const auto& b1 = basis_[0];
  const auto& b2 = basis_[1];
  const Rational det = b1.x * b2.y - b1.y * b2.x;
  return {(a.x * b2.y - a.y * b2.x) / det, (b1.x * a.y - b1.y * a.x) / det};
}

Rational IdealLattice::q(const RVec& coords) const { return bilinear(gram_, coords, coords) / 2; }

Rational IdealLattice::q_element(const KElement& a) const { return -k_norm(a, field_.d()) / norm_; }

const DualCoset& IdealLattice::coset(int label) const {
  if (label < 0 || label >= static_cast<int>(cosets_.size()))
    throw LatticeError("coset label " + std::to_string(label) + " out of range");
  return cosets_[static_cast<std::size_t>(label)];
}

int IdealLattice::label_of(const RVec& coords) const {
  auto it = label_index_.find(frac(coords));
  if (it == label_index_.end()) throw LatticeError("vector is not in the dual lattice");
  return it->second;
}

bool IdealLattice::local_condition(const DualCoset& mu, const Rational& t, Prime q) const {
  const Rational diff = t - mu.q_mod_one;
  return diff == 0 || valuation(diff, q) >= 0;
}

// ---------------------------------------------------------------------------
// PosLattice

PosLattice PosLattice::make(const RMat& gram) {
  const std::size_t n = gram.size();
  for (auto& row : gram)
    if (row.size() != n) throw LatticeError("Gram matrix must be square");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (gram[i][j] != gram[j][i]) throw LatticeError("Gram matrix must be symmetric");
  for (std::size_t k = 1; k <= n; ++k) {
    RMat minor(k, RVec(k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) minor[i][j] = gram[i][j];
    if (determinant(minor) <= 0) throw LatticeError("Gram matrix is not positive definite");
  }
  return PosLattice(gram);
}

PosLattice::PosLattice(RMat gram) : gram_(std::move(gram)) {
  const std::size_t n = gram_.size();
  // Q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2, computed exactly.
  RMat q(n, RVec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) q[i][j] = gram_[i][j] / 2;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      q[j][i] = q[i][j];
      q[i][j] = q[i][j] / q[i][i];
    }
    for (std::size_t k = i + 1; k < n; ++k)
      for (std::size_t l = k; l < n; ++l) q[k][l] -= q[k][i] * q[i][l];
  }
  fp_.assign(n, std::vector<long double>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) fp_[i][j] = q[i][j].convert_to<long double>();
}

Rational PosLattice::q(const RVec& x) const { return bilinear(gram_, x, x) / 2; }

std::vector<RVec> PosLattice::dual_cosets() const {
  for (auto& row : gram_)
    if (!is_integral(row)) throw LatticeError("dual cosets need an integral Gram matrix");
  if (gram_.empty()) return {RVec{}};
  auto out = closure_mod_one(columns(inverse(gram_)), rank());
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

std::vector<LatticeVector> PosLattice::enumerate(const RVec& coset, const Rational& bound) const {
  std::vector<LatticeVector> out;
  if (bound < 0) return out;
  const std::size_t n = rank();
  if (coset.size() != n) throw LatticeError("coset vector has wrong length");
  if (n == 0) {
    out.push_back({RVec{}, Rational(0)});
    return out;
  }
  const long double b = bound.convert_to<long double>();
  const long double tol = 1e-9L * (1 + b);
  std::vector<long double> c(n), xv(n);
  std::vector<BigInt> z(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = coset[i].convert_to<long double>();

  std::function<void(std::ptrdiff_t, long double)> rec = [&](std::ptrdiff_t i, long double remaining) {
    if (i < 0) {
      RVec x(n);
      for (std::size_t k = 0; k < n; ++k) x[k] = coset[k] + Rational(z[k]);
      Rational qx = q(x);
      if (qx <= bound) out.push_back({std::move(x), qx});
      return;
    }
    const auto ui = static_cast<std::size_t>(i);
    long double s = 0;
    for (std::size_t j = ui + 1; j < n; ++j) s += fp_[ui][j] * xv[j];
    const long double r = std::sqrt(std::max<long double>(remaining, 0) / fp_[ui][ui]) + tol;
    const auto lo = static_cast<long long>(std::ceil(-s - r - c[ui]));
    const auto hi = static_cast<long long>(std::floor(-s + r - c[ui]));
    for (long long zi = lo; zi <= hi; ++zi) {
      xv[ui] = c[ui] + static_cast<long double>(zi);
      const long double t = xv[ui] + s;
      const long double rem = remaining - fp_[ui][ui] * t * t;
      if (rem < -tol) continue;
      z[ui] = zi;
      rec(i - 1, rem);
    }
  };
  rec(static_cast<std::ptrdiff_t>(n) - 1, b + tol);
  std::sort(out.begin(), out.end(), [](const LatticeVector& a, const LatticeVector& b2) { return lex_less(a.x, b2.x); });
  return out;
}

std::int64_t PosLattice::count_vectors(const RVec& coset, const Rational& m) const {
  if (m < 0) return 0;
  std::int64_t count = 0;
  for (auto& v : enumerate(coset, m))
    if (v.q == m) ++count;
  return count;
}

std::map<Rational, std::int64_t> PosLattice::theta_counts(const RVec& coset, const Rational& bound) const {
  std::map<Rational, std::int64_t> out;
  for (auto& v : enumerate(coset, bound)) ++out[v.q];
  return out;
}

// ---------------------------------------------------------------------------
// SplitLattice

SplitLattice::SplitLattice(PosLattice plus, IdealLattice minus) : plus_(std::move(plus)), minus_(std::move(minus)) {
  const std::size_t n = plus_.rank();
  gram_.assign(n + 2, RVec(n + 2, Rational(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) gram_[i][j] = plus_.gram()[i][j];
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) gram_[n + i][n + j] = minus_.gram()[i][j];
}

SplitLattice SplitLattice::trivial(IdealLattice minus) { return make(PosLattice::make({}), std::move(minus), {}); }

Rational SplitLattice::q(const RVec& v) const { return bilinear(gram_, v, v) / 2; }

bool SplitLattice::key_less(const RVec& a, const RVec& b) const {
  const std::size_t n = this->n();
  RVec ap(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(n));
  RVec bp(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(n));
  if (ap != bp) return lex_less(ap, bp);
  const int la = minus_.label_of({a[n], a[n + 1]});
  const int lb = minus_.label_of({b[n], b[n + 1]});
  return la < lb;
}

RVec SplitLattice::canonical(const RVec& v) const {
  RVec best = frac(v);
  for (auto& g : glue_) {
    RVec cand = frac(add(v, g.full));
    if (key_less(cand, best)) best = cand;
  }
  return best;
}

SplitLattice SplitLattice::make(PosLattice plus, IdealLattice minus, const std::vector<RVec>& glue_generators) {
  SplitLattice sl(std::move(plus), std::move(minus));
  const std::size_t n = sl.n();
  const std::size_t dim = n + 2;

  for (std::size_t i = 0; i < dim; ++i) {
    if (!is_integral(sl.gram_[i])) throw LatticeError("L+ (+) L- is not integral");
    if (!is_integer(sl.gram_[i][i] / 2)) throw LatticeError("L+ (+) L- is not even");
  }
  for (auto& g : glue_generators) {
    if (g.size() != dim) throw LatticeError("glue vector has wrong length (expected " + std::to_string(dim) + ")");
    if (!is_integral(mat_vec(sl.gram_, g)) || !is_integer(sl.q(g)))
      throw LatticeError("glue vector makes L non-integral or odd");
  }
  sl.generators_ = glue_generators;

  auto glue = closure_mod_one(glue_generators, dim);
  std::sort(glue.begin(), glue.end(), lex_less);
  for (auto& v : glue) {
    GlueClass g;
    g.full = v;
    g.plus.assign(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n));
    g.minus.assign(v.begin() + static_cast<std::ptrdiff_t>(n), v.end());
    const bool zero = is_integral(v);
    if (!zero && (is_integral(g.plus) || is_integral(g.minus)))
      throw LatticeError("inconsistent embedding: L meets V+ or U in more than L+ or L-");
    if (!is_integer(sl.q(v)) || !is_integral(mat_vec(sl.gram_, v)))
      throw LatticeError("glue closure is not even integral");
    sl.glue_.push_back(std::move(g));
  }

  // Dual of L+ (+) L-, then the subgroup pairing integrally with the glue.
  std::vector<RVec> gens = columns(inverse(sl.gram_));
  auto ambient = closure_mod_one(gens, dim);
  std::set<RVec, std::function<bool(const RVec&, const RVec&)>> reps(
      [&sl](const RVec& a, const RVec& b) { return sl.key_less(a, b); });
  for (auto& v : ambient) {
    bool dual = true;
    for (auto& g : glue_generators) {
      if (!is_integer(bilinear(sl.gram_, v, g))) {
        dual = false;
        break;
      }
    }
    if (dual) reps.insert(sl.canonical(v));
  }
  if (reps.size() * sl.glue_.size() * sl.glue_.size() != ambient.size())
    throw LatticeError("discriminant group order does not match the glue index");

  int label = 0;
  for (auto& r : reps) {
    Eta e;
    e.label = label++;
    e.rep = r;
    e.plus.assign(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(n));
    e.minus.assign(r.begin() + static_cast<std::ptrdiff_t>(n), r.end());
    e.q_mod_one = frac(sl.q(r));
    std::set<std::pair<RVec, int>> pieces;
    for (std::size_t j = 0; j < sl.glue_.size(); ++j) {
      EtaComponent c;
      c.glue_index = static_cast<int>(j);
      c.plus_shift = frac(add(e.plus, sl.glue_[j].plus));
      c.minus_label = sl.minus_.label_of(add(e.minus, sl.glue_[j].minus));
      if (!pieces.insert({c.plus_shift, c.minus_label}).second)
        throw LatticeError("dual decomposition pieces overlap");
      e.components.push_back(std::move(c));
    }
    sl.label_index_[r] = e.label;
    sl.etas_.push_back(std::move(e));
  }
  return sl;
}

const Eta& SplitLattice::eta(int label) const {
  if (label < 0 || label >= static_cast<int>(etas_.size()))
    throw LatticeError("eta label " + std::to_string(label) + " out of range");
  return etas_[static_cast<std::size_t>(label)];
}

std::optional<int> SplitLattice::label_of(const RVec& v) const {
  if (v.size() != n() + 2) return std::nullopt;
  if (!is_integral(mat_vec(gram_, v))) return std::nullopt;
  for (auto& g : generators_)
    if (!is_integer(bilinear(gram_, v, g))) return std::nullopt;
  auto it = label_index_.find(canonical(v));
  if (it == label_index_.end()) return std::nullopt;
  return it->second;
}

bool SplitLattice::contains(const RVec& v) const {
  RVec f = frac(v);
  return std::any_of(glue_.begin(), glue_.end(), [&f](const GlueClass& g) { return g.full == f; });
}

// ---------------------------------------------------------------------------
// File format

SplitLattice parse_lattice(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::optional<std::int64_t> d;
  std::string ideal = "unit";
  std::optional<std::size_t> rank;
  RMat gram;
  std::vector<RVec> glue;
  int lineno = 0;
  auto read_row = [&](std::istringstream& ls) {
    RVec row;
    std::string tok;
    while (ls >> tok) row.push_back(parse_rational(tok));
    return row;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    try {
      if (key == "d") {
        std::int64_t v = 0;
        if (!(ls >> v)) throw LatticeError("expected an integer");
        d = v;
      } else if (key == "ideal") {
        if (!(ls >> ideal)) throw LatticeError("expected an ideal spec");
      } else if (key == "basis") {
        RVec b = read_row(ls);
        if (b.size() != 4) throw LatticeError("basis needs four rationals");
        ideal = "basis:" + format_rational(b[0]) + "," + format_rational(b[1]) + "," + format_rational(b[2]) + "," +
                format_rational(b[3]);
      } else if (key == "rank") {
        std::size_t r = 0;
        if (!(ls >> r)) throw LatticeError("expected a rank");
        rank = r;
      } else if (key == "gram") {
        gram.push_back(read_row(ls));
      } else if (key == "glue") {
        glue.push_back(read_row(ls));
      } else {
        throw LatticeError("unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument& e) {
      throw LatticeError("lattice line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!d) throw LatticeError("lattice file lacks 'd'");
  const std::size_t r = rank.value_or(gram.size());
  if (gram.size() != r) throw LatticeError("lattice file: rank does not match the number of gram rows");
  auto field = QuadField::make(*d);
  return SplitLattice::make(PosLattice::make(gram), IdealLattice::make(field, ideal), glue);
}

SplitLattice load_lattice(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw LatticeError("cannot open lattice file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_lattice(ss.str());
}

std::string serialize_lattice(const SplitLattice& sl) {
  std::ostringstream os;
  os << "d " << sl.field().d() << "\n";
  os << "ideal " << sl.minus().spec() << "\n";
  os << "rank " << sl.n() << "\n";
  for (auto& row : sl.plus().gram()) {
    os << "gram";
    for (auto& x : row) os << ' ' << format_rational(x);
    os << "\n";
  }
  for (auto& g : sl.glue_generators()) {
    os << "glue";
    for (auto& x : g) os << ' ' << format_rational(x);
    os << "\n";
  }
  return os.str();
}

}  // namespace cmv
