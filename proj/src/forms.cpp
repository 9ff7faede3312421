#include "cmv/forms.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <tuple>

namespace cmv {

// ---------------------------------------------------------------------------
// FourierForm

FourierForm::FourierForm(std::shared_ptr<const SplitLattice> lattice, std::string lattice_ref,
                         std::map<Key, Rational> coeffs)
    : lattice_(std::move(lattice)), lattice_ref_(std::move(lattice_ref)) {
  std::size_t principal = 0;
  const int n_eta = static_cast<int>(lattice_->etas().size());
  for (auto& [key, c] : coeffs) {
    if (c == 0) continue;
    const auto& [eta, m] = key;
    if (eta < 0 || eta >= n_eta)
      throw FormError(FormError::Kind::malformed, "eta label " + std::to_string(eta) + " out of range");
    if (m <= 0 && !is_integer(c))
      throw FormError(FormError::Kind::integrality, "c_" + std::to_string(eta) + "(" + format_rational(m) +
                                                         ") = " + format_rational(c) + " is not an integer");
    if (!is_integer(m + lattice_->eta(eta).q_mod_one))
      throw FormError(FormError::Kind::congruence, "c_" + std::to_string(eta) + "(" + format_rational(m) +
                                                        ") != 0 but m + Q(eta) is not an integer");
    if (m < 0 && ++principal > kMaxPrincipalRecords)
      throw FormError(FormError::Kind::infinite_principal_part, "principal part is not finite");
    coeffs_.emplace(key, c);
  }
}

Rational FourierForm::coeff(int eta, const Rational& m) const {
  auto it = coeffs_.find({eta, m});
  return it == coeffs_.end() ? Rational(0) : it->second;
}

std::vector<std::tuple<int, Rational, Rational>> FourierForm::principal_part() const {
  std::vector<std::tuple<int, Rational, Rational>> out;
  for (auto& [key, c] : coeffs_)
    if (key.second < 0) out.emplace_back(key.first, key.second, c);
  return out;
}

std::vector<std::tuple<int, Rational, Rational>> FourierForm::nonpositive_part() const {
  std::vector<std::tuple<int, Rational, Rational>> out;
  for (auto& [key, c] : coeffs_)
    if (key.second <= 0) out.emplace_back(key.first, key.second, c);
  return out;
}

FourierForm FourierForm::scaled(const Rational& c) const {
  std::map<Key, Rational> out;
  for (auto& [key, v] : coeffs_) out[key] = c * v;
  return FourierForm(lattice_, lattice_ref_, out);
}

FourierForm FourierForm::plus(const FourierForm& other) const {
  std::map<Key, Rational> out = coeffs_;
  for (auto& [key, v] : other.coeffs_) out[key] += v;
  return FourierForm(lattice_, lattice_ref_, out);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool is_ideal_spec(const std::string& ref) {
  return ref == "unit" || ref.rfind("prime:", 0) == 0 || ref.rfind("basis:", 0) == 0;
}

}  // namespace

FourierForm parse_form(const std::string& text, const std::string& base_dir) {
  std::istringstream in(text);
  std::string line;
  std::optional<std::int64_t> d;
  std::optional<std::string> ref;
  std::map<FourierForm::Key, Rational> coeffs;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw FormError(FormError::Kind::malformed, "form line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (auto eq = line.find('='); eq != std::string::npos) {
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key == "d") {
        try {
          d = std::stoll(value);
        } catch (const std::exception&) {
          fail("bad d '" + value + "'");
        }
      } else if (key == "lattice") {
        ref = value;
      } else {
        fail("unknown header '" + key + "'");
      }
      continue;
    }
    std::istringstream ls(line);
    std::string eta_s, m_s, c_s, extra;
    if (!(ls >> eta_s >> m_s >> c_s) || (ls >> extra)) fail("expected 'eta m c'");
    try {
      const int eta = std::stoi(eta_s);
      const Rational m = parse_rational(m_s);
      if (coeffs.count({eta, m})) fail("duplicate record");
      coeffs[{eta, m}] = parse_rational(c_s);
    } catch (const FormError&) {
      throw;
    } catch (const std::exception& e) {
      fail(e.what());
    }
  }
  if (!d) throw FormError(FormError::Kind::malformed, "form file lacks 'd='");
  if (!ref) ref = "unit";
  std::shared_ptr<const SplitLattice> lattice;
  try {
    if (is_ideal_spec(*ref)) {
      lattice = std::make_shared<const SplitLattice>(
          SplitLattice::trivial(IdealLattice::make(QuadField::make(*d), *ref)));
    } else {
      std::filesystem::path p(*ref);
      if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
      lattice = std::make_shared<const SplitLattice>(load_lattice(p.string()));
      if (lattice->field().d() != *d) throw FormError(FormError::Kind::malformed, "lattice file has a different d");
    }
  } catch (const LatticeError& e) {
    throw FormError(FormError::Kind::malformed, std::string("lattice: ") + e.what());
  } catch (const UnsupportedDiscriminant& e) {
    throw FormError(FormError::Kind::malformed, e.what());
  }
  return FourierForm(lattice, *ref, coeffs);
}

FourierForm load_form(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw FormError(FormError::Kind::malformed, "cannot open form file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_form(ss.str(), std::filesystem::path(path).parent_path().string().empty()
                                  ? "."
                                  : std::filesystem::path(path).parent_path().string());
}

std::string save_form(const FourierForm& form) {
  std::ostringstream os;
  os << "d=" << form.d() << "\n";
  os << "lattice=" << form.lattice_ref() << "\n";
  for (auto& [key, c] : form.coeffs()) os << key.first << ' ' << format_rational(key.second) << ' ' << format_rational(c) << "\n";
  return os.str();
}

Rational m_max(const FourierForm& form) {
  Rational best = 0;
  for (auto& [eta, m, c] : form.principal_part())
    if (-m > best) best = -m;
  return best;
}

// ---------------------------------------------------------------------------
// QExpansion

QExpansion::QExpansion(int valuation, std::vector<BigInt> coeffs) : valuation_(valuation), coeffs_(std::move(coeffs)) {
  std::size_t lead = 0;
  while (lead < coeffs_.size() && coeffs_[lead] == 0) ++lead;
  if (lead == coeffs_.size()) {
    valuation_ += static_cast<int>(lead);
    coeffs_.clear();
    return;
  }
  if (lead > 0) {
    coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(lead));
    valuation_ += static_cast<int>(lead);
  }
}

BigInt QExpansion::coeff(int n) const {
  if (n < valuation_) return 0;
  const auto k = static_cast<std::size_t>(n - valuation_);
  if (k >= coeffs_.size()) throw std::out_of_range("q-expansion coefficient beyond known terms");
  return coeffs_[k];
}

QExpansion QExpansion::truncated(std::size_t terms) const {
  std::vector<BigInt> c(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(std::min(terms, coeffs_.size())));
  return QExpansion(valuation_, c);
}

namespace {

QExpansion add_scaled(const QExpansion& a, const QExpansion& b, int sign) {
  const int v = std::min(a.valuation(), b.valuation());
  const int end = std::min(a.valuation() + static_cast<int>(a.size()), b.valuation() + static_cast<int>(b.size()));
  std::vector<BigInt> c;
  for (int n = v; n < end; ++n) c.push_back(a.coeff(n) + sign * b.coeff(n));
  return QExpansion(v, c);
}

}  // namespace

QExpansion operator+(const QExpansion& a, const QExpansion& b) { return add_scaled(a, b, 1); }
QExpansion operator-(const QExpansion& a, const QExpansion& b) { return add_scaled(a, b, -1); }

QExpansion operator*(const QExpansion& a, const QExpansion& b) {
  const std::size_t n = std::min(a.size(), b.size());
  std::vector<BigInt> c(n, BigInt(0));
  for (std::size_t i = 0; i < n; ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (std::size_t j = 0; i + j < n; ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return QExpansion(a.valuation_ + b.valuation_, c);
}

QExpansion QExpansion::inverse() const {
  if (coeffs_.empty() || (coeffs_[0] != 1 && coeffs_[0] != -1))
    throw ArithmeticError("q-expansion inverse needs a unit leading coefficient");
  const std::size_t n = coeffs_.size();
  const BigInt lead = coeffs_[0];
  std::vector<BigInt> b(n, BigInt(0));
  b[0] = lead;
  for (std::size_t k = 1; k < n; ++k) {
    BigInt s = 0;
    for (std::size_t i = 1; i <= k; ++i) s += coeffs_[i] * b[k - i];
    b[k] = -lead * s;
  }
  return QExpansion(-valuation_, b);
}

bool operator==(const QExpansion& a, const QExpansion& b) {
  return a.valuation_ == b.valuation_ && a.coeffs_ == b.coeffs_;
}

std::string QExpansion::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    const BigInt& c = coeffs_[k];
    if (c == 0) continue;
    const int e = valuation_ + static_cast<int>(k);
    BigInt mag = c < 0 ? BigInt(-c) : c;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (e == 0) {
      os << mag;
      continue;
    }
    if (mag != 1) os << mag << "*";
    os << "q";
    if (e != 1) os << "^" << e;
  }
  if (first) os << "0";
  return os.str();
}

namespace {

// prod_{k>=1} (1 - q^k) to n terms via pentagonal numbers.
QExpansion euler_product(std::size_t n) {
  std::vector<BigInt> c(n, BigInt(0));
  for (long k = 0;; ++k) {
    bool any = false;
    for (long s : {k, -k}) {
      if (k == 0 && s < 0) continue;
      const long e = s * (3 * s - 1) / 2;
      if (e < static_cast<long>(n)) {
        c[static_cast<std::size_t>(e)] = (k % 2 == 0) ? 1 : -1;
        any = true;
      }
    }
    if (!any) break;
  }
  return QExpansion(0, c);
}

QExpansion eisenstein(std::size_t n, int power, long scale) {
  std::vector<BigInt> sigma(n, BigInt(0));
  for (std::size_t dv = 1; dv < n; ++dv) {
    BigInt dp = boost::multiprecision::pow(BigInt(dv), static_cast<unsigned>(power));
    for (std::size_t m = dv; m < n; m += dv) sigma[m] += dp;
  }
  std::vector<BigInt> c(n);
  c[0] = 1;
  for (std::size_t k = 1; k < n; ++k) c[k] = scale * sigma[k];
  return QExpansion(0, c);
}

QExpansion delta_series(std::size_t n) {
  QExpansion p = euler_product(n);
  QExpansion p2 = p * p;
  QExpansion p4 = p2 * p2;
  QExpansion p8 = p4 * p4;
  QExpansion p24 = p8 * p8 * p8;
  return QExpansion(1, p24.coeffs());
}

}  // namespace

std::vector<BigInt> j_coefficients(std::size_t n) {
  static std::mutex mutex;
  static std::vector<BigInt> cache;
  std::lock_guard<std::mutex> lock(mutex);
  if (cache.size() < n + 1) {
    const std::size_t terms = std::max(n + 1, 2 * cache.size());
    QExpansion e4 = eisenstein(terms, 3, 240);
    QExpansion j = e4 * e4 * e4 / delta_series(terms);
    cache = j.coeffs();
    cache.resize(terms);
  }
  return std::vector<BigInt>(cache.begin(), cache.begin() + static_cast<std::ptrdiff_t>(n + 1));
}

QExpansion classical_qexp(const std::string& name, std::size_t N) {
  if (N < 1) throw std::invalid_argument("q-expansion needs N >= 1");
  if (name == "delta") return delta_series(N);
  if (name == "e4") return eisenstein(N, 3, 240);
  if (name == "e6") return eisenstein(N, 5, -504);
  if (name == "j") return QExpansion(-1, j_coefficients(N));
  throw std::invalid_argument("unknown q-expansion '" + name + "' (expected delta, e4, e6, j)");
}

}  // namespace cmv
