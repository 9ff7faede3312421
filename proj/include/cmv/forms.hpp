#pragma once

// Coefficient tables of weakly holomorphic vector-valued forms and exact
// q-expansions of the classical forms.

#include <map>
#include <memory>
#include <optional>
#include <tuple>
#include <string>
#include <utility>
#include <vector>

#include "cmv/arith.hpp"
#include "cmv/lattice.hpp"

namespace cmv {

class FormError : public std::invalid_argument {
 public:
  enum class Kind { malformed, integrality, congruence, infinite_principal_part };
  FormError(Kind kind, const std::string& what) : std::invalid_argument(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Upper limit on principal-part records; a table claiming more is treated as
/// having an unbounded principal part.
inline constexpr std::size_t kMaxPrincipalRecords = 100000;

class FourierForm {
 public:
  using Key = std::pair<int, Rational>;  // (eta label, m)

  /// Validates integrality for m <= 0, the support congruence m + Q(eta) in Z,
  /// and finiteness of the principal part.
  FourierForm(std::shared_ptr<const SplitLattice> lattice, std::string lattice_ref, std::map<Key, Rational> coeffs);

  const SplitLattice& lattice() const { return *lattice_; }
  std::shared_ptr<const SplitLattice> lattice_ptr() const { return lattice_; }
  const std::string& lattice_ref() const { return lattice_ref_; }
  std::int64_t d() const { return lattice_->field().d(); }
  const std::map<Key, Rational>& coeffs() const { return coeffs_; }
  Rational coeff(int eta, const Rational& m) const;
  /// (eta, m, c) with m < 0 and c != 0.
  std::vector<std::tuple<int, Rational, Rational>> principal_part() const;
  /// Nonzero coefficients with m <= 0.
  std::vector<std::tuple<int, Rational, Rational>> nonpositive_part() const;

  FourierForm scaled(const Rational& c) const;
  FourierForm plus(const FourierForm& other) const;

 private:
  std::shared_ptr<const SplitLattice> lattice_;
  std::string lattice_ref_;
  std::map<Key, Rational> coeffs_;
};

/// Form file: "d=<n>", "lattice=<unit|ideal spec|path>", then records
/// "<eta> <m> <c>".  Relative lattice paths resolve against base_dir.
FourierForm parse_form(const std::string& text, const std::string& base_dir = ".");
FourierForm load_form(const std::string& path);
std::string save_form(const FourierForm& form);

/// max{m > 0 : c_eta(-m) != 0}, or 0 for an empty principal part.
Rational m_max(const FourierForm& form);

/// Laurent series sum_{k < size} a_k q^{valuation + k}, exact integers.
class QExpansion {
 public:
  QExpansion() = default;
  QExpansion(int valuation, std::vector<BigInt> coeffs);

  int valuation() const { return valuation_; }
  std::size_t size() const { return coeffs_.size(); }
  const std::vector<BigInt>& coeffs() const { return coeffs_; }
  /// Coefficient of q^n; throws when n is beyond the known terms.
  BigInt coeff(int n) const;
  QExpansion truncated(std::size_t terms) const;

  friend QExpansion operator+(const QExpansion& a, const QExpansion& b);
  friend QExpansion operator-(const QExpansion& a, const QExpansion& b);
  friend QExpansion operator*(const QExpansion& a, const QExpansion& b);
  /// Requires a unit leading coefficient.
  QExpansion inverse() const;
  friend QExpansion operator/(const QExpansion& a, const QExpansion& b) { return a * b.inverse(); }
  friend bool operator==(const QExpansion& a, const QExpansion& b);

  /// "q^-1 + 744 + 196884*q".
  std::string to_string() const;

 private:
  int valuation_ = 0;
  std::vector<BigInt> coeffs_;
};

/// delta, e4, e6 with N terms from their leading exponent; j with the polar
/// term followed by the N coefficients of q^0 .. q^{N-1}.
QExpansion classical_qexp(const std::string& name, std::size_t N);

/// Coefficients c(-1), c(0), ..., c(n-1) of j, cached across calls.
std::vector<BigInt> j_coefficients(std::size_t n);

}  // namespace cmv
