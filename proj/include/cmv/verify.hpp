#pragma once

// Acceptance checks and the independent oracles they rely on.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cmv/cmvalue.hpp"

namespace cmv::verify {

struct CriterionResult {
  std::string id;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

std::vector<std::string> criterion_ids();
CriterionResult run_criterion(const std::string& id);

// Oracles.

/// Jacobi symbol (a|n) for odd n > 0 by the reciprocity algorithm.
int jacobi_oracle(std::int64_t a, std::int64_t n);
/// sum_{n | t} (-d | n), by divisor enumeration.
std::int64_t rho_divisor_sum(std::int64_t d, std::int64_t t);
/// sum_eta sum_{m >= 0} c_eta(-m) #{v in eta + L : v- = 0, Q(v) = m}, by box
/// enumeration of L+^dual and a membership test against the generators of L.
Rational brute_force_c00(const FourierForm& F);

/// Random valid coefficient tables over small split and glued lattices.
std::vector<FourierForm> random_corpus(std::uint64_t seed, std::size_t count,
                                       const std::vector<std::int64_t>& ds = {7, 15, 23});

/// Default ideal lattices of the kappa sweep, including one non-principal
/// ideal per field with h > 1.
std::vector<IdealLattice> sweep_lattices(std::int64_t d);

}  // namespace cmv::verify
