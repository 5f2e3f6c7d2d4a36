#pragma once

// Buchberger's algorithm, multivariate division and ideal membership.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hilbert/polynomial.hpp"

namespace hilbert {

/// Raised when a basis computation exceeds its GroebnerLimits.
class ResourceExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GroebnerLimits {
  std::size_t max_pairs = 20000;       // S-pairs reduced
  std::size_t max_basis_size = 400;    // generators in the running basis
  std::uint32_t max_degree = 200;      // total degree of any new generator
};

class IdealBasis {
 public:
  IdealBasis() = default;
  IdealBasis(std::vector<Polynomial> generators, MonomialOrder order, bool is_groebner = false);

  const std::vector<Polynomial>& generators() const { return generators_; }
  const MonomialOrder& order() const { return order_; }
  bool is_groebner() const { return is_groebner_; }
  bool is_zero_ideal() const { return generators_.empty(); }
  /// Only meaningful on a Groebner basis: the basis is {c} for a constant c.
  bool is_unit() const;

 private:
  std::vector<Polynomial> generators_;  // never contains zero
  MonomialOrder order_;
  bool is_groebner_ = false;
};

/// Full remainder of `g` by the basis generators: g - r lies in the ideal and no
/// monomial of r is divisible by a generator's leading monomial.
Polynomial multivariate_reduce(const Polynomial& g, const IdealBasis& basis);

IdealBasis buchberger(const std::vector<Polynomial>& generators,
                      const MonomialOrder& order = MonomialOrder(),
                      const GroebnerLimits& limits = GroebnerLimits());

/// Membership test; computes a Groebner basis first when `basis` is not one.
bool ideal_member(const Polynomial& g, const IdealBasis& basis,
                  const GroebnerLimits& limits = GroebnerLimits());

IdealBasis ideal_sum_basis(const IdealBasis& a, const IdealBasis& b,
                           const GroebnerLimits& limits = GroebnerLimits());

/// When g is in the ideal of `generators`, returns cofactors c with
/// g = sum c[i] * generators[i]; otherwise nullopt.
std::optional<std::vector<Polynomial>> membership_cofactors(
    const Polynomial& g, const std::vector<Polynomial>& generators,
    const MonomialOrder& order = MonomialOrder(), const GroebnerLimits& limits = GroebnerLimits());

/// True iff every S-polynomial of the generator pairs reduces to zero.
bool satisfies_buchberger_criterion(const IdealBasis& basis);

}  // namespace hilbert
