#pragma once

// Exact multivariate polynomials over Q.
//
// A Polynomial is a sparse list of (Monomial, Rational) terms kept sorted by
// the internal monomial comparison and free of zero coefficients, so two
// polynomials are equal iff their term lists are equal. Variables are interned
// names; the printing order is chosen separately through a MonomialOrder.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace hilbert {

using Integer = mpz_class;
using Rational = mpq_class;

Rational parse_rational(std::string_view text);
std::string rational_text(const Rational& value);

using VarId = std::uint32_t;

VarId intern_variable(std::string_view name);
const std::string& variable_name(VarId id);

/// Orders names by alphabetic runs and numeric runs, so r2 < r10.
int natural_compare(std::string_view a, std::string_view b);

class Monomial {
 public:
  using Power = std::pair<VarId, std::uint32_t>;

  Monomial() = default;
  explicit Monomial(std::vector<Power> powers);
  static Monomial variable(VarId var, std::uint32_t exponent = 1);

  std::span<const Power> powers() const { return powers_; }
  std::uint32_t degree(VarId var) const;
  std::uint32_t total_degree() const;
  bool is_one() const { return powers_.empty(); }
  bool divides(const Monomial& other) const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);

  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend auto operator<=>(const Monomial&, const Monomial&) = default;

 private:
  std::vector<Power> powers_;  // sorted by VarId, exponents > 0
};

enum class OrderKind { lex, degrevlex };

/// Term order used for printing and for Groebner computations. Variables listed
/// in `precedence` rank highest (earliest first); all others follow in natural
/// name order.
class MonomialOrder {
 public:
  explicit MonomialOrder(OrderKind kind = OrderKind::degrevlex,
                         std::vector<std::string> precedence = {});

  static MonomialOrder lex(std::vector<std::string> precedence = {}) {
    return MonomialOrder(OrderKind::lex, std::move(precedence));
  }
  static MonomialOrder degrevlex(std::vector<std::string> precedence = {}) {
    return MonomialOrder(OrderKind::degrevlex, std::move(precedence));
  }
  static MonomialOrder from_name(std::string_view name);

  OrderKind kind() const { return kind_; }
  std::string name() const;
  const std::vector<std::string>& precedence() const { return precedence_; }

  /// True if `a` ranks above `b` in variable precedence.
  bool var_greater(VarId a, VarId b) const;
  std::vector<VarId> sort_variables(std::vector<VarId> vars) const;

  /// <0, 0, >0 as a ranks below, equal to, above b.
  int compare(const Monomial& a, const Monomial& b) const;

 private:
  OrderKind kind_;
  std::vector<std::string> precedence_;
  std::unordered_map<std::string, std::size_t> rank_;
};

class IncompletePoint : public std::runtime_error {
 public:
  explicit IncompletePoint(const std::string& var)
      : std::runtime_error("assignment does not bind variable " + var) {}
};

class Polynomial {
 public:
  using Term = std::pair<Monomial, Rational>;

  Polynomial() = default;
  Polynomial(const Rational& constant);  // NOLINT: implicit by design of Q in Q[X]
  Polynomial(long constant);             // NOLINT
  static Polynomial variable(std::string_view name);
  static Polynomial variable(VarId var);
  static Polynomial term(Monomial monomial, Rational coefficient);
  /// Builds from arbitrary terms, combining duplicates and dropping zeros.
  static Polynomial from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  std::optional<Rational> as_constant() const;
  std::size_t term_count() const { return terms_.size(); }
  std::uint32_t total_degree() const;
  std::uint32_t degree(VarId var) const;
  std::vector<VarId> variables() const;
  Rational coefficient(const Monomial& m) const;

  /// Leading term with respect to `order`; the polynomial must be nonzero.
  const Term& leading_term(const MonomialOrder& order) const;

  Polynomial operator-() const;
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial& operator+=(const Polynomial& b) { return *this = *this + b; }
  Polynomial& operator-=(const Polynomial& b) { return *this = *this - b; }
  Polynomial& operator*=(const Polynomial& b) { return *this = *this * b; }
  Polynomial scaled(const Rational& c) const;
  Polynomial pow(std::uint32_t exponent) const;

  Rational evaluate(const std::map<VarId, Rational>& point) const;
  Rational evaluate(const std::map<std::string, Rational>& point) const;

  Polynomial substitute(VarId var, const Polynomial& replacement) const;
  /// Simultaneous substitution; variables without an entry are kept.
  Polynomial substitute(const std::map<VarId, Polynomial>& replacement) const;
  Polynomial rename(const std::map<VarId, VarId>& renaming) const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;
  friend bool operator<(const Polynomial& a, const Polynomial& b) { return a.terms_ < b.terms_; }

 private:
  std::vector<Term> terms_;  // strictly increasing monomials, nonzero coefficients
};

/// Deterministic rendering, terms in descending `order`; parse_polynomial
/// inverts it.
std::string canonical_text(const Polynomial& p, const MonomialOrder& order = MonomialOrder());

/// Grammar: integer or p/q literals, identifiers, `+ - * ^` and parentheses.
Polynomial parse_polynomial(std::string_view text);

}  // namespace hilbert
