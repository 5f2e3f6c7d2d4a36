#pragma once

// Concrete algebras and their term grammars.
//
//   Q, Qx, Qx_subs   infix `+ - * ^`, rationals `3/4`, parentheses; Qx adds the
//                    constant `x`; Qx_subs adds postfix `t[x:=u]`.
//   UF, UCF          `t + u`, `label(t, u)` for root_label(t + u), bare `label`
//                    for a single node, `0` for the empty forest; UCF adds the
//                    hole `?` and postfix `t[?:=u]`.
//   Words            `t * u` concatenation and quoted literals `"ab"`.
//
// Operation names: add sub mul neg pow_<k> subs (rings); add empty hole
// root_<label> subs (forests); concat (words).

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hilbert/algebra.hpp"

namespace hilbert {

enum class RingKind { rationals, polynomials, substitution };

class RingAlgebra : public Algebra {
 public:
  explicit RingAlgebra(RingKind kind);
  RingKind kind() const { return kind_; }

  std::string name() const override;
  const std::vector<std::string>& sorts() const override { return sorts_; }
  std::vector<OperationSymbol> operations() const override;
  std::optional<int> resolve(const std::string& op, const std::vector<int>& arg_sorts) const override;
  int sort_of(const Value& v) const override;
  Value apply(const std::string& op, const std::vector<Value>& args) const override;
  bool has_subtraction() const override { return true; }
  Term parse_term(std::string_view text, const VariableSorts& vars) const override;
  std::string render_term(const Term& t) const override;
  Value parse_value(std::string_view text) const override;

  /// Wraps a rational as a value of this ring.
  Value from_rational(const Rational& r) const;
  Value zero() const { return from_rational(Rational(0)); }

 private:
  RingKind kind_;
  std::vector<std::string> sorts_;
};

class ForestAlgebra : public Algebra {
 public:
  /// `with_contexts` selects UCF (values are Context) over UF (values are
  /// Forest). An empty label list accepts any label.
  ForestAlgebra(bool with_contexts, std::vector<std::string> labels);
  bool with_contexts() const { return contexts_; }
  const std::vector<std::string>& labels() const { return labels_; }

  std::string name() const override { return contexts_ ? "UCF" : "UF"; }
  const std::vector<std::string>& sorts() const override { return sorts_; }
  std::vector<OperationSymbol> operations() const override;
  std::optional<int> resolve(const std::string& op, const std::vector<int>& arg_sorts) const override;
  int sort_of(const Value& v) const override;
  Value apply(const std::string& op, const std::vector<Value>& args) const override;
  Term parse_term(std::string_view text, const VariableSorts& vars) const override;
  std::string render_term(const Term& t) const override;
  Value parse_value(std::string_view text) const override;
  std::string value_text(const Value& v) const override;

  Value from_forest(const Forest& f) const;
  const Forest& as_forest(const Value& v) const;

 private:
  bool label_allowed(const std::string& label) const;
  bool contexts_;
  std::vector<std::string> labels_;
  std::vector<std::string> sorts_;
};

class WordAlgebra : public Algebra {
 public:
  explicit WordAlgebra(std::string alphabet);
  const std::string& alphabet() const { return alphabet_; }

  std::string name() const override { return "Words"; }
  const std::vector<std::string>& sorts() const override { return sorts_; }
  std::vector<OperationSymbol> operations() const override;
  std::optional<int> resolve(const std::string& op, const std::vector<int>& arg_sorts) const override;
  int sort_of(const Value& v) const override;
  Value apply(const std::string& op, const std::vector<Value>& args) const override;
  Term parse_term(std::string_view text, const VariableSorts& vars) const override;
  std::string render_term(const Term& t) const override;
  Value parse_value(std::string_view text) const override;

 private:
  std::string alphabet_;
  std::vector<std::string> sorts_;
};

AlgebraPtr rational_algebra();
AlgebraPtr polynomial_algebra();
AlgebraPtr substitution_algebra();
AlgebraPtr forest_algebra(std::vector<std::string> labels = {});
AlgebraPtr context_algebra(std::vector<std::string> labels = {});
AlgebraPtr word_algebra(std::string alphabet);

/// By name: Q, Qx, Qx_subs, UF, UCF, Words. `alphabet` lists forest labels or
/// word letters (one character each).
AlgebraPtr make_algebra(std::string_view name, const std::vector<std::string>& alphabet = {});

std::string root_op(std::string_view label);
std::optional<std::string> root_label(std::string_view op);

/// A ring term as a polynomial in its variables, with the constant x of Q[x]
/// as the variable `x`. nullopt when a substitution cannot be expanded (its
/// left side mentions variables).
std::optional<Polynomial> ring_term_polynomial(const Term& t);

}  // namespace hilbert
