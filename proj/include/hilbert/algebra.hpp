#pragma once

// Multi-sorted algebras, terms over them, and simulations between algebras.
//
// Values of every concrete algebra share one variant type. Terms are immutable
// shared trees; constant subterms are folded when built through
// Algebra::make_apply, so parsing and lifting yield compact terms.

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hilbert/forest.hpp"
#include "hilbert/polynomial.hpp"

namespace hilbert {

struct Word {
  std::string letters;  // one character per letter
  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word&, const Word&) = default;
};

using Value = std::variant<Rational, Polynomial, Forest, Context, Word>;

std::string debug_value_text(const Value& v);

class SortError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnboundVariable : public std::invalid_argument {
 public:
  explicit UnboundVariable(const std::string& name)
      : std::invalid_argument("unbound variable " + name) {}
};

class Term {
 public:
  enum class Kind { variable, constant, apply };

  Term();  // the constant 0 of sort 0; placeholder only
  static Term variable(std::string name, int sort);
  static Term constant(Value value, int sort);
  /// No sort checking or folding; see Algebra::make_apply.
  static Term apply(std::string op, std::vector<Term> args, int sort);

  Kind kind() const { return node_->kind; }
  bool is_variable() const { return kind() == Kind::variable; }
  bool is_constant() const { return kind() == Kind::constant; }
  bool is_apply() const { return kind() == Kind::apply; }
  /// Variable name or operation symbol.
  const std::string& name() const { return node_->name; }
  const Value& value() const { return node_->value; }
  int sort() const { return node_->sort; }
  const std::vector<Term>& args() const { return node_->args; }

  std::set<std::string> variables() const;
  std::size_t size() const;
  /// Generic `op(children)` rendering for diagnostics.
  std::string debug_text() const;

  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node {
    Kind kind;
    std::string name;
    Value value;
    int sort;
    std::vector<Term> args;
  };
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct OperationSymbol {
  std::string name;
  std::vector<int> args;
  int result = 0;
};

/// Maps a name to the sort of the variable it denotes, or nullopt when the name
/// is not a variable (then the algebra may read it as a constant or label).
using VariableSorts = std::function<std::optional<int>(const std::string&)>;

class Algebra {
 public:
  virtual ~Algebra() = default;

  virtual std::string name() const = 0;
  virtual const std::vector<std::string>& sorts() const = 0;
  int sort_index(std::string_view sort) const;
  const std::string& sort_name(int sort) const { return sorts().at(static_cast<std::size_t>(sort)); }

  /// The finitely many symbols available (labels as declared).
  virtual std::vector<OperationSymbol> operations() const = 0;
  /// Result sort of `op` at these argument sorts; nullopt if ill-sorted or unknown.
  virtual std::optional<int> resolve(const std::string& op, const std::vector<int>& arg_sorts) const = 0;
  virtual int sort_of(const Value& v) const = 0;
  virtual Value apply(const std::string& op, const std::vector<Value>& args) const = 0;
  /// Q and Q[x]: the automata products and the checker need subtraction.
  virtual bool has_subtraction() const { return false; }

  virtual Term parse_term(std::string_view text, const VariableSorts& vars) const = 0;
  virtual std::string render_term(const Term& t) const = 0;
  virtual Value parse_value(std::string_view text) const = 0;
  virtual std::string value_text(const Value& v) const { return debug_value_text(v); }

  /// Sort-checked application with constant folding.
  Term make_apply(const std::string& op, std::vector<Term> args) const;
  Term make_constant(const Value& v) const { return Term::constant(v, sort_of(v)); }
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

using Assignment = std::map<std::string, Value>;

Value eval_term(const Term& t, const Assignment& assignment, const Algebra& algebra);

/// Simultaneous replacement of variables; rebuilt through make_apply.
Term substitute_term(const Term& t, const std::map<std::string, Term>& replacement,
                     const Algebra& algebra);

/// α : A → B^width with every source operation mirrored by target terms.
struct SimulationSpec {
  AlgebraPtr source;
  AlgebraPtr target;
  std::size_t width = 1;
  std::function<std::vector<Value>(const Value&)> alpha;
  /// Target terms (one per coordinate) over variables sim_variable(i, c) for
  /// argument i and coordinate c; nullopt when the operation is not mapped.
  std::function<std::optional<std::vector<Term>>(const OperationSymbol&)> op_map;
  /// Coordinate of α that is injective on the values automata output.
  std::size_t output_coordinate = 0;
};

/// Name of the target variable for argument `arg` (0-based) and coordinate `coord`.
std::string sim_variable(std::size_t arg, std::size_t coord);

class UnmappedOperation : public std::invalid_argument {
 public:
  explicit UnmappedOperation(const std::string& op)
      : std::invalid_argument("operation not mapped by simulation: " + op) {}
};

/// Names the target variable standing for coordinate `coord` of source variable `name`.
using LiftRenamer = std::function<std::string(const std::string& name, std::size_t coord)>;
std::string default_lift_name(const std::string& name, std::size_t coord);

std::vector<Term> lift_simulation_term(const SimulationSpec& s, const Term& t,
                                       const LiftRenamer& rename = default_lift_name);

/// Checks α(ρ(a...)) = f(α(a)...) for every operation and every argument tuple
/// drawn from `samples` (well-sorted ones only), up to `max_tuples` per operation.
bool verify_simulation_samples(const SimulationSpec& s, const std::vector<Value>& samples,
                               std::size_t max_tuples = 20000);

/// s2 ∘ s1 : A → C, width w1·w2, coordinate c1·w2 + c2.
SimulationSpec compose(const SimulationSpec& s1, const SimulationSpec& s2);

}  // namespace hilbert
