#pragma once

// Bottom-up register automata over a pluggable algebra.
//
// Register k of the automaton is the variable `rk` in output terms; inside a
// rule, register k of the i-th child state is `rk.i`.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hilbert/algebra.hpp"
#include "hilbert/forest.hpp"

namespace hilbert {

using RankedTree = OrderedTree;

struct RankedSymbol {
  std::string name;
  std::size_t rank = 0;
  friend bool operator==(const RankedSymbol&, const RankedSymbol&) = default;
  friend auto operator<=>(const RankedSymbol&, const RankedSymbol&) = default;
};

std::string register_name(std::size_t reg);                    // r3
std::string argument_register(std::size_t reg, std::size_t arg);  // r3.2
/// (register, argument) of `r3.2`, or (register, 0) for `r3`; nullopt otherwise.
std::optional<std::pair<std::size_t, std::size_t>> parse_register_name(std::string_view name);

struct AutomatonState {
  std::string name;
  std::vector<int> sorts;  // one per register
};

struct Rule {
  std::string symbol;
  std::vector<std::size_t> children;  // state indices
  std::size_t target = 0;
  std::vector<Term> update;  // one term per register
};

class AutomatonError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class RegisterAutomaton {
 public:
  /// Validates arities, sorts and output typing; deduplicates rules.
  RegisterAutomaton(AlgebraPtr algebra, std::vector<RankedSymbol> signature, std::size_t registers,
                    std::vector<AutomatonState> states, std::vector<Rule> rules,
                    std::map<std::size_t, Term> output);

  const AlgebraPtr& algebra() const { return algebra_; }
  const std::vector<RankedSymbol>& signature() const { return signature_; }
  std::optional<std::size_t> rank(std::string_view symbol) const;
  std::size_t registers() const { return registers_; }
  const std::vector<AutomatonState>& states() const { return states_; }
  std::optional<std::size_t> state_index(std::string_view name) const;
  const std::vector<Rule>& rules() const { return rules_; }
  const std::map<std::size_t, Term>& output() const { return output_; }

  /// Sorts of the rule variables rk.i, for parsing and checking terms.
  VariableSorts rule_variables(const std::vector<std::size_t>& children) const;
  VariableSorts output_variables(std::size_t state) const;

 private:
  AlgebraPtr algebra_;
  std::vector<RankedSymbol> signature_;
  std::size_t registers_;
  std::vector<AutomatonState> states_;
  std::vector<Rule> rules_;
  std::map<std::size_t, Term> output_;
};

/// File format:
///   algebra UF
///   alphabet a b               (forest labels or word letters; optional)
///   signature a/2 _|_/0
///   registers 1
///   state q : F                (one sort per register; omitted means sort 0)
///   a(q,q) -> q { r1 := a(r1.1) + r1.2 }
///   _|_ -> q { r1 := 0 }
///   output q { r1 }
/// `#` starts a comment.
RegisterAutomaton parse_automaton(std::string_view text);
std::string automaton_text(const RegisterAutomaton& m);

struct Configuration {
  std::size_t state = 0;
  std::vector<Value> registers;
  friend bool operator==(const Configuration&, const Configuration&) = default;
  friend bool operator<(const Configuration& a, const Configuration& b) {
    return a.state != b.state ? a.state < b.state : a.registers < b.registers;
  }
};

struct RunResult {
  std::set<Configuration> configurations;
  std::set<Value> outputs;
  bool saturated = false;  // some configuration set hit the cap
};

/// Configurations reachable at one node from the children's configuration sets.
std::set<Configuration> step_configurations(const RegisterAutomaton& m, const std::string& symbol,
                                            const std::vector<const std::set<Configuration>*>& children,
                                            std::size_t cap, bool* saturated);
std::set<Value> configuration_outputs(const RegisterAutomaton& m, const std::set<Configuration>& configs);

RunResult run_ra(const RegisterAutomaton& m, const RankedTree& t, std::size_t cap = 100000);

bool check_deterministic(const RegisterAutomaton& m);

/// Product of M and M' over the same signature and ring algebra: registers of
/// M' follow those of M, outputs are Ω(q) − Ω'(q'). Reachable states only.
RegisterAutomaton cross_difference(const RegisterAutomaton& m, const RegisterAutomaton& m2);
RegisterAutomaton self_product(const RegisterAutomaton& m);

/// All trees with exactly `size` nodes over the signature, in a fixed order.
std::vector<RankedTree> trees_of_size(const std::vector<RankedSymbol>& signature, std::size_t size);

// ---------------------------------------------------------------- tree automata

struct NftaTransition {
  std::string symbol;
  std::vector<std::size_t> children;
  std::size_t target = 0;
  friend auto operator<=>(const NftaTransition&, const NftaTransition&) = default;
};

struct Nfta {
  std::vector<RankedSymbol> signature;
  std::size_t states = 0;
  std::vector<NftaTransition> transitions;
  std::set<std::size_t> accepting;

  std::set<std::size_t> run(const RankedTree& t) const;
  bool accepts(const RankedTree& t) const;
};

/// Subset construction over reachable subsets, including the empty subset, so
/// the result is deterministic and complete.
Nfta determinize(const Nfta& a);
/// Adds a sink state so every symbol and child tuple has a transition.
Nfta complete(const Nfta& a);
Nfta complement(const Nfta& a);
Nfta intersect(const Nfta& a, const Nfta& b);
/// A smallest accepted tree, if any.
std::optional<RankedTree> find_accepted(const Nfta& a);
bool is_empty(const Nfta& a);

Nfta domain_nfta(const RegisterAutomaton& m);

struct DomainComparison {
  bool equal = true;
  std::optional<RankedTree> witness;  // in exactly one domain
  bool witness_in_first = false;
};
DomainComparison domains_equivalent(const RegisterAutomaton& m, const RegisterAutomaton& m2);

}  // namespace hilbert
