#pragma once

// Zeroness, functionality and equivalence of register automata over Q, Q[x]
// and Q[x]^subs: a counterexample search dovetailed with a search for an
// inductive family of polynomial ideals, each candidate verified with
// Groebner bases.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hilbert/automaton.hpp"
#include "hilbert/groebner.hpp"

namespace hilbert {

enum class Outcome { Zero, NonZero, Functional, NotFunctional, Equivalent, NotEquivalent, DomainsDiffer, Unknown };
std::string outcome_name(Outcome o);
bool is_definite(Outcome o);

/// Per-state ideals over the state's registers r1..rn (and the constant x of
/// Q[x]). States without an entry carry the zero ideal.
struct IdealFamily {
  std::map<std::size_t, IdealBasis> bases;
  std::string key() const;
};

std::string ideal_family_text(const RegisterAutomaton& m, const IdealFamily& f);

struct CheckerConfig {
  double budget_secs = 60.0;
  std::size_t max_steps = 200000;
  std::size_t max_tree_size = 10;
  unsigned max_degree = 3;            // template degree cap
  unsigned max_generators = 2;        // grid generators per state
  int coefficient_height = 2;         // grid numerators in [-h, h]
  std::vector<int> denominators = {1, 2};
  std::size_t grid_generators_per_state = 48;
  std::size_t grid_families_per_round = 2000;
  std::size_t configuration_cap = 100000;
  std::uint64_t seed = 1;
  bool deterministic = true;          // single-task interleaving
  GroebnerLimits limits{4000, 200, 40};
};

struct BudgetReport {
  std::size_t steps = 0;
  std::size_t search_steps = 0;
  std::size_t ideal_steps = 0;
  std::size_t max_tree_size = 0;
  unsigned max_degree = 0;
  double seconds = 0;
  bool saturated = false;
};

struct Verdict {
  Outcome outcome = Outcome::Unknown;
  std::optional<RankedTree> witness;
  /// A nonzero output, or the two differing outputs behind a negative verdict.
  std::vector<Value> outputs;
  std::optional<IdealFamily> family;
  /// The automaton the ideal family certifies zeroness of.
  std::shared_ptr<const RegisterAutomaton> certified;
  BudgetReport budget;
  std::vector<std::string> notes;
};

/// Plain report, or key=value lines when `machine`.
std::string verdict_text(const Verdict& v, const Algebra& output_algebra, bool machine);

bool is_zero_value(const Value& v);
/// Ring values as polynomials; nullopt for other algebras.
std::optional<Polynomial> value_polynomial(const Value& v);

// ---------------------------------------------------------------- exploration

/// Distinct configuration sets reachable by input trees, discovered in
/// nondecreasing tree size with one representative tree each.
class ReachabilityExplorer {
 public:
  struct Class {
    std::set<Configuration> configurations;
    RankedTree tree;
    std::size_t size = 0;
  };

  ReachabilityExplorer(const RegisterAutomaton& m, std::size_t max_tree_size, std::size_t configuration_cap);

  /// Examines one candidate tree; true when it produced a new class.
  bool step();
  bool exhausted() const { return exhausted_; }
  std::size_t current_size() const { return size_; }
  bool saturated() const { return saturated_; }
  const std::vector<Class>& classes() const { return classes_; }
  const RegisterAutomaton& automaton() const { return m_; }

 private:
  bool start_level();
  bool next_candidate();

  const RegisterAutomaton& m_;
  std::size_t max_size_;
  std::size_t cap_;
  std::vector<Class> classes_;
  std::map<std::set<Configuration>, std::size_t> seen_;
  std::vector<std::vector<std::size_t>> by_size_;
  std::size_t size_ = 0;
  bool exhausted_ = false;
  bool saturated_ = false;
  // Candidate iteration at the current size.
  struct Shape {
    std::size_t symbol;
    std::vector<std::size_t> parts;
  };
  std::vector<Shape> shapes_;
  std::size_t shape_ = 0;
  std::vector<std::size_t> tuple_;
  bool tuple_valid_ = false;
};

struct Counterexample {
  RankedTree tree;
  Value output;
};

/// Trees in nondecreasing size until one has a nonzero output; nullopt once
/// `max_tree_size` or `max_steps` is exhausted.
std::optional<Counterexample> search_counterexample(const RegisterAutomaton& m, std::size_t max_tree_size,
                                                    std::size_t max_steps = SIZE_MAX);

// ---------------------------------------------------------------- ideals

/// Checks the inductive conditions on every reachable state: leaf values lie
/// in the variety, each generator composed with a rule update lies in the sum
/// of the children's ideals, and every output polynomial lies in its state's
/// ideal. True proves the automaton outputs only 0.
bool verify_ideal_family(const RegisterAutomaton& m, const IdealFamily& f,
                         const GroebnerLimits& limits = GroebnerLimits());

/// States reachable by some input tree.
std::set<std::size_t> reachable_states(const RegisterAutomaton& m);

/// Fair stream of candidate families. Round 0 is the zero family; round r
/// uses template degree min(r, max_degree) and coefficient height
/// min(r, coefficient_height): first the largest family of invariants solved
/// from sampled reachable values, then a capped sweep of a coefficient grid.
class IdealFamilyStream {
 public:
  /// Samples come from `explorer` when given (not advanced by the stream),
  /// otherwise from a private one the stream advances itself.
  IdealFamilyStream(const RegisterAutomaton& m, const CheckerConfig& config,
                    ReachabilityExplorer* explorer = nullptr);
  ~IdealFamilyStream();

  std::optional<IdealFamily> next();
  std::size_t round() const { return round_; }
  unsigned degree() const { return degree_; }
  bool exhausted() const { return exhausted_; }

 private:
  void start_round();
  void resynthesize();
  std::optional<IdealFamily> next_grid_family();

  const RegisterAutomaton& m_;
  CheckerConfig config_;
  std::unique_ptr<ReachabilityExplorer> own_;
  ReachabilityExplorer* explorer_;
  std::vector<std::size_t> states_;
  std::size_t round_ = 0;
  unsigned degree_ = 0;
  int height_ = 0;
  bool started_ = false;
  bool exhausted_ = false;
  std::vector<IdealFamily> queue_;
  std::set<std::string> emitted_;
  std::vector<std::vector<std::vector<Polynomial>>> grid_options_;  // per state, per option
  std::vector<std::size_t> grid_index_;
  std::size_t grid_emitted_ = 0;
  bool grid_done_ = true;
  std::size_t samples_seen_ = 0;
  std::uint64_t rng_state_;
};

std::vector<IdealFamily> enumerate_ideal_families(const RegisterAutomaton& m, const CheckerConfig& config,
                                                  std::size_t rounds);

/// Largest family whose generators are the template-degree-`degree`
/// polynomials vanishing on every sampled configuration.
IdealFamily synthesize_family(const RegisterAutomaton& m,
                              const std::map<std::size_t, std::vector<std::vector<Value>>>& samples,
                              unsigned degree, const GroebnerLimits& limits);

// ---------------------------------------------------------------- decisions

/// Ring automata pass through; others are compiled along simulation_for.
RegisterAutomaton prepare_for_checking(const RegisterAutomaton& m);

Verdict decide_zeroness(const RegisterAutomaton& m, const CheckerConfig& config,
                        const std::vector<IdealFamily>& seeds = {});
Verdict decide_functionality(const RegisterAutomaton& m, const CheckerConfig& config);
Verdict decide_equivalence(const RegisterAutomaton& m, const RegisterAutomaton& m2, const CheckerConfig& config);

}  // namespace hilbert
