#pragma once

// Simulations into polynomial rings and compilation of register automata
// along them.
//
//   φ          UF over the single label `root`  →  Q[x]
//              φ(∅) = 1, φ(h + h') = φ(h)·φ(h'), φ(root(h)) = 2 + x·φ(h)
//   α          UF over a₁..aₙ  →  UF over `root`
//              α(a_i(h)) = root^i(root(∅) + root(α(h)))
//   pairs      UCF over `root`  →  Q[x]², c ↦ (p, q) with φ(c) = p + y·q
//   words      words over k letters  →  Q², a₁…aₘ ↦ ((k+1)^m, Σ a_j (k+1)^(j−1))

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hilbert/algebra.hpp"
#include "hilbert/automaton.hpp"

namespace hilbert {

inline constexpr std::string_view kUnaryLabel = "root";

/// φ(h); every label of h must be `label`.
Polynomial encode_forest(const Forest& h, std::string_view label = kUnaryLabel);

/// α(h) over `root`; labels are numbered by their position in `alphabet`.
/// Holes map to holes.
Forest reduce_alphabet(const Forest& h, const std::vector<std::string>& alphabet);

struct PairPoly {
  Polynomial p;  // hole-free part
  Polynomial q;  // coefficient of the hole variable y
  int sort() const { return q.is_zero() ? 0 : 1; }
  friend bool operator==(const PairPoly&, const PairPoly&) = default;
};

PairPoly pair_add(const PairPoly& a, const PairPoly& b);
PairPoly pair_root(const PairPoly& a);
/// (p₁, q₁)[y := (p₂, q₂)] = (p₁ + q₁p₂, q₁q₂)
PairPoly pair_substitute(const PairPoly& a, const PairPoly& b);

PairPoly encode_context_pair(const Context& c, std::string_view label = kUnaryLabel);

/// Letters are 1..k; throws when a letter is outside that range.
std::pair<Rational, Rational> encode_word_digits(const std::vector<unsigned>& letters, unsigned k);
/// Letters numbered by their position in `alphabet`.
std::pair<Rational, Rational> encode_word_pair(const Word& w, std::string_view alphabet);

// ---------------------------------------------------------------- simulations

/// Identity on Q or Q[x] (or Q[x]^subs).
SimulationSpec identity_simulation(const AlgebraPtr& ring);
/// φ for UF over the single label `label`.
SimulationSpec phi_simulation(std::string_view label = kUnaryLabel);
/// α for UF (or UCF when `contexts`) over `alphabet`, into the `root` algebra.
SimulationSpec alphabet_simulation(const std::vector<std::string>& alphabet, bool contexts);
/// Pair encoding of UCF over the single label `label`; output coordinate 0.
SimulationSpec context_pair_simulation(std::string_view label = kUnaryLabel);
/// Word encoding into Q²; output coordinate 1.
SimulationSpec word_simulation(std::string_view alphabet);

/// A simulation of `algebra` into Q or Q[x]; `labels` overrides the forest
/// alphabet when the algebra declares none. nullopt for Q[x]^subs.
std::optional<SimulationSpec> simulation_for(const AlgebraPtr& algebra,
                                             const std::vector<std::string>& labels = {});
/// As above, inferring forest labels from the automaton's terms when needed.
std::optional<SimulationSpec> simulation_for(const RegisterAutomaton& m);
/// One simulation shared by automata over the same algebra (labels pooled).
std::optional<SimulationSpec> simulation_for(const std::vector<const RegisterAutomaton*>& ms);

/// Register j, coordinate c of M becomes register (j−1)·width + c + 1 of M'.
/// Outputs keep the simulation's output coordinate.
RegisterAutomaton compile_ra(const RegisterAutomaton& m, const SimulationSpec& s);

}  // namespace hilbert
