#pragma once

// Two-counter machines and their encoding into register automata over
// Q[x] with substitution: the automaton outputs something nonzero exactly on
// transition words that are valid runs from (1, 0, 0) ending in the target.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hilbert/automaton.hpp"

namespace hilbert {

struct CmRow {
  int next = 1;    // q'
  int d1 = 0;      // −1, 0, 1
  int d2 = 0;
  friend bool operator==(const CmRow&, const CmRow&) = default;
};

class MachineError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// States 1..n; δ(q, b1, b2) for every state and pair of zero flags.
class TwoCounterMachine {
 public:
  /// rows[(q−1)·4 + 2·b1 + b2]; validates range, totality and the decrement guard.
  TwoCounterMachine(int states, std::vector<CmRow> rows);

  int states() const { return states_; }
  const CmRow& row(int q, int b1, int b2) const { return rows_[index(q, b1, b2)]; }
  const std::vector<CmRow>& rows() const { return rows_; }

  static std::size_t index(int q, int b1, int b2) { return static_cast<std::size_t>((q - 1) * 4 + 2 * b1 + b2); }

 private:
  int states_;
  std::vector<CmRow> rows_;
};

/// Format: `states n`, then one line `d q b1 b2 -> q' d1 d2` per row.
TwoCounterMachine parse_2cm(std::string_view text);
std::string machine_text(const TwoCounterMachine& m);

struct CmConfiguration {
  int state = 1;
  long c1 = 0;
  long c2 = 0;
  friend bool operator==(const CmConfiguration&, const CmConfiguration&) = default;
};

CmConfiguration step_2cm(const CmConfiguration& cfg, const TwoCounterMachine& m);
/// Whether `to` is visited within `bound` steps from (from, 0, 0).
bool reachable_2cm(const TwoCounterMachine& m, int from, int to, std::size_t bound);

/// A transition word letter: the δ row (q, b1, b2), printed `t<q>_<b1><b2>`.
struct CmLetter {
  int q = 1;
  int b1 = 0;
  int b2 = 0;
  friend bool operator==(const CmLetter&, const CmLetter&) = default;
};
std::string letter_name(const CmLetter& l);
std::vector<CmLetter> machine_alphabet(const TwoCounterMachine& m);

/// The configuration after reading `word` from (1, 0, 0); nullopt as soon as a
/// letter's row does not apply.
std::optional<CmConfiguration> run_word(const TwoCounterMachine& m, const std::vector<CmLetter>& word);

/// ptestq_i(x) = ∏_{j ≠ i, 1 ≤ j ≤ n} (x − j)
Polynomial ptestq(int i, int n);
/// ptestc_m(x) = ∏_{1 ≤ j ≤ m} (x − j)
Polynomial ptestc(int m);

// Registers of the reduction automaton.
inline constexpr std::size_t kRegQ = 1, kRegC1 = 2, kRegC2 = 3, kRegPlus = 4, kRegZt = 5, kRegW = 6;

/// Single state, signature ⊥ plus one unary symbol per δ row, six registers
/// starting at (1, 0, 0, 0, 1, 1), output ptestq_target(r_q)·r_w.
RegisterAutomaton build_reduction_ra(const TwoCounterMachine& m, int target);
/// Same registers over signature {⊥, a}: one rule on `a` per δ row.
RegisterAutomaton build_oneletter_variant(const TwoCounterMachine& m, int target);

/// The monadic input tree reading `word` left to right, bottom-up.
RankedTree word_tree(const std::vector<CmLetter>& word);

struct CrossvalidationReport {
  bool ok = true;
  std::size_t words = 0;           // words whose verdict was established
  std::size_t evaluated = 0;       // words evaluated on the automaton
  std::size_t valid_runs = 0;
  std::size_t reaching_target = 0;
  std::optional<std::vector<CmLetter>> mismatch;
  std::string detail;
};

/// For every word of length ≤ L: output nonzero ⟺ valid run ending in
/// `target`, and r_w ≠ 0 ⟺ valid run. Without `exhaustive`, words below a
/// prefix with r_w = 0 are settled by absorption, which is first checked on
/// the automaton's r_w updates (each is r_w.1 times something).
CrossvalidationReport crossvalidate_bounded(const TwoCounterMachine& m, int target, std::size_t max_length,
                                            bool exhaustive = false);

}  // namespace hilbert
