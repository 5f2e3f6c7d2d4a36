// One line per acceptance criterion; exit status 0 iff all pass.
// Time limits and sample counts are pinned below.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "hilbert/algebras.hpp"
#include "hilbert/checker.hpp"
#include "hilbert/encodings.hpp"
#include "hilbert/groebner.hpp"
#include "hilbert/reductions.hpp"
#include "support.hpp"

using namespace hilbert;
using namespace hilbert::testing;

namespace {

constexpr double kLimit1 = 10, kLimit2 = 60, kLimit3 = 10, kLimit5 = 120, kLimit6 = 5, kLimit7 = 1, kLimit9 = 300;
constexpr int kHomomorphismSamples = 1000, kMaxForestNodes = 12;
constexpr int kInjectivityNodes = 7, kTwoLetterNodes = 4;
constexpr int kContextSamples = 500;
constexpr std::size_t kFidelitySize = 10;
constexpr std::size_t kMutantWitnessSize = 3;
constexpr int kRandomDeterministic = 20;
constexpr int kFuzzInstances = 200;
constexpr std::size_t kFuzzSize = 6;
constexpr int kRandomMachines = 50, kRandomMachineStates = 3;
constexpr std::size_t kRandomLength = 5, kHandLength = 8, kOneLetterLength = 4;
constexpr std::size_t kDoublingMax = 10;
constexpr int kGroebnerCases = 500;

using Clock = std::chrono::steady_clock;

struct Result {
  bool pass;
  std::string detail;
};

std::string read_data(const std::string& name) {
  std::ifstream in(std::string(HILBERT_DATA_DIR) + "/" + name);
  if (!in) throw std::runtime_error("missing data file " + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RegisterAutomaton load(const std::string& name) { return parse_automaton(read_data(name)); }

std::string secs(double s) {
  std::ostringstream out;
  out.precision(3);
  out << s << "s";
  return out.str();
}

Result timed(double limit, const std::function<Result()>& body) {
  auto start = Clock::now();
  Result o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double s = std::chrono::duration<double>(Clock::now() - start).count();
  o.detail += (o.detail.empty() ? "" : ", ") + secs(s) + " (limit " + secs(limit) + ")";
  if (s > limit) o.pass = false;
  return o;
}

const Polynomial kX = Polynomial::variable("x");

Result homomorphism() {
  std::mt19937_64 rng(101);
  int bad = 0;
  for (int i = 0; i < kHomomorphismSamples; ++i) {
    Forest h = random_forest(rng, static_cast<int>(rng() % (kMaxForestNodes + 1)), {"root"});
    Forest g = random_forest(rng, static_cast<int>(rng() % (kMaxForestNodes + 1)), {"root"});
    if (encode_forest(forest_add(h, g)) != encode_forest(h) * encode_forest(g)) ++bad;
    if (encode_forest(forest_root("root", h)) != Polynomial(2) + kX * encode_forest(h)) ++bad;
  }
  return {bad == 0, std::to_string(kHomomorphismSamples) + " pairs, " + std::to_string(bad) + " violations"};
}

Result injectivity() {
  std::set<std::string> images;
  std::size_t count = 0;
  for (int n = 0; n <= kInjectivityNodes; ++n)
    for (const Forest& h : all_forests(n, {"root"})) {
      images.insert(canonical_text(encode_forest(h)));
      ++count;
    }
  std::size_t collisions = count - images.size();
  std::vector<std::string> ab = {"a", "b"};
  std::set<std::string> images2;
  std::size_t count2 = 0;
  for (int n = 0; n <= kTwoLetterNodes; ++n)
    for (const Forest& h : all_forests(n, ab)) {
      images2.insert(canonical_text(encode_forest(reduce_alphabet(h, ab))));
      ++count2;
    }
  std::size_t collisions2 = count2 - images2.size();
  return {collisions == 0 && collisions2 == 0,
          std::to_string(count) + " unary forests, " + std::to_string(collisions) + " collisions; " +
              std::to_string(count2) + " two-letter forests, " + std::to_string(collisions2) + " collisions"};
}

Result context_pairs() {
  std::mt19937_64 rng(303);
  int bad = 0;
  for (int i = 0; i < kContextSamples; ++i) {
    Context c = random_context(rng, static_cast<int>(rng() % 9), {"root"});
    Context d = rng() % 2 ? random_context(rng, static_cast<int>(rng() % 7), {"root"})
                          : Context(random_forest(rng, static_cast<int>(rng() % 7), {"root"}));
    PairPoly pc = encode_context_pair(c), pd = encode_context_pair(d);
    PairPoly rule{pc.p + pc.q * pd.p, pc.q * pd.q};
    if (encode_context_pair(context_substitute(c, d)) != rule) ++bad;
  }
  return {bad == 0, std::to_string(kContextSamples) + " substitutions, " + std::to_string(bad) + " mismatches"};
}

Result fidelity() {
  RegisterAutomaton m = load("fcns.ra");
  RegisterAutomaton c = compile_ra(m, *simulation_for(m));
  std::vector<std::string> labels = {"a", "b", "c", "d", "e", "f"};
  std::size_t trees = 0, bad = 0;
  for (std::size_t n = 1; n <= kFidelitySize; ++n)
    for (const RankedTree& t : trees_of_size(m.signature(), n)) {
      ++trees;
      auto out = run_ra(m, t).outputs;
      std::set<Value> expected;
      for (const Value& v : out) expected.insert(phi_alpha(std::get<Forest>(v), labels));
      if (run_ra(c, t).outputs != expected || out.size() != 1) ++bad;
    }
  return {bad == 0 && trees > 0,
          std::to_string(trees) + " binary trees up to size " + std::to_string(kFidelitySize) + ", " +
              std::to_string(bad) + " mismatches"};
}

CheckerConfig deterministic_config(double budget) {
  CheckerConfig c;
  c.budget_secs = budget;
  c.deterministic = true;
  return c;
}

Result equivalence_positive() {
  Verdict v = decide_equivalence(load("fcns.ra"), load("fcns_swapped.ra"), deterministic_config(kLimit5));
  bool cert = v.family && v.certified && verify_ideal_family(*v.certified, *v.family);
  return {v.outcome == Outcome::Equivalent && cert,
          outcome_name(v.outcome) + (cert ? ", certificate re-verified" : ", no verified certificate")};
}

Result equivalence_negative() {
  RegisterAutomaton m = load("fcns.ra"), mutant = load("fcns_mutant.ra");
  Verdict v = decide_equivalence(m, mutant, deterministic_config(kLimit6));
  if (v.outcome != Outcome::NotEquivalent || !v.witness) return {false, outcome_name(v.outcome)};
  bool differ = run_ra(m, *v.witness).outputs != run_ra(mutant, *v.witness).outputs;
  return {differ && v.witness->size() <= kMutantWitnessSize,
          "NotEquivalent, witness " + v.witness->text() + " of size " + std::to_string(v.witness->size()) +
              (differ ? "" : ", outputs do not differ")};
}

Result functionality() {
  auto start = Clock::now();
  Verdict v = decide_functionality(load("twoleaf.ra"), deterministic_config(kLimit7));
  double twoleaf = std::chrono::duration<double>(Clock::now() - start).count();
  bool leaf = v.outcome == Outcome::NotFunctional && v.witness && v.witness->size() == 1;
  std::mt19937_64 rng(707);
  int functional = 0, unknown = 0, wrong = 0;
  for (int i = 0; i < kRandomDeterministic; ++i) {
    RegisterAutomaton m = random_ring_automaton(rng, true);
    if (!check_deterministic(m)) {
      ++wrong;
      continue;
    }
    CheckerConfig c = deterministic_config(10);
    c.max_tree_size = 6;
    {
      Verdict f = decide_functionality(m, c);
      if (f.outcome == Outcome::Functional) ++functional;
      else if (f.outcome == Outcome::Unknown) ++unknown;
      else ++wrong;
    }
  }
  return {leaf && twoleaf < kLimit7 && wrong == 0,
          std::string("two-leaf ") + (leaf ? "NotFunctional at a leaf" : outcome_name(v.outcome)) + " in " +
              secs(twoleaf) + "; random deterministic: " + std::to_string(functional) + " Functional, " +
              std::to_string(unknown) + " Unknown, " + std::to_string(wrong) + " other"};
}

Result fuzzing() {
  std::mt19937_64 rng(808);
  CheckerConfig c = deterministic_config(2);
  c.max_steps = 4000;
  c.max_tree_size = kFuzzSize;
  int zero = 0, nonzero = 0, contradictions = 0;
  for (int i = 0; i < kFuzzInstances; ++i) {
    RegisterAutomaton m = random_ring_automaton(rng);
    Verdict v = decide_zeroness(m, c);
    auto w = exhaustive_nonzero(m, kFuzzSize);
    if (v.outcome == Outcome::Zero) {
      ++zero;
      if (w || !verify_ideal_family(m, *v.family)) ++contradictions;
    } else if (v.outcome == Outcome::NonZero) {
      ++nonzero;
      if (!w) {
        // nonzero beyond the exhaustive bound: the witness itself must evaluate nonzero
        bool nonzero = false;
        for (const Value& o : run_ra(m, *v.witness).outputs) nonzero = nonzero || !is_zero_value(o);
        if (!nonzero || v.witness->size() <= kFuzzSize) ++contradictions;
      }
    }
  }
  return {contradictions == 0, std::to_string(kFuzzInstances) + " instances, " + std::to_string(zero) + " Zero, " +
                                   std::to_string(nonzero) + " NonZero, " + std::to_string(contradictions) + " contradictions"};
}

TwoCounterMachine random_machine(std::mt19937_64& rng) {
  int n = 1 + static_cast<int>(rng() % kRandomMachineStates);
  std::vector<CmRow> rows;
  for (int q = 1; q <= n; ++q)
    for (int b1 = 0; b1 <= 1; ++b1)
      for (int b2 = 0; b2 <= 1; ++b2) {
        CmRow r;
        r.next = 1 + static_cast<int>(rng() % n);
        r.d1 = static_cast<int>(rng() % (b1 ? 3 : 2)) - (b1 ? 1 : 0);
        r.d2 = static_cast<int>(rng() % (b2 ? 3 : 2)) - (b2 ? 1 : 0);
        rows.push_back(r);
      }
  return TwoCounterMachine(n, rows);
}

Result reduction_bounded() {
  std::mt19937_64 rng(909);
  int failures = 0, disagreements = 0;
  std::size_t words = 0;
  for (int i = 0; i < kRandomMachines; ++i) {
    TwoCounterMachine m = random_machine(rng);
    int target = 1 + static_cast<int>(rng() % m.states());
    auto r = crossvalidate_bounded(m, target, kRandomLength);
    words += r.words;
    if (!r.ok) ++failures;
    // pruning is checked against full evaluation one length down
    auto p = crossvalidate_bounded(m, target, kRandomLength - 1);
    auto e = crossvalidate_bounded(m, target, kRandomLength - 1, true);
    if (!e.ok || p.words != e.words || p.reaching_target != e.reaching_target) ++disagreements;
  }
  int hand = 0;
  struct Hand {
    const char* file;
    bool reachable;
  };
  for (Hand h : {Hand{"one_step.2cm", true}, Hand{"transfer.2cm", true}, Hand{"pump.2cm", false}}) {
    TwoCounterMachine m = parse_2cm(read_data(h.file));
    auto r = crossvalidate_bounded(m, m.states(), kHandLength);
    words += r.words;
    if (!r.ok || (r.reaching_target > 0) != h.reachable ||
        reachable_2cm(m, 1, m.states(), kHandLength) != h.reachable)
      ++hand;
  }
  return {failures == 0 && disagreements == 0 && hand == 0,
          std::to_string(kRandomMachines) + " random machines at L=" + std::to_string(kRandomLength) + " (" +
              std::to_string(failures) + " failures, " + std::to_string(disagreements) +
              " pruning disagreements), 3 hand-built at L=" + std::to_string(kHandLength) + " (" +
              std::to_string(hand) + " failures), " + std::to_string(words) + " words"};
}

Result one_letter() {
  std::mt19937_64 rng(1010);
  std::vector<TwoCounterMachine> machines = {parse_2cm(read_data("transfer.2cm")), parse_2cm(read_data("one_step.2cm"))};
  for (int i = 0; i < 3; ++i) machines.push_back(random_machine(rng));
  int mismatches = 0, checks = 0;
  for (const TwoCounterMachine& m : machines) {
    RegisterAutomaton det = build_reduction_ra(m, m.states()), one = build_oneletter_variant(m, m.states());
    auto letters = machine_alphabet(m);
    // outputs of det over all words of each length, by prefix extension
    std::set<Configuration> frontier = run_ra(det, {"_|_", {}}).configurations;
    RankedTree ak{"_|_", {}};
    for (std::size_t k = 0; k <= kOneLetterLength; ++k) {
      std::set<Value> expected = configuration_outputs(det, frontier);
      if (run_ra(one, ak).outputs != expected) ++mismatches;
      ++checks;
      std::set<Configuration> next;
      for (const CmLetter& l : letters) {
        // each configuration of the frontier is one word's; extend them all by l
        for (const Configuration& c : frontier) {
          std::set<Configuration> single{c};
          bool sat = false;
          for (auto& n : step_configurations(det, letter_name(l), {&single}, 4, &sat)) next.insert(n);
        }
      }
      frontier = std::move(next);
      ak = RankedTree{"a", {ak}};
    }
  }
  return {mismatches == 0, std::to_string(machines.size()) + " machines, k=0.." + std::to_string(kOneLetterLength) +
                               ", " + std::to_string(checks) + " output sets, " + std::to_string(mismatches) +
                               " mismatches"};
}

Result doubling() {
  RegisterAutomaton m = load("doubling.ra");
  RegisterAutomaton c = compile_ra(m, *simulation_for(m));
  RankedTree t{"_|_", {}};
  std::string degrees;
  bool ok = true;
  for (std::size_t n = 0; n <= kDoublingMax; ++n) {
    auto out = run_ra(c, t).outputs;
    std::uint32_t d = out.size() == 1 ? std::get<Polynomial>(*out.begin()).degree(intern_variable("x")) : 0;
    ok = ok && out.size() == 1 && d == (1u << n);
    degrees += (n ? "," : "") + std::to_string(d);
    t = RankedTree{"a", {t}};
  }
  return {ok, "degrees " + degrees};
}

Result groebner() {
  std::mt19937_64 rng(1212);
  std::vector<std::string> vars{"x", "y", "z"};
  auto nonzero = [&] {
    Polynomial p;
    while (p.is_zero()) p = random_polynomial(rng, vars, 3, 2, 3);
    return p;
  };
  auto leading = [](const IdealBasis& b) {
    std::set<std::string> out;
    for (const auto& g : b.generators()) out.insert(canonical_text(Polynomial::from_terms({{g.leading_term(b.order()).first, Rational(1)}})));
    return out;
  };
  int failures = 0, proper = 0;
  for (int i = 0; i < kGroebnerCases; ++i) {
    std::vector<Polynomial> gens{nonzero(), nonzero()};
    if (i % 2) gens.push_back(nonzero());
    auto grevlex = buchberger(gens, MonomialOrder::degrevlex());
    auto lex = buchberger(gens, MonomialOrder::lex());
    bool ok = satisfies_buchberger_criterion(grevlex) && satisfies_buchberger_criterion(lex);
    Polynomial combo;
    for (const auto& g : gens) combo += random_polynomial(rng, vars, 3, 2, 3) * g;
    ok = ok && ideal_member(combo, grevlex) && ideal_member(combo, lex);
    auto again = buchberger(grevlex.generators(), grevlex.order());
    ok = ok && leading(again) == leading(grevlex);
    for (const auto& g : again.generators()) ok = ok && ideal_member(g, grevlex);
    for (const auto& g : lex.generators()) ok = ok && ideal_member(g, grevlex);
    for (const auto& g : grevlex.generators()) ok = ok && ideal_member(g, lex) && ideal_member(g, again);
    auto probe = combo + random_polynomial(rng, vars, 2, 2, 3);
    ok = ok && ideal_member(probe, grevlex) == ideal_member(probe, lex);
    if (!grevlex.is_unit()) ++proper;
    if (!ok) ++failures;
  }
  return {failures == 0, std::to_string(kGroebnerCases) + " cases (" + std::to_string(proper) + " proper ideals), " +
                             std::to_string(failures) + " failures"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit;
    std::function<Result()> body;
  };
  const double kNoLimit = 600;
  std::vector<Criterion> criteria = {
      {1, "encoding homomorphism", kLimit1, homomorphism},
      {2, "encoding injectivity", kLimit2, injectivity},
      {3, "context pair encoding", kLimit3, context_pairs},
      {4, "compilation fidelity", kNoLimit, fidelity},
      {5, "equivalence, positive", kLimit5, equivalence_positive},
      {6, "equivalence, negative", kLimit6, equivalence_negative},
      {7, "functionality", kNoLimit, functionality},
      {8, "checker soundness under fuzzing", kNoLimit, fuzzing},
      {9, "reduction correctness at bound", kLimit9, reduction_bounded},
      {10, "one-letter variant", kNoLimit, one_letter},
      {11, "doubling example", kNoLimit, doubling},
      {12, "Groebner engine", kNoLimit, groebner},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Result o = timed(c.limit, c.body);
    if (!o.pass) ++failed;
    std::cout << "criterion " << c.id << " " << (o.pass ? "PASS" : "FAIL") << " " << c.name << ": " << o.detail
              << std::endl;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed") << std::endl;
  return failed ? 1 : 0;
}
