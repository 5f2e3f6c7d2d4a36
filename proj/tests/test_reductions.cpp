#include "doctest.h"

#include <random>

#include "hilbert/algebras.hpp"
#include "hilbert/checker.hpp"
#include "hilbert/reductions.hpp"

using namespace hilbert;

namespace {

// δ(1,0,0) = (2,1,0); every other row keeps its state and counters.
TwoCounterMachine one_step() {
  return parse_2cm(R"(
states 2
d 1 0 0 -> 2 1 0
d 1 0 1 -> 1 0 0
d 1 1 0 -> 1 0 0
d 1 1 1 -> 1 0 0
d 2 0 0 -> 2 0 0
d 2 0 1 -> 2 0 0
d 2 1 0 -> 2 0 0
d 2 1 1 -> 2 0 0
)");
}

TwoCounterMachine stuck() {
  std::vector<CmRow> rows(8, CmRow{1, 0, 0});
  return TwoCounterMachine(2, rows);
}

// Counts c1 up to 2, then moves c1 into c2 and reaches state 3 once c1 is empty.
TwoCounterMachine transfer() {
  return parse_2cm(R"(
states 3
d 1 0 0 -> 1 1 0
d 1 1 0 -> 2 1 0   # after two increments c1 = 2, move on
d 1 0 1 -> 1 0 0
d 1 1 1 -> 1 0 0
d 2 1 0 -> 2 -1 1
d 2 1 1 -> 2 -1 1
d 2 0 1 -> 3 0 0
d 2 0 0 -> 2 0 0
d 3 0 0 -> 3 0 0
d 3 0 1 -> 3 0 0
d 3 1 0 -> 3 0 0
d 3 1 1 -> 3 0 0
)");
}

TwoCounterMachine random_machine(std::mt19937_64& rng) {
  int n = 1 + static_cast<int>(rng() % 3);
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

Polynomial reg_value(const RunResult& r, std::size_t k) {
  REQUIRE(r.configurations.size() == 1);
  return std::get<Polynomial>(r.configurations.begin()->registers.at(k - 1));
}

Polynomial x() { return Polynomial::variable("x"); }

}  // namespace

TEST_CASE("machine steps") {
  TwoCounterMachine m = one_step();
  CHECK(step_2cm({1, 0, 0}, m) == CmConfiguration{2, 1, 0});
  CHECK(step_2cm({2, 1, 0}, m) == CmConfiguration{2, 1, 0});
  TwoCounterMachine dec = parse_2cm(machine_text(m).replace(machine_text(m).find("d 2 1 0 -> 2 0 0"), 16,
                                                            "d 2 1 0 -> 1 -1 0"));
  CHECK(step_2cm({2, 3, 0}, dec) == CmConfiguration{1, 2, 0});
}

TEST_CASE("bounded reachability") {
  CHECK(reachable_2cm(one_step(), 1, 2, 1));
  CHECK_FALSE(reachable_2cm(one_step(), 1, 2, 0));
  for (std::size_t b : {0, 1, 5, 50}) CHECK_FALSE(reachable_2cm(stuck(), 1, 2, b));
  CHECK(reachable_2cm(stuck(), 2, 2, 0));
  CHECK(reachable_2cm(transfer(), 1, 3, 5));
  CHECK_FALSE(reachable_2cm(transfer(), 1, 3, 4));
}

TEST_CASE("machine files") {
  TwoCounterMachine m = transfer();
  CHECK(parse_2cm(machine_text(m)).rows() == m.rows());
  std::string text = machine_text(one_step());
  std::string missing = text;
  missing.erase(missing.find("d 1 1 0"), std::string("d 1 1 0 -> 1 0 0\n").size());
  CHECK_THROWS_WITH_AS(parse_2cm(missing), "missing row d 1 1 0", MachineError);
  std::string bad = text;
  bad.replace(bad.find("d 1 0 0 -> 2 1 0"), 16, "d 1 0 0 -> 2 -1 0");
  CHECK_THROWS_WITH_AS(parse_2cm(bad), "row d 1 0 0: decrements a counter that is zero", MachineError);
  CHECK_THROWS_AS(parse_2cm(text + "d 1 0 0 -> 1 0 0\n"), MachineError);
  CHECK_THROWS_AS(parse_2cm("states 1\nd 2 0 0 -> 1 0 0\n"), MachineError);
  CHECK_THROWS_AS(parse_2cm("d 1 0 0 -> 1 0 0\n"), MachineError);
}

TEST_CASE("test polynomials") {
  for (int n = 1; n <= 5; ++n)
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        Rational v = ptestq(i, n).evaluate(std::map<std::string, Rational>{{"x", Rational(j)}});
        CHECK((v != 0) == (i == j));
      }
  for (int m = 0; m <= 6; ++m) {
    CHECK(ptestc(m).evaluate(std::map<std::string, Rational>{{"x", Rational(0)}}) != 0);
    for (int j = 1; j <= m; ++j) CHECK(ptestc(m).evaluate(std::map<std::string, Rational>{{"x", Rational(j)}}) == 0);
  }
}

TEST_CASE("reduction automaton: registers after one valid step") {
  TwoCounterMachine m = one_step();
  RegisterAutomaton ra = build_reduction_ra(m, 2);
  CHECK(ra.registers() == 6);
  CHECK(ra.states().size() == 1);
  CHECK(ra.signature().size() == 9);
  RunResult r = run_ra(ra, word_tree({{1, 0, 0}}));
  CHECK(reg_value(r, kRegQ) == Polynomial(2));
  CHECK(reg_value(r, kRegC1) == Polynomial(1));
  CHECK(reg_value(r, kRegC2) == Polynomial(0));
  CHECK(reg_value(r, kRegPlus) == Polynomial(1));
  CHECK(reg_value(r, kRegZt) == x() - Polynomial(1));
  CHECK_FALSE(reg_value(r, kRegW).is_zero());
  REQUIRE(r.outputs.size() == 1);
  CHECK_FALSE(std::get<Polynomial>(*r.outputs.begin()).is_zero());

  // ⊥ alone: r_q = 1 is not the target.
  RunResult e = run_ra(ra, word_tree({}));
  CHECK(std::get<Polynomial>(*e.outputs.begin()).is_zero());
  CHECK_FALSE(std::get<Polynomial>(*run_ra(build_reduction_ra(m, 1), word_tree({})).outputs.begin()).is_zero());
}

TEST_CASE("a letter from the wrong state zeroes r_w for good") {
  TwoCounterMachine m = one_step();
  RegisterAutomaton ra = build_reduction_ra(m, 2);
  std::vector<CmLetter> w{{2, 0, 0}};
  CHECK(reg_value(run_ra(ra, word_tree(w)), kRegW).is_zero());
  for (const CmLetter& l : machine_alphabet(m)) {
    w.push_back(l);
    CHECK(reg_value(run_ra(ra, word_tree(w)), kRegW).is_zero());
  }
}

TEST_CASE("counter-bound law") {
  TwoCounterMachine m = transfer();
  RegisterAutomaton ra = build_reduction_ra(m, 3);
  std::mt19937_64 rng(3);
  auto letters = machine_alphabet(m);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<CmLetter> w;
    std::size_t len = rng() % 7;
    for (std::size_t i = 0; i < len; ++i) w.push_back(letters[rng() % letters.size()]);
    RunResult r = run_ra(ra, word_tree(w));
    CHECK(reg_value(r, kRegPlus) == Polynomial(static_cast<long>(len)));
    CHECK(reg_value(r, kRegZt) == ptestc(static_cast<int>(len)));
  }
}

TEST_CASE("generated files round-trip") {
  for (const RegisterAutomaton& ra : {build_reduction_ra(transfer(), 3), build_oneletter_variant(transfer(), 3)}) {
    RegisterAutomaton back = parse_automaton(automaton_text(ra));
    CHECK(automaton_text(back) == automaton_text(ra));
  }
  CHECK_THROWS_AS(build_reduction_ra(one_step(), 3), MachineError);
}

TEST_CASE("cross-validation against the machine") {
  CHECK(crossvalidate_bounded(one_step(), 2, 2).ok);
  CHECK(crossvalidate_bounded(one_step(), 2, 2, true).ok);
  auto t = crossvalidate_bounded(transfer(), 3, 8);
  CHECK(t.ok);
  CHECK(t.reaching_target == 4);  // lengths 5 to 8
  auto s = crossvalidate_bounded(stuck(), 2, 6);
  CHECK(s.ok);
  CHECK(s.reaching_target == 0);
  CHECK(s.valid_runs == 7);
  std::size_t words = 0, p = 1;
  for (int k = 0; k <= 6; ++k, p *= 8) words += p;
  CHECK(s.words == words);
}

TEST_CASE("pruned and exhaustive cross-validation agree") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 10; ++i) {
    TwoCounterMachine m = random_machine(rng);
    int target = 1 + static_cast<int>(rng() % m.states());
    auto a = crossvalidate_bounded(m, target, 3), b = crossvalidate_bounded(m, target, 3, true);
    CHECK(a.ok);
    CHECK(b.ok);
    CHECK(a.words == b.words);
    CHECK(a.reaching_target == b.reaching_target);
    CHECK(b.evaluated == b.words);
    CHECK(a.evaluated <= b.evaluated);
  }
}

TEST_CASE("cross-validation on random machines") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 20; ++i) {
    TwoCounterMachine m = random_machine(rng);
    int target = 1 + static_cast<int>(rng() % m.states());
    CAPTURE(machine_text(m));
    auto r = crossvalidate_bounded(m, target, 5);
    CHECK_MESSAGE(r.ok, r.detail);
  }
}

TEST_CASE("one-letter variant outputs are the union over transition words") {
  TwoCounterMachine m = transfer();
  RegisterAutomaton det = build_reduction_ra(m, 3), one = build_oneletter_variant(m, 3);
  auto letters = machine_alphabet(m);
  for (std::size_t k = 0; k <= 3; ++k) {
    std::set<Value> expected;
    std::vector<std::size_t> idx(k, 0);
    for (;;) {
      std::vector<CmLetter> w;
      for (std::size_t i : idx) w.push_back(letters[i]);
      for (const Value& v : run_ra(det, word_tree(w)).outputs) expected.insert(v);
      std::size_t j = 0;
      while (j < k && ++idx[j] == letters.size()) idx[j++] = 0;
      if (j == k) break;
    }
    RankedTree ak{"_|_", {}};
    for (std::size_t i = 0; i < k; ++i) ak = RankedTree{"a", {ak}};
    CHECK(run_ra(one, ak).outputs == expected);
  }
}

TEST_CASE("one-letter variant of a machine that never reaches its target") {
  RegisterAutomaton one = build_oneletter_variant(stuck(), 2);
  RankedTree ak{"_|_", {}};
  for (int k = 0; k <= 6; ++k) {
    auto outs = run_ra(one, ak).outputs;
    REQUIRE(outs.size() == 1);
    CHECK(std::get<Polynomial>(*outs.begin()).is_zero());
    ak = RankedTree{"a", {ak}};
  }
  CheckerConfig c;
  c.budget_secs = 2;
  c.max_tree_size = 6;
  Verdict v = decide_zeroness(one, c);
  CHECK(v.outcome != Outcome::NonZero);

  RegisterAutomaton reach = build_oneletter_variant(one_step(), 2);
  Verdict w = decide_zeroness(reach, c);
  REQUIRE(w.outcome == Outcome::NonZero);
  CHECK(w.witness->text() == "a(_|_)");
}
