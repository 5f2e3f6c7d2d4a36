#include "doctest.h"

#include <fstream>
#include <sstream>

#include "hilbert/algebras.hpp"
#include "hilbert/encodings.hpp"
#include "support.hpp"

using namespace hilbert;
using hilbert::testing::all_forests;
using hilbert::testing::random_context;
using hilbert::testing::phi_alpha;
using hilbert::testing::random_binary;
using hilbert::testing::random_forest;

namespace {

RegisterAutomaton load(const std::string& name) {
  std::ifstream in(std::string(HILBERT_DATA_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_automaton(ss.str());
}

const Polynomial kX = Polynomial::variable("x");

RankedTree spine(std::size_t n) {
  RankedTree t{"_|_", {}};
  for (std::size_t i = 0; i < n; ++i) t = RankedTree{"a", {t}};
  return t;
}

}  // namespace

TEST_CASE("phi examples") {
  CHECK(encode_forest(Forest()) == Polynomial(1));
  CHECK(encode_forest(parse_forest("root")) == parse_polynomial("2 + x"));
  CHECK(encode_forest(parse_forest("root + root")) == parse_polynomial("x^2 + 4*x + 4"));
  CHECK(encode_forest(parse_forest("root(root)")) == parse_polynomial("x^2 + 2*x + 2"));
  CHECK(encode_forest(parse_forest("a(a)"), "a") == parse_polynomial("x^2 + 2*x + 2"));
  CHECK_THROWS_AS(encode_forest(parse_forest("a")), std::invalid_argument);
}

TEST_CASE("phi is a homomorphism") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 300; ++i) {
    Forest h = random_forest(rng, static_cast<int>(rng() % 9), {"root"});
    Forest g = random_forest(rng, static_cast<int>(rng() % 9), {"root"});
    CHECK(encode_forest(forest_add(h, g)) == encode_forest(h) * encode_forest(g));
    CHECK(encode_forest(forest_root("root", h)) == Polynomial(2) + kX * encode_forest(h));
  }
}

TEST_CASE("phi is injective on small forests") {
  std::set<std::string> images;
  std::size_t count = 0;
  for (int n = 0; n <= 6; ++n)
    for (const Forest& h : all_forests(n, {"root"})) {
      images.insert(canonical_text(encode_forest(h)));
      ++count;
    }
  CHECK(count == 1 + 1 + 2 + 4 + 9 + 20 + 48);
  CHECK(images.size() == count);
}

TEST_CASE("alphabet reduction") {
  std::vector<std::string> ab = {"a", "b"};
  CHECK(reduce_alphabet(Forest(), ab) == Forest());
  CHECK(reduce_alphabet(parse_forest("a"), ab) == parse_forest("root(root, root)"));
  CHECK(reduce_alphabet(parse_forest("b"), ab) == parse_forest("root(root(root, root))"));
  CHECK(reduce_alphabet(parse_forest("a(?)"), ab) == parse_forest("root(root, root(?))"));
  CHECK_THROWS_AS(reduce_alphabet(parse_forest("c"), ab), std::invalid_argument);
  std::set<std::string> images;
  std::size_t count = 0;
  for (int n = 0; n <= 4; ++n)
    for (const Forest& h : all_forests(n, ab)) {
      Forest r = reduce_alphabet(h, ab);
      images.insert(r.key());
      ++count;
      CHECK(encode_forest(r) == phi_alpha(h, ab));
    }
  CHECK(images.size() == count);
}

TEST_CASE("context pair encoding") {
  CHECK(encode_context_pair(Context::hole()) == PairPoly{Polynomial(), Polynomial(1)});
  CHECK(encode_context_pair(Context()) == PairPoly{Polynomial(1), Polynomial()});
  PairPoly r = encode_context_pair(parse_context("root(?)"));
  CHECK(r == PairPoly{Polynomial(2), kX});
  CHECK(pair_substitute(r, encode_context_pair(Context())).p == encode_forest(parse_forest("root")));
  CHECK(pair_substitute({Polynomial(3), Polynomial(5)}, {Polynomial(7), Polynomial(11)}) ==
        PairPoly{Polynomial(38), Polynomial(55)});
  CHECK_THROWS_AS(encode_context_pair(parse_context("a(?)")), std::invalid_argument);

  std::mt19937_64 rng(3);
  for (int i = 0; i < 300; ++i) {
    Context c = random_context(rng, static_cast<int>(rng() % 8), {"root"});
    Context d(random_forest(rng, static_cast<int>(rng() % 6), {"root"}));
    Context e = random_context(rng, static_cast<int>(rng() % 6), {"root"});
    PairPoly pc = encode_context_pair(c), pd = encode_context_pair(d), pe = encode_context_pair(e);
    CHECK(pc.sort() == 1);
    CHECK(pd.sort() == 0);
    CHECK(encode_context_pair(context_substitute(c, d)) == pair_substitute(pc, pd));
    CHECK(encode_context_pair(context_substitute(c, e)) == pair_substitute(pc, pe));
    CHECK(encode_context_pair(context_add(c, d)) == pair_add(pc, pd));
    CHECK(encode_context_pair(context_root("root", c)) == pair_root(pc));
    CHECK(pd.p == encode_forest(d.forest()));
  }
}

TEST_CASE("word encoding") {
  CHECK(encode_word_digits({}, 2) == std::make_pair(Rational(1), Rational(0)));
  CHECK(encode_word_digits({1}, 2) == std::make_pair(Rational(3), Rational(1)));
  CHECK(encode_word_digits({1, 2}, 2) == std::make_pair(Rational(9), Rational(7)));
  CHECK_THROWS_AS(encode_word_digits({3}, 2), std::invalid_argument);
  CHECK(encode_word_pair(Word{"ab"}, "ab") == std::make_pair(Rational(9), Rational(7)));
  for (unsigned k = 1; k <= 3; ++k) {
    std::string alphabet = std::string("abc").substr(0, k);
    std::vector<std::string> words = {""};
    std::set<Rational> values;
    std::size_t total = 0;
    for (std::size_t len = 0; len <= 8; ++len) {
      std::vector<std::string> next;
      for (const std::string& w : words) {
        values.insert(encode_word_pair(Word{w}, alphabet).second);
        ++total;
        if (len < 8)
          for (char c : alphabet) next.push_back(w + c);
      }
      words = std::move(next);
    }
    CHECK(values.size() == total);
  }
  std::mt19937_64 rng(4);
  for (int i = 0; i < 200; ++i) {
    std::string u, v;
    for (std::size_t n = rng() % 6; n > 0; --n) u += "abc"[rng() % 3];
    for (std::size_t n = rng() % 6; n > 0; --n) v += "abc"[rng() % 3];
    auto [l1, v1] = encode_word_pair(Word{u}, "abc");
    auto [l2, v2] = encode_word_pair(Word{v}, "abc");
    CHECK(encode_word_pair(Word{u + v}, "abc") == std::make_pair(Rational(l1 * l2), Rational(v1 + l1 * v2)));
  }
}

TEST_CASE("simulations commute on samples") {
  std::mt19937_64 rng(6);
  std::vector<Value> forests, contexts, labelled, words;
  for (int i = 0; i < 12; ++i) {
    forests.push_back(random_forest(rng, static_cast<int>(rng() % 5), {"root"}));
    contexts.push_back(random_context(rng, static_cast<int>(rng() % 4), {"root"}));
    contexts.push_back(Context(random_forest(rng, static_cast<int>(rng() % 4), {"root"})));
    labelled.push_back(random_forest(rng, static_cast<int>(rng() % 5), {"a", "b", "c"}));
    std::string w;
    for (std::size_t n = rng() % 4; n > 0; --n) w += "ab"[rng() % 2];
    words.push_back(Word{w});
  }
  CHECK(verify_simulation_samples(phi_simulation(), forests));
  CHECK(verify_simulation_samples(context_pair_simulation(), contexts));
  CHECK(verify_simulation_samples(word_simulation("ab"), words));
  CHECK(verify_simulation_samples(alphabet_simulation({"a", "b", "c"}, false), labelled));
  SimulationSpec composed = *simulation_for(forest_algebra({"a", "b", "c"}));
  CHECK(composed.width == 1);
  CHECK(verify_simulation_samples(composed, labelled));
  std::vector<Value> labelled_contexts;
  for (int i = 0; i < 12; ++i) {
    labelled_contexts.push_back(random_context(rng, static_cast<int>(rng() % 4), {"a", "b"}));
    labelled_contexts.push_back(Context(random_forest(rng, static_cast<int>(rng() % 4), {"a", "b"})));
  }
  SimulationSpec ucf = *simulation_for(context_algebra({"a", "b"}));
  CHECK(ucf.width == 2);
  CHECK(verify_simulation_samples(ucf, labelled_contexts));
  CHECK_FALSE(simulation_for(substitution_algebra()).has_value());
}

TEST_CASE("compile FCNS over a single label") {
  RegisterAutomaton m = parse_automaton(
      "algebra UF\nsignature a/2 _|_/0\nregisters 1\nstate q : F\n"
      "_|_ -> q { r1 := 0 }\na(q,q) -> q { r1 := a(r1.1) + r1.2 }\noutput q { r1 }\n");
  RegisterAutomaton c = compile_ra(m, *simulation_for(m));
  CHECK(c.algebra()->name() == "Qx");
  std::string text = automaton_text(c);
  CHECK(text.find("a(q,q) -> q { r1 := (2 + x*r1.1)*r1.2 }") != std::string::npos);
  CHECK(text.find("_|_ -> q { r1 := 1 }") != std::string::npos);
}

TEST_CASE("identity update lifts to identity") {
  RegisterAutomaton m = parse_automaton("algebra Qx\nsignature a/1 l/0\nregisters 1\nstate q : Qx\n"
                                        "l -> q { r1 := 1 }\na(q) -> q { r1 := r1.1 }\noutput q { r1 }\n");
  RegisterAutomaton c = compile_ra(m, *simulation_for(m));
  CHECK(automaton_text(c) == automaton_text(m));
}

TEST_CASE("compiled FCNS agrees through the encoding") {
  RegisterAutomaton m = load("fcns.ra");
  SimulationSpec s = *simulation_for(m);
  RegisterAutomaton c = compile_ra(m, s);
  CHECK(c.registers() == 1);
  std::vector<std::string> labels = {"a", "b", "c", "d", "e", "f"};
  std::mt19937_64 rng(8);
  for (int i = 0; i < 200; ++i) {
    RankedTree t = random_binary(rng, rng() % 5, labels);
    auto out = run_ra(m, t).outputs;
    REQUIRE(out.size() == 1);
    Polynomial expected = phi_alpha(std::get<Forest>(*out.begin()), labels);
    CHECK(run_ra(c, t).outputs == std::set<Value>{expected});
  }
}

TEST_CASE("compiled swapped FCNS keeps two registers") {
  RegisterAutomaton m = load("fcns_swapped.ra");
  RegisterAutomaton c = compile_ra(m, *simulation_for(m));
  CHECK(c.registers() == 2);
  RankedTree t = parse_ordered_tree("a(b(_|_, _|_), c(_|_, _|_))");
  auto out = run_ra(m, t).outputs;
  CHECK(run_ra(c, t).outputs ==
        std::set<Value>{phi_alpha(std::get<Forest>(*out.begin()), {"a", "b", "c", "d", "e", "f"})});
}

TEST_CASE("compiled doubling automaton") {
  RegisterAutomaton m = load("doubling.ra");
  SimulationSpec s = *simulation_for(m);
  CHECK(s.width == 2);
  RegisterAutomaton c = compile_ra(m, s);
  CHECK(c.registers() == 2);
  for (std::size_t n = 0; n <= 6; ++n) {
    auto out = run_ra(c, spine(n)).outputs;
    REQUIRE(out.size() == 1);
    const Polynomial& p = std::get<Polynomial>(*out.begin());
    CHECK(p == (Polynomial(2) + kX).pow(1u << n));
    CHECK(p.total_degree() == (1u << n));
  }
}

TEST_CASE("compiled UCF automaton with substitution") {
  RegisterAutomaton m = parse_automaton(
      "algebra UCF\nalphabet a b\nsignature g/1 l/0\nregisters 2\nstate q : F0 F1\n"
      "l -> q { r1 := 0; r2 := ? }\n"
      "g(q) -> q { r1 := r2.1[?:=a(r1.1)] + b; r2 := b(r2.1, a) }\noutput q { r1 + a(r1) }\n");
  SimulationSpec s = *simulation_for(m);
  RegisterAutomaton c = compile_ra(m, s);
  CHECK(c.registers() == 4);
  RankedTree t{"l", {}};
  for (int n = 0; n < 5; ++n) {
    auto out = run_ra(m, t).outputs;
    REQUIRE(out.size() == 1);
    CHECK(run_ra(c, t).outputs == std::set<Value>{s.alpha(*out.begin())[s.output_coordinate]});
    CHECK(std::get<Polynomial>(s.alpha(*out.begin())[0]) == phi_alpha(std::get<Context>(*out.begin()).forest(), {"a", "b"}));
    t = RankedTree{"g", {t}};
  }
}

TEST_CASE("compiled word automaton") {
  RegisterAutomaton m = parse_automaton(
      "algebra Words\nalphabet a b\nsignature g/1 l/0\nregisters 1\nstate q : W\n"
      "l -> q { r1 := \"a\" }\ng(q) -> q { r1 := r1.1 * \"b\" * r1.1 }\noutput q { r1 }\n");
  SimulationSpec s = *simulation_for(m);
  RegisterAutomaton c = compile_ra(m, s);
  CHECK(c.algebra()->name() == "Q");
  RankedTree t{"l", {}};
  for (int n = 0; n < 4; ++n) {
    auto out = run_ra(m, t).outputs;
    REQUIRE(out.size() == 1);
    CHECK(run_ra(c, t).outputs == std::set<Value>{encode_word_pair(std::get<Word>(*out.begin()), "ab").second});
    t = RankedTree{"g", {t}};
  }
}

TEST_CASE("labels are inferred when the algebra declares none") {
  RegisterAutomaton m = parse_automaton(
      "algebra UF\nsignature g/1 l/0\nregisters 1\nstate q : F\n"
      "l -> q { r1 := b }\ng(q) -> q { r1 := a(r1.1) }\noutput q { r1 }\n");
  SimulationSpec s = *simulation_for(m);
  RegisterAutomaton c = compile_ra(m, s);
  RankedTree t{"g", {{"g", {{"l", {}}}}}};
  Forest out = std::get<Forest>(*run_ra(m, t).outputs.begin());
  CHECK(run_ra(c, t).outputs == std::set<Value>{phi_alpha(out, {"a", "b"})});
}
