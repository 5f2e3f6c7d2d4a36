#include "doctest.h"

#include <functional>

#include "hilbert/forest.hpp"
#include "hilbert/parse_util.hpp"
#include "support.hpp"

using namespace hilbert;

namespace {
Forest F(const char* text) { return parse_forest(text); }
Context C(const char* text) { return parse_context(text); }
}  // namespace

TEST_CASE("forest_add") {
  Forest h = F("a(b,c) + d");
  CHECK(forest_add(Forest(), h) == h);
  Forest twice = forest_add(F("a(b)"), F("a(b)"));
  CHECK(twice.trees().size() == 2);
  CHECK(twice.text() == "a(b) + a(b)");
  CHECK(forest_add(F("a(b,c,d)+e"), F("e+a(c,b,d)")) == forest_add(F("e+a(c,b,d)"), F("a(b,c,d)+e")));
}

TEST_CASE("forest_root") {
  CHECK(forest_root("a", Forest()).text() == "a");
  CHECK(forest_root("a", F("b + c")) == F("a(b,c)"));
  CHECK(forest_root("a", forest_root("a", Forest())).text() == "a(a)");
}

TEST_CASE("forest_equal") {
  CHECK(forest_equal(F("a(b(b,c,d), e)"), F("a(e, b(c,b,d))")));
  CHECK_FALSE(forest_equal(F("a(b)"), F("a(b,b)")));
  CHECK(forest_equal(Forest(), Forest()));
  CHECK(F("a(b,c)") == F("a(c,b)"));
}

TEST_CASE("forest text") {
  CHECK(forest_text(Forest()) == "");
  CHECK(F("") == Forest());
  CHECK(F("0") == Forest());
  CHECK(F("a + 0") == F("a"));
  CHECK(F("x, y") == F("y + x"));
  CHECK(F("a(b(c))").node_count() == 3);
  try {
    parse_forest("a(b");
    FAIL("expected error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 3);
  }
  CHECK_THROWS_AS(parse_forest("a b"), ParseError);
  CHECK_THROWS_AS(parse_forest("?(a)"), ParseError);
}

TEST_CASE("round trip on random forests") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    Forest h = testing::random_forest(rng, static_cast<int>(rng() % 12), {"a", "b", "c"});
    CHECK(parse_forest(forest_text(h)) == h);
    CHECK(parse_forest(forest_text(h)).text() == h.text());
  }
}

TEST_CASE("commutative monoid") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 300; ++i) {
    Forest a = testing::random_forest(rng, static_cast<int>(rng() % 6), {"a", "b"});
    Forest b = testing::random_forest(rng, static_cast<int>(rng() % 6), {"a", "b"});
    Forest c = testing::random_forest(rng, static_cast<int>(rng() % 6), {"a", "b"});
    CHECK(forest_add(a, b) == forest_add(b, a));
    CHECK(forest_add(forest_add(a, b), c) == forest_add(a, forest_add(b, c)));
    CHECK(forest_add(a, Forest()) == a);
    CHECK(forest_add(a, b).node_count() == a.node_count() + b.node_count());
  }
}

TEST_CASE("equality agrees with an independent multiset comparison") {
  // Oracle: two forests are equal iff some pairing of their trees matches
  // labels and recursively equal children (brute force over permutations).
  std::function<bool(const Forest&, const Forest&)> same = [&](const Forest& a, const Forest& b) {
    if (a.trees().size() != b.trees().size()) return false;
    std::vector<bool> used(b.trees().size(), false);
    std::function<bool(std::size_t)> match = [&](std::size_t i) {
      if (i == a.trees().size()) return true;
      for (std::size_t j = 0; j < b.trees().size(); ++j) {
        if (used[j] || a.trees()[i].label() != b.trees()[j].label()) continue;
        if (!same(a.trees()[i].children(), b.trees()[j].children())) continue;
        used[j] = true;
        if (match(i + 1)) return true;
        used[j] = false;
      }
      return false;
    };
    return match(0);
  };
  std::mt19937_64 rng(13);
  int equal_pairs = 0;
  for (int i = 0; i < 2000; ++i) {
    int n = static_cast<int>(rng() % 5);
    Forest a = testing::random_forest(rng, n, {"a", "b"});
    Forest b = testing::random_forest(rng, n, {"a", "b"});
    bool eq = forest_equal(a, b);
    equal_pairs += eq;
    CHECK(eq == same(a, b));
    CHECK(eq == (a.text() == b.text()));
  }
  CHECK(equal_pairs > 50);
}

TEST_CASE("forest counts match rooted-tree numbers") {
  // Unlabeled forests with n nodes: 1, 1, 2, 4, 9, 20, 48, 115.
  const std::size_t expected[] = {1, 1, 2, 4, 9, 20, 48, 115};
  for (int n = 0; n < 8; ++n) CHECK(testing::all_forests(n, {"a"}).size() == expected[n]);
}

TEST_CASE("context substitution") {
  Context d = C("b(c) + e");
  CHECK(context_substitute(Context::hole(), d) == d);
  CHECK(context_substitute(C("a(b,?)"), C("c(d)")) == C("a(b, c(d))"));
  Context nested = context_substitute(C("a(?)"), C("b(?)"));
  CHECK(nested == C("a(b(?))"));
  CHECK(nested.sort() == 1);
  CHECK(C("a(b,\xE2\x97\xA6)") == C("a(b,?)"));
  CHECK_THROWS_AS(context_substitute(C("a(b)"), d), UntypedSubstitution);
  CHECK_THROWS_AS(context_add(C("?"), C("a(?)")), UntypedSubstitution);
  CHECK_THROWS_AS(C("a(?,?)"), std::invalid_argument);
  CHECK(context_root("a", C("?")) == C("a(?)"));
  CHECK(context_add(C("a"), C("?")).sort() == 1);
}

TEST_CASE("context substitution is associative") {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 300; ++i) {
    Context c = testing::random_context(rng, static_cast<int>(rng() % 5), {"a", "b"});
    Context d = testing::random_context(rng, static_cast<int>(rng() % 5), {"a", "b"});
    Context e = rng() % 2 ? testing::random_context(rng, static_cast<int>(rng() % 5), {"a", "b"})
                          : Context(testing::random_forest(rng, static_cast<int>(rng() % 5), {"a"}));
    CHECK(c.sort() == 1);
    Context left = context_substitute(context_substitute(c, d), e);
    Context right = context_substitute(c, context_substitute(d, e));
    CHECK(left == right);
    CHECK(left.sort() == e.sort());
    CHECK(left.forest().node_count() ==
          c.forest().node_count() + d.forest().node_count() + e.forest().node_count());
  }
}

TEST_CASE("fcns_decode") {
  CHECK(fcns_decode(parse_ordered_tree("_|_")) == Forest());
  CHECK(fcns_decode(parse_ordered_tree("a(_|_,_|_)")) == F("a"));
  OrderedTree fig = parse_ordered_tree("a(b(c(_|_,d(_|_,_|_)), e(_|_,f(_|_,_|_))), _|_)");
  CHECK(fcns_decode(fig) == F("a(b(c,d), e, f)"));
  CHECK(fcns_decode(parse_ordered_tree("a(\xE2\x8A\xA5,\xE2\x8A\xA5)")) == F("a"));
  CHECK_THROWS_AS(fcns_decode(parse_ordered_tree("a(_|_)")), std::invalid_argument);
  CHECK_THROWS_AS(fcns_decode(parse_ordered_tree("_|_(a,a)")), std::invalid_argument);
  CHECK(fig.size() == 13);
  CHECK(parse_ordered_tree(fig.text()) == fig);
}
