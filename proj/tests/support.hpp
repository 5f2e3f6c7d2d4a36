#pragma once

// Seeded generators shared by the property tests.

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <random>
#include <string>
#include <vector>

#include "hilbert/automaton.hpp"
#include "hilbert/forest.hpp"
#include "hilbert/polynomial.hpp"

namespace hilbert::testing {

inline Rational random_rational(std::mt19937_64& rng, int height = 5) {
  std::uniform_int_distribution<int> num(-height, height);
  std::uniform_int_distribution<int> den(1, 3);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

inline Polynomial random_polynomial(std::mt19937_64& rng, const std::vector<std::string>& vars,
                                    int max_terms = 4, int max_degree = 3, int height = 5) {
  std::uniform_int_distribution<int> nterms(0, max_terms);
  std::uniform_int_distribution<int> exp(0, max_degree);
  std::vector<Polynomial::Term> terms;
  int n = nterms(rng);
  for (int t = 0; t < n; ++t) {
    std::vector<Monomial::Power> powers;
    int budget = max_degree;
    for (const auto& v : vars) {
      int e = std::min(exp(rng), budget);
      if (std::uniform_int_distribution<int>(0, 1)(rng) == 0) e = 0;
      budget -= e;
      powers.emplace_back(intern_variable(v), static_cast<std::uint32_t>(e));
    }
    terms.emplace_back(Monomial(std::move(powers)), random_rational(rng, height));
  }
  return Polynomial::from_terms(std::move(terms));
}

// Forest with exactly `nodes` nodes, shape drawn uniformly at each split.
inline Forest random_forest(std::mt19937_64& rng, int nodes,
                            const std::vector<std::string>& labels = {"a"}) {
  std::vector<Tree> trees;
  std::uniform_int_distribution<std::size_t> pick(0, labels.size() - 1);
  while (nodes > 0) {
    int size = std::uniform_int_distribution<int>(1, nodes)(rng);
    trees.emplace_back(labels[pick(rng)], random_forest(rng, size - 1, labels));
    nodes -= size;
  }
  return Forest::from_trees(std::move(trees));
}

// Inserts a hole next to a uniformly chosen node (or at top level).
inline Context random_context(std::mt19937_64& rng, int nodes,
                              const std::vector<std::string>& labels = {"a"}) {
  Forest f = random_forest(rng, nodes, labels);
  int slot = std::uniform_int_distribution<int>(0, nodes)(rng);
  auto plant = [&](auto&& self, const Forest& h) -> Forest {
    std::vector<Tree> trees;
    if (slot-- == 0) trees.push_back(Forest::hole().trees()[0]);
    for (const Tree& t : h.trees()) trees.emplace_back(t.label(), self(self, t.children()));
    return Forest::from_trees(std::move(trees));
  };
  return Context(plant(plant, f));
}

// All distinct forests with exactly n nodes over `labels`; independent of the
// library's canonical forms except for the final dedup by key.
inline std::vector<Forest> all_forests(int n, const std::vector<std::string>& labels) {
  static std::map<std::pair<int, std::vector<std::string>>, std::vector<Forest>> memo;
  auto key = std::make_pair(n, labels);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  std::map<std::string, Forest> out;
  if (n == 0) {
    out.emplace("", Forest());
  } else {
    for (int k = 1; k <= n; ++k) {
      for (const Forest& inner : all_forests(k - 1, labels)) {
        for (const std::string& l : labels) {
          Forest tree = forest_root(l, inner);
          for (const Forest& rest : all_forests(n - k, labels)) {
            Forest f = forest_add(tree, rest);
            out.emplace(f.key(), f);
          }
        }
      }
    }
  }
  std::vector<Forest> result;
  for (auto& [k, f] : out) result.push_back(f);
  memo[key] = result;
  return result;
}

// φ∘α straight from the recurrences on the original labels.
inline Polynomial phi_alpha(const Forest& h, const std::vector<std::string>& alphabet) {
  const Polynomial x = Polynomial::variable("x");
  Polynomial out(1);
  for (const Tree& t : h.trees()) {
    std::size_t i = std::find(alphabet.begin(), alphabet.end(), t.label()) - alphabet.begin() + 1;
    Polynomial p = (Polynomial(2) + x) * (Polynomial(2) + x * phi_alpha(t.children(), alphabet));
    for (std::size_t k = 0; k < i; ++k) p = Polynomial(2) + x * p;
    out *= p;
  }
  return out;
}

inline OrderedTree random_binary(std::mt19937_64& rng, std::size_t internal, const std::vector<std::string>& labels) {
  if (internal == 0) return {"_|_", {}};
  std::size_t left = rng() % internal;
  return {labels[rng() % labels.size()],
          {random_binary(rng, left, labels), random_binary(rng, internal - 1 - left, labels)}};
}

// Small automata over Q[x] on l/0 a/1 b/2 with sparse integer updates.
inline RegisterAutomaton random_ring_automaton(std::mt19937_64& rng, bool deterministic = false) {
  std::vector<RankedSymbol> sig{{"l", 0}, {"a", 1}, {"b", 2}};
  std::size_t states = 1 + rng() % 2, regs = 1 + rng() % 2;
  auto coeff = [&] { return static_cast<int>(rng() % 5) - 2; };
  std::ostringstream out;
  out << "algebra Qx\nsignature l/0 a/1 b/2\nregisters " << regs << "\n";
  for (std::size_t q = 0; q < states; ++q) out << "state s" << q << "\n";
  auto rule = [&](const RankedSymbol& s, const std::vector<std::size_t>& kids) {
    out << s.name;
    if (s.rank) {
      out << "(";
      for (std::size_t i = 0; i < s.rank; ++i) out << (i ? "," : "") << "s" << kids[i];
      out << ")";
    }
    out << " -> s" << rng() % states << " { ";
    for (std::size_t r = 1; r <= regs; ++r) {
      out << (r > 1 ? "; " : "") << "r" << r << " := " << coeff();
      for (std::size_t i = 1; i <= s.rank; ++i)
        for (std::size_t j = 1; j <= regs; ++j)
          if (int c = coeff(); c != 0 && rng() % 2) out << " + " << c << "*r" << j << "." << i;
      if (s.rank == 2 && rng() % 3 == 0) out << " + r1.1*r1.2";
      if (rng() % 4 == 0) out << " + x";
    }
    out << " }\n";
  };
  for (const RankedSymbol& s : sig) {
    if (deterministic) {
      // one rule per child-state tuple, some tuples left undefined
      std::vector<std::size_t> kids(s.rank, 0);
      for (;;) {
        if (s.rank == 0 || rng() % 5) rule(s, kids);
        std::size_t i = 0;
        while (i < kids.size() && ++kids[i] == states) kids[i++] = 0;
        if (i == kids.size()) break;
      }
      continue;
    }
    std::size_t rules = 1 + rng() % 2;
    for (std::size_t k = 0; k < rules; ++k) {
      std::vector<std::size_t> kids;
      for (std::size_t i = 0; i < s.rank; ++i) kids.push_back(rng() % states);
      rule(s, kids);
    }
  }
  for (std::size_t q = 0; q < states; ++q) {
    if (rng() % 3 == 0) continue;
    int c = coeff();
    out << "output s" << q << " { r1";
    if (regs > 1 && c) out << " - " << c << "*r2";
    out << " }\n";
  }
  return parse_automaton(out.str());
}

// Every input tree up to `size`; nullopt when no output is nonzero.
inline std::optional<OrderedTree> exhaustive_nonzero(const RegisterAutomaton& m, std::size_t size) {
  for (std::size_t n = 1; n <= size; ++n)
    for (const OrderedTree& t : trees_of_size(m.signature(), n))
      for (const Value& v : run_ra(m, t).outputs) {
        const Polynomial* p = std::get_if<Polynomial>(&v);
        const Rational* r = std::get_if<Rational>(&v);
        if ((p && !p->is_zero()) || (r && *r != 0)) return t;
      }
  return std::nullopt;
}

}  // namespace hilbert::testing
