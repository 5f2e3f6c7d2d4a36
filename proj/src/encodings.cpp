#include "hilbert/encodings.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

#include "hilbert/algebras.hpp"

namespace hilbert {

namespace {

const Polynomial& x_poly() {
  static const Polynomial x = Polynomial::variable("x");
  return x;
}

std::size_t label_index(const std::string& label, const std::vector<std::string>& alphabet) {
  auto it = std::find(alphabet.begin(), alphabet.end(), label);
  if (it == alphabet.end()) throw std::invalid_argument("label " + label + " is not in the alphabet");
  return static_cast<std::size_t>(it - alphabet.begin()) + 1;
}

Forest reduce_tree(const Tree& t, const std::vector<std::string>& alphabet) {
  if (t.is_hole()) return Forest::hole();
  std::size_t i = label_index(t.label(), alphabet);
  Forest out = forest_add(forest_root(kUnaryLabel, Forest()),
                          forest_root(kUnaryLabel, reduce_alphabet(t.children(), alphabet)));
  for (std::size_t k = 0; k < i; ++k) out = forest_root(kUnaryLabel, out);
  return out;
}

// Parses a target term whose variables are the simulation variables v<i>_<c>.
Term sim_term(const Algebra& target, std::string_view text) {
  return target.parse_term(text, [](const std::string& name) -> std::optional<int> {
    if (name.size() < 4 || name[0] != 'v') return std::nullopt;
    std::size_t underscore = name.find('_');
    if (underscore == std::string::npos || underscore == 1 || underscore + 1 == name.size()) return std::nullopt;
    for (std::size_t i = 1; i < name.size(); ++i)
      if (i != underscore && !std::isdigit(static_cast<unsigned char>(name[i]))) return std::nullopt;
    return 0;
  });
}

std::vector<Term> sim_terms(const Algebra& target, std::initializer_list<std::string_view> texts) {
  std::vector<Term> out;
  for (std::string_view t : texts) out.push_back(sim_term(target, t));
  return out;
}

void collect_labels(const Forest& f, std::set<std::string>& labels) {
  for (const Tree& t : f.trees()) {
    if (!t.is_hole()) labels.insert(t.label());
    collect_labels(t.children(), labels);
  }
}

void collect_term_symbols(const Term& t, std::set<std::string>& labels, std::set<char>& letters) {
  if (t.is_constant()) {
    if (const auto* f = std::get_if<Forest>(&t.value())) collect_labels(*f, labels);
    if (const auto* c = std::get_if<Context>(&t.value())) collect_labels(c->forest(), labels);
    if (const auto* w = std::get_if<Word>(&t.value())) letters.insert(w->letters.begin(), w->letters.end());
  }
  if (t.is_apply())
    if (auto label = root_label(t.name())) labels.insert(*label);
  for (const Term& a : t.args()) collect_term_symbols(a, labels, letters);
}

}  // namespace

Polynomial encode_forest(const Forest& h, std::string_view label) {
  Polynomial out(1);
  for (const Tree& t : h.trees()) {
    if (t.label() != label) throw std::invalid_argument("encode_forest: label " + t.label() + " is not " + std::string(label));
    out *= Polynomial(2) + x_poly() * encode_forest(t.children(), label);
  }
  return out;
}

Forest reduce_alphabet(const Forest& h, const std::vector<std::string>& alphabet) {
  Forest out;
  for (const Tree& t : h.trees()) out = forest_add(out, reduce_tree(t, alphabet));
  return out;
}

PairPoly pair_add(const PairPoly& a, const PairPoly& b) { return {a.p * b.p, a.q * b.p + a.p * b.q}; }

PairPoly pair_root(const PairPoly& a) { return {Polynomial(2) + x_poly() * a.p, x_poly() * a.q}; }

PairPoly pair_substitute(const PairPoly& a, const PairPoly& b) { return {a.p + a.q * b.p, a.q * b.q}; }

PairPoly encode_context_pair(const Context& c, std::string_view label) {
  std::function<PairPoly(const Forest&)> enc = [&](const Forest& f) {
    PairPoly out{Polynomial(1), Polynomial()};
    for (const Tree& t : f.trees()) {
      if (t.is_hole()) {
        out = pair_add(out, {Polynomial(), Polynomial(1)});
        continue;
      }
      if (t.label() != label)
        throw std::invalid_argument("encode_context_pair: label " + t.label() + " is not " + std::string(label));
      out = pair_add(out, pair_root(enc(t.children())));
    }
    return out;
  };
  PairPoly out = enc(c.forest());
  if (out.sort() != c.sort()) throw std::logic_error("pair encoding lost the hole of " + c.text());
  return out;
}

std::pair<Rational, Rational> encode_word_digits(const std::vector<unsigned>& letters, unsigned k) {
  const Rational base(k + 1);
  Rational length(1), value(0);
  for (unsigned a : letters) {
    if (a < 1 || a > k) throw std::invalid_argument("letter index out of range");
    value += Rational(a) * length;
    length *= base;
  }
  return {length, value};
}

std::pair<Rational, Rational> encode_word_pair(const Word& w, std::string_view alphabet) {
  std::vector<unsigned> digits;
  for (char c : w.letters) {
    std::size_t i = alphabet.find(c);
    if (i == std::string_view::npos) throw std::invalid_argument(std::string("letter ") + c + " is not in the alphabet");
    digits.push_back(static_cast<unsigned>(i + 1));
  }
  return encode_word_digits(digits, static_cast<unsigned>(alphabet.size()));
}

// ---------------------------------------------------------------- simulations

SimulationSpec identity_simulation(const AlgebraPtr& ring) {
  SimulationSpec s;
  s.source = ring;
  s.target = ring;
  s.alpha = [](const Value& v) { return std::vector<Value>{v}; };
  s.op_map = [ring](const OperationSymbol& op) -> std::optional<std::vector<Term>> {
    if (!ring->resolve(op.name, op.args)) return std::nullopt;
    std::vector<Term> args;
    for (std::size_t i = 0; i < op.args.size(); ++i) args.push_back(Term::variable(sim_variable(i, 0), 0));
    return std::vector<Term>{ring->make_apply(op.name, args)};
  };
  return s;
}

SimulationSpec phi_simulation(std::string_view label) {
  SimulationSpec s;
  s.source = forest_algebra({std::string(label)});
  s.target = polynomial_algebra();
  std::string l(label);
  s.alpha = [l](const Value& v) { return std::vector<Value>{encode_forest(std::get<Forest>(v), l)}; };
  auto target = s.target;
  s.op_map = [l, target](const OperationSymbol& op) -> std::optional<std::vector<Term>> {
    if (op.name == "empty") return sim_terms(*target, {"1"});
    if (op.name == "add") return sim_terms(*target, {"v0_0*v1_0"});
    if (op.name == root_op(l)) return sim_terms(*target, {"2 + x*v0_0"});
    return std::nullopt;
  };
  return s;
}

SimulationSpec alphabet_simulation(const std::vector<std::string>& alphabet, bool contexts) {
  SimulationSpec s;
  s.source = contexts ? context_algebra(alphabet) : forest_algebra(alphabet);
  s.target = contexts ? context_algebra({std::string(kUnaryLabel)}) : forest_algebra({std::string(kUnaryLabel)});
  s.alpha = [alphabet](const Value& v) -> std::vector<Value> {
    if (const auto* c = std::get_if<Context>(&v)) return {Context(reduce_alphabet(c->forest(), alphabet))};
    return {reduce_alphabet(std::get<Forest>(v), alphabet)};
  };
  auto target = s.target;
  s.op_map = [alphabet, target](const OperationSymbol& op) -> std::optional<std::vector<Term>> {
    std::vector<Term> vars;
    for (std::size_t i = 0; i < op.args.size(); ++i) vars.push_back(Term::variable(sim_variable(i, 0), op.args[i]));
    if (auto label = root_label(op.name)) {
      auto it = std::find(alphabet.begin(), alphabet.end(), *label);
      if (it == alphabet.end() || op.args.size() != 1) return std::nullopt;
      const std::string root = root_op(kUnaryLabel);
      Term t = target->make_apply(
          "add", {target->make_apply(root, {target->make_apply("empty", {})}), target->make_apply(root, {vars[0]})});
      for (auto k = alphabet.begin(); k <= it; ++k) t = target->make_apply(root, {t});
      return std::vector<Term>{t};
    }
    if (!target->resolve(op.name, op.args)) return std::nullopt;
    return std::vector<Term>{target->make_apply(op.name, vars)};
  };
  return s;
}

SimulationSpec context_pair_simulation(std::string_view label) {
  SimulationSpec s;
  s.source = context_algebra({std::string(label)});
  s.target = polynomial_algebra();
  s.width = 2;
  std::string l(label);
  s.alpha = [l](const Value& v) {
    PairPoly pq = encode_context_pair(std::get<Context>(v), l);
    return std::vector<Value>{pq.p, pq.q};
  };
  auto target = s.target;
  s.op_map = [l, target](const OperationSymbol& op) -> std::optional<std::vector<Term>> {
    if (op.name == "empty") return sim_terms(*target, {"1", "0"});
    if (op.name == "hole") return sim_terms(*target, {"0", "1"});
    if (op.name == "add") return sim_terms(*target, {"v0_0*v1_0", "v0_1*v1_0 + v0_0*v1_1"});
    if (op.name == "subs") return sim_terms(*target, {"v0_0 + v0_1*v1_0", "v0_1*v1_1"});
    if (op.name == root_op(l)) return sim_terms(*target, {"2 + x*v0_0", "x*v0_1"});
    return std::nullopt;
  };
  return s;
}

SimulationSpec word_simulation(std::string_view alphabet) {
  SimulationSpec s;
  s.source = word_algebra(std::string(alphabet));
  s.target = rational_algebra();
  s.width = 2;
  s.output_coordinate = 1;
  std::string letters(alphabet);
  s.alpha = [letters](const Value& v) {
    auto [length, value] = encode_word_pair(std::get<Word>(v), letters);
    return std::vector<Value>{length, value};
  };
  auto target = s.target;
  s.op_map = [target](const OperationSymbol& op) -> std::optional<std::vector<Term>> {
    if (op.name == "concat") return sim_terms(*target, {"v0_0*v1_0", "v0_1 + v0_0*v1_1"});
    return std::nullopt;
  };
  return s;
}

std::optional<SimulationSpec> simulation_for(const AlgebraPtr& algebra, const std::vector<std::string>& labels) {
  if (const auto* ring = dynamic_cast<const RingAlgebra*>(algebra.get())) {
    if (ring->kind() == RingKind::substitution) return std::nullopt;
    return identity_simulation(algebra);
  }
  if (const auto* f = dynamic_cast<const ForestAlgebra*>(algebra.get())) {
    std::vector<std::string> alphabet = f->labels().empty() ? labels : f->labels();
    bool contexts = f->with_contexts();
    if (alphabet.size() <= 1) {
      std::string label = alphabet.empty() ? std::string(kUnaryLabel) : alphabet[0];
      return contexts ? context_pair_simulation(label) : phi_simulation(label);
    }
    SimulationSpec reduce = alphabet_simulation(alphabet, contexts);
    return compose(reduce, contexts ? context_pair_simulation() : phi_simulation());
  }
  if (const auto* w = dynamic_cast<const WordAlgebra*>(algebra.get())) {
    std::string letters = w->alphabet();
    if (letters.empty())
      for (const std::string& l : labels) letters += l;
    return word_simulation(letters);
  }
  return std::nullopt;
}

std::optional<SimulationSpec> simulation_for(const RegisterAutomaton& m) { return simulation_for({&m}); }

std::optional<SimulationSpec> simulation_for(const std::vector<const RegisterAutomaton*>& ms) {
  if (ms.empty()) return std::nullopt;
  std::set<std::string> labels;
  std::set<char> letters;
  for (const RegisterAutomaton* m : ms) {
    for (const Rule& r : m->rules())
      for (const Term& t : r.update) collect_term_symbols(t, labels, letters);
    for (const auto& [q, t] : m->output()) collect_term_symbols(t, labels, letters);
  }
  std::vector<std::string> names(labels.begin(), labels.end());
  if (dynamic_cast<const WordAlgebra*>(ms[0]->algebra().get())) {
    names.clear();
    for (char c : letters) names.emplace_back(1, c);
  }
  return simulation_for(ms[0]->algebra(), names);
}

RegisterAutomaton compile_ra(const RegisterAutomaton& m, const SimulationSpec& s) {
  const std::size_t w = s.width;
  auto target_register = [w](std::size_t reg, std::size_t c) { return (reg - 1) * w + c + 1; };
  LiftRenamer rename = [&](const std::string& name, std::size_t c) {
    auto reg = parse_register_name(name);
    if (!reg) throw std::invalid_argument("compile_ra: unexpected variable " + name);
    std::size_t k = target_register(reg->first, c);
    return reg->second ? argument_register(k, reg->second) : register_name(k);
  };
  std::vector<AutomatonState> states;
  for (const AutomatonState& q : m.states()) states.push_back({q.name, std::vector<int>(m.registers() * w, 0)});
  std::vector<Rule> rules;
  for (const Rule& r : m.rules()) {
    Rule out{r.symbol, r.children, r.target, std::vector<Term>(m.registers() * w)};
    for (std::size_t j = 0; j < r.update.size(); ++j) {
      std::vector<Term> lifted = lift_simulation_term(s, r.update[j], rename);
      for (std::size_t c = 0; c < w; ++c) out.update[target_register(j + 1, c) - 1] = lifted[c];
    }
    rules.push_back(std::move(out));
  }
  std::map<std::size_t, Term> output;
  for (const auto& [q, t] : m.output()) output.emplace(q, lift_simulation_term(s, t, rename)[s.output_coordinate]);
  return RegisterAutomaton(s.target, m.signature(), m.registers() * w, states, rules, output);
}

}  // namespace hilbert
