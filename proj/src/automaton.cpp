#include "hilbert/automaton.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "hilbert/algebras.hpp"
#include "hilbert/parse_util.hpp"

namespace hilbert {

std::string register_name(std::size_t reg) { return "r" + std::to_string(reg); }

std::string argument_register(std::size_t reg, std::size_t arg) {
  return "r" + std::to_string(reg) + "." + std::to_string(arg);
}

std::optional<std::pair<std::size_t, std::size_t>> parse_register_name(std::string_view name) {
  if (name.size() < 2 || name[0] != 'r') return std::nullopt;
  auto number = [](std::string_view digits) -> std::optional<std::size_t> {
    if (digits.empty() || digits.size() > 9 || digits[0] == '0') return std::nullopt;
    std::size_t n = 0;
    for (char c : digits) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
      n = n * 10 + static_cast<std::size_t>(c - '0');
    }
    return n;
  };
  std::string_view body = name.substr(1);
  std::size_t dot = body.find('.');
  auto reg = number(body.substr(0, dot));
  if (!reg) return std::nullopt;
  if (dot == std::string_view::npos) return std::make_pair(*reg, std::size_t{0});
  auto arg = number(body.substr(dot + 1));
  if (!arg) return std::nullopt;
  return std::make_pair(*reg, *arg);
}

namespace {

void check_variables(const Term& t, const std::function<std::optional<int>(const std::string&)>& sort_of,
                     const std::string& where) {
  if (t.is_variable()) {
    std::optional<int> expected = sort_of(t.name());
    if (!expected) throw AutomatonError(where + ": unknown variable " + t.name());
    if (*expected != t.sort()) throw AutomatonError(where + ": variable " + t.name() + " has the wrong sort");
  }
  for (const Term& a : t.args()) check_variables(a, sort_of, where);
}

std::string rule_key(const Algebra& alg, const Rule& r) {
  std::string key = r.symbol + "|" + std::to_string(r.target) + "|";
  for (std::size_t c : r.children) key += std::to_string(c) + ",";
  for (const Term& t : r.update) key += "|" + alg.render_term(t);
  return key;
}

std::string rule_head(const RegisterAutomaton& m, const Rule& r) {
  std::string out = r.symbol;
  if (!r.children.empty()) {
    out += "(";
    for (std::size_t i = 0; i < r.children.size(); ++i) {
      if (i) out += ",";
      out += m.states()[r.children[i]].name;
    }
    out += ")";
  }
  return out + " -> " + m.states()[r.target].name;
}

}  // namespace

RegisterAutomaton::RegisterAutomaton(AlgebraPtr algebra, std::vector<RankedSymbol> signature,
                                     std::size_t registers, std::vector<AutomatonState> states,
                                     std::vector<Rule> rules, std::map<std::size_t, Term> output)
    : algebra_(std::move(algebra)),
      signature_(std::move(signature)),
      registers_(registers),
      states_(std::move(states)) {
  std::set<std::string> names;
  for (const RankedSymbol& s : signature_)
    if (!names.insert(s.name).second) throw AutomatonError("symbol " + s.name + " declared twice");
  names.clear();
  for (AutomatonState& s : states_) {
    if (!names.insert(s.name).second) throw AutomatonError("state " + s.name + " declared twice");
    if (s.sorts.empty()) s.sorts.assign(registers_, 0);
    if (s.sorts.size() != registers_)
      throw AutomatonError("state " + s.name + " needs one sort per register");
    for (int sort : s.sorts)
      if (sort < 0 || static_cast<std::size_t>(sort) >= algebra_->sorts().size())
        throw AutomatonError("state " + s.name + " has an invalid sort");
  }
  std::set<std::string> seen;
  for (Rule& r : rules) {
    auto k = rank(r.symbol);
    if (!k) throw AutomatonError("rule uses undeclared symbol " + r.symbol);
    if (*k != r.children.size()) throw AutomatonError("rule for " + r.symbol + " has the wrong arity");
    for (std::size_t c : r.children)
      if (c >= states_.size()) throw AutomatonError("rule for " + r.symbol + " names an unknown state");
    if (r.target >= states_.size()) throw AutomatonError("rule for " + r.symbol + " names an unknown state");
    if (r.update.size() != registers_)
      throw AutomatonError("rule " + rule_head(*this, r) + " must assign every register");
    for (std::size_t j = 0; j < registers_; ++j) {
      std::string where = "rule " + rule_head(*this, r) + ", " + register_name(j + 1);
      if (r.update[j].sort() != states_[r.target].sorts[j])
        throw AutomatonError(where + ": update has sort " + algebra_->sort_name(r.update[j].sort()) +
                             ", register holds " + algebra_->sort_name(states_[r.target].sorts[j]));
      check_variables(r.update[j], rule_variables(r.children), where);
    }
    if (seen.insert(rule_key(*algebra_, r)).second) rules_.push_back(std::move(r));
  }
  for (auto& [q, term] : output) {
    if (q >= states_.size()) throw AutomatonError("output for unknown state");
    std::string where = "output " + states_[q].name;
    if (term.sort() != 0) throw AutomatonError(where + ": outputs must have sort " + algebra_->sort_name(0));
    check_variables(term, output_variables(q), where);
    output_.emplace(q, term);
  }
}

std::optional<std::size_t> RegisterAutomaton::rank(std::string_view symbol) const {
  for (const RankedSymbol& s : signature_)
    if (s.name == symbol) return s.rank;
  return std::nullopt;
}

std::optional<std::size_t> RegisterAutomaton::state_index(std::string_view name) const {
  for (std::size_t i = 0; i < states_.size(); ++i)
    if (states_[i].name == name) return i;
  return std::nullopt;
}

VariableSorts RegisterAutomaton::rule_variables(const std::vector<std::size_t>& children) const {
  std::vector<std::vector<int>> sorts;
  for (std::size_t c : children) sorts.push_back(states_.at(c).sorts);
  return [sorts](const std::string& name) -> std::optional<int> {
    auto reg = parse_register_name(name);
    if (!reg || reg->second == 0 || reg->second > sorts.size()) return std::nullopt;
    const auto& s = sorts[reg->second - 1];
    if (reg->first > s.size()) return std::nullopt;
    return s[reg->first - 1];
  };
}

VariableSorts RegisterAutomaton::output_variables(std::size_t state) const {
  std::vector<int> sorts = states_.at(state).sorts;
  return [sorts](const std::string& name) -> std::optional<int> {
    auto reg = parse_register_name(name);
    if (!reg || reg->second != 0 || reg->first > sorts.size()) return std::nullopt;
    return sorts[reg->first - 1];
  };
}

// ---------------------------------------------------------------- file format

namespace {

struct Line {
  std::string_view text;
  std::size_t offset;
  std::size_t number;
};

[[noreturn]] void line_error(const Line& line, const std::string& message, std::size_t offset) {
  throw ParseError("line " + std::to_string(line.number) + ": " + message, offset);
}

std::string read_symbol(Cursor& in) {
  if (in.consume(kBottomLabel)) return std::string(kBottomLabel);
  return in.identifier();
}

Term parse_embedded_term(const Algebra& alg, std::string_view text, std::size_t offset,
                         const VariableSorts& vars, const Line& line) {
  try {
    return alg.parse_term(text, vars);
  } catch (const ParseError& e) {
    line_error(line, e.message(), offset + e.position());
  } catch (const std::invalid_argument& e) {
    line_error(line, e.what(), offset);
  }
}

// Splits `{ a ; b }` into its items with their absolute offsets.
std::vector<std::pair<std::string_view, std::size_t>> braced_items(Cursor& in, const Line& line) {
  in.expect('{');
  std::size_t start = in.local_position();
  std::string_view rest = in.rest();
  std::size_t close = rest.rfind('}');
  if (close == std::string_view::npos) line_error(line, "expected '}'", in.position());
  std::string_view body = rest.substr(0, close);
  std::vector<std::pair<std::string_view, std::size_t>> items;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    std::size_t semi = body.find(';', pos);
    if (semi == std::string_view::npos) semi = body.size();
    std::string_view item = body.substr(pos, semi - pos);
    if (item.find_first_not_of(" \t\r") != std::string_view::npos)
      items.emplace_back(item, line.offset + start + pos);
    pos = semi + 1;
  }
  in.set_local_position(start + close + 1);
  if (!in.at_end()) line_error(line, "unexpected input after '}'", in.position());
  return items;
}

}  // namespace

RegisterAutomaton parse_automaton(std::string_view text) {
  std::vector<Line> lines;
  std::size_t offset = 0, number = 1;
  while (offset <= text.size()) {
    std::size_t end = text.find('\n', offset);
    if (end == std::string_view::npos) end = text.size();
    std::string_view body = text.substr(offset, end - offset);
    if (std::size_t hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    if (body.find_first_not_of(" \t\r") != std::string_view::npos) lines.push_back({body, offset, number});
    offset = end + 1;
    ++number;
  }

  std::string algebra_name;
  std::vector<std::string> alphabet;
  std::vector<RankedSymbol> signature;
  std::optional<std::size_t> registers;
  std::vector<std::pair<std::string, std::vector<std::string>>> state_decls;
  std::vector<const Line*> body_lines;

  for (const Line& line : lines) {
    Cursor in(line.text, line.offset);
    std::size_t save = in.local_position();
    std::string word = in.at_identifier() ? in.identifier() : "";
    if (word == "algebra") {
      algebra_name = in.identifier();
    } else if (word == "alphabet") {
      while (!in.at_end()) {
        std::string item;
        while (in.peek_raw() != '\0' && !std::isspace(static_cast<unsigned char>(in.peek_raw()))) {
          item += in.peek_raw();
          in.set_local_position(in.local_position() + 1);
        }
        alphabet.push_back(item);
      }
    } else if (word == "signature") {
      while (!in.at_end()) {
        std::string name = read_symbol(in);
        in.expect('/');
        signature.push_back({name, static_cast<std::size_t>(std::stoul(in.digits()))});
      }
    } else if (word == "registers") {
      registers = static_cast<std::size_t>(std::stoul(in.digits()));
    } else if (word == "state") {
      std::string name = in.identifier();
      std::vector<std::string> sorts;
      if (in.consume(':'))
        while (!in.at_end()) sorts.push_back(in.identifier());
      state_decls.emplace_back(name, sorts);
    } else {
      in.set_local_position(save);
      body_lines.push_back(&line);
      continue;
    }
    if (!in.at_end()) line_error(line, "unexpected input", in.position());
  }
  if (algebra_name.empty()) throw ParseError("missing 'algebra' line", 0);
  if (!registers) throw ParseError("missing 'registers' line", 0);
  AlgebraPtr alg;
  try {
    alg = make_algebra(algebra_name, alphabet);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), 0);
  }

  std::vector<AutomatonState> states;
  for (auto& [name, sorts] : state_decls) {
    AutomatonState s{name, {}};
    for (const std::string& sort : sorts) s.sorts.push_back(alg->sort_index(sort));
    states.push_back(std::move(s));
  }
  auto find_state = [&](const std::string& name, const Line& line, std::size_t at) {
    for (std::size_t i = 0; i < states.size(); ++i)
      if (states[i].name == name) return i;
    line_error(line, "unknown state " + name, at);
  };
  auto sorts_of = [&](std::size_t q) {
    std::vector<int> s = states[q].sorts;
    if (s.empty()) s.assign(*registers, 0);
    return s;
  };

  std::vector<Rule> rules;
  std::map<std::size_t, Term> output;
  for (const Line* lp : body_lines) {
    const Line& line = *lp;
    Cursor in(line.text, line.offset);
    if (in.consume("output") && std::isspace(static_cast<unsigned char>(in.peek_raw()))) {
      std::size_t at = in.position();
      std::size_t q = find_state(in.identifier(), line, at);
      auto items = braced_items(in, line);
      if (items.size() != 1) line_error(line, "output needs exactly one term", at);
      std::vector<int> sorts = sorts_of(q);
      VariableSorts vars = [sorts](const std::string& name) -> std::optional<int> {
        auto reg = parse_register_name(name);
        if (!reg || reg->second != 0 || reg->first > sorts.size()) return std::nullopt;
        return sorts[reg->first - 1];
      };
      if (output.count(q)) line_error(line, "second output for state " + states[q].name, at);
      output.emplace(q, parse_embedded_term(*alg, items[0].first, items[0].second, vars, line));
      continue;
    }
    in.set_local_position(0);
    Rule rule;
    std::size_t at = in.position();
    rule.symbol = read_symbol(in);
    if (in.consume('(')) {
      do {
        std::size_t sat = in.position();
        rule.children.push_back(find_state(in.identifier(), line, sat));
      } while (in.consume(','));
      in.expect(')');
    }
    in.expect("->");
    std::size_t tat = in.position();
    rule.target = find_state(in.identifier(), line, tat);
    std::vector<std::vector<int>> child_sorts;
    for (std::size_t c : rule.children) child_sorts.push_back(sorts_of(c));
    VariableSorts vars = [child_sorts](const std::string& name) -> std::optional<int> {
      auto reg = parse_register_name(name);
      if (!reg || reg->second == 0 || reg->second > child_sorts.size()) return std::nullopt;
      const auto& s = child_sorts[reg->second - 1];
      if (reg->first > s.size()) return std::nullopt;
      return s[reg->first - 1];
    };
    std::vector<std::optional<Term>> update(*registers);
    for (auto [item, item_offset] : braced_items(in, line)) {
      Cursor ic(item, item_offset);
      std::size_t rat = ic.position();
      auto reg = parse_register_name(ic.identifier());
      if (!reg || reg->second != 0 || reg->first == 0 || reg->first > *registers)
        line_error(line, "expected a register name", rat);
      if (update[reg->first - 1]) line_error(line, "register assigned twice", rat);
      ic.expect(":=");
      std::size_t term_at = ic.position();
      update[reg->first - 1] = parse_embedded_term(*alg, ic.rest(), term_at, vars, line);
    }
    for (std::size_t j = 0; j < *registers; ++j) {
      if (!update[j]) line_error(line, "register " + register_name(j + 1) + " not assigned", at);
      rule.update.push_back(*update[j]);
    }
    rules.push_back(std::move(rule));
  }
  try {
    return RegisterAutomaton(alg, signature, *registers, states, rules, output);
  } catch (const AutomatonError& e) {
    throw ParseError(e.what(), 0);
  } catch (const SortError& e) {
    throw ParseError(e.what(), 0);
  }
}

std::string automaton_text(const RegisterAutomaton& m) {
  const Algebra& alg = *m.algebra();
  std::ostringstream out;
  out << "algebra " << alg.name() << "\n";
  if (const auto* f = dynamic_cast<const ForestAlgebra*>(&alg); f && !f->labels().empty()) {
    out << "alphabet";
    for (const std::string& l : f->labels()) out << " " << l;
    out << "\n";
  }
  if (const auto* w = dynamic_cast<const WordAlgebra*>(&alg); w && !w->alphabet().empty()) {
    out << "alphabet";
    for (char c : w->alphabet()) out << " " << c;
    out << "\n";
  }
  out << "signature";
  for (const RankedSymbol& s : m.signature()) out << " " << s.name << "/" << s.rank;
  out << "\nregisters " << m.registers() << "\n";
  for (const AutomatonState& s : m.states()) {
    out << "state " << s.name;
    if (m.registers()) {
      out << " :";
      for (int sort : s.sorts) out << " " << alg.sort_name(sort);
    }
    out << "\n";
  }
  for (const Rule& r : m.rules()) {
    out << rule_head(m, r) << " {";
    for (std::size_t j = 0; j < r.update.size(); ++j)
      out << (j ? "; " : " ") << register_name(j + 1) << " := " << alg.render_term(r.update[j]);
    out << " }\n";
  }
  for (const auto& [q, t] : m.output()) out << "output " << m.states()[q].name << " { " << alg.render_term(t) << " }\n";
  return out.str();
}

// ---------------------------------------------------------------- runs

std::set<Configuration> step_configurations(const RegisterAutomaton& m, const std::string& symbol,
                                            const std::vector<const std::set<Configuration>*>& children,
                                            std::size_t cap, bool* saturated) {
  std::set<Configuration> out;
  const Algebra& alg = *m.algebra();
  for (const Rule& r : m.rules()) {
    if (r.symbol != symbol || r.children.size() != children.size()) continue;
    std::vector<std::vector<const Configuration*>> choices(children.size());
    bool possible = true;
    for (std::size_t i = 0; i < children.size(); ++i) {
      for (const Configuration& c : *children[i])
        if (c.state == r.children[i]) choices[i].push_back(&c);
      possible = possible && !choices[i].empty();
    }
    if (!possible) continue;
    std::vector<std::size_t> idx(children.size(), 0);
    for (;;) {
      Assignment at;
      for (std::size_t i = 0; i < children.size(); ++i) {
        const Configuration& c = *choices[i][idx[i]];
        for (std::size_t k = 0; k < c.registers.size(); ++k) at.emplace(argument_register(k + 1, i + 1), c.registers[k]);
      }
      Configuration next{r.target, {}};
      for (const Term& t : r.update) next.registers.push_back(eval_term(t, at, alg));
      if (out.size() < cap || out.count(next)) {
        out.insert(std::move(next));
      } else if (saturated) {
        *saturated = true;
      }
      std::size_t i = 0;
      while (i < idx.size() && ++idx[i] == choices[i].size()) idx[i++] = 0;
      if (i == idx.size()) break;
    }
  }
  return out;
}

std::set<Value> configuration_outputs(const RegisterAutomaton& m, const std::set<Configuration>& configs) {
  std::set<Value> out;
  for (const Configuration& c : configs) {
    auto it = m.output().find(c.state);
    if (it == m.output().end()) continue;
    Assignment at;
    for (std::size_t k = 0; k < c.registers.size(); ++k) at.emplace(register_name(k + 1), c.registers[k]);
    out.insert(eval_term(it->second, at, *m.algebra()));
  }
  return out;
}

namespace {

std::set<Configuration> run_configurations(const RegisterAutomaton& m, const RankedTree& t, std::size_t cap,
                                           bool* saturated) {
  auto k = m.rank(t.label);
  if (!k) throw AutomatonError("input symbol " + t.label + " is not in the signature");
  if (*k != t.children.size())
    throw AutomatonError("input symbol " + t.label + " has rank " + std::to_string(*k) + " but " +
                         std::to_string(t.children.size()) + " children");
  std::vector<std::set<Configuration>> below;
  below.reserve(t.children.size());
  for (const RankedTree& c : t.children) below.push_back(run_configurations(m, c, cap, saturated));
  std::vector<const std::set<Configuration>*> ptrs;
  for (const auto& b : below) ptrs.push_back(&b);
  return step_configurations(m, t.label, ptrs, cap, saturated);
}

}  // namespace

RunResult run_ra(const RegisterAutomaton& m, const RankedTree& t, std::size_t cap) {
  RunResult r;
  r.configurations = run_configurations(m, t, cap, &r.saturated);
  r.outputs = configuration_outputs(m, r.configurations);
  return r;
}

bool check_deterministic(const RegisterAutomaton& m) {
  std::set<std::pair<std::string, std::vector<std::size_t>>> lhs;
  for (const Rule& r : m.rules())
    if (!lhs.insert({r.symbol, r.children}).second) return false;
  return true;
}

// ---------------------------------------------------------------- products

RegisterAutomaton cross_difference(const RegisterAutomaton& m, const RegisterAutomaton& m2) {
  const Algebra& alg = *m.algebra();
  if (!alg.has_subtraction() || !m2.algebra()->has_subtraction())
    throw AutomatonError("difference automata need an algebra with subtraction");
  if (alg.name() != m2.algebra()->name()) throw AutomatonError("automata are over different algebras");
  auto sig1 = m.signature(), sig2 = m2.signature();
  std::sort(sig1.begin(), sig1.end());
  std::sort(sig2.begin(), sig2.end());
  if (sig1 != sig2) throw AutomatonError("automata have different signatures");

  const std::size_t n = m.registers(), n2 = m2.registers();
  using Pair = std::pair<std::size_t, std::size_t>;
  std::map<Pair, std::size_t> index;
  std::vector<Pair> order;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Rule& a : m.rules())
      for (const Rule& b : m2.rules()) {
        if (a.symbol != b.symbol || a.children.size() != b.children.size()) continue;
        bool ok = true;
        for (std::size_t i = 0; ok && i < a.children.size(); ++i)
          ok = index.count({a.children[i], b.children[i]}) > 0;
        Pair target{a.target, b.target};
        if (ok && !index.count(target)) {
          index.emplace(target, order.size());
          order.push_back(target);
          changed = true;
        }
      }
  }

  std::vector<AutomatonState> states;
  std::set<std::string> used;
  for (const Pair& p : order) {
    std::string name = m.states()[p.first].name + "_" + m2.states()[p.second].name;
    while (!used.insert(name).second) name += "_";
    std::vector<int> sorts = m.states()[p.first].sorts;
    const auto& s2 = m2.states()[p.second].sorts;
    sorts.insert(sorts.end(), s2.begin(), s2.end());
    states.push_back({name, sorts});
  }

  auto shift = [&](const Term& t, std::size_t arity) {
    std::map<std::string, Term> ren;
    for (std::size_t k = 1; k <= n2; ++k) {
      if (arity == 0) {
        ren.emplace(register_name(k), Term::variable(register_name(n + k), 0));
      } else {
        for (std::size_t i = 1; i <= arity; ++i)
          ren.emplace(argument_register(k, i), Term::variable(argument_register(n + k, i), 0));
      }
    }
    return substitute_term(t, ren, alg);
  };

  std::vector<Rule> rules;
  for (const Rule& a : m.rules())
    for (const Rule& b : m2.rules()) {
      if (a.symbol != b.symbol || a.children.size() != b.children.size()) continue;
      Rule r{a.symbol, {}, 0, a.update};
      bool ok = true;
      for (std::size_t i = 0; ok && i < a.children.size(); ++i) {
        auto it = index.find({a.children[i], b.children[i]});
        ok = it != index.end();
        if (ok) r.children.push_back(it->second);
      }
      if (!ok) continue;
      r.target = index.at({a.target, b.target});
      for (const Term& t : b.update) r.update.push_back(shift(t, std::max<std::size_t>(a.children.size(), 1)));
      rules.push_back(std::move(r));
    }

  std::map<std::size_t, Term> output;
  for (std::size_t s = 0; s < order.size(); ++s) {
    auto o1 = m.output().find(order[s].first);
    auto o2 = m2.output().find(order[s].second);
    if (o1 == m.output().end() || o2 == m2.output().end()) continue;
    output.emplace(s, alg.make_apply("sub", {o1->second, shift(o2->second, 0)}));
  }
  return RegisterAutomaton(m.algebra(), m.signature(), n + n2, states, rules, output);
}

RegisterAutomaton self_product(const RegisterAutomaton& m) { return cross_difference(m, m); }

std::vector<RankedTree> trees_of_size(const std::vector<RankedSymbol>& signature, std::size_t size) {
  std::map<std::size_t, std::vector<RankedTree>> memo;
  std::function<const std::vector<RankedTree>&(std::size_t)> trees = [&](std::size_t n) -> const std::vector<RankedTree>& {
    if (auto it = memo.find(n); it != memo.end()) return it->second;
    std::vector<RankedTree> out;
    for (const RankedSymbol& s : signature) {
      if (s.rank == 0) {
        if (n == 1) out.push_back({s.name, {}});
        continue;
      }
      if (n < 1 + s.rank) continue;
      // Distribute n - 1 nodes over the children, each at least one.
      std::vector<std::size_t> parts(s.rank, 1);
      parts.back() = n - s.rank;
      std::function<void(std::size_t, std::size_t, std::vector<RankedTree>&)> fill =
          [&](std::size_t i, std::size_t left, std::vector<RankedTree>& kids) {
            if (i + 1 == s.rank) {
              for (const RankedTree& c : trees(left)) {
                kids.push_back(c);
                out.push_back({s.name, kids});
                kids.pop_back();
              }
              return;
            }
            for (std::size_t here = 1; here + (s.rank - i - 1) <= left; ++here) {
              const std::vector<RankedTree> options = trees(here);
              for (const RankedTree& c : options) {
                kids.push_back(c);
                fill(i + 1, left - here, kids);
                kids.pop_back();
              }
            }
          };
      std::vector<RankedTree> kids;
      fill(0, n - 1, kids);
    }
    return memo[n] = std::move(out);
  };
  return trees(size);
}

// ---------------------------------------------------------------- tree automata

std::set<std::size_t> Nfta::run(const RankedTree& t) const {
  std::vector<std::set<std::size_t>> below;
  for (const RankedTree& c : t.children) below.push_back(run(c));
  std::set<std::size_t> out;
  for (const NftaTransition& tr : transitions) {
    if (tr.symbol != t.label || tr.children.size() != below.size()) continue;
    bool ok = true;
    for (std::size_t i = 0; ok && i < below.size(); ++i) ok = below[i].count(tr.children[i]) > 0;
    if (ok) out.insert(tr.target);
  }
  return out;
}

bool Nfta::accepts(const RankedTree& t) const {
  for (std::size_t q : run(t))
    if (accepting.count(q)) return true;
  return false;
}

namespace {

// Calls f on every tuple of `k` indices below `n`.
void for_each_tuple(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> idx(k, 0);
  if (k > 0 && n == 0) return;
  for (;;) {
    f(idx);
    std::size_t i = 0;
    while (i < k && ++idx[i] == n) idx[i++] = 0;
    if (i == k) return;
  }
}

}  // namespace

Nfta determinize(const Nfta& a) {
  std::vector<std::set<std::size_t>> subsets;
  std::map<std::set<std::size_t>, std::size_t> id;
  auto image = [&](const std::string& symbol, const std::vector<std::size_t>& tuple) {
    std::set<std::size_t> out;
    for (const NftaTransition& tr : a.transitions) {
      if (tr.symbol != symbol || tr.children.size() != tuple.size()) continue;
      bool ok = true;
      for (std::size_t i = 0; ok && i < tuple.size(); ++i) ok = subsets[tuple[i]].count(tr.children[i]) > 0;
      if (ok) out.insert(tr.target);
    }
    return out;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (const RankedSymbol& s : a.signature) {
      std::vector<std::set<std::size_t>> found;
      for_each_tuple(subsets.size(), s.rank, [&](const std::vector<std::size_t>& tuple) {
        found.push_back(image(s.name, tuple));
      });
      for (auto& f : found)
        if (!id.count(f)) {
          id.emplace(f, subsets.size());
          subsets.push_back(f);
          changed = true;
        }
    }
  }
  Nfta d;
  d.signature = a.signature;
  d.states = subsets.size();
  for (const RankedSymbol& s : a.signature)
    for_each_tuple(subsets.size(), s.rank, [&](const std::vector<std::size_t>& tuple) {
      d.transitions.push_back({s.name, tuple, id.at(image(s.name, tuple))});
    });
  for (std::size_t i = 0; i < subsets.size(); ++i)
    for (std::size_t q : subsets[i])
      if (a.accepting.count(q)) d.accepting.insert(i);
  return d;
}

Nfta complete(const Nfta& a) {
  Nfta c = a;
  std::size_t sink = c.states++;
  std::set<std::pair<std::string, std::vector<std::size_t>>> lhs;
  for (const NftaTransition& tr : a.transitions) lhs.insert({tr.symbol, tr.children});
  for (const RankedSymbol& s : a.signature)
    for_each_tuple(c.states, s.rank, [&](const std::vector<std::size_t>& tuple) {
      if (!lhs.count({s.name, tuple})) c.transitions.push_back({s.name, tuple, sink});
    });
  return c;
}

Nfta complement(const Nfta& a) {
  Nfta d = determinize(a);
  std::set<std::size_t> flipped;
  for (std::size_t q = 0; q < d.states; ++q)
    if (!d.accepting.count(q)) flipped.insert(q);
  d.accepting = std::move(flipped);
  return d;
}

Nfta intersect(const Nfta& a, const Nfta& b) {
  Nfta p;
  p.signature = a.signature;
  for (const RankedSymbol& s : b.signature)
    if (std::find(p.signature.begin(), p.signature.end(), s) == p.signature.end()) p.signature.push_back(s);
  p.states = a.states * b.states;
  auto pair = [&](std::size_t i, std::size_t j) { return i * b.states + j; };
  for (const NftaTransition& x : a.transitions)
    for (const NftaTransition& y : b.transitions) {
      if (x.symbol != y.symbol || x.children.size() != y.children.size()) continue;
      NftaTransition t{x.symbol, {}, pair(x.target, y.target)};
      for (std::size_t i = 0; i < x.children.size(); ++i) t.children.push_back(pair(x.children[i], y.children[i]));
      p.transitions.push_back(std::move(t));
    }
  for (std::size_t i : a.accepting)
    for (std::size_t j : b.accepting) p.accepting.insert(pair(i, j));
  return p;
}

std::optional<RankedTree> find_accepted(const Nfta& a) {
  constexpr std::size_t kInf = static_cast<std::size_t>(-1);
  std::vector<std::size_t> best(a.states, kInf);
  std::vector<const NftaTransition*> via(a.states, nullptr);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const NftaTransition& tr : a.transitions) {
      std::size_t size = 1;
      for (std::size_t c : tr.children) {
        if (best[c] == kInf) {
          size = kInf;
          break;
        }
        size += best[c];
      }
      if (size < best[tr.target]) {
        best[tr.target] = size;
        via[tr.target] = &tr;
        changed = true;
      }
    }
  }
  std::optional<std::size_t> root;
  for (std::size_t q : a.accepting)
    if (best[q] != kInf && (!root || best[q] < best[*root])) root = q;
  if (!root) return std::nullopt;
  std::function<RankedTree(std::size_t)> build = [&](std::size_t q) {
    RankedTree t{via[q]->symbol, {}};
    for (std::size_t c : via[q]->children) t.children.push_back(build(c));
    return t;
  };
  return build(*root);
}

bool is_empty(const Nfta& a) { return !find_accepted(a).has_value(); }

Nfta domain_nfta(const RegisterAutomaton& m) {
  Nfta a;
  a.signature = m.signature();
  a.states = m.states().size();
  std::set<NftaTransition> seen;
  for (const Rule& r : m.rules()) {
    NftaTransition t{r.symbol, r.children, r.target};
    if (seen.insert(t).second) a.transitions.push_back(t);
  }
  for (const auto& [q, term] : m.output()) a.accepting.insert(q);
  return a;
}

DomainComparison domains_equivalent(const RegisterAutomaton& m, const RegisterAutomaton& m2) {
  Nfta a = domain_nfta(m), b = domain_nfta(m2);
  for (const RankedSymbol& s : b.signature)
    if (std::find(a.signature.begin(), a.signature.end(), s) == a.signature.end()) a.signature.push_back(s);
  b.signature = a.signature;
  DomainComparison out;
  if (auto w = find_accepted(intersect(a, complement(b)))) {
    out.equal = false;
    out.witness = w;
    out.witness_in_first = true;
  } else if (auto w2 = find_accepted(intersect(b, complement(a)))) {
    out.equal = false;
    out.witness = w2;
  }
  return out;
}

}  // namespace hilbert
