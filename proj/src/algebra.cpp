#include "hilbert/algebra.hpp"

#include <algorithm>

namespace hilbert {

std::string debug_value_text(const Value& v) {
  struct Visitor {
    std::string operator()(const Rational& r) const { return rational_text(r); }
    std::string operator()(const Polynomial& p) const { return canonical_text(p); }
    std::string operator()(const Forest& f) const { return f.empty() ? "0" : f.text(); }
    std::string operator()(const Context& c) const { return c.forest().empty() ? "0" : c.text(); }
    std::string operator()(const Word& w) const { return "\"" + w.letters + "\""; }
  };
  return std::visit(Visitor{}, v);
}

Term::Term() : Term(Term::constant(Rational(0), 0)) {}

Term Term::variable(std::string name, int sort) {
  return Term(std::make_shared<const Node>(Node{Kind::variable, std::move(name), Rational(0), sort, {}}));
}

Term Term::constant(Value value, int sort) {
  return Term(std::make_shared<const Node>(Node{Kind::constant, "", std::move(value), sort, {}}));
}

Term Term::apply(std::string op, std::vector<Term> args, int sort) {
  return Term(
      std::make_shared<const Node>(Node{Kind::apply, std::move(op), Rational(0), sort, std::move(args)}));
}

std::set<std::string> Term::variables() const {
  std::set<std::string> out;
  std::function<void(const Term&)> walk = [&](const Term& t) {
    if (t.is_variable()) out.insert(t.name());
    for (const Term& a : t.args()) walk(a);
  };
  walk(*this);
  return out;
}

std::size_t Term::size() const {
  std::size_t n = 1;
  for (const Term& a : args()) n += a.size();
  return n;
}

std::string Term::debug_text() const {
  switch (kind()) {
    case Kind::variable:
      return name();
    case Kind::constant:
      return debug_value_text(value());
    case Kind::apply:
      break;
  }
  std::string out = name() + "(";
  for (std::size_t i = 0; i < args().size(); ++i) {
    if (i) out += ", ";
    out += args()[i].debug_text();
  }
  return out + ")";
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.sort() != b.sort() || a.name() != b.name()) return false;
  if (a.is_constant()) return a.value() == b.value();
  return a.args() == b.args();
}

int Algebra::sort_index(std::string_view sort) const {
  const auto& all = sorts();
  auto it = std::find(all.begin(), all.end(), sort);
  if (it == all.end()) throw SortError("unknown sort " + std::string(sort) + " in algebra " + name());
  return static_cast<int>(it - all.begin());
}

Term Algebra::make_apply(const std::string& op, std::vector<Term> args) const {
  std::vector<int> arg_sorts;
  bool all_constant = true;
  for (const Term& a : args) {
    arg_sorts.push_back(a.sort());
    all_constant = all_constant && a.is_constant();
  }
  std::optional<int> result = resolve(op, arg_sorts);
  if (!result) {
    std::string sig;
    for (int s : arg_sorts) sig += (sig.empty() ? "" : ",") + sort_name(s);
    throw SortError("operation " + op + " is not defined on (" + sig + ") in algebra " + name());
  }
  if (all_constant) {
    std::vector<Value> values;
    for (const Term& a : args) values.push_back(a.value());
    return Term::constant(apply(op, values), *result);
  }
  return Term::apply(op, std::move(args), *result);
}

Value eval_term(const Term& t, const Assignment& assignment, const Algebra& algebra) {
  switch (t.kind()) {
    case Term::Kind::variable: {
      auto it = assignment.find(t.name());
      if (it == assignment.end()) throw UnboundVariable(t.name());
      if (algebra.sort_of(it->second) != t.sort())
        throw SortError("variable " + t.name() + " bound to a value of sort " +
                        algebra.sort_name(algebra.sort_of(it->second)));
      return it->second;
    }
    case Term::Kind::constant:
      return t.value();
    case Term::Kind::apply:
      break;
  }
  std::vector<Value> args;
  args.reserve(t.args().size());
  for (const Term& a : t.args()) args.push_back(eval_term(a, assignment, algebra));
  return algebra.apply(t.name(), args);
}

Term substitute_term(const Term& t, const std::map<std::string, Term>& replacement,
                     const Algebra& algebra) {
  if (t.is_variable()) {
    auto it = replacement.find(t.name());
    if (it == replacement.end()) return t;
    if (it->second.sort() != t.sort())
      throw SortError("substituting a term of sort " + algebra.sort_name(it->second.sort()) +
                      " for variable " + t.name());
    return it->second;
  }
  if (t.is_constant()) return t;
  std::vector<Term> args;
  for (const Term& a : t.args()) args.push_back(substitute_term(a, replacement, algebra));
  return algebra.make_apply(t.name(), std::move(args));
}

std::string sim_variable(std::size_t arg, std::size_t coord) {
  return "v" + std::to_string(arg) + "_" + std::to_string(coord);
}

std::string default_lift_name(const std::string& name, std::size_t coord) {
  return name + "_" + std::to_string(coord);
}

// Targets are single-sorted in every simulation of the project, so lifted
// variables live in target sort 0.
std::vector<Term> lift_simulation_term(const SimulationSpec& s, const Term& t,
                                       const LiftRenamer& rename) {
  std::vector<Term> out;
  if (t.is_variable()) {
    for (std::size_t c = 0; c < s.width; ++c) out.push_back(Term::variable(rename(t.name(), c), 0));
    return out;
  }
  if (t.is_constant()) {
    for (const Value& v : s.alpha(t.value())) out.push_back(s.target->make_constant(v));
    return out;
  }
  OperationSymbol sym{t.name(), {}, t.sort()};
  std::vector<std::vector<Term>> lifted;
  for (const Term& a : t.args()) {
    sym.args.push_back(a.sort());
    lifted.push_back(lift_simulation_term(s, a, rename));
  }
  std::optional<std::vector<Term>> f = s.op_map(sym);
  if (!f) throw UnmappedOperation(t.name());
  std::map<std::string, Term> binding;
  for (std::size_t i = 0; i < lifted.size(); ++i)
    for (std::size_t c = 0; c < s.width; ++c) binding.emplace(sim_variable(i, c), lifted[i][c]);
  for (const Term& coord : *f) out.push_back(substitute_term(coord, binding, *s.target));
  return out;
}

bool verify_simulation_samples(const SimulationSpec& s, const std::vector<Value>& samples,
                               std::size_t max_tuples) {
  if (samples.empty()) return true;
  std::vector<std::vector<Value>> images;
  for (const Value& v : samples) images.push_back(s.alpha(v));
  for (const OperationSymbol& op : s.source->operations()) {
    std::optional<std::vector<Term>> f = s.op_map(op);
    if (!f) return false;
    std::size_t arity = op.args.size();
    std::vector<std::size_t> idx(arity, 0);
    for (std::size_t count = 0; count < max_tuples; ++count) {
      bool sorted = true;
      std::vector<Value> args;
      Assignment at;
      for (std::size_t i = 0; i < arity; ++i) {
        const Value& v = samples[idx[i]];
        sorted = sorted && s.source->sort_of(v) == op.args[i];
        args.push_back(v);
        for (std::size_t c = 0; c < s.width; ++c) at.emplace(sim_variable(i, c), images[idx[i]][c]);
      }
      if (sorted) {
        std::vector<Value> expected = s.alpha(s.source->apply(op.name, args));
        for (std::size_t c = 0; c < s.width; ++c)
          if (!(eval_term((*f)[c], at, *s.target) == expected[c])) return false;
      }
      std::size_t i = 0;
      while (i < arity && ++idx[i] == samples.size()) idx[i++] = 0;
      if (i == arity) break;
    }
  }
  return true;
}

SimulationSpec compose(const SimulationSpec& s1, const SimulationSpec& s2) {
  SimulationSpec out;
  out.source = s1.source;
  out.target = s2.target;
  out.width = s1.width * s2.width;
  out.output_coordinate = s1.output_coordinate * s2.width + s2.output_coordinate;
  out.alpha = [s1, s2](const Value& v) {
    std::vector<Value> flat;
    for (const Value& mid : s1.alpha(v))
      for (Value& w : s2.alpha(mid)) flat.push_back(std::move(w));
    return flat;
  };
  out.op_map = [s1, s2](const OperationSymbol& op) -> std::optional<std::vector<Term>> {
    std::optional<std::vector<Term>> f1 = s1.op_map(op);
    if (!f1) return std::nullopt;
    std::map<std::string, std::pair<std::size_t, std::size_t>> origin;
    for (std::size_t i = 0; i < op.args.size(); ++i)
      for (std::size_t c = 0; c < s1.width; ++c) origin[sim_variable(i, c)] = {i, c};
    auto rename = [&](const std::string& name, std::size_t c2) {
      auto [i, c1] = origin.at(name);
      return sim_variable(i, c1 * s2.width + c2);
    };
    std::vector<Term> f;
    for (const Term& coord : *f1)
      for (Term& t : lift_simulation_term(s2, coord, rename)) f.push_back(std::move(t));
    return f;
  };
  return out;
}

}  // namespace hilbert
