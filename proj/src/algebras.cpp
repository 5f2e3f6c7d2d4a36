#include "hilbert/algebras.hpp"

#include <algorithm>

#include "hilbert/parse_util.hpp"

namespace hilbert {

namespace {

const VarId kX = intern_variable("x");

std::optional<std::uint32_t> pow_exponent(std::string_view op) {
  if (op.substr(0, 4) != "pow_" || op.size() == 4) return std::nullopt;
  std::uint32_t e = 0;
  for (char c : op.substr(4)) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    e = e * 10 + static_cast<std::uint32_t>(c - '0');
  }
  return e;
}

std::string wrap(const std::string& s, int level, int needed) {
  return level >= needed ? s : "(" + s + ")";
}

// ---------------------------------------------------------------- rings

class RingParser {
 public:
  RingParser(const RingAlgebra& ring, std::string_view text, const VariableSorts& vars)
      : ring_(ring), in_(text), vars_(vars) {}

  Term parse() {
    Term t = sum();
    if (!in_.at_end()) in_.fail("unexpected input");
    return t;
  }

 private:
  Term sum() {
    Term t = product();
    for (;;) {
      if (in_.consume('+')) {
        t = ring_.make_apply("add", {t, product()});
      } else if (in_.consume('-')) {
        t = ring_.make_apply("sub", {t, product()});
      } else {
        return t;
      }
    }
  }

  Term product() {
    Term t = unary();
    while (in_.consume('*')) t = ring_.make_apply("mul", {t, unary()});
    return t;
  }

  Term unary() {
    if (in_.consume('-')) return ring_.make_apply("neg", {unary()});
    Term t = postfix();
    if (in_.consume('^')) t = ring_.make_apply("pow_" + in_.digits(), {t});
    return t;
  }

  Term postfix() {
    Term t = primary();
    while (in_.peek() == '[') {
      if (ring_.kind() != RingKind::substitution) in_.fail("substitution needs algebra Qx_subs");
      in_.expect('[');
      in_.expect('x');
      in_.expect(":=");
      Term arg = sum();
      in_.expect(']');
      t = ring_.make_apply("subs", {t, arg});
    }
    return t;
  }

  Term primary() {
    if (in_.consume('(')) {
      Term t = sum();
      in_.expect(')');
      return t;
    }
    if (in_.at_digit()) {
      Integer num(in_.digits());
      Integer den(1);
      if (in_.consume('/')) {
        den = Integer(in_.digits());
        if (den == 0) in_.fail("zero denominator");
      }
      Rational r(num, den);
      r.canonicalize();
      return ring_.make_constant(ring_.from_rational(r));
    }
    std::size_t at = in_.position();
    std::string name = in_.identifier();
    if (std::optional<int> sort = vars_(name)) return Term::variable(name, *sort);
    if (name == "x" && ring_.kind() != RingKind::rationals)
      return ring_.make_constant(Polynomial::variable(kX));
    throw ParseError("unknown identifier '" + name + "'", at);
  }

  const RingAlgebra& ring_;
  Cursor in_;
  const VariableSorts& vars_;
};

// Precedence levels: 1 sum, 2 product, 3 unary, 4 power, 5 postfix, 6 atom.
std::pair<std::string, int> render_ring(const Term& t) {
  if (t.is_variable()) return {t.name(), 6};
  if (t.is_constant()) {
    if (const auto* r = std::get_if<Rational>(&t.value()))
      return {rational_text(*r), sgn(*r) < 0 ? 3 : 6};
    const auto& p = std::get<Polynomial>(t.value());
    if (auto c = p.as_constant()) return {rational_text(*c), sgn(*c) < 0 ? 3 : 6};
    if (p == Polynomial::variable(kX)) return {"x", 6};
    return {"(" + canonical_text(p) + ")", 6};
  }
  const auto& a = t.args();
  auto sub = [&](std::size_t i, int needed) {
    auto [s, level] = render_ring(a[i]);
    return wrap(s, level, needed);
  };
  const std::string& op = t.name();
  if (op == "add") return {sub(0, 1) + " + " + sub(1, 2), 1};
  if (op == "sub") return {sub(0, 1) + " - " + sub(1, 2), 1};
  if (op == "mul") return {sub(0, 2) + "*" + sub(1, 3), 2};
  if (op == "neg") return {"-" + sub(0, 3), 3};
  if (auto e = pow_exponent(op)) return {sub(0, 5) + "^" + std::to_string(*e), 4};
  if (op == "subs") return {sub(0, 5) + "[x:=" + sub(1, 1) + "]", 5};
  throw SortError("unknown ring operation " + op);
}

// ---------------------------------------------------------------- forests

class ForestParser {
 public:
  ForestParser(const ForestAlgebra& alg, std::string_view text, const VariableSorts& vars)
      : alg_(alg), in_(text), vars_(vars) {}

  Term parse() {
    if (in_.at_end()) return alg_.make_apply("empty", {});
    Term t = sum(false);
    if (!in_.at_end()) in_.fail("unexpected input");
    return t;
  }

 private:
  Term sum(bool commas) {
    Term t = postfix();
    while (in_.consume('+') || (commas && in_.consume(','))) t = apply_at("add", {t, postfix()});
    return t;
  }

  Term postfix() {
    Term t = primary();
    while (in_.peek() == '[') {
      if (!alg_.with_contexts()) in_.fail("substitution needs algebra UCF");
      in_.expect('[');
      if (!in_.consume('?') && !in_.consume("\xE2\x97\xA6")) in_.fail("expected hole");
      in_.expect(":=");
      Term arg = sum(false);
      in_.expect(']');
      t = apply_at("subs", {t, arg});
    }
    return t;
  }

  Term primary() {
    if (in_.consume('(')) {
      Term t = sum(false);
      in_.expect(')');
      return t;
    }
    if (in_.consume('0')) return alg_.make_apply("empty", {});
    if (in_.peek() == '?' || in_.rest().substr(0, 3) == "\xE2\x97\xA6") {
      if (!alg_.with_contexts()) in_.fail("hole needs algebra UCF");
      if (!in_.consume('?')) in_.consume("\xE2\x97\xA6");
      return alg_.make_apply("hole", {});
    }
    std::size_t at = in_.position();
    std::string name = in_.identifier();
    if (std::optional<int> sort = vars_(name)) return Term::variable(name, *sort);
    if (name.find('.') != std::string::npos || name.find('\'') != std::string::npos)
      throw ParseError("unknown variable '" + name + "'", at);
    Term inner = alg_.make_apply("empty", {});
    if (in_.consume('(') && !in_.consume(')')) {
      inner = sum(true);
      in_.expect(')');
    }
    return apply_at(root_op(name), {inner}, at);
  }

  Term apply_at(const std::string& op, std::vector<Term> args, std::size_t at = std::string::npos) {
    try {
      return alg_.make_apply(op, std::move(args));
    } catch (const SortError& e) {
      throw ParseError(e.what(), at == std::string::npos ? in_.position() : at);
    } catch (const UntypedSubstitution& e) {
      throw ParseError(e.what(), at == std::string::npos ? in_.position() : at);
    }
  }

  const ForestAlgebra& alg_;
  Cursor in_;
  const VariableSorts& vars_;
};

// Levels: 1 sum, 2 postfix/atom.
std::pair<std::string, int> render_forest(const ForestAlgebra& alg, const Term& t) {
  if (t.is_variable()) return {t.name(), 2};
  if (t.is_constant()) {
    const Forest& f = alg.as_forest(t.value());
    if (f.empty()) return {"0", 2};
    if (f.trees().size() == 1) return {f.text(), 2};
    return {"(" + f.text() + ")", 2};
  }
  const auto& a = t.args();
  auto sub = [&](std::size_t i, int needed) {
    auto [s, level] = render_forest(alg, a[i]);
    return wrap(s, level, needed);
  };
  const std::string& op = t.name();
  if (op == "add") return {sub(0, 1) + " + " + sub(1, 2), 1};
  if (op == "subs") return {sub(0, 2) + "[?:=" + sub(1, 1) + "]", 2};
  if (auto label = root_label(op)) return {*label + "(" + sub(0, 1) + ")", 2};
  throw SortError("unknown forest operation " + op);
}

// ---------------------------------------------------------------- words

class WordParser {
 public:
  WordParser(const WordAlgebra& alg, std::string_view text, const VariableSorts& vars)
      : alg_(alg), in_(text), vars_(vars) {}

  Term parse() {
    Term t = product();
    if (!in_.at_end()) in_.fail("unexpected input");
    return t;
  }

 private:
  Term product() {
    Term t = primary();
    while (in_.consume('*')) t = alg_.make_apply("concat", {t, primary()});
    return t;
  }

  Term primary() {
    if (in_.consume('(')) {
      Term t = product();
      in_.expect(')');
      return t;
    }
    if (in_.consume('"')) {
      std::string letters;
      while (in_.peek_raw() != '"') {
        char c = in_.peek_raw();
        if (c == '\0') in_.fail("unterminated word literal");
        if (!alg_.alphabet().empty() && alg_.alphabet().find(c) == std::string::npos)
          in_.fail(std::string("letter '") + c + "' not in alphabet");
        letters += c;
        in_.set_local_position(in_.local_position() + 1);
      }
      in_.set_local_position(in_.local_position() + 1);
      return alg_.make_constant(Word{letters});
    }
    std::size_t at = in_.position();
    std::string name = in_.identifier();
    if (std::optional<int> sort = vars_(name)) return Term::variable(name, *sort);
    throw ParseError("unknown identifier '" + name + "'", at);
  }

  const WordAlgebra& alg_;
  Cursor in_;
  const VariableSorts& vars_;
};

std::pair<std::string, int> render_word(const Term& t) {
  if (t.is_variable()) return {t.name(), 2};
  if (t.is_constant()) return {"\"" + std::get<Word>(t.value()).letters + "\"", 2};
  auto [l, ll] = render_word(t.args()[0]);
  auto [r, rl] = render_word(t.args()[1]);
  return {l + " * " + wrap(r, rl, 2), 1};
}

VariableSorts no_variables() {
  return [](const std::string&) -> std::optional<int> { return std::nullopt; };
}

}  // namespace

// ---------------------------------------------------------------- RingAlgebra

RingAlgebra::RingAlgebra(RingKind kind)
    : kind_(kind), sorts_{kind == RingKind::rationals ? "Q" : "Qx"} {}

std::string RingAlgebra::name() const {
  switch (kind_) {
    case RingKind::rationals:
      return "Q";
    case RingKind::polynomials:
      return "Qx";
    case RingKind::substitution:
      return "Qx_subs";
  }
  return "";
}

std::vector<OperationSymbol> RingAlgebra::operations() const {
  std::vector<OperationSymbol> ops = {
      {"add", {0, 0}, 0}, {"sub", {0, 0}, 0}, {"mul", {0, 0}, 0}, {"neg", {0}, 0}};
  if (kind_ == RingKind::substitution) ops.push_back({"subs", {0, 0}, 0});
  return ops;
}

std::optional<int> RingAlgebra::resolve(const std::string& op, const std::vector<int>& s) const {
  if (op == "add" || op == "sub" || op == "mul") return s.size() == 2 ? std::optional<int>(0) : std::nullopt;
  if (op == "neg" || pow_exponent(op)) return s.size() == 1 ? std::optional<int>(0) : std::nullopt;
  if (op == "subs" && kind_ == RingKind::substitution && s.size() == 2) return 0;
  return std::nullopt;
}

int RingAlgebra::sort_of(const Value& v) const {
  bool ok = kind_ == RingKind::rationals ? std::holds_alternative<Rational>(v)
                                          : std::holds_alternative<Polynomial>(v) &&
                                                std::get<Polynomial>(v).variables().size() <=
                                                    (std::get<Polynomial>(v).degree(kX) > 0 ? 1u : 0u);
  if (!ok) throw SortError("value " + debug_value_text(v) + " does not belong to " + name());
  return 0;
}

Value RingAlgebra::from_rational(const Rational& r) const {
  if (kind_ == RingKind::rationals) return r;
  return Polynomial(r);
}

Value RingAlgebra::apply(const std::string& op, const std::vector<Value>& args) const {
  if (kind_ == RingKind::rationals) {
    auto q = [&](std::size_t i) -> const Rational& { return std::get<Rational>(args.at(i)); };
    if (op == "add") return Rational(q(0) + q(1));
    if (op == "sub") return Rational(q(0) - q(1));
    if (op == "mul") return Rational(q(0) * q(1));
    if (op == "neg") return Rational(-q(0));
    if (auto e = pow_exponent(op)) {
      Rational r(1);
      for (std::uint32_t i = 0; i < *e; ++i) r *= q(0);
      return r;
    }
    throw SortError("unknown operation " + op + " in Q");
  }
  auto p = [&](std::size_t i) -> const Polynomial& { return std::get<Polynomial>(args.at(i)); };
  if (op == "add") return p(0) + p(1);
  if (op == "sub") return p(0) - p(1);
  if (op == "mul") return p(0) * p(1);
  if (op == "neg") return -p(0);
  if (auto e = pow_exponent(op)) return p(0).pow(*e);
  if (op == "subs" && kind_ == RingKind::substitution) return p(0).substitute(kX, p(1));
  throw SortError("unknown operation " + op + " in " + name());
}

Term RingAlgebra::parse_term(std::string_view text, const VariableSorts& vars) const {
  return RingParser(*this, text, vars).parse();
}

std::string RingAlgebra::render_term(const Term& t) const { return render_ring(t).first; }

Value RingAlgebra::parse_value(std::string_view text) const {
  Term t = parse_term(text, no_variables());
  return t.value();
}

// ---------------------------------------------------------------- ForestAlgebra

ForestAlgebra::ForestAlgebra(bool with_contexts, std::vector<std::string> labels)
    : contexts_(with_contexts), labels_(std::move(labels)) {
  sorts_ = contexts_ ? std::vector<std::string>{"F0", "F1"} : std::vector<std::string>{"F"};
}

bool ForestAlgebra::label_allowed(const std::string& label) const {
  return labels_.empty() || std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

std::vector<OperationSymbol> ForestAlgebra::operations() const {
  std::vector<OperationSymbol> ops = {{"add", {0, 0}, 0}, {"empty", {}, 0}};
  if (contexts_) {
    ops.push_back({"add", {0, 1}, 1});
    ops.push_back({"add", {1, 0}, 1});
    ops.push_back({"hole", {}, 1});
    ops.push_back({"subs", {1, 0}, 0});
    ops.push_back({"subs", {1, 1}, 1});
  }
  for (const std::string& l : labels_) {
    ops.push_back({root_op(l), {0}, 0});
    if (contexts_) ops.push_back({root_op(l), {1}, 1});
  }
  return ops;
}

std::optional<int> ForestAlgebra::resolve(const std::string& op, const std::vector<int>& s) const {
  if (op == "empty" && s.empty()) return 0;
  if (op == "hole" && contexts_ && s.empty()) return 1;
  if (op == "add" && s.size() == 2 && s[0] + s[1] <= (contexts_ ? 1 : 0)) return s[0] + s[1];
  if (op == "subs" && contexts_ && s.size() == 2 && s[0] == 1) return s[1];
  if (auto label = root_label(op); label && s.size() == 1 && label_allowed(*label)) return s[0];
  return std::nullopt;
}

int ForestAlgebra::sort_of(const Value& v) const {
  if (contexts_) {
    if (const auto* c = std::get_if<Context>(&v)) return c->sort();
  } else if (std::holds_alternative<Forest>(v)) {
    return 0;
  }
  throw SortError("value " + debug_value_text(v) + " does not belong to " + name());
}

Value ForestAlgebra::from_forest(const Forest& f) const {
  if (contexts_) return Context(f);
  if (f.hole_count()) throw SortError("holes are not allowed in UF");
  return f;
}

const Forest& ForestAlgebra::as_forest(const Value& v) const {
  if (const auto* c = std::get_if<Context>(&v)) return c->forest();
  return std::get<Forest>(v);
}

Value ForestAlgebra::apply(const std::string& op, const std::vector<Value>& args) const {
  auto f = [&](std::size_t i) -> const Forest& { return as_forest(args.at(i)); };
  if (op == "empty") return from_forest(Forest());
  if (op == "hole") return from_forest(Forest::hole());
  if (op == "add") {
    if (contexts_) return context_add(std::get<Context>(args.at(0)), std::get<Context>(args.at(1)));
    return forest_add(f(0), f(1));
  }
  if (op == "subs" && contexts_)
    return context_substitute(std::get<Context>(args.at(0)), std::get<Context>(args.at(1)));
  if (auto label = root_label(op)) return from_forest(forest_root(*label, f(0)));
  throw SortError("unknown operation " + op + " in " + name());
}

Term ForestAlgebra::parse_term(std::string_view text, const VariableSorts& vars) const {
  return ForestParser(*this, text, vars).parse();
}

std::string ForestAlgebra::render_term(const Term& t) const { return render_forest(*this, t).first; }

Value ForestAlgebra::parse_value(std::string_view text) const {
  return parse_term(text, no_variables()).value();
}

std::string ForestAlgebra::value_text(const Value& v) const {
  const Forest& f = as_forest(v);
  return f.empty() ? "0" : f.text();
}

// ---------------------------------------------------------------- WordAlgebra

WordAlgebra::WordAlgebra(std::string alphabet) : alphabet_(std::move(alphabet)), sorts_{"W"} {}

std::vector<OperationSymbol> WordAlgebra::operations() const { return {{"concat", {0, 0}, 0}}; }

std::optional<int> WordAlgebra::resolve(const std::string& op, const std::vector<int>& s) const {
  if (op == "concat" && s.size() == 2) return 0;
  return std::nullopt;
}

int WordAlgebra::sort_of(const Value& v) const {
  if (!std::holds_alternative<Word>(v)) throw SortError("value " + debug_value_text(v) + " is not a word");
  return 0;
}

Value WordAlgebra::apply(const std::string& op, const std::vector<Value>& args) const {
  if (op != "concat") throw SortError("unknown operation " + op + " in Words");
  return Word{std::get<Word>(args.at(0)).letters + std::get<Word>(args.at(1)).letters};
}

Term WordAlgebra::parse_term(std::string_view text, const VariableSorts& vars) const {
  return WordParser(*this, text, vars).parse();
}

std::string WordAlgebra::render_term(const Term& t) const { return render_word(t).first; }

Value WordAlgebra::parse_value(std::string_view text) const {
  return parse_term(text, no_variables()).value();
}

// ---------------------------------------------------------------- factories

AlgebraPtr rational_algebra() {
  static AlgebraPtr a = std::make_shared<RingAlgebra>(RingKind::rationals);
  return a;
}

AlgebraPtr polynomial_algebra() {
  static AlgebraPtr a = std::make_shared<RingAlgebra>(RingKind::polynomials);
  return a;
}

AlgebraPtr substitution_algebra() {
  static AlgebraPtr a = std::make_shared<RingAlgebra>(RingKind::substitution);
  return a;
}

AlgebraPtr forest_algebra(std::vector<std::string> labels) {
  return std::make_shared<ForestAlgebra>(false, std::move(labels));
}

AlgebraPtr context_algebra(std::vector<std::string> labels) {
  return std::make_shared<ForestAlgebra>(true, std::move(labels));
}

AlgebraPtr word_algebra(std::string alphabet) { return std::make_shared<WordAlgebra>(std::move(alphabet)); }

AlgebraPtr make_algebra(std::string_view name, const std::vector<std::string>& alphabet) {
  if (name == "Q") return rational_algebra();
  if (name == "Qx") return polynomial_algebra();
  if (name == "Qx_subs") return substitution_algebra();
  if (name == "UF") return forest_algebra(alphabet);
  if (name == "UCF") return context_algebra(alphabet);
  if (name == "Words") {
    std::string letters;
    for (const std::string& l : alphabet) {
      if (l.size() != 1) throw std::invalid_argument("word letters must be single characters: " + l);
      letters += l;
    }
    return word_algebra(letters);
  }
  throw std::invalid_argument("unknown algebra " + std::string(name));
}

std::string root_op(std::string_view label) { return "root_" + std::string(label); }

std::optional<std::string> root_label(std::string_view op) {
  if (op.size() <= 5 || op.substr(0, 5) != "root_") return std::nullopt;
  return std::string(op.substr(5));
}

std::optional<Polynomial> ring_term_polynomial(const Term& t) {
  if (t.is_variable()) return Polynomial::variable(t.name());
  if (t.is_constant()) {
    if (const auto* r = std::get_if<Rational>(&t.value())) return Polynomial(*r);
    if (const auto* p = std::get_if<Polynomial>(&t.value())) return *p;
    return std::nullopt;
  }
  std::vector<Polynomial> a;
  for (const Term& c : t.args()) {
    auto p = ring_term_polynomial(c);
    if (!p) return std::nullopt;
    a.push_back(std::move(*p));
  }
  const std::string& op = t.name();
  if (op == "add") return a[0] + a[1];
  if (op == "sub") return a[0] - a[1];
  if (op == "mul") return a[0] * a[1];
  if (op == "neg") return -a[0];
  if (auto e = pow_exponent(op)) return a[0].pow(*e);
  if (op == "subs") {
    std::vector<VarId> vars = a[0].variables();
    if (std::any_of(vars.begin(), vars.end(), [](VarId v) { return v != kX; })) return std::nullopt;
    return a[0].substitute(kX, a[1]);
  }
  return std::nullopt;
}

}  // namespace hilbert
