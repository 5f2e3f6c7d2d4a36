#include "hilbert/polynomial.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <sstream>

#include "hilbert/parse_util.hpp"

namespace hilbert {

Rational parse_rational(std::string_view text) {
  Cursor cur(text);
  bool negative = cur.consume('-');
  std::string num = cur.digits();
  std::string den = "1";
  if (cur.consume('/')) den = cur.digits();
  if (!cur.at_end()) cur.fail("trailing characters in rational");
  Integer d(den);
  if (d == 0) throw ParseError("zero denominator", cur.position());
  Rational r{Integer(num), d};
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

std::string rational_text(const Rational& value) { return value.get_str(); }

namespace {

struct Interner {
  std::mutex mutex;
  std::deque<std::string> names;
  std::unordered_map<std::string, VarId> ids;
};

Interner& interner() {
  static Interner instance;
  return instance;
}

}  // namespace

VarId intern_variable(std::string_view name) {
  Interner& in = interner();
  std::lock_guard lock(in.mutex);
  auto it = in.ids.find(std::string(name));
  if (it != in.ids.end()) return it->second;
  VarId id = static_cast<VarId>(in.names.size());
  in.names.emplace_back(name);
  in.ids.emplace(in.names.back(), id);
  return id;
}

const std::string& variable_name(VarId id) {
  Interner& in = interner();
  std::lock_guard lock(in.mutex);
  return in.names.at(id);
}

int natural_compare(std::string_view a, std::string_view b) {
  std::size_t i = 0, j = 0;
  auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
  while (i < a.size() && j < b.size()) {
    if (is_digit(a[i]) && is_digit(b[j])) {
      std::size_t i2 = i, j2 = j;
      while (i2 < a.size() && is_digit(a[i2])) ++i2;
      while (j2 < b.size() && is_digit(b[j2])) ++j2;
      std::string_view da = a.substr(i, i2 - i), db = b.substr(j, j2 - j);
      while (da.size() > 1 && da.front() == '0') da.remove_prefix(1);
      while (db.size() > 1 && db.front() == '0') db.remove_prefix(1);
      if (da.size() != db.size()) return da.size() < db.size() ? -1 : 1;
      if (int c = da.compare(db); c != 0) return c < 0 ? -1 : 1;
      i = i2;
      j = j2;
    } else {
      if (a[i] != b[j]) return a[i] < b[j] ? -1 : 1;
      ++i;
      ++j;
    }
  }
  if (i < a.size()) return 1;
  if (j < b.size()) return -1;
  return a.compare(b) < 0 ? -1 : (a == b ? 0 : 1);
}

// ---------------------------------------------------------------- Monomial

Monomial::Monomial(std::vector<Power> powers) {
  std::sort(powers.begin(), powers.end());
  for (const auto& [var, exp] : powers) {
    if (exp == 0) continue;
    if (!powers_.empty() && powers_.back().first == var)
      powers_.back().second += exp;
    else
      powers_.emplace_back(var, exp);
  }
}

Monomial Monomial::variable(VarId var, std::uint32_t exponent) {
  Monomial m;
  if (exponent > 0) m.powers_.emplace_back(var, exponent);
  return m;
}

std::uint32_t Monomial::degree(VarId var) const {
  for (const auto& [v, e] : powers_)
    if (v == var) return e;
  return 0;
}

std::uint32_t Monomial::total_degree() const {
  std::uint32_t d = 0;
  for (const auto& p : powers_) d += p.second;
  return d;
}

bool Monomial::divides(const Monomial& other) const {
  std::size_t j = 0;
  for (const auto& [v, e] : powers_) {
    while (j < other.powers_.size() && other.powers_[j].first < v) ++j;
    if (j == other.powers_.size() || other.powers_[j].first != v || other.powers_[j].second < e)
      return false;
  }
  return true;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.powers_.reserve(a.powers_.size() + b.powers_.size());
  std::size_t i = 0, j = 0;
  while (i < a.powers_.size() || j < b.powers_.size()) {
    if (j == b.powers_.size() || (i < a.powers_.size() && a.powers_[i].first < b.powers_[j].first)) {
      out.powers_.push_back(a.powers_[i++]);
    } else if (i == a.powers_.size() || b.powers_[j].first < a.powers_[i].first) {
      out.powers_.push_back(b.powers_[j++]);
    } else {
      out.powers_.emplace_back(a.powers_[i].first, a.powers_[i].second + b.powers_[j].second);
      ++i;
      ++j;
    }
  }
  return out;
}

// ----------------------------------------------------------- MonomialOrder

MonomialOrder::MonomialOrder(OrderKind kind, std::vector<std::string> precedence)
    : kind_(kind), precedence_(std::move(precedence)) {
  for (std::size_t i = 0; i < precedence_.size(); ++i) rank_.emplace(precedence_[i], i);
}

MonomialOrder MonomialOrder::from_name(std::string_view name) {
  if (name == "lex") return lex();
  if (name == "degrevlex" || name == "grevlex") return degrevlex();
  throw std::invalid_argument("unknown monomial order: " + std::string(name));
}

std::string MonomialOrder::name() const { return kind_ == OrderKind::lex ? "lex" : "degrevlex"; }

bool MonomialOrder::var_greater(VarId a, VarId b) const {
  if (a == b) return false;
  const std::string& na = variable_name(a);
  const std::string& nb = variable_name(b);
  auto ra = rank_.find(na);
  auto rb = rank_.find(nb);
  if (ra != rank_.end() && rb != rank_.end()) return ra->second < rb->second;
  if (ra != rank_.end()) return true;
  if (rb != rank_.end()) return false;
  return natural_compare(na, nb) < 0;
}

std::vector<VarId> MonomialOrder::sort_variables(std::vector<VarId> vars) const {
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  std::sort(vars.begin(), vars.end(), [this](VarId a, VarId b) { return var_greater(a, b); });
  return vars;
}

int MonomialOrder::compare(const Monomial& a, const Monomial& b) const {
  if (a == b) return 0;
  if (kind_ == OrderKind::degrevlex) {
    auto da = a.total_degree(), db = b.total_degree();
    if (da != db) return da < db ? -1 : 1;
  }
  std::vector<VarId> vars;
  for (const auto& p : a.powers()) vars.push_back(p.first);
  for (const auto& p : b.powers()) vars.push_back(p.first);
  vars = sort_variables(std::move(vars));
  if (kind_ == OrderKind::lex) {
    for (VarId v : vars) {
      auto ea = a.degree(v), eb = b.degree(v);
      if (ea != eb) return ea < eb ? -1 : 1;
    }
  } else {
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
      auto ea = a.degree(*it), eb = b.degree(*it);
      if (ea != eb) return ea > eb ? -1 : 1;
    }
  }
  return 0;
}

// -------------------------------------------------------------- Polynomial

Polynomial::Polynomial(const Rational& constant) {
  if (constant != 0) terms_.emplace_back(Monomial(), constant);
}

Polynomial::Polynomial(long constant) : Polynomial(Rational(constant)) {}

Polynomial Polynomial::variable(std::string_view name) { return variable(intern_variable(name)); }

Polynomial Polynomial::variable(VarId var) { return term(Monomial::variable(var), Rational(1)); }

Polynomial Polynomial::term(Monomial monomial, Rational coefficient) {
  Polynomial p;
  if (coefficient != 0) p.terms_.emplace_back(std::move(monomial), std::move(coefficient));
  return p;
}

Polynomial Polynomial::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.first < b.first; });
  Polynomial p;
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().first == t.first) {
      p.terms_.back().second += t.second;
    } else {
      if (!p.terms_.empty() && p.terms_.back().second == 0) p.terms_.pop_back();
      p.terms_.push_back(std::move(t));
    }
  }
  if (!p.terms_.empty() && p.terms_.back().second == 0) p.terms_.pop_back();
  return p;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].first.is_one());
}

std::optional<Rational> Polynomial::as_constant() const {
  if (terms_.empty()) return Rational(0);
  if (terms_.size() == 1 && terms_[0].first.is_one()) return terms_[0].second;
  return std::nullopt;
}

std::uint32_t Polynomial::total_degree() const {
  std::uint32_t d = 0;
  for (const auto& t : terms_) d = std::max(d, t.first.total_degree());
  return d;
}

std::uint32_t Polynomial::degree(VarId var) const {
  std::uint32_t d = 0;
  for (const auto& t : terms_) d = std::max(d, t.first.degree(var));
  return d;
}

std::vector<VarId> Polynomial::variables() const {
  std::vector<VarId> vars;
  for (const auto& t : terms_)
    for (const auto& p : t.first.powers()) vars.push_back(p.first);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

Rational Polynomial::coefficient(const Monomial& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                             [](const Term& t, const Monomial& key) { return t.first < key; });
  if (it != terms_.end() && it->first == m) return it->second;
  return Rational(0);
}

const Polynomial::Term& Polynomial::leading_term(const MonomialOrder& order) const {
  if (terms_.empty()) throw std::logic_error("leading term of zero polynomial");
  const Term* best = &terms_[0];
  for (const auto& t : terms_)
    if (order.compare(t.first, best->first) > 0) best = &t;
  return *best;
}

Polynomial Polynomial::operator-() const {
  Polynomial p = *this;
  for (auto& t : p.terms_) t.second = -t.second;
  return p;
}

namespace {

template <class Combine>
Polynomial merge(const std::vector<Polynomial::Term>& a, const std::vector<Polynomial::Term>& b,
                 Combine sign) {
  std::vector<Polynomial::Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, sign(b[j].second));
      ++j;
    } else {
      Rational c = a[i].second + sign(b[j].second);
      if (c != 0) out.emplace_back(a[i].first, std::move(c));
      ++i;
      ++j;
    }
  }
  return Polynomial::from_terms(std::move(out));
}

}  // namespace

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return merge(a.terms_, b.terms_, [](const Rational& c) { return c; });
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) return a;
  return merge(a.terms_, b.terms_, [](const Rational& c) { return Rational(-c); });
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return Polynomial();
  if (b.terms_.size() == 1 && b.terms_[0].first.is_one()) return a.scaled(b.terms_[0].second);
  if (a.terms_.size() == 1 && a.terms_[0].first.is_one()) return b.scaled(a.terms_[0].second);
  std::map<Monomial, Rational> acc;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      auto [it, inserted] = acc.try_emplace(ma * mb);
      if (inserted)
        it->second = ca * cb;
      else
        it->second += ca * cb;
    }
  }
  Polynomial p;
  p.terms_.reserve(acc.size());
  for (auto& [m, c] : acc)
    if (c != 0) p.terms_.emplace_back(m, std::move(c));
  return p;
}

Polynomial Polynomial::scaled(const Rational& c) const {
  if (c == 0) return Polynomial();
  Polynomial p = *this;
  for (auto& t : p.terms_) t.second *= c;
  return p;
}

Polynomial Polynomial::pow(std::uint32_t exponent) const {
  Polynomial result(1L);
  Polynomial base = *this;
  while (exponent > 0) {
    if (exponent & 1u) result *= base;
    exponent >>= 1u;
    if (exponent > 0) base *= base;
  }
  return result;
}

Rational Polynomial::evaluate(const std::map<VarId, Rational>& point) const {
  Rational sum = 0;
  for (const auto& [m, c] : terms_) {
    Rational value = c;
    for (const auto& [v, e] : m.powers()) {
      auto it = point.find(v);
      if (it == point.end()) throw IncompletePoint(variable_name(v));
      Rational pw;
      mpz_pow_ui(pw.get_num_mpz_t(), it->second.get_num_mpz_t(), e);
      mpz_pow_ui(pw.get_den_mpz_t(), it->second.get_den_mpz_t(), e);
      value *= pw;
    }
    sum += value;
  }
  return sum;
}

Rational Polynomial::evaluate(const std::map<std::string, Rational>& point) const {
  std::map<VarId, Rational> ids;
  for (const auto& [name, value] : point) ids.emplace(intern_variable(name), value);
  return evaluate(ids);
}

Polynomial Polynomial::substitute(VarId var, const Polynomial& replacement) const {
  return substitute(std::map<VarId, Polynomial>{{var, replacement}});
}

Polynomial Polynomial::substitute(const std::map<VarId, Polynomial>& replacement) const {
  // Powers of each replacement are cached; terms are collected and combined once.
  std::map<std::pair<VarId, std::uint32_t>, Polynomial> powers;
  auto power_of = [&](VarId v, std::uint32_t e) -> const Polynomial& {
    auto key = std::make_pair(v, e);
    auto it = powers.find(key);
    if (it != powers.end()) return it->second;
    const Polynomial& base = replacement.at(v);
    Polynomial value = e == 1 ? base : base.pow(e);
    return powers.emplace(key, std::move(value)).first->second;
  };
  std::vector<Term> collected;
  for (const auto& [m, c] : terms_) {
    std::vector<Monomial::Power> kept;
    Polynomial factor(c);
    for (const auto& [v, e] : m.powers()) {
      if (replacement.count(v))
        factor *= power_of(v, e);
      else
        kept.emplace_back(v, e);
    }
    Monomial keep(std::move(kept));
    for (const auto& [fm, fc] : factor.terms_) collected.emplace_back(fm * keep, fc);
  }
  return from_terms(std::move(collected));
}

Polynomial Polynomial::rename(const std::map<VarId, VarId>& renaming) const {
  std::vector<Term> collected;
  collected.reserve(terms_.size());
  for (const auto& [m, c] : terms_) {
    std::vector<Monomial::Power> powers;
    for (const auto& [v, e] : m.powers()) {
      auto it = renaming.find(v);
      powers.emplace_back(it == renaming.end() ? v : it->second, e);
    }
    collected.emplace_back(Monomial(std::move(powers)), c);
  }
  return from_terms(std::move(collected));
}

// ----------------------------------------------------------- text format

namespace {

std::string monomial_text(const Monomial& m, const MonomialOrder& order) {
  std::vector<VarId> vars;
  for (const auto& p : m.powers()) vars.push_back(p.first);
  std::string out;
  for (VarId v : order.sort_variables(vars)) {
    if (!out.empty()) out += '*';
    out += variable_name(v);
    if (auto e = m.degree(v); e > 1) out += "^" + std::to_string(e);
  }
  return out;
}

}  // namespace

std::string canonical_text(const Polynomial& p, const MonomialOrder& order) {
  if (p.is_zero()) return "0";
  std::vector<const Polynomial::Term*> sorted;
  for (const auto& t : p.terms()) sorted.push_back(&t);
  std::sort(sorted.begin(), sorted.end(), [&](const auto* a, const auto* b) {
    return order.compare(a->first, b->first) > 0;
  });
  std::string out;
  bool first = true;
  for (const auto* t : sorted) {
    const Rational& c = t->second;
    bool negative = c < 0;
    Rational mag = negative ? Rational(-c) : c;
    if (first)
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    first = false;
    if (t->first.is_one()) {
      out += rational_text(mag);
    } else {
      if (mag != 1) out += rational_text(mag) + "*";
      out += monomial_text(t->first, order);
    }
  }
  return out;
}

namespace {

class PolyParser {
 public:
  explicit PolyParser(std::string_view text) : cur_(text) {}

  Polynomial parse() {
    Polynomial p = expr();
    if (!cur_.at_end()) cur_.fail("unexpected character '" + std::string(1, cur_.peek()) + "'");
    return p;
  }

 private:
  Polynomial expr() {
    Polynomial acc = term();
    while (true) {
      if (cur_.consume('+'))
        acc += term();
      else if (cur_.consume('-'))
        acc -= term();
      else
        return acc;
    }
  }

  Polynomial term() {
    Polynomial acc = unary();
    while (cur_.consume('*')) acc *= unary();
    return acc;
  }

  Polynomial unary() {
    if (cur_.consume('-')) return -unary();
    if (cur_.consume('+')) return unary();
    return factor();
  }

  Polynomial factor() {
    Polynomial base = primary();
    if (cur_.consume('^')) {
      std::string d = cur_.digits();
      if (d.size() > 6) cur_.fail("exponent too large");
      base = base.pow(static_cast<std::uint32_t>(std::stoul(d)));
    }
    return base;
  }

  Polynomial primary() {
    if (cur_.consume('(')) {
      Polynomial p = expr();
      cur_.expect(')');
      return p;
    }
    if (cur_.at_digit()) {
      std::string num = cur_.digits();
      Rational r{Integer(num)};
      if (cur_.peek_raw() == '/') {
        cur_.consume('/');
        Integer den(cur_.digits());
        if (den == 0) cur_.fail("zero denominator");
        r = Rational(Integer(num), den);
        r.canonicalize();
      }
      return Polynomial(r);
    }
    if (cur_.at_identifier()) return Polynomial::variable(cur_.identifier());
    cur_.fail("expected polynomial operand");
  }

  Cursor cur_;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text) { return PolyParser(text).parse(); }

}  // namespace hilbert
