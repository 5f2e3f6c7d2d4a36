#include "hilbert/groebner.hpp"

#include <algorithm>
#include <set>

namespace hilbert {

namespace {

struct Exp {
  std::uint32_t deg = 0;
  std::vector<std::uint32_t> e;
  friend bool operator==(const Exp&, const Exp&) = default;
};

// Dense exponent vectors over a fixed variable list, highest precedence first.
class Ring {
 public:
  Ring(std::vector<VarId> vars, OrderKind kind) : vars_(std::move(vars)), kind_(kind) {
    for (std::size_t i = 0; i < vars_.size(); ++i) index_.emplace(vars_[i], i);
  }

  std::size_t size() const { return vars_.size(); }

  int cmp(const Exp& a, const Exp& b) const {
    if (kind_ == OrderKind::degrevlex) {
      if (a.deg != b.deg) return a.deg < b.deg ? -1 : 1;
      for (std::size_t i = vars_.size(); i-- > 0;)
        if (a.e[i] != b.e[i]) return a.e[i] > b.e[i] ? -1 : 1;
      return 0;
    }
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (a.e[i] != b.e[i]) return a.e[i] < b.e[i] ? -1 : 1;
    return 0;
  }

  static Exp mul(const Exp& a, const Exp& b) {
    Exp r{a.deg + b.deg, a.e};
    for (std::size_t i = 0; i < r.e.size(); ++i) r.e[i] += b.e[i];
    return r;
  }

  static Exp lcm(const Exp& a, const Exp& b) {
    Exp r{0, a.e};
    for (std::size_t i = 0; i < r.e.size(); ++i) {
      r.e[i] = std::max(a.e[i], b.e[i]);
      r.deg += r.e[i];
    }
    return r;
  }

  static bool divides(const Exp& a, const Exp& b) {
    if (a.deg > b.deg) return false;
    for (std::size_t i = 0; i < a.e.size(); ++i)
      if (a.e[i] > b.e[i]) return false;
    return true;
  }

  static Exp quotient(const Exp& b, const Exp& a) {
    Exp r{b.deg - a.deg, b.e};
    for (std::size_t i = 0; i < r.e.size(); ++i) r.e[i] -= a.e[i];
    return r;
  }

  static bool coprime(const Exp& a, const Exp& b) {
    for (std::size_t i = 0; i < a.e.size(); ++i)
      if (a.e[i] != 0 && b.e[i] != 0) return false;
    return true;
  }

  Exp from_monomial(const Monomial& m) const {
    Exp r{0, std::vector<std::uint32_t>(vars_.size(), 0)};
    for (const auto& [v, e] : m.powers()) {
      r.e[index_.at(v)] = e;
      r.deg += e;
    }
    return r;
  }

  Monomial to_monomial(const Exp& x) const {
    std::vector<Monomial::Power> powers;
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (x.e[i] != 0) powers.emplace_back(vars_[i], x.e[i]);
    return Monomial(std::move(powers));
  }

  Exp one() const { return Exp{0, std::vector<std::uint32_t>(vars_.size(), 0)}; }

 private:
  std::vector<VarId> vars_;
  OrderKind kind_;
  std::map<VarId, std::size_t> index_;
};

struct ITerm {
  Exp e;
  Integer c;
};

// A primitive integer polynomial, optionally tracking how it was built:
// value = lambda * target + sum cof[i] * input[i].
struct IPoly {
  std::vector<ITerm> terms;  // descending
  bool tracked = false;
  Rational lambda = 0;
  std::vector<Polynomial> cof;

  bool zero() const { return terms.empty(); }
  const ITerm& lead() const { return terms.front(); }
};

IPoly to_ipoly(const Polynomial& p, const Ring& ring) {
  IPoly out;
  Integer den = 1;
  for (const auto& [m, c] : p.terms()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  for (const auto& [m, c] : p.terms()) {
    Integer v = c.get_num() * (den / c.get_den());
    out.terms.push_back({ring.from_monomial(m), v});
  }
  std::sort(out.terms.begin(), out.terms.end(),
            [&](const ITerm& a, const ITerm& b) { return ring.cmp(a.e, b.e) > 0; });
  return out;
}

Polynomial to_polynomial(const IPoly& p, const Ring& ring) {
  std::vector<Polynomial::Term> terms;
  for (const auto& t : p.terms) terms.emplace_back(ring.to_monomial(t.e), Rational(t.c));
  return Polynomial::from_terms(std::move(terms));
}

// Scales tracked data by num/den.
void scale_tracking(IPoly& p, const Integer& num, const Integer& den) {
  if (!p.tracked) return;
  Rational f(num, den);
  f.canonicalize();
  p.lambda *= f;
  for (auto& c : p.cof) c = c.scaled(f);
}

Integer content(const std::vector<ITerm>& a, const std::vector<ITerm>& b) {
  Integer g = 0;
  for (const auto& t : a) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.c.get_mpz_t());
    if (g == 1) return g;
  }
  for (const auto& t : b) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.c.get_mpz_t());
    if (g == 1) return g;
  }
  return g;
}

void make_primitive(IPoly& p) {
  if (p.zero()) return;
  Integer g = content(p.terms, {});
  if (p.lead().c < 0) g = -g;
  if (g == 1) return;
  for (auto& t : p.terms) mpz_divexact(t.c.get_mpz_t(), t.c.get_mpz_t(), g.get_mpz_t());
  scale_tracking(p, Integer(1), g);
}

// f <- a*f - b * x^shift * g  (descending merge)
void combine(const Ring& ring, std::vector<ITerm>& f, const Integer& a, const Integer& b,
             const Exp& shift, const std::vector<ITerm>& g) {
  std::vector<ITerm> out;
  out.reserve(f.size() + g.size());
  std::size_t i = 0, j = 0;
  while (i < f.size() || j < g.size()) {
    Exp ge;
    int c;
    if (j < g.size()) ge = Ring::mul(g[j].e, shift);
    if (j == g.size())
      c = 1;
    else if (i == f.size())
      c = -1;
    else
      c = ring.cmp(f[i].e, ge);
    if (c > 0) {
      out.push_back({std::move(f[i].e), a * f[i].c});
      ++i;
    } else if (c < 0) {
      out.push_back({std::move(ge), -(b * g[j].c)});
      ++j;
    } else {
      Integer v = a * f[i].c - b * g[j].c;
      if (v != 0) out.push_back({std::move(ge), std::move(v)});
      ++i;
      ++j;
    }
  }
  f = std::move(out);
}

// Full reduction of f modulo basis (by leading terms). Returns the remainder,
// kept primitive together with f while it is being built.
IPoly reduce(IPoly f, const std::vector<IPoly>& basis, const Ring& ring,
             Rational* scale_out = nullptr) {
  IPoly r;
  r.tracked = f.tracked;
  Rational scale = 1;  // r_final = scale * (true remainder)  when keep_scale
  std::vector<ITerm> rem;
  std::size_t start = 0;  // f.terms[0, start) already moved to rem
  while (start < f.terms.size()) {
    const ITerm& lt = f.terms[start];
    const IPoly* div = nullptr;
    for (const auto& g : basis)
      if (!g.zero() && Ring::divides(g.lead().e, lt.e)) {
        div = &g;
        break;
      }
    if (div == nullptr) {
      rem.push_back(std::move(f.terms[start]));
      ++start;
      continue;
    }
    Integer gc;
    mpz_gcd(gc.get_mpz_t(), div->lead().c.get_mpz_t(), lt.c.get_mpz_t());
    Integer a = div->lead().c / gc;
    Integer b = lt.c / gc;
    if (a < 0) {
      a = -a;
      b = -b;
    }
    Exp shift = Ring::quotient(lt.e, div->lead().e);
    if (f.tracked) {
      Polynomial mono = Polynomial::term(ring.to_monomial(shift), Rational(b));
      f.lambda *= Rational(a);
      for (std::size_t k = 0; k < f.cof.size(); ++k)
        f.cof[k] = f.cof[k].scaled(Rational(a)) - mono * div->cof[k];
    }
    f.terms.erase(f.terms.begin(), f.terms.begin() + static_cast<std::ptrdiff_t>(start));
    start = 0;
    combine(ring, f.terms, a, b, shift, div->terms);
    if (a != 1) {
      for (auto& t : rem) t.c *= a;
      scale *= Rational(a);
    }
    Integer g = content(f.terms, rem);
    if (g > 1) {
      for (auto& t : f.terms) mpz_divexact(t.c.get_mpz_t(), t.c.get_mpz_t(), g.get_mpz_t());
      for (auto& t : rem) mpz_divexact(t.c.get_mpz_t(), t.c.get_mpz_t(), g.get_mpz_t());
      scale /= Rational(g);
      scale_tracking(f, Integer(1), g);
    }
  }
  r.terms = std::move(rem);
  r.lambda = f.lambda;
  r.cof = std::move(f.cof);
  if (scale_out) *scale_out = scale;
  return r;
}

struct PairItem {
  std::size_t i, j;
  Exp lcm;
};

struct Computation {
  Ring ring;
  std::vector<IPoly> basis;
  bool unit = false;
};

Ring make_ring(const std::vector<const Polynomial*>& polys, const MonomialOrder& order) {
  std::vector<VarId> vars;
  for (const auto* p : polys)
    for (VarId v : p->variables()) vars.push_back(v);
  return Ring(order.sort_variables(std::move(vars)), order.kind());
}

IPoly spoly(const Ring& ring, const IPoly& f, const IPoly& g, const Exp& l) {
  Exp sf = Ring::quotient(l, f.lead().e);
  Exp sg = Ring::quotient(l, g.lead().e);
  Integer gc;
  mpz_gcd(gc.get_mpz_t(), f.lead().c.get_mpz_t(), g.lead().c.get_mpz_t());
  Integer a = g.lead().c / gc;  // multiplies f
  Integer b = f.lead().c / gc;  // multiplies g
  IPoly s;
  s.tracked = f.tracked;
  // s = a * x^sf * f - b * x^sg * g
  std::vector<ITerm> shifted;
  shifted.reserve(f.terms.size());
  for (const auto& t : f.terms) shifted.push_back({Ring::mul(t.e, sf), t.c});
  combine(ring, shifted, a, b, sg, g.terms);
  s.terms = std::move(shifted);
  if (s.tracked) {
    Polynomial mf = Polynomial::term(ring.to_monomial(sf), Rational(a));
    Polynomial mg = Polynomial::term(ring.to_monomial(sg), Rational(b));
    s.lambda = 0;
    s.cof.resize(f.cof.size());
    for (std::size_t k = 0; k < f.cof.size(); ++k) s.cof[k] = mf * f.cof[k] - mg * g.cof[k];
  }
  return s;
}

Computation compute_basis(const std::vector<Polynomial>& inputs, const MonomialOrder& order,
                          const GroebnerLimits& limits, bool tracked,
                          const std::vector<const Polynomial*>& extra_vars = {}) {
  std::vector<const Polynomial*> all;
  for (const auto& p : inputs) all.push_back(&p);
  for (const auto* p : extra_vars) all.push_back(p);
  Computation comp{make_ring(all, order), {}, false};
  const Ring& ring = comp.ring;
  auto& G = comp.basis;

  for (std::size_t k = 0; k < inputs.size(); ++k) {
    if (inputs[k].is_zero()) continue;
    IPoly p = to_ipoly(inputs[k], ring);
    if (tracked) {
      p.tracked = true;
      p.cof.assign(inputs.size(), Polynomial());
      // to_ipoly scaled by the common denominator; recover it from one coefficient.
      const auto& t0 = inputs[k].terms().front();
      const ITerm* match = nullptr;
      Exp e0 = ring.from_monomial(t0.first);
      for (const auto& t : p.terms)
        if (t.e == e0) match = &t;
      Rational factor = Rational(match->c) / t0.second;
      p.cof[k] = Polynomial(factor);
    }
    make_primitive(p);
    G.push_back(std::move(p));
  }
  for (const auto& g : G)
    if (g.lead().e.deg == 0) {
      comp.unit = true;
    }

  std::vector<PairItem> pairs;
  std::set<std::pair<std::size_t, std::size_t>> pending;
  std::vector<bool> alive(G.size(), true);
  auto add_pairs_for = [&](std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      pairs.push_back({i, n, Ring::lcm(G[i].lead().e, G[n].lead().e)});
      pending.emplace(i, n);
    }
  };
  if (!comp.unit)
    for (std::size_t n = 1; n < G.size(); ++n) add_pairs_for(n);

  std::size_t reduced_pairs = 0;
  while (!comp.unit && !pairs.empty()) {
    // Normal strategy: smallest lcm first; ties broken by index for determinism.
    auto best = pairs.begin();
    for (auto it = pairs.begin() + 1; it != pairs.end(); ++it) {
      int c = ring.cmp(it->lcm, best->lcm);
      if (c < 0 || (c == 0 && std::tie(it->j, it->i) < std::tie(best->j, best->i))) best = it;
    }
    PairItem pr = std::move(*best);
    *best = std::move(pairs.back());
    pairs.pop_back();
    pending.erase({pr.i, pr.j});

    if (Ring::coprime(G[pr.i].lead().e, G[pr.j].lead().e)) continue;
    bool chain = false;
    for (std::size_t k = 0; k < G.size() && !chain; ++k) {
      if (k == pr.i || k == pr.j) continue;
      if (!Ring::divides(G[k].lead().e, pr.lcm)) continue;
      auto key_ik = std::minmax(pr.i, k);
      auto key_jk = std::minmax(pr.j, k);
      if (!pending.count({key_ik.first, key_ik.second}) &&
          !pending.count({key_jk.first, key_jk.second}))
        chain = true;
    }
    if (chain) continue;

    if (++reduced_pairs > limits.max_pairs) throw ResourceExhausted("groebner: pair limit reached");
    IPoly h = reduce(spoly(ring, G[pr.i], G[pr.j], pr.lcm), G, ring);
    if (h.zero()) continue;
    make_primitive(h);
    if (h.lead().e.deg > limits.max_degree)
      throw ResourceExhausted("groebner: degree limit reached");
    G.push_back(std::move(h));
    if (G.size() > limits.max_basis_size) throw ResourceExhausted("groebner: basis size limit reached");
    if (G.back().lead().e.deg == 0) {
      comp.unit = true;
      break;
    }
    add_pairs_for(G.size() - 1);
  }

  if (comp.unit) {
    // Keep one constant element (with its tracking) as the whole basis.
    for (auto& g : G)
      if (g.lead().e.deg == 0) {
        IPoly one = std::move(g);
        G.clear();
        G.push_back(std::move(one));
        break;
      }
    return comp;
  }

  // Minimize: drop elements whose leading monomial is a multiple of another's.
  std::vector<IPoly> minimal;
  for (std::size_t i = 0; i < G.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < G.size() && !redundant; ++j) {
      if (i == j) continue;
      if (Ring::divides(G[j].lead().e, G[i].lead().e)) {
        if (G[j].lead().e != G[i].lead().e || j < i) redundant = true;
      }
    }
    if (!redundant) minimal.push_back(G[i]);
  }
  // Interreduce: the leading term of each element is irreducible by the others,
  // so a full reduction only rewrites its tail.
  for (std::size_t i = 0; i < minimal.size(); ++i) {
    std::vector<IPoly> others;
    for (std::size_t j = 0; j < minimal.size(); ++j)
      if (j != i) others.push_back(minimal[j]);
    minimal[i] = reduce(minimal[i], others, ring);
    make_primitive(minimal[i]);
  }
  std::sort(minimal.begin(), minimal.end(),
            [&](const IPoly& a, const IPoly& b) { return ring.cmp(a.lead().e, b.lead().e) < 0; });
  G = std::move(minimal);
  return comp;
}

}  // namespace

IdealBasis::IdealBasis(std::vector<Polynomial> generators, MonomialOrder order, bool is_groebner)
    : order_(std::move(order)), is_groebner_(is_groebner) {
  for (auto& g : generators)
    if (!g.is_zero()) generators_.push_back(std::move(g));
}

bool IdealBasis::is_unit() const {
  return generators_.size() == 1 && generators_.front().is_constant();
}

Polynomial multivariate_reduce(const Polynomial& g, const IdealBasis& basis) {
  if (g.is_zero()) return g;
  std::vector<const Polynomial*> all{&g};
  for (const auto& p : basis.generators()) all.push_back(&p);
  Ring ring = make_ring(all, basis.order());
  std::vector<IPoly> G;
  for (const auto& p : basis.generators()) {
    IPoly ip = to_ipoly(p, ring);
    make_primitive(ip);
    G.push_back(std::move(ip));
  }
  // g is scaled by `den` into integers; the reduction scales the remainder by `scale`.
  IPoly f = to_ipoly(g, ring);
  Rational den = Rational(f.terms.front().c) / g.coefficient(ring.to_monomial(f.terms.front().e));
  Rational scale;
  IPoly r = reduce(std::move(f), G, ring, &scale);
  return to_polynomial(r, ring).scaled(Rational(1) / (scale * den));
}

IdealBasis buchberger(const std::vector<Polynomial>& generators, const MonomialOrder& order,
                      const GroebnerLimits& limits) {
  Computation comp = compute_basis(generators, order, limits, false);
  std::vector<Polynomial> out;
  if (comp.unit) {
    out.emplace_back(1L);
  } else {
    for (const auto& g : comp.basis) out.push_back(to_polynomial(g, comp.ring));
  }
  return IdealBasis(std::move(out), order, true);
}

bool ideal_member(const Polynomial& g, const IdealBasis& basis, const GroebnerLimits& limits) {
  if (g.is_zero()) return true;
  if (basis.is_zero_ideal()) return false;
  if (basis.is_groebner()) {
    if (basis.is_unit()) return true;
    return multivariate_reduce(g, basis).is_zero();
  }
  IdealBasis gb = buchberger(basis.generators(), basis.order(), limits);
  if (gb.is_unit()) return true;
  return multivariate_reduce(g, gb).is_zero();
}

IdealBasis ideal_sum_basis(const IdealBasis& a, const IdealBasis& b, const GroebnerLimits& limits) {
  std::vector<Polynomial> gens = a.generators();
  gens.insert(gens.end(), b.generators().begin(), b.generators().end());
  return buchberger(gens, a.order(), limits);
}

std::optional<std::vector<Polynomial>> membership_cofactors(const Polynomial& g,
                                                            const std::vector<Polynomial>& generators,
                                                            const MonomialOrder& order,
                                                            const GroebnerLimits& limits) {
  std::vector<Polynomial> cof(generators.size());
  if (g.is_zero()) return cof;
  std::vector<const Polynomial*> extra{&g};
  Computation comp = compute_basis(generators, order, limits, true, extra);
  if (comp.basis.empty()) return std::nullopt;
  IPoly f = to_ipoly(g, comp.ring);
  f.tracked = true;
  f.cof.assign(generators.size(), Polynomial());
  Rational den =
      Rational(f.terms.front().c) / g.coefficient(comp.ring.to_monomial(f.terms.front().e));
  f.lambda = den;
  IPoly r = reduce(std::move(f), comp.basis, comp.ring);
  if (!r.zero()) return std::nullopt;
  // 0 = lambda * g + sum cof[i] * generators[i]
  Rational inv = Rational(-1) / r.lambda;
  for (std::size_t k = 0; k < generators.size(); ++k) cof[k] = r.cof[k].scaled(inv);
  return cof;
}

bool satisfies_buchberger_criterion(const IdealBasis& basis) {
  const auto& gens = basis.generators();
  std::vector<const Polynomial*> all;
  for (const auto& p : gens) all.push_back(&p);
  Ring ring = make_ring(all, basis.order());
  std::vector<IPoly> G;
  for (const auto& p : gens) {
    IPoly ip = to_ipoly(p, ring);
    make_primitive(ip);
    G.push_back(std::move(ip));
  }
  for (std::size_t i = 0; i < G.size(); ++i)
    for (std::size_t j = i + 1; j < G.size(); ++j) {
      Exp l = Ring::lcm(G[i].lead().e, G[j].lead().e);
      if (!reduce(spoly(ring, G[i], G[j], l), G, ring).zero()) return false;
    }
  return true;
}

}  // namespace hilbert
