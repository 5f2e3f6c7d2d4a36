#include "hilbert/checker.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <chrono>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "hilbert/algebras.hpp"
#include "hilbert/encodings.hpp"

namespace hilbert {

std::string outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Zero: return "Zero";
    case Outcome::NonZero: return "NonZero";
    case Outcome::Functional: return "Functional";
    case Outcome::NotFunctional: return "NotFunctional";
    case Outcome::Equivalent: return "Equivalent";
    case Outcome::NotEquivalent: return "NotEquivalent";
    case Outcome::DomainsDiffer: return "DomainsDiffer";
    case Outcome::Unknown: return "Unknown";
  }
  return "Unknown";
}

bool is_definite(Outcome o) { return o != Outcome::Unknown; }

std::string IdealFamily::key() const {
  std::string out;
  for (const auto& [q, b] : bases) {
    out += std::to_string(q) + ":";
    for (const Polynomial& g : b.generators()) out += canonical_text(g) + ";";
    out += "|";
  }
  return out;
}

std::string ideal_family_text(const RegisterAutomaton& m, const IdealFamily& f) {
  std::ostringstream out;
  for (std::size_t q = 0; q < m.states().size(); ++q) {
    out << "  state " << m.states()[q].name << ": ";
    auto it = f.bases.find(q);
    if (it == f.bases.end() || it->second.is_zero_ideal()) {
      out << "<0>\n";
      continue;
    }
    out << "<";
    const auto& gens = it->second.generators();
    for (std::size_t i = 0; i < gens.size(); ++i) out << (i ? ", " : "") << canonical_text(gens[i]);
    out << ">\n";
  }
  return out.str();
}

bool is_zero_value(const Value& v) {
  if (const auto* r = std::get_if<Rational>(&v)) return *r == 0;
  if (const auto* p = std::get_if<Polynomial>(&v)) return p->is_zero();
  return false;
}

std::optional<Polynomial> value_polynomial(const Value& v) {
  if (const auto* r = std::get_if<Rational>(&v)) return Polynomial(*r);
  if (const auto* p = std::get_if<Polynomial>(&v)) return *p;
  return std::nullopt;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::optional<Value> nonzero_output(const RegisterAutomaton& m, const std::set<Configuration>& configs) {
  for (const Value& v : configuration_outputs(m, configs))
    if (!is_zero_value(v)) return v;
  return std::nullopt;
}

bool ring_automaton(const RegisterAutomaton& m) {
  return dynamic_cast<const RingAlgebra*>(m.algebra().get()) != nullptr;
}

bool ideal_search_supported(const RegisterAutomaton& m) {
  const auto* ring = dynamic_cast<const RingAlgebra*>(m.algebra().get());
  return ring && ring->kind() != RingKind::substitution;
}

bool uses_x(const RegisterAutomaton& m) {
  const auto* ring = dynamic_cast<const RingAlgebra*>(m.algebra().get());
  return ring && ring->kind() != RingKind::rationals;
}

const VarId kX = intern_variable("x");

// Compositions of `total` into `parts` positive summands, in lexicographic order.
void compositions(std::size_t total, std::size_t parts, std::vector<std::size_t>& cur,
                  std::vector<std::vector<std::size_t>>& out) {
  if (parts == 0) {
    if (total == 0) out.push_back(cur);
    return;
  }
  for (std::size_t first = 1; first + (parts - 1) <= total; ++first) {
    cur.push_back(first);
    compositions(total - first, parts - 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

// ---------------------------------------------------------------- exploration

ReachabilityExplorer::ReachabilityExplorer(const RegisterAutomaton& m, std::size_t max_tree_size,
                                           std::size_t configuration_cap)
    : m_(m), max_size_(max_tree_size), cap_(configuration_cap), by_size_(max_tree_size + 2) {}

bool ReachabilityExplorer::start_level() {
  if (size_ >= max_size_) return false;
  ++size_;
  shapes_.clear();
  for (std::size_t s = 0; s < m_.signature().size(); ++s) {
    std::size_t rank = m_.signature()[s].rank;
    if (rank == 0) {
      if (size_ == 1) shapes_.push_back({s, {}});
      continue;
    }
    std::vector<std::vector<std::size_t>> parts;
    std::vector<std::size_t> cur;
    compositions(size_ - 1, rank, cur, parts);
    for (auto& p : parts) shapes_.push_back({s, std::move(p)});
  }
  shape_ = 0;
  tuple_valid_ = false;
  return true;
}

bool ReachabilityExplorer::next_candidate() {
  while (shape_ < shapes_.size()) {
    const Shape& sh = shapes_[shape_];
    bool possible = std::all_of(sh.parts.begin(), sh.parts.end(),
                                [&](std::size_t p) { return !by_size_[p].empty(); });
    if (possible) {
      tuple_.assign(sh.parts.size(), 0);
      tuple_valid_ = true;
      return true;
    }
    ++shape_;
  }
  return false;
}

bool ReachabilityExplorer::step() {
  while (!tuple_valid_) {
    if (exhausted_) return false;
    if (next_candidate()) break;
    if (!start_level()) {
      exhausted_ = true;
      return false;
    }
  }
  const Shape& sh = shapes_[shape_];
  std::vector<const std::set<Configuration>*> children;
  RankedTree tree{m_.signature()[sh.symbol].name, {}};
  for (std::size_t i = 0; i < sh.parts.size(); ++i) {
    const Class& c = classes_[by_size_[sh.parts[i]][tuple_[i]]];
    children.push_back(&c.configurations);
    tree.children.push_back(c.tree);
  }
  std::set<Configuration> configs = step_configurations(m_, tree.label, children, cap_, &saturated_);

  std::size_t i = 0;
  while (i < tuple_.size() && ++tuple_[i] == by_size_[sh.parts[i]].size()) tuple_[i++] = 0;
  if (i == tuple_.size()) {
    tuple_valid_ = false;
    ++shape_;
  }

  if (configs.empty() || seen_.count(configs)) return false;
  seen_.emplace(configs, classes_.size());
  by_size_[size_].push_back(classes_.size());
  classes_.push_back({std::move(configs), std::move(tree), size_});
  return true;
}

std::optional<Counterexample> search_counterexample(const RegisterAutomaton& m, std::size_t max_tree_size,
                                                    std::size_t max_steps) {
  ReachabilityExplorer ex(m, max_tree_size, 100000);
  for (std::size_t steps = 0; steps < max_steps && !ex.exhausted(); ++steps) {
    if (!ex.step()) continue;
    const auto& c = ex.classes().back();
    if (auto v = nonzero_output(m, c.configurations)) return Counterexample{c.tree, *v};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- verification

std::set<std::size_t> reachable_states(const RegisterAutomaton& m) {
  std::set<std::size_t> reach;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Rule& r : m.rules()) {
      if (reach.count(r.target)) continue;
      if (std::all_of(r.children.begin(), r.children.end(), [&](std::size_t c) { return reach.count(c) > 0; })) {
        reach.insert(r.target);
        changed = true;
      }
    }
  }
  return reach;
}

bool verify_ideal_family(const RegisterAutomaton& m, const IdealFamily& f, const GroebnerLimits& limits) {
  if (!m.algebra()->has_subtraction()) return false;
  const MonomialOrder order;
  const std::size_t n = m.registers();
  std::vector<VarId> reg(n);
  for (std::size_t k = 0; k < n; ++k) reg[k] = intern_variable(register_name(k + 1));
  try {
    std::map<std::size_t, IdealBasis> groebner;
    auto basis_of = [&](std::size_t q) -> const IdealBasis& {
      auto it = groebner.find(q);
      if (it != groebner.end()) return it->second;
      IdealBasis b;
      if (auto fit = f.bases.find(q); fit != f.bases.end() && !fit->second.is_zero_ideal())
        b = fit->second.is_groebner() ? fit->second : buchberger(fit->second.generators(), order, limits);
      return groebner.emplace(q, std::move(b)).first->second;
    };
    std::map<std::vector<std::size_t>, IdealBasis> sums;
    auto sum_of = [&](const std::vector<std::size_t>& children) -> const IdealBasis& {
      auto it = sums.find(children);
      if (it != sums.end()) return it->second;
      std::vector<Polynomial> gens;
      for (std::size_t i = 0; i < children.size(); ++i) {
        std::map<VarId, VarId> rename;
        for (std::size_t k = 0; k < n; ++k) rename[reg[k]] = intern_variable(argument_register(k + 1, i + 1));
        for (const Polynomial& g : basis_of(children[i]).generators()) gens.push_back(g.rename(rename));
      }
      IdealBasis b = gens.empty() ? IdealBasis() : buchberger(gens, order, limits);
      return sums.emplace(children, std::move(b)).first->second;
    };
    auto member = [&](const Polynomial& p, const IdealBasis& b) {
      if (p.is_zero()) return true;
      if (b.is_zero_ideal()) return false;
      return multivariate_reduce(p, b).is_zero();
    };

    std::set<std::size_t> reach = reachable_states(m);
    for (const Rule& r : m.rules()) {
      if (!std::all_of(r.children.begin(), r.children.end(), [&](std::size_t c) { return reach.count(c) > 0; }))
        continue;
      const IdealBasis& target = basis_of(r.target);
      if (target.is_zero_ideal()) continue;
      std::map<VarId, Polynomial> update;
      for (std::size_t k = 0; k < n; ++k) {
        auto p = ring_term_polynomial(r.update[k]);
        if (!p) return false;
        update.emplace(reg[k], std::move(*p));
      }
      const IdealBasis& sum = sum_of(r.children);
      for (const Polynomial& g : target.generators())
        if (!member(g.substitute(update), sum)) return false;
    }
    for (const auto& [q, term] : m.output()) {
      if (!reach.count(q)) continue;
      auto p = ring_term_polynomial(term);
      if (!p || !member(*p, basis_of(q))) return false;
    }
    return true;
  } catch (const ResourceExhausted&) {
    return false;
  }
}

// ---------------------------------------------------------------- synthesis

namespace {

// Monomials in `vars` of total degree ≤ d.
std::vector<Monomial> monomials_up_to(const std::vector<VarId>& vars, unsigned d) {
  std::vector<Monomial> out;
  std::vector<Monomial::Power> cur;
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned left) {
    if (i == vars.size()) {
      std::vector<Monomial::Power> powers;
      for (const auto& p : cur)
        if (p.second) powers.push_back(p);
      out.emplace_back(std::move(powers));
      return;
    }
    for (unsigned e = 0; e <= left; ++e) {
      cur.emplace_back(vars[i], e);
      rec(i + 1, left - e);
      cur.pop_back();
    }
  };
  rec(0, d);
  std::sort(out.begin(), out.end(), [](const Monomial& a, const Monomial& b) {
    return a.total_degree() != b.total_degree() ? a.total_degree() < b.total_degree() : a < b;
  });
  return out;
}

// Incremental row echelon form over Q, used to find the null space of the
// evaluation constraints.
class Echelon {
 public:
  explicit Echelon(std::size_t columns) : cols_(columns) {}

  void add(std::vector<Rational> row) {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const Rational& c = row[pivots_[r]];
      if (c == 0) continue;
      Rational factor = c;
      for (std::size_t j = 0; j < cols_; ++j)
        if (rows_[r][j] != 0) row[j] -= factor * rows_[r][j];
    }
    std::size_t p = 0;
    while (p < cols_ && row[p] == 0) ++p;
    if (p == cols_) return;
    Rational inv = 1 / row[p];
    for (auto& v : row) v *= inv;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      Rational c = rows_[r][p];
      if (c == 0) continue;
      for (std::size_t j = 0; j < cols_; ++j)
        if (row[j] != 0) rows_[r][j] -= c * row[j];
    }
    rows_.push_back(std::move(row));
    pivots_.push_back(p);
  }

  bool full() const { return rows_.size() == cols_; }

  std::vector<std::vector<Rational>> null_space() const {
    std::vector<bool> pivot(cols_, false);
    for (std::size_t p : pivots_) pivot[p] = true;
    std::vector<std::vector<Rational>> out;
    for (std::size_t f = 0; f < cols_; ++f) {
      if (pivot[f]) continue;
      std::vector<Rational> v(cols_, Rational(0));
      v[f] = 1;
      for (std::size_t r = 0; r < rows_.size(); ++r) v[pivots_[r]] = -rows_[r][f];
      out.push_back(std::move(v));
    }
    return out;
  }

 private:
  std::size_t cols_;
  std::vector<std::vector<Rational>> rows_;
  std::vector<std::size_t> pivots_;
};

Polynomial evaluate_monomial(const Monomial& mono, const std::map<VarId, Polynomial>& point) {
  Polynomial out(1);
  for (const auto& [var, e] : mono.powers()) out *= point.at(var).pow(e);
  return out;
}

constexpr std::size_t kMaxSamplesPerState = 400;

}  // namespace

IdealFamily synthesize_family(const RegisterAutomaton& m,
                              const std::map<std::size_t, std::vector<std::vector<Value>>>& samples,
                              unsigned degree, const GroebnerLimits& limits) {
  IdealFamily out;
  const bool with_x = uses_x(m);
  const MonomialOrder order;
  for (std::size_t q : reachable_states(m)) {
    const std::size_t n = m.registers();
    std::vector<VarId> regs;
    for (std::size_t k = 0; k < n; ++k) regs.push_back(intern_variable(register_name(k + 1)));
    std::vector<Monomial> rmonos = monomials_up_to(regs, degree);
    std::vector<Monomial> template_monos;
    for (unsigned e = 0; e <= (with_x ? degree : 0); ++e)
      for (const Monomial& r : rmonos) template_monos.push_back(r * Monomial::variable(kX, e));

    auto it = samples.find(q);
    if (it == samples.end() || it->second.empty()) {
      out.bases.emplace(q, IdealBasis({Polynomial(1)}, order, true));
      continue;
    }
    const auto& pts = it->second;
    Echelon ech(template_monos.size());
    std::size_t stride = std::max<std::size_t>(1, pts.size() / kMaxSamplesPerState);
    for (std::size_t s = 0; s < pts.size() && !ech.full(); s += stride) {
      std::map<VarId, Polynomial> point;
      for (std::size_t k = 0; k < n; ++k) point.emplace(regs[k], *value_polynomial(pts[s][k]));
      point.emplace(kX, Polynomial::variable(kX));
      std::vector<Polynomial> vals;
      std::uint32_t top = 0;
      for (const Monomial& mono : template_monos) {
        vals.push_back(evaluate_monomial(mono, point));
        top = std::max(top, vals.back().degree(kX));
      }
      for (std::uint32_t e = 0; e <= top && !ech.full(); ++e) {
        Monomial xe = Monomial::variable(kX, e);
        std::vector<Rational> row;
        bool nonzero = false;
        for (const Polynomial& v : vals) {
          row.push_back(v.coefficient(xe));
          nonzero = nonzero || row.back() != 0;
        }
        if (nonzero) ech.add(std::move(row));
      }
    }
    std::vector<Polynomial> gens;
    for (const auto& v : ech.null_space()) {
      std::vector<Polynomial::Term> terms;
      for (std::size_t j = 0; j < v.size(); ++j)
        if (v[j] != 0) terms.emplace_back(template_monos[j], v[j]);
      gens.push_back(Polynomial::from_terms(std::move(terms)));
    }
    if (gens.empty()) continue;
    try {
      out.bases.emplace(q, buchberger(gens, order, limits));
    } catch (const ResourceExhausted&) {
      out.bases.emplace(q, IdealBasis(gens, order, false));
    }
  }
  return out;
}

// ---------------------------------------------------------------- family stream

IdealFamilyStream::IdealFamilyStream(const RegisterAutomaton& m, const CheckerConfig& config,
                                     ReachabilityExplorer* explorer)
    : m_(m), config_(config), explorer_(explorer), rng_state_(config.seed) {
  if (!explorer_) {
    own_ = std::make_unique<ReachabilityExplorer>(m, config.max_tree_size, config.configuration_cap);
    explorer_ = own_.get();
  }
  std::set<std::size_t> reach = reachable_states(m);
  states_.assign(reach.begin(), reach.end());
}

IdealFamilyStream::~IdealFamilyStream() = default;

namespace {

// Candidate generators over r1..rn from the coefficient grid, monic in their
// leading monomial, fewest terms and smallest coefficients first.
std::vector<Polynomial> grid_generators(std::size_t registers, unsigned degree, int height,
                                        const std::vector<int>& denominators, std::size_t cap) {
  std::vector<VarId> regs;
  for (std::size_t k = 0; k < registers; ++k) regs.push_back(intern_variable(register_name(k + 1)));
  std::vector<Monomial> monos = monomials_up_to(regs, degree);
  const MonomialOrder order;
  std::sort(monos.begin(), monos.end(), [&](const Monomial& a, const Monomial& b) { return order.compare(a, b) > 0; });
  std::vector<Rational> values;
  for (int den : denominators) {
    if (den > height) continue;
    for (int num = -height; num <= height; ++num) {
      if (num == 0) continue;
      Rational r(num, den);
      r.canonicalize();
      if (std::find(values.begin(), values.end(), r) == values.end()) values.push_back(r);
    }
  }
  std::sort(values.begin(), values.end(), [](const Rational& a, const Rational& b) {
    Rational aa = abs(a), bb = abs(b);
    return aa != bb ? aa < bb : a > b;
  });
  std::vector<Polynomial> out;
  // Supports of size 1..3; the first (leading) monomial gets coefficient 1.
  for (std::size_t support = 1; support <= 3 && out.size() < cap; ++support) {
    std::vector<std::size_t> pick(support);
    std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t i, std::size_t from) {
      if (out.size() >= cap) return;
      if (i == support) {
        std::vector<std::size_t> idx(support - 1, 0);
        for (;;) {
          std::vector<Polynomial::Term> terms{{monos[pick[0]], Rational(1)}};
          for (std::size_t j = 1; j < support; ++j) terms.emplace_back(monos[pick[j]], values[idx[j - 1]]);
          out.push_back(Polynomial::from_terms(std::move(terms)));
          if (out.size() >= cap) return;
          std::size_t j = 0;
          while (j < idx.size() && ++idx[j] == values.size()) idx[j++] = 0;
          if (j == idx.size()) return;
        }
      }
      for (std::size_t k = from; k < monos.size(); ++k) {
        pick[i] = k;
        choose(i + 1, k + 1);
      }
    };
    choose(0, 0);
  }
  return out;
}

}  // namespace

void IdealFamilyStream::start_round() {
  ++round_;
  degree_ = std::min<unsigned>(static_cast<unsigned>(round_), config_.max_degree);
  height_ = std::min<int>(static_cast<int>(round_), config_.coefficient_height);

  grid_options_.clear();
  for (std::size_t q : states_) {
    (void)q;
    std::vector<Polynomial> gens = grid_generators(m_.registers(), degree_, height_, config_.denominators,
                                                   config_.grid_generators_per_state);
    std::vector<std::vector<Polynomial>> options = {{}};
    for (const Polynomial& g : gens) options.push_back({g});
    if (config_.max_generators >= 2)
      for (std::size_t i = 0; i < gens.size() && options.size() < 4 * config_.grid_generators_per_state; ++i)
        for (std::size_t j = i + 1; j < gens.size() && options.size() < 4 * config_.grid_generators_per_state; ++j)
          options.push_back({gens[i], gens[j]});
    grid_options_.push_back(std::move(options));
  }
  grid_index_.assign(states_.size(), 0);
  grid_emitted_ = 0;
  grid_done_ = states_.empty();
}

std::optional<IdealFamily> IdealFamilyStream::next_grid_family() {
  const MonomialOrder order;
  while (!grid_done_ && grid_emitted_ < config_.grid_families_per_round) {
    IdealFamily f;
    for (std::size_t i = 0; i < states_.size(); ++i) {
      const auto& gens = grid_options_[i][grid_index_[i]];
      if (!gens.empty()) f.bases.emplace(states_[i], IdealBasis(gens, order, false));
    }
    std::size_t i = 0;
    while (i < grid_index_.size() && ++grid_index_[i] == grid_options_[i].size()) grid_index_[i++] = 0;
    if (i == grid_index_.size()) grid_done_ = true;
    ++grid_emitted_;
    if (emitted_.insert(f.key()).second) return f;
  }
  return std::nullopt;
}

void IdealFamilyStream::resynthesize() {
  samples_seen_ = explorer_->classes().size();
  std::map<std::size_t, std::vector<std::vector<Value>>> samples;
  for (const auto& c : explorer_->classes())
    for (const Configuration& conf : c.configurations) samples[conf.state].push_back(conf.registers);
  // A few random combinations of known classes reach beyond the explored sizes.
  std::mt19937_64 rng(rng_state_++);
  const auto& classes = explorer_->classes();
  for (int extra = 0; extra < 64 && !classes.empty(); ++extra) {
    const RankedSymbol& sym = m_.signature()[rng() % m_.signature().size()];
    std::vector<const std::set<Configuration>*> kids;
    for (std::size_t i = 0; i < sym.rank; ++i) kids.push_back(&classes[rng() % classes.size()].configurations);
    bool sat = false;
    for (const Configuration& conf : step_configurations(m_, sym.name, kids, 64, &sat))
      samples[conf.state].push_back(conf.registers);
  }
  for (unsigned d = 1; d <= degree_; ++d) {
    IdealFamily f = synthesize_family(m_, samples, d, config_.limits);
    if (emitted_.insert(f.key()).second) queue_.push_back(std::move(f));
  }
}

std::optional<IdealFamily> IdealFamilyStream::next() {
  if (exhausted_) return std::nullopt;
  if (!started_) {
    started_ = true;
    IdealFamily zero;
    emitted_.insert(zero.key());
    return zero;
  }
  if (own_)
    for (int i = 0; i < 32 && !explorer_->exhausted(); ++i) explorer_->step();

  std::size_t pool = explorer_->classes().size();
  if (round_ > 0 && (pool >= 2 * samples_seen_ + 8 || (explorer_->exhausted() && pool != samples_seen_)))
    resynthesize();
  for (;;) {
    if (!queue_.empty()) {
      IdealFamily f = std::move(queue_.front());
      queue_.erase(queue_.begin());
      return f;
    }
    if (round_ > 0)
      if (auto f = next_grid_family()) return f;
    bool final_round = round_ > 0 && degree_ == config_.max_degree && height_ == config_.coefficient_height;
    if (final_round) {
      // Only re-solved templates remain, and those need new samples.
      if (explorer_->exhausted() && samples_seen_ == explorer_->classes().size()) exhausted_ = true;
      return std::nullopt;
    }
    start_round();
    resynthesize();
  }
}

std::vector<IdealFamily> enumerate_ideal_families(const RegisterAutomaton& m, const CheckerConfig& config,
                                                  std::size_t rounds) {
  IdealFamilyStream stream(m, config);
  std::vector<IdealFamily> out;
  while (stream.round() <= rounds && !stream.exhausted()) {
    auto f = stream.next();
    if (!f) {
      if (stream.round() >= rounds) break;
      continue;
    }
    if (stream.round() > rounds) break;
    out.push_back(std::move(*f));
  }
  return out;
}

// ---------------------------------------------------------------- decisions

RegisterAutomaton prepare_for_checking(const RegisterAutomaton& m) {
  if (ring_automaton(m)) return m;
  auto s = simulation_for(m);
  if (!s) throw std::invalid_argument("no simulation into Q[x] for algebra " + m.algebra()->name());
  return compile_ra(m, *s);
}

namespace {

struct Budget {
  Clock::time_point start = Clock::now();
  double secs;
  std::size_t max_steps;
  std::atomic<std::size_t> steps{0};
  std::atomic<bool> stop{false};

  bool exhausted() const {
    return stop.load() || steps.load() >= max_steps || seconds_since(start) >= secs;
  }
};

struct SearchOutcome {
  std::mutex mutex;
  std::optional<Verdict> verdict;
  void offer(Verdict v, Budget& b) {
    std::lock_guard lock(mutex);
    if (!verdict) verdict = std::move(v);
    b.stop = true;
  }
};

Verdict nonzero_verdict(const RegisterAutomaton& m, const RankedTree& tree) {
  Verdict v;
  RunResult r = run_ra(m, tree);
  for (const Value& o : r.outputs)
    if (!is_zero_value(o)) {
      v.outcome = Outcome::NonZero;
      v.witness = tree;
      v.outputs = {o};
      return v;
    }
  v.notes.push_back("counterexample failed re-verification");
  return v;
}

Verdict zero_verdict(const RegisterAutomaton& m, const IdealFamily& f, const GroebnerLimits& limits) {
  Verdict v;
  if (!verify_ideal_family(m, f, limits)) {
    v.notes.push_back("certificate failed re-verification");
    return v;
  }
  v.outcome = Outcome::Zero;
  v.family = f;
  v.certified = std::make_shared<const RegisterAutomaton>(m);
  return v;
}

}  // namespace

Verdict decide_zeroness(const RegisterAutomaton& m, const CheckerConfig& config,
                        const std::vector<IdealFamily>& seeds) {
  if (!m.algebra()->has_subtraction())
    throw std::invalid_argument("zeroness needs an automaton over Q, Q[x] or Q[x]^subs");
  Budget budget;
  budget.secs = config.budget_secs;
  budget.max_steps = config.max_steps;
  SearchOutcome result;
  const bool ideals = ideal_search_supported(m);
  BudgetReport report;
  std::vector<std::string> notes;
  if (!ideals) notes.push_back("ideal search disabled for " + m.algebra()->name() + "; counterexample search only");

  for (const IdealFamily& seed : seeds) {
    ++budget.steps;
    ++report.ideal_steps;
    if (ideals && verify_ideal_family(m, seed, config.limits)) {
      Verdict v = zero_verdict(m, seed, config.limits);
      v.budget = report;
      v.budget.steps = budget.steps;
      v.budget.seconds = seconds_since(budget.start);
      v.notes = notes;
      return v;
    }
  }

  std::atomic<std::size_t> search_steps{0}, ideal_steps{static_cast<std::size_t>(report.ideal_steps)};
  std::atomic<std::size_t> reached_size{0};
  std::atomic<unsigned> reached_degree{0};
  std::atomic<bool> saturated{false}, search_done{false}, ideal_done{!ideals};

  auto search_step = [&](ReachabilityExplorer& ex, std::size_t& checked) {
    ++budget.steps;
    ++search_steps;
    if (!ex.exhausted()) ex.step();
    reached_size = std::max(reached_size.load(), ex.current_size());
    if (ex.saturated()) saturated = true;
    while (checked < ex.classes().size()) {
      const auto& c = ex.classes()[checked++];
      if (nonzero_output(m, c.configurations)) {
        result.offer(nonzero_verdict(m, c.tree), budget);
        return;
      }
    }
    if (ex.exhausted()) search_done = true;
  };
  auto ideal_step = [&](IdealFamilyStream& stream) {
    ++budget.steps;
    ++ideal_steps;
    auto f = stream.next();
    reached_degree = std::max(reached_degree.load(), stream.degree());
    if (f && verify_ideal_family(m, *f, config.limits)) result.offer(zero_verdict(m, *f, config.limits), budget);
    if (stream.exhausted()) ideal_done = true;
  };

  if (config.deterministic) {
    ReachabilityExplorer ex(m, config.max_tree_size, config.configuration_cap);
    std::unique_ptr<IdealFamilyStream> stream;
    if (ideals) stream = std::make_unique<IdealFamilyStream>(m, config, &ex);
    std::size_t checked = 0;
    while (!budget.exhausted() && !(search_done && ideal_done)) {
      int weight = ex.current_size() <= 8 ? 4 : 1;
      for (int i = 0; i < weight && !budget.exhausted() && !search_done; ++i) search_step(ex, checked);
      if (stream && !budget.exhausted() && !ideal_done) ideal_step(*stream);
    }
  } else {
    std::thread search([&] {
      ReachabilityExplorer ex(m, config.max_tree_size, config.configuration_cap);
      std::size_t checked = 0;
      while (!budget.exhausted() && !search_done) search_step(ex, checked);
    });
    if (ideals) {
      IdealFamilyStream stream(m, config);
      while (!budget.exhausted() && !ideal_done) ideal_step(stream);
    }
    search.join();
  }

  Verdict v;
  {
    std::lock_guard lock(result.mutex);
    if (result.verdict) v = *result.verdict;
  }
  if (!is_definite(v.outcome)) {
    if (search_done && ideal_done)
      notes.push_back("search space exhausted (tree size " + std::to_string(config.max_tree_size) + ", degree " +
                      std::to_string(config.max_degree) + ")");
    else
      notes.push_back("budget exhausted");
  }
  v.budget.steps = budget.steps;
  v.budget.search_steps = search_steps;
  v.budget.ideal_steps = ideal_steps;
  v.budget.max_tree_size = reached_size;
  v.budget.max_degree = reached_degree;
  v.budget.saturated = saturated;
  v.budget.seconds = seconds_since(budget.start);
  if (v.budget.saturated) notes.push_back("configuration sets saturated the cap");
  v.notes.insert(v.notes.begin(), notes.begin(), notes.end());
  return v;
}

namespace {

// r_j − r_{n+j} at every state: the certificate for products of a
// deterministic automaton with itself.
IdealFamily diagonal_family(const RegisterAutomaton& product, std::size_t n) {
  IdealFamily f;
  std::vector<Polynomial> gens;
  for (std::size_t j = 1; j <= n; ++j)
    gens.push_back(Polynomial::variable(register_name(j)) - Polynomial::variable(register_name(n + j)));
  if (gens.empty()) return f;
  for (std::size_t q = 0; q < product.states().size(); ++q) f.bases.emplace(q, IdealBasis(gens, MonomialOrder()));
  return f;
}

std::vector<Value> two_outputs(const RegisterAutomaton& m, const RankedTree& t) {
  auto out = run_ra(m, t).outputs;
  std::vector<Value> v(out.begin(), out.end());
  if (v.size() > 2) v.resize(2);
  return v;
}

}  // namespace

Verdict decide_functionality(const RegisterAutomaton& m, const CheckerConfig& config) {
  RegisterAutomaton c = prepare_for_checking(m);
  RegisterAutomaton p = self_product(c);
  Verdict v = decide_zeroness(p, config, {diagonal_family(p, c.registers())});
  if (v.outcome == Outcome::Zero) {
    v.outcome = Outcome::Functional;
  } else if (v.outcome == Outcome::NonZero) {
    v.outcome = Outcome::NotFunctional;
    v.outputs = two_outputs(m, *v.witness);
    if (v.outputs.size() < 2) {
      v.outcome = Outcome::Unknown;
      v.notes.push_back("witness did not reproduce two outputs");
    }
  }
  return v;
}

Verdict decide_equivalence(const RegisterAutomaton& m, const RegisterAutomaton& m2, const CheckerConfig& config) {
  auto s1 = m.signature(), s2 = m2.signature();
  std::sort(s1.begin(), s1.end());
  std::sort(s2.begin(), s2.end());
  if (s1 != s2) throw std::invalid_argument("automata have different signatures");
  if (m.algebra()->name() != m2.algebra()->name()) throw std::invalid_argument("automata are over different algebras");

  std::vector<std::string> notes;
  for (const RegisterAutomaton* a : {&m, &m2}) {
    const char* which = a == &m ? "first" : "second";
    if (check_deterministic(*a)) {
      notes.push_back(std::string(which) + " automaton is deterministic, hence functional");
      continue;
    }
    Verdict f = decide_functionality(*a, config);
    if (f.outcome != Outcome::Functional) {
      f.notes.insert(f.notes.begin(), std::string(which) + " automaton: functionality " +
                                          (f.outcome == Outcome::NotFunctional ? "fails" : "not established"));
      return f;
    }
    notes.push_back(std::string(which) + " automaton proven functional");
  }

  DomainComparison dom = domains_equivalent(m, m2);
  if (!dom.equal) {
    Verdict v;
    v.outcome = Outcome::DomainsDiffer;
    v.witness = dom.witness;
    v.notes = notes;
    v.notes.push_back(std::string("witness is accepted only by the ") + (dom.witness_in_first ? "first" : "second") +
                      " automaton");
    return v;
  }

  RegisterAutomaton c1 = m, c2 = m2;
  if (!ring_automaton(m)) {
    auto s = simulation_for(std::vector<const RegisterAutomaton*>{&m, &m2});
    if (!s) throw std::invalid_argument("no simulation into Q[x] for algebra " + m.algebra()->name());
    c1 = compile_ra(m, *s);
    c2 = compile_ra(m2, *s);
  }
  Verdict v = decide_zeroness(cross_difference(c1, c2), config);
  v.notes.insert(v.notes.begin(), notes.begin(), notes.end());
  if (v.outcome == Outcome::Zero) {
    v.outcome = Outcome::Equivalent;
  } else if (v.outcome == Outcome::NonZero) {
    v.outcome = Outcome::NotEquivalent;
    auto o1 = run_ra(m, *v.witness).outputs, o2 = run_ra(m2, *v.witness).outputs;
    v.outputs.clear();
    if (!o1.empty()) v.outputs.push_back(*o1.begin());
    if (!o2.empty()) v.outputs.push_back(*o2.begin());
  }
  return v;
}

// ---------------------------------------------------------------- reports

std::string verdict_text(const Verdict& v, const Algebra& output_algebra, bool machine) {
  std::ostringstream out;
  auto value = [&](const Value& x) {
    if (auto p = value_polynomial(x)) return canonical_text(*p);
    return output_algebra.value_text(x);
  };
  if (machine) {
    out << "outcome=" << outcome_name(v.outcome) << "\n";
    if (v.witness) out << "witness=" << v.witness->text() << "\n";
    if (v.witness) out << "witness_size=" << v.witness->size() << "\n";
    for (std::size_t i = 0; i < v.outputs.size(); ++i) out << "output" << i + 1 << "=" << value(v.outputs[i]) << "\n";
    if (v.family && v.certified) {
      for (std::size_t q = 0; q < v.certified->states().size(); ++q) {
        auto it = v.family->bases.find(q);
        out << "ideal." << v.certified->states()[q].name << "=";
        if (it != v.family->bases.end())
          for (std::size_t i = 0; i < it->second.generators().size(); ++i)
            out << (i ? "; " : "") << canonical_text(it->second.generators()[i]);
        out << "\n";
      }
    }
    out << "steps=" << v.budget.steps << "\nsearch_steps=" << v.budget.search_steps
        << "\nideal_steps=" << v.budget.ideal_steps << "\nmax_tree_size=" << v.budget.max_tree_size
        << "\nmax_degree=" << v.budget.max_degree << "\nseconds=" << v.budget.seconds
        << "\nsaturated=" << (v.budget.saturated ? 1 : 0) << "\n";
    for (const std::string& n : v.notes) out << "note=" << n << "\n";
    return out.str();
  }
  out << "outcome: " << outcome_name(v.outcome) << "\n";
  if (v.witness || v.family) out << "certificate:\n";
  if (v.witness) out << "  witness tree: " << v.witness->text() << " (size " << v.witness->size() << ")\n";
  for (std::size_t i = 0; i < v.outputs.size(); ++i) out << "  output " << i + 1 << ": " << value(v.outputs[i]) << "\n";
  if (v.family && v.certified) out << ideal_family_text(*v.certified, *v.family);
  out << "budget:\n  steps: " << v.budget.steps << " (search " << v.budget.search_steps << ", ideals "
      << v.budget.ideal_steps << ")\n  max tree size: " << v.budget.max_tree_size
      << "\n  max template degree: " << v.budget.max_degree << "\n  seconds: " << v.budget.seconds << "\n";
  for (const std::string& n : v.notes) out << "note: " << n << "\n";
  return out.str();
}

}  // namespace hilbert
