#include "hilbert/reductions.hpp"

#include <functional>
#include <set>
#include <sstream>

#include "hilbert/algebras.hpp"
#include "hilbert/parse_util.hpp"

namespace hilbert {

namespace {

std::string row_label(int q, int b1, int b2) {
  return "d " + std::to_string(q) + " " + std::to_string(b1) + " " + std::to_string(b2);
}

}  // namespace

TwoCounterMachine::TwoCounterMachine(int states, std::vector<CmRow> rows) : states_(states), rows_(std::move(rows)) {
  if (states < 1) throw MachineError("a machine needs at least one state");
  if (rows_.size() != static_cast<std::size_t>(states) * 4)
    throw MachineError("expected " + std::to_string(states * 4) + " rows, got " + std::to_string(rows_.size()));
  for (int q = 1; q <= states; ++q)
    for (int b1 = 0; b1 <= 1; ++b1)
      for (int b2 = 0; b2 <= 1; ++b2) {
        const CmRow& r = row(q, b1, b2);
        std::string where = "row " + row_label(q, b1, b2) + ": ";
        if (r.next < 1 || r.next > states) throw MachineError(where + "target state out of range");
        if (r.d1 < -1 || r.d1 > 1 || r.d2 < -1 || r.d2 > 1) throw MachineError(where + "deltas must be -1, 0 or 1");
        if ((r.d1 == -1 && b1 == 0) || (r.d2 == -1 && b2 == 0))
          throw MachineError(where + "decrements a counter that is zero");
      }
}

TwoCounterMachine parse_2cm(std::string_view text) {
  int states = 0;
  std::vector<std::optional<CmRow>> rows;
  std::size_t line_no = 0;
  std::istringstream lines{std::string(text)};
  std::string line;
  auto fail = [&](const std::string& msg) -> void {
    throw MachineError("line " + std::to_string(line_no) + ": " + msg);
  };
  auto read_int = [&](Cursor& in) {
    bool neg = in.consume('-');
    if (!neg) in.consume('+');
    std::string d = in.digits();
    if (d.size() > 6) in.fail("number too large");
    int v = std::stoi(d);
    return neg ? -v : v;
  };
  while (std::getline(lines, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    Cursor in(line);
    if (in.at_end()) continue;
    try {
      if (in.consume("states")) {
        if (states) fail("duplicate states line");
        states = read_int(in);
        if (states < 1) fail("a machine needs at least one state");
        rows.assign(static_cast<std::size_t>(states) * 4, std::nullopt);
      } else if (in.consume('d')) {
        if (!states) fail("rows must follow the states line");
        int q = read_int(in), b1 = read_int(in), b2 = read_int(in);
        in.expect("->");
        CmRow r;
        r.next = read_int(in);
        r.d1 = read_int(in);
        r.d2 = read_int(in);
        if (q < 1 || q > states) fail("state " + std::to_string(q) + " out of range");
        if ((b1 != 0 && b1 != 1) || (b2 != 0 && b2 != 1)) fail("zero flags must be 0 or 1");
        auto& slot = rows[TwoCounterMachine::index(q, b1, b2)];
        if (slot) fail("duplicate row " + row_label(q, b1, b2));
        slot = r;
      } else {
        fail("expected `states` or a `d` row");
      }
      if (!in.at_end()) fail("trailing input");
    } catch (const ParseError& e) {
      fail(e.what());
    }
  }
  if (!states) throw MachineError("missing states line");
  std::vector<CmRow> out;
  for (int q = 1; q <= states; ++q)
    for (int b1 = 0; b1 <= 1; ++b1)
      for (int b2 = 0; b2 <= 1; ++b2) {
        const auto& slot = rows[TwoCounterMachine::index(q, b1, b2)];
        if (!slot) throw MachineError("missing row " + row_label(q, b1, b2));
        out.push_back(*slot);
      }
  return TwoCounterMachine(states, std::move(out));
}

std::string machine_text(const TwoCounterMachine& m) {
  std::ostringstream out;
  out << "states " << m.states() << "\n";
  for (int q = 1; q <= m.states(); ++q)
    for (int b1 = 0; b1 <= 1; ++b1)
      for (int b2 = 0; b2 <= 1; ++b2) {
        const CmRow& r = m.row(q, b1, b2);
        out << row_label(q, b1, b2) << " -> " << r.next << " " << r.d1 << " " << r.d2 << "\n";
      }
  return out.str();
}

CmConfiguration step_2cm(const CmConfiguration& cfg, const TwoCounterMachine& m) {
  const CmRow& r = m.row(cfg.state, cfg.c1 > 0, cfg.c2 > 0);
  return {r.next, cfg.c1 + r.d1, cfg.c2 + r.d2};
}

bool reachable_2cm(const TwoCounterMachine& m, int from, int to, std::size_t bound) {
  // δ is a function of the configuration, so the frontier is a single path.
  CmConfiguration cfg{from, 0, 0};
  for (std::size_t step = 0;; ++step) {
    if (cfg.state == to) return true;
    if (step == bound) return false;
    cfg = step_2cm(cfg, m);
  }
}

std::string letter_name(const CmLetter& l) {
  return "t" + std::to_string(l.q) + "_" + std::to_string(l.b1) + std::to_string(l.b2);
}

std::vector<CmLetter> machine_alphabet(const TwoCounterMachine& m) {
  std::vector<CmLetter> out;
  for (int q = 1; q <= m.states(); ++q)
    for (int b1 = 0; b1 <= 1; ++b1)
      for (int b2 = 0; b2 <= 1; ++b2) out.push_back({q, b1, b2});
  return out;
}

std::optional<CmConfiguration> run_word(const TwoCounterMachine& m, const std::vector<CmLetter>& word) {
  CmConfiguration cfg;
  for (const CmLetter& l : word) {
    if (l.q != cfg.state || l.b1 != (cfg.c1 > 0) || l.b2 != (cfg.c2 > 0)) return std::nullopt;
    cfg = step_2cm(cfg, m);
  }
  return cfg;
}

Polynomial ptestq(int i, int n) {
  Polynomial x = Polynomial::variable("x"), out(1);
  for (int j = 1; j <= n; ++j)
    if (j != i) out *= x - Polynomial(j);
  return out;
}

Polynomial ptestc(int m) {
  Polynomial x = Polynomial::variable("x"), out(1);
  for (int j = 1; j <= m; ++j) out *= x - Polynomial(j);
  return out;
}

namespace {

std::string reg(std::size_t k) { return register_name(k); }
std::string arg(std::size_t k) { return argument_register(k, 1); }

std::string test_at(const Polynomial& p, const std::string& at) {
  return "(" + canonical_text(p) + ")[x:=" + at + "]";
}

std::string update_block(const TwoCounterMachine& m, const CmLetter& l) {
  const CmRow& r = m.row(l.q, l.b1, l.b2);
  auto counter_test = [&](int b, std::size_t counter) {
    return b ? arg(counter) : arg(kRegZt) + "[x:=" + arg(counter) + "]";
  };
  auto shift = [](std::size_t counter, int d) {
    return arg(counter) + (d < 0 ? " - 1" : d > 0 ? " + 1" : "");
  };
  std::ostringstream out;
  out << "{ " << reg(kRegQ) << " := " << r.next << "; "
      << reg(kRegC1) << " := " << shift(kRegC1, r.d1) << "; "
      << reg(kRegC2) << " := " << shift(kRegC2, r.d2) << "; "
      << reg(kRegPlus) << " := " << arg(kRegPlus) << " + 1; "
      << reg(kRegZt) << " := " << arg(kRegZt) << "*(x - " << arg(kRegPlus) << " - 1); "
      << reg(kRegW) << " := " << arg(kRegW) << "*" << test_at(ptestq(l.q, m.states()), arg(kRegQ)) << "*"
      << counter_test(l.b1, kRegC1) << "*" << counter_test(l.b2, kRegC2) << " }";
  return out.str();
}

std::string reduction_text(const TwoCounterMachine& m, int target, bool one_letter) {
  if (target < 1 || target > m.states()) throw MachineError("target state out of range");
  std::ostringstream out;
  out << "algebra Qx_subs\nsignature _|_/0";
  auto letters = machine_alphabet(m);
  if (one_letter) {
    out << " a/1";
  } else {
    for (const CmLetter& l : letters) out << " " << letter_name(l) << "/1";
  }
  out << "\nregisters 6\nstate q\n";
  out << "_|_ -> q { r1 := 1; r2 := 0; r3 := 0; r4 := 0; r5 := 1; r6 := 1 }\n";
  for (const CmLetter& l : letters)
    out << (one_letter ? std::string("a") : letter_name(l)) << "(q) -> q " << update_block(m, l) << "\n";
  out << "output q { " << test_at(ptestq(target, m.states()), reg(kRegQ)) << "*" << reg(kRegW) << " }\n";
  return out.str();
}

}  // namespace

RegisterAutomaton build_reduction_ra(const TwoCounterMachine& m, int target) {
  return parse_automaton(reduction_text(m, target, false));
}

RegisterAutomaton build_oneletter_variant(const TwoCounterMachine& m, int target) {
  return parse_automaton(reduction_text(m, target, true));
}

RankedTree word_tree(const std::vector<CmLetter>& word) {
  RankedTree t{"_|_", {}};
  for (const CmLetter& l : word) t = RankedTree{letter_name(l), {std::move(t)}};
  return t;
}

namespace {

bool has_factor(const Term& t, const std::string& var) {
  if (t.is_variable()) return t.name() == var;
  if (t.is_apply() && t.name() == "mul")
    for (const Term& a : t.args())
      if (has_factor(a, var)) return true;
  return false;
}

bool zero(const Value& v) {
  if (const auto* p = std::get_if<Polynomial>(&v)) return p->is_zero();
  return std::get<Rational>(v) == 0;
}

std::string word_text(const std::vector<CmLetter>& word) {
  std::string out;
  for (const CmLetter& l : word) out += (out.empty() ? "" : " ") + letter_name(l);
  return out.empty() ? "(empty word)" : out;
}

}  // namespace

CrossvalidationReport crossvalidate_bounded(const TwoCounterMachine& m, int target, std::size_t max_length,
                                            bool exhaustive) {
  CrossvalidationReport rep;
  RegisterAutomaton ra = build_reduction_ra(m, target);
  if (!exhaustive)
    for (const Rule& r : ra.rules())
      if (!r.children.empty() && !has_factor(r.update[kRegW - 1], arg(kRegW))) {
        rep.ok = false;
        rep.detail = "r_w update of " + r.symbol + " is not a multiple of the previous r_w";
        return rep;
      }
  auto letters = machine_alphabet(m);

  // words of length k+1..L below one prefix
  std::vector<std::size_t> below(max_length + 1, 0);
  for (std::size_t k = max_length; k-- > 0;) below[k] = letters.size() * (1 + below[k + 1]);

  std::vector<CmLetter> word;
  std::function<void(const std::set<Configuration>&)> visit = [&](const std::set<Configuration>& configs) {
    if (!rep.ok) return;
    ++rep.words;
    ++rep.evaluated;
    if (configs.size() != 1) {
      rep.ok = false;
      rep.mismatch = word;
      rep.detail = "expected one configuration after " + word_text(word);
      return;
    }
    const Configuration& conf = *configs.begin();
    const bool witness = !zero(conf.registers[kRegW - 1]);
    auto run = run_word(m, word);
    const bool reaches = run && run->state == target;
    bool output_nonzero = false;
    for (const Value& v : configuration_outputs(ra, configs)) output_nonzero = output_nonzero || !zero(v);
    if (run) ++rep.valid_runs;
    if (reaches) ++rep.reaching_target;
    if (witness != run.has_value() || output_nonzero != reaches) {
      rep.ok = false;
      rep.mismatch = word;
      rep.detail = word_text(word) + ": r_w " + (witness ? "nonzero" : "zero") + ", output " +
                   (output_nonzero ? "nonzero" : "zero") + ", machine run " + (run ? "valid" : "invalid") +
                   (reaches ? " reaching the target" : "");
      return;
    }
    if (word.size() == max_length) return;
    if (!witness && !exhaustive) {
      // Every extension keeps r_w = 0 and extends an invalid run.
      rep.words += below[word.size()];
      return;
    }
    for (const CmLetter& l : letters) {
      word.push_back(l);
      bool saturated = false;
      visit(step_configurations(ra, letter_name(l), {&configs}, 16, &saturated));
      word.pop_back();
      if (!rep.ok) return;
    }
  };
  bool saturated = false;
  visit(step_configurations(ra, "_|_", {}, 16, &saturated));
  return rep;
}

}  // namespace hilbert
