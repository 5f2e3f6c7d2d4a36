// hilbert: run register automata, check zeroness, functionality and
// equivalence, and generate the two-counter-machine reduction automata.
//
// Exit codes: 0 definite verdict (or success), 2 Unknown, 1 usage or I/O error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "hilbert/algebras.hpp"
#include "hilbert/checker.hpp"
#include "hilbert/reductions.hpp"

using namespace hilbert;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RegisterAutomaton load_automaton(const std::string& path) {
  try {
    return parse_automaton(read_file(path));
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

double default_budget() {
  if (const char* env = std::getenv("HILBERT_BUDGET_SECS")) {
    try {
      return std::stod(env);
    } catch (const std::exception&) {
      throw std::runtime_error("HILBERT_BUDGET_SECS is not a number");
    }
  }
  return 60.0;
}

int exit_code(const Verdict& v) { return is_definite(v.outcome) ? 0 : 2; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Register automata over forests and polynomial rings: runs, checks and reductions"};
  app.set_config("--config", "", "Read options from a TOML/INI file");
  app.require_subcommand(1);
  app.fallthrough();

  CheckerConfig config;
  bool machine = false;
  app.add_flag("--machine", machine, "Line-oriented key=value output");

  auto add_budget = [&](CLI::App* sub) {
    sub->add_option("--budget-secs", config.budget_secs, "Wall-clock budget in seconds")->check(CLI::PositiveNumber);
    sub->add_option("--max-steps", config.max_steps, "Step budget")->check(CLI::PositiveNumber);
    sub->add_option("--max-tree-size", config.max_tree_size, "Largest input tree explored")->check(CLI::PositiveNumber);
    sub->add_option("--max-degree", config.max_degree, "Template degree cap")->check(CLI::PositiveNumber);
    sub->add_option("--max-height", config.coefficient_height, "Coefficient grid height")->check(CLI::PositiveNumber);
    sub->add_option("--seed", config.seed, "Seed for sampling");
    sub->add_flag("--deterministic,!--parallel", config.deterministic,
                  "Single-task interleaving (default); --parallel runs both searches on threads");
  };

  auto* run = app.add_subcommand("run", "Evaluate an automaton on an input tree");
  std::string run_automaton, run_tree;
  run->add_option("automaton", run_automaton, "Automaton file")->required();
  run->add_option("tree", run_tree, "Input tree file")->required();

  auto* check = app.add_subcommand("check", "Decide zeroness, functionality or equivalence");
  std::string kind;
  std::vector<std::string> files;
  check->add_option("kind", kind, "zeroness | functionality | equivalence")
      ->required()
      ->check(CLI::IsMember({"zeroness", "functionality", "equivalence"}));
  check->add_option("automata", files, "Automaton file(s)")->required();
  add_budget(check);

  auto* gen = app.add_subcommand("generate", "Build the reduction automaton of a two-counter machine");
  std::string gen_kind, gen_machine, gen_out;
  int target = 0;
  std::size_t crossvalidate = 0;
  gen->add_option("kind", gen_kind, "reduction | oneletter")->required()->check(CLI::IsMember({"reduction", "oneletter"}));
  gen->add_option("machine", gen_machine, "Two-counter machine file")->required();
  gen->add_option("--target", target, "Target state (default: the last state)");
  gen->add_option("-o,--output", gen_out, "Write the automaton here instead of stdout");
  gen->add_option("--crossvalidate", crossvalidate, "Check against the machine on all words up to this length");

  try {
    config.budget_secs = default_budget();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run) {
      RegisterAutomaton m = load_automaton(run_automaton);
      RankedTree t = parse_ordered_tree(read_file(run_tree));
      RunResult r = run_ra(m, t);
      if (r.outputs.empty()) {
        std::cout << (machine ? "outputs=0\n" : "no output\n");
        return 0;
      }
      if (machine) std::cout << "outputs=" << r.outputs.size() << "\n";
      std::size_t i = 0;
      for (const Value& v : r.outputs) {
        std::string text = m.algebra()->value_text(v);
        if (auto p = value_polynomial(v)) text = canonical_text(*p);
        if (machine)
          std::cout << "output" << ++i << "=" << text << "\n";
        else
          std::cout << text << "\n";
      }
      if (r.saturated) std::cout << (machine ? "saturated=1\n" : "note: configuration cap reached\n");
      return 0;
    }

    if (*check) {
      std::size_t expected = kind == "equivalence" ? 2 : 1;
      if (files.size() != expected) {
        std::cerr << "error: check " << kind << " takes " << expected << " automaton file(s)\n";
        return 1;
      }
      RegisterAutomaton m = load_automaton(files[0]);
      Verdict v;
      const Algebra* out_algebra = m.algebra().get();
      AlgebraPtr compiled_algebra;
      if (kind == "zeroness") {
        RegisterAutomaton c = prepare_for_checking(m);
        compiled_algebra = c.algebra();
        out_algebra = compiled_algebra.get();
        v = decide_zeroness(c, config);
        if (c.algebra() != m.algebra())
          v.notes.insert(v.notes.begin(), "checked the " + c.algebra()->name() + " image of the " +
                                              m.algebra()->name() + " automaton");
      } else if (kind == "functionality") {
        v = decide_functionality(m, config);
      } else {
        v = decide_equivalence(m, load_automaton(files[1]), config);
      }
      std::cout << verdict_text(v, *out_algebra, machine);
      return exit_code(v);
    }

    if (*gen) {
      TwoCounterMachine cm = parse_2cm(read_file(gen_machine));
      if (target == 0) target = cm.states();
      RegisterAutomaton ra =
          gen_kind == "reduction" ? build_reduction_ra(cm, target) : build_oneletter_variant(cm, target);
      std::string text = automaton_text(ra);
      if (gen_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(gen_out);
        if (!(out << text)) throw std::runtime_error("cannot write " + gen_out);
      }
      if (crossvalidate) {
        CrossvalidationReport rep = crossvalidate_bounded(cm, target, crossvalidate);
        std::ostream& os = gen_out.empty() ? std::cerr : std::cout;
        if (machine) {
          os << "crossvalidate=" << (rep.ok ? "pass" : "fail") << "\nwords=" << rep.words
             << "\nevaluated=" << rep.evaluated << "\nvalid_runs=" << rep.valid_runs
             << "\nreaching_target=" << rep.reaching_target << "\n";
        } else {
          os << "crossvalidation up to length " << crossvalidate << ": " << (rep.ok ? "pass" : "fail") << " ("
             << rep.words << " words, " << rep.valid_runs << " valid runs, " << rep.reaching_target
             << " reaching state " << target << ")\n";
        }
        if (!rep.ok) {
          os << "mismatch: " << rep.detail << "\n";
          return 1;
        }
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
