// Command-line front end: load a machine description, then determinize it,
// compare states, run words, print behaviour tables, or check the algebraic
// laws of the built-in monads.
//
// Exit codes: 0 success (accepted / equivalent / laws hold), 1 negative
// result (rejected / distinguished / law violation), 2 verdict only holds up
// to the depth bound, 3 state cap exceeded, 64 usage error, 66 unreadable or
// invalid machine file, 70 internal error.

#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coalg/equivalence.hpp"
#include "coalg/io.hpp"
#include "coalg/traces.hpp"

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

coalg::StateId arg_state(const std::vector<std::string>& names,
                         const std::string& s) {
  for (coalg::StateId i = 0; i < names.size(); ++i)
    if (names[i] == s) return i;
  throw UsageError("unknown state: '" + s + "'");
}

coalg::Word arg_word(const std::string& text,
                     const std::vector<std::string>& letters) {
  try {
    return coalg::parse_word(text, letters);
  } catch (const coalg::ValidationError& e) {
    throw UsageError(e.what());
  }
}

coalg::Stack arg_stack(const std::string& text,
                       const std::vector<std::string>& syms) {
  try {
    return coalg::parse_stack(text, syms);
  } catch (const coalg::ValidationError& e) {
    throw UsageError(e.what());
  }
}

// A start state for the determinized machine. Powerset machines accept a
// set of state names; everything else takes a single state.
coalg::TState arg_root(const coalg::FTCoalgebra& c, const std::string& text) {
  if (c.monad.tag == coalg::MonadTag::Powerset) {
    coalg::PsetState ps;
    try {
      ps.elems = coalg::detail::parse_symbols(text, c.state_names, "state");
    } catch (const coalg::ValidationError& e) {
      throw UsageError(e.what());
    }
    coalg::canonicalize(ps);
    return coalg::TState{std::move(ps)};
  }
  return coalg::unit(c.monad, arg_state(c.state_names, text));
}

int run_det(const coalg::MachineFile& mf, const std::string& root_arg,
            bool all_roots, std::optional<std::size_t> depth,
            std::uint64_t cap, bool dot) {
  coalg::FTCoalgebra c = coalg::machine_coalgebra(mf);
  std::vector<coalg::TState> roots;
  if (all_roots) {
    for (coalg::StateId x = 0; x < c.n_states(); ++x)
      roots.push_back(coalg::unit(c.monad, x));
  } else if (!root_arg.empty()) {
    roots.push_back(arg_root(c, root_arg));
  } else if (const auto* p = std::get_if<coalg::Pda>(&mf.machine)) {
    roots.push_back(coalg::unit(c.monad, p->init_state));
  } else {
    roots.push_back(coalg::unit(c.monad, 0));
  }
  coalg::DetMachine d =
      depth ? coalg::determinize_to_depth(c, std::move(roots), *depth, cap)
            : coalg::determinize(c, std::move(roots), cap);
  coalg::RenderContext ctx = coalg::render_context(mf);
  if (dot) {
    std::cout << coalg::to_dot(d, ctx);
    return 0;
  }
  std::map<coalg::TState, std::size_t> id;
  for (const auto& [ts, e] : d.memo) id.emplace(ts, id.size());
  std::cout << "explored " << d.memo.size() << " states\n";
  for (const auto& [ts, e] : d.memo) {
    std::cout << "[" << id[ts] << "] "
              << coalg::render_tstate(c.monad, ts, ctx)
              << "  out=" << coalg::render_output(e.out, ctx) << "\n";
    for (coalg::Letter a = 0; a < e.next.size(); ++a) {
      auto it = id.find(e.next[a]);
      std::cout << "    " << coalg::detail::named(ctx.letters, a) << " -> ";
      if (it != id.end())
        std::cout << "[" << it->second << "]";
      else
        std::cout << coalg::render_tstate(c.monad, e.next[a], ctx)
                  << " (unexplored)";
      std::cout << "\n";
    }
  }
  return 0;
}

int report_equiv(const coalg::EquivResult& r,
                 const std::vector<std::string>& letters) {
  switch (r.kind) {
    case coalg::EquivResult::Kind::Equivalent:
      std::cout << "equivalent\n";
      return 0;
    case coalg::EquivResult::Kind::Distinguished:
      std::cout << "distinguished by: " << coalg::render_word(r.witness,
                                                              letters)
                << "\n";
      return 1;
    default:
      std::cout << "no difference up to depth " << r.depth << "\n";
      return 2;
  }
}

int run_equiv(const coalg::MachineFile& mf, const std::string& xs,
              const std::string& ys, const std::string& semantics,
              std::size_t depth) {
  if (const auto* l = std::get_if<coalg::Lts>(&mf.machine)) {
    coalg::StateId x = arg_state(l->state_names, xs);
    coalg::StateId y = arg_state(l->state_names, ys);
    coalg::Decoration d = coalg::Decoration::Trace;
    if (semantics == "ctrace") d = coalg::Decoration::CompleteTrace;
    if (semantics == "failure") d = coalg::Decoration::Failure;
    if (semantics == "ready") d = coalg::Decoration::Ready;
    coalg::FTCoalgebra c = coalg::decorate(*l, d);
    if (semantics == "bisim")
      return report_equiv(coalg::ft_bisimilar(c, x, y), c.letter_names);
    return report_equiv(
        coalg::absorbed_equivalent(c, coalg::unit(c.monad, x),
                                   coalg::unit(c.monad, y), depth),
        c.letter_names);
  }
  if (semantics != "bisim" && semantics != "lang")
    throw UsageError("semantics '" + semantics +
                     "' needs a transition system file");
  coalg::FTCoalgebra c = coalg::machine_coalgebra(mf);
  coalg::StateId x = arg_state(c.state_names, xs);
  coalg::StateId y = arg_state(c.state_names, ys);
  if (semantics == "bisim")
    return report_equiv(coalg::ft_bisimilar(c, x, y), c.letter_names);
  return report_equiv(
      coalg::absorbed_equivalent(c, coalg::unit(c.monad, x),
                                 coalg::unit(c.monad, y), depth),
      c.letter_names);
}

int run_accepts(const coalg::MachineFile& mf, const std::string& state_spec,
                const std::string& word) {
  bool accepted = false;
  if (const auto* p = std::get_if<coalg::Pda>(&mf.machine)) {
    coalg::StateId q = state_spec.empty() ? p->init_state
                                          : arg_state(p->control, state_spec);
    accepted = coalg::pda_semantics(*p, q, arg_word(word, p->input),
                                    p->init_stack);
  } else if (const auto* g = std::get_if<coalg::Grammar>(&mf.machine)) {
    coalg::Pda p = coalg::grammar_to_pda(*g);
    coalg::StateId q = state_spec.empty() ? p.init_state
                                          : arg_state(p.control, state_spec);
    accepted = coalg::pda_semantics(p, q, arg_word(word, p.input),
                                    p.init_stack);
  } else if (std::holds_alternative<coalg::Nda>(mf.machine) ||
             std::holds_alternative<coalg::PartialAutomaton>(mf.machine)) {
    coalg::FTCoalgebra c = coalg::machine_coalgebra(mf);
    coalg::TState ts = state_spec.empty() ? coalg::unit(c.monad, 0)
                                          : arg_root(c, state_spec);
    for (coalg::Letter a : arg_word(word, c.letter_names))
      ts = coalg::extend(c, ts).next[a];
    accepted = std::get<coalg::BoolOut>(coalg::extend(c, ts).out.v).value;
  } else {
    throw UsageError("'" + mf.kind + "' machines have no word acceptance");
  }
  std::cout << (accepted ? "accepted" : "rejected") << "\n";
  return accepted ? 0 : 1;
}

int run_behaviour(const coalg::MachineFile& mf, const std::string& state,
                  std::size_t depth, const std::string& semantics) {
  coalg::RenderContext ctx = coalg::render_context(mf);
  coalg::BehaviourTable t;
  if (const auto* l = std::get_if<coalg::Lts>(&mf.machine)) {
    coalg::Decoration d = coalg::Decoration::Trace;
    if (semantics == "ctrace") d = coalg::Decoration::CompleteTrace;
    if (semantics == "failure") d = coalg::Decoration::Failure;
    if (semantics == "ready") d = coalg::Decoration::Ready;
    coalg::StateId x = arg_state(l->state_names, state);
    t = coalg::decorated_semantics(*l, d, {x}, depth);
  } else {
    coalg::FTCoalgebra c = coalg::machine_coalgebra(mf);
    coalg::StateId x = state.empty() ? 0 : arg_state(c.state_names, state);
    t = coalg::behaviour_table(c, coalg::unit(c.monad, x), depth);
  }
  for (const auto& [w, o] : t.entries)
    std::cout << coalg::render_word(w, t.letter_names) << "\t"
              << coalg::render_output(o, ctx) << "\n";
  return 0;
}

int run_mealy(const coalg::MachineFile& mf, const std::string& state,
              const std::string& word) {
  const auto* m = std::get_if<coalg::PartialMealy>(&mf.machine);
  if (!m) throw UsageError("'" + mf.kind + "' is not a mealy machine");
  coalg::StateId x = arg_state(m->states, state);
  auto out = coalg::mealy_output(*m, x, arg_word(word, m->inputs));
  std::cout << coalg::detail::render_symbols(out, m->outputs) << "\n";
  return 0;
}

int run_pda_accept(const coalg::MachineFile& mf, const std::string& word,
                   const std::string& state, const std::string& stack,
                   bool stack_given) {
  coalg::Pda p;
  if (const auto* q = std::get_if<coalg::Pda>(&mf.machine)) {
    p = *q;
  } else if (const auto* g = std::get_if<coalg::Grammar>(&mf.machine)) {
    p = coalg::grammar_to_pda(*g);
  } else {
    throw UsageError("'" + mf.kind + "' is not a pushdown machine");
  }
  coalg::StateId q0 =
      state.empty() ? p.init_state : arg_state(p.control, state);
  coalg::Stack beta =
      stack_given ? arg_stack(stack, p.stack_syms) : p.init_stack;
  bool accepted = coalg::pda_semantics(p, q0, arg_word(word, p.input), beta);
  std::cout << (accepted ? "accepted" : "rejected") << "\n";
  return accepted ? 0 : 1;
}

int run_vw(const coalg::MachineFile& mf, const std::string& state,
           std::size_t depth) {
  const auto* p = std::get_if<coalg::PartialAutomaton>(&mf.machine);
  if (!p) throw UsageError("'" + mf.kind + "' is not a partial automaton");
  coalg::StateId x = arg_state(p->states, state);
  coalg::VwResult r = coalg::pa_vw_semantics(*p, x, depth);
  std::cout << "V:";
  for (const auto& w : r.v) std::cout << " " << coalg::render_word(w, p->letters);
  std::cout << "\nW:";
  for (const auto& w : r.w) std::cout << " " << coalg::render_word(w, p->letters);
  std::cout << "\n";
  return 0;
}

int run_laws(const std::string& which, int samples, std::uint64_t seed) {
  std::vector<coalg::MonadKind> kinds = {
      coalg::powerset_monad(),
      coalg::partiality_monad(),
      coalg::exception_monad({"e0", "e1"}),
      coalg::side_effect_monad({"s0", "s1"}),
      coalg::writer_monad({"o0", "o1"}),
      coalg::distribution_monad(),
      coalg::stack_state_monad({"b0", "b1"}),
  };
  bool matched = false;
  bool all_ok = true;
  for (const auto& m : kinds) {
    if (which != "all" && which != coalg::monad_name(m.tag)) continue;
    matched = true;
    coalg::LawReport rep = coalg::check_monad_laws(m, samples, seed);
    if (rep.ok()) {
      std::cout << coalg::monad_name(m.tag) << ": ok (" << rep.samples
                << " samples)\n";
    } else {
      all_ok = false;
      std::cout << coalg::monad_name(m.tag) << ": FAILED\n";
      for (const auto& v : rep.violations) std::cout << "  " << v << "\n";
    }
  }
  if (!matched) throw UsageError("unknown monad: '" + which + "'");
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generalized determinization of finite structured machines"};
  app.require_subcommand(1);

  std::string path, root_arg, word, xs, ys, state, stack, semantics = "lang";
  std::string monad = "all";
  bool all_roots = false, dot = false;
  std::uint64_t cap = coalg::kDefaultCap;
  std::size_t depth = 1000;
  std::optional<std::size_t> det_depth;
  int samples = 200;
  std::uint64_t seed = 20260815u;
  int rc = 0;

  auto* det = app.add_subcommand("det", "determinize a machine");
  det->add_option("file", path)->required();
  det->add_option("--root", root_arg,
                  "start state (set of states for powerset machines)");
  det->add_flag("--all-roots", all_roots, "start from every state");
  det->add_option("--depth", det_depth, "stop after this many steps");
  det->add_option("--cap", cap, "abort beyond this many explored states");
  det->add_flag("--dot", dot, "print GraphViz instead of a table");
  det->callback([&] { rc = run_det(coalg::load_machine(path), root_arg,
                                   all_roots, det_depth, cap, dot); });

  auto* eq = app.add_subcommand("equiv", "compare two states");
  eq->add_option("file", path)->required();
  eq->add_option("x", xs)->required();
  eq->add_option("y", ys)->required();
  eq->add_option("--semantics", semantics,
                 "bisim, lang, trace, ctrace, failure or ready")
      ->check(CLI::IsMember(
          {"bisim", "lang", "trace", "ctrace", "failure", "ready"}));
  eq->add_option("--depth", depth, "exploration bound for unbounded monads");
  eq->callback(
      [&] { rc = run_equiv(coalg::load_machine(path), xs, ys, semantics,
                           depth); });

  auto* acc = app.add_subcommand("accepts", "run a word");
  acc->add_option("file", path)->required();
  acc->add_option("state", state, "start state, state set or control state")
      ->required();
  acc->add_option("word", word, "input word; empty for the empty word");
  acc->callback(
      [&] { rc = run_accepts(coalg::load_machine(path), state, word); });

  auto* beh = app.add_subcommand("behaviour", "print the observation table");
  beh->add_option("file", path)->required();
  beh->add_option("state", state)->required();
  beh->add_option("--depth", depth, "maximum word length")->default_val(3);
  beh->add_option("--semantics", semantics,
                  "decoration for transition systems")
      ->check(CLI::IsMember({"lang", "trace", "ctrace", "failure", "ready"}));
  beh->callback([&] {
    rc = run_behaviour(coalg::load_machine(path), state, depth, semantics);
  });

  auto* me = app.add_subcommand("mealy", "run a partial mealy machine");
  me->add_option("file", path)->required();
  me->add_option("state", state)->required();
  me->add_option("word", word, "input word; empty for the empty word");
  me->callback([&] { rc = run_mealy(coalg::load_machine(path), state, word); });

  auto* pa = app.add_subcommand("pda-accept",
                                "run a pushdown machine from a configuration");
  pa->add_option("file", path)->required();
  pa->add_option("word", word, "input word; empty for the empty word");
  pa->add_option("--state", state, "control state (default: initial)");
  auto* stack_opt =
      pa->add_option("--stack", stack, "start stack (default: initial)");
  pa->callback([&] {
    rc = run_pda_accept(coalg::load_machine(path), word, state, stack,
                        stack_opt->count() > 0);
  });

  auto* vw = app.add_subcommand("vw", "defined and accepted words");
  vw->add_option("file", path)->required();
  vw->add_option("state", state)->required();
  vw->add_option("--depth", depth, "maximum word length")->default_val(3);
  vw->callback([&] { rc = run_vw(coalg::load_machine(path), state, depth); });

  auto* laws = app.add_subcommand("laws", "check the monad laws by sampling");
  laws->add_option("--monad", monad, "monad name, or 'all'");
  laws->add_option("--samples", samples, "samples per law");
  laws->add_option("--seed", seed, "random seed");
  laws->callback([&] { rc = run_laws(monad, samples, seed); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 64;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 64;
  } catch (const coalg::CapExceededError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const coalg::SyntaxError& e) {
    std::cerr << "error: line " << e.line << ", column " << e.col << ": "
              << e.what() << "\n";
    return 66;
  } catch (const coalg::UnknownStateError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 64;
  } catch (const coalg::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 66;
  } catch (const coalg::FileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 66;
  } catch (const coalg::Error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 70;
  }
  return rc;
}
