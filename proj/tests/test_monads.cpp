#include <catch2/catch_amalgamated.hpp>

#include "coalg/monad.hpp"

using namespace coalg;

namespace {

MonadKind all_kinds(int i) {
  switch (i) {
    case 0: return powerset_monad();
    case 1: return partiality_monad();
    case 2: return exception_monad({"e0", "e1"});
    case 3: return side_effect_monad({"s0", "s1"});
    case 4: return writer_monad({"o0", "o1"});
    case 5: return distribution_monad();
    default: return stack_state_monad({"b0", "b1"});
  }
}

}  // namespace

TEST_CASE("unit builds the one-point structure") {
  CHECK(unit(powerset_monad(), 2) == TState{PsetState{{2}}});
  CHECK(unit(partiality_monad(), 2) == TState{PartialState{2}});
  CHECK(unit(exception_monad({"e0"}), 2) == TState{ExcState{false, 2}});
  CHECK(unit(side_effect_monad({"s0", "s1"}), 2) ==
        TState{EffState{{{0, 2}, {1, 2}}}});
  CHECK(unit(writer_monad({"o0"}), 2) == TState{WriterState{{}, 2}});
  CHECK(unit(distribution_monad(), 2) ==
        TState{DistState{{{2, Rational(1)}}}});
  CHECK(unit(stack_state_monad({"b0"}), 2) ==
        TState{StackTable{{StackRule{{}, 2, {}}}}});
}

TEST_CASE("kleisli composition with unit tables is the identity") {
  for (int i = 0; i < 7; ++i) {
    MonadKind m = all_kinds(i);
    detail::LawGen gen(m, 7u + std::uint64_t(i));
    std::vector<TState> ident, g;
    for (StateId x = 0; x < 4; ++x) {
      ident.push_back(unit(m, x));
      g.push_back(gen.random_tstate(4));
    }
    CAPTURE(monad_name(m.tag));
    CHECK(kleisli_compose(m, ident, g) == g);
    CHECK(kleisli_compose(m, g, ident) == g);
  }
}

TEST_CASE("writer composition concatenates the emitted words") {
  MonadKind m = writer_monad({"a", "b"});
  std::vector<TState> f{TState{WriterState{{0}, 0}}};
  std::vector<TState> g{TState{WriterState{{1}, 0}}};
  auto fg = kleisli_compose(m, f, g);
  REQUIRE(fg.size() == 1);
  CHECK(fg[0] == TState{WriterState{{0, 1}, 0}});
}

TEST_CASE("distribution composition multiplies along paths") {
  MonadKind m = distribution_monad();
  // Atoms: x=0, y=1, z=2, u=3, v=4.
  Rational half(1, 2);
  std::vector<TState> f, g;
  for (StateId a = 0; a < 5; ++a) {
    f.push_back(unit(m, a));
    g.push_back(unit(m, a));
  }
  f[0] = TState{DistState{{{1, half}, {2, half}}}};
  g[1] = TState{DistState{{{3, half}, {4, half}}}};
  g[2] = TState{DistState{{{3, half}, {4, half}}}};
  auto fg = kleisli_compose(m, f, g);
  CHECK(fg[0] == TState{DistState{{{3, half}, {4, half}}}});

  // Uneven split: x -> {y: 1/3, z: 2/3}, then y -> u, z -> {u: 1/2, v: 1/2}
  // gives x -> {u: 2/3, v: 1/3}.
  f[0] = TState{DistState{{{1, Rational(1, 3)}, {2, Rational(2, 3)}}}};
  g[1] = unit(m, 3);
  auto fg2 = kleisli_compose(m, f, g);
  CHECK(fg2[0] ==
        TState{DistState{{{3, Rational(2, 3)}, {4, Rational(1, 3)}}}});
}

TEST_CASE("powerset bind unions the successor sets") {
  MonadKind m = powerset_monad();
  TState s{PsetState{{0, 2}}};
  std::vector<TState> f{TState{PsetState{{1}}}, TState{PsetState{{}}},
                        TState{PsetState{{1, 3}}}};
  TState r = bind(m, s, [&](StateId x) -> const TState& { return f[x]; });
  CHECK(r == TState{PsetState{{1, 3}}});
}

TEST_CASE("side effect bind threads the store") {
  MonadKind m = side_effect_monad({"s0", "s1"});
  // t: s0 -> (s1, x0), s1 -> (s0, x1).
  TState t{EffState{{{1, 0}, {0, 1}}}};
  // f(x0): identity store, stays at x0; f(x1): swaps store, goes to x0.
  std::vector<TState> f{TState{EffState{{{0, 0}, {1, 0}}}},
                        TState{EffState{{{1, 0}, {0, 0}}}}};
  TState r = bind(m, t, [&](StateId x) -> const TState& { return f[x]; });
  // From s0: t goes to s1 with x0, then f(x0) leaves s1 alone.
  // From s1: t goes to s0 with x1, then f(x1) swaps s0 to s1.
  CHECK(r == TState{EffState{{{1, 0}, {1, 0}}}});
}

TEST_CASE("stack table bind composes rewriting clauses") {
  MonadKind m = stack_state_monad({"s", "x"});
  StackSym s = 0, x = 1;
  // Outer clause: on stack s..., go to atom 0 and push x over the rest.
  TState outer{StackTable{{StackRule{{s}, 0, {x}}}}};

  SECTION("inner clause consumes the pushed material") {
    // Inner: on stack x..., go to atom 1, pop the x.
    std::vector<TState> f{TState{StackTable{{StackRule{{x}, 1, {}}}}}};
    TState r = bind(m, outer, [&](StateId a) -> const TState& { return f[a]; });
    CHECK(r == TState{StackTable{{StackRule{{s}, 1, {}}}}});
  }

  SECTION("inner clause reaches below the pushed material") {
    // Inner: on stack x s ..., go to atom 1, replace both by x.
    std::vector<TState> f{TState{StackTable{{StackRule{{x, s}, 1, {x}}}}}};
    TState r = bind(m, outer, [&](StateId a) -> const TState& { return f[a]; });
    // Outer needs s on top, inner then needs an s below it.
    CHECK(r == TState{StackTable{{StackRule{{s, s}, 1, {x}}}}});
  }

  SECTION("incomparable stacks contribute nothing") {
    // Inner only fires on stack s..., but the outer clause pushed an x.
    std::vector<TState> f{TState{StackTable{{StackRule{{s}, 1, {s}}}}}};
    TState r = bind(m, outer, [&](StateId a) -> const TState& { return f[a]; });
    CHECK(r == TState{StackTable{}});
  }
}

TEST_CASE("output collapse per monad") {
  SECTION("powerset joins by disjunction, empty set is false") {
    MonadKind m = powerset_monad();
    std::vector<OutputValue> outs{{BoolOut{false}}, {BoolOut{true}}};
    OutputValue shape{BoolOut{}};
    CHECK(algebra_combine(m, TState{PsetState{{0, 1}}}, outs, shape) ==
          OutputValue{BoolOut{true}});
    CHECK(algebra_combine(m, TState{PsetState{{0}}}, outs, shape) ==
          OutputValue{BoolOut{false}});
    CHECK(algebra_combine(m, TState{PsetState{{}}}, outs, shape) ==
          OutputValue{BoolOut{false}});
  }

  SECTION("partiality sends bottom to false") {
    MonadKind m = partiality_monad();
    std::vector<OutputValue> outs{{BoolOut{true}}};
    OutputValue shape{BoolOut{}};
    CHECK(algebra_combine(m, TState{PartialState{0}}, outs, shape) ==
          OutputValue{BoolOut{true}});
    CHECK(algebra_combine(m, TState{PartialState{}}, outs, shape) ==
          OutputValue{BoolOut{false}});
  }

  SECTION("exception states pass their label through") {
    MonadKind m = exception_monad({"e0", "e1"});
    std::vector<OutputValue> outs{{TaggedOut{false, 7}}};
    OutputValue shape{TaggedOut{}};
    CHECK(algebra_combine(m, TState{ExcState{false, 0}}, outs, shape) ==
          OutputValue{TaggedOut{false, 7}});
    CHECK(algebra_combine(m, TState{ExcState{true, 1}}, outs, shape) ==
          OutputValue{TaggedOut{true, 1}});
  }

  SECTION("side effect collapse composes the store transformers") {
    MonadKind m = side_effect_monad({"s0", "s1"});
    TState t{EffState{{{1, 0}, {0, 1}}}};
    std::vector<OutputValue> outs{{EffectOut{{{0, 1}, {1, 0}}}},
                                  {EffectOut{{{0, 0}, {1, 1}}}}};
    OutputValue shape{EffectOut{{{0, 0}, {1, 0}}}};
    // From s0: t reaches (s1, x0), then outs[x0] at s1 gives (s1, 0).
    // From s1: t reaches (s0, x1), then outs[x1] at s0 gives (s0, 0).
    CHECK(algebra_combine(m, t, outs, shape) ==
          OutputValue{EffectOut{{{1, 0}, {0, 0}}}});
  }

  SECTION("writer collapse prepends the emitted word") {
    MonadKind m = writer_monad({"o0", "o1"});
    TState t{WriterState{{0}, 0}};
    std::vector<OutputValue> outs{{WriterOut{{1}, 5}}};
    OutputValue shape{WriterOut{}};
    CHECK(algebra_combine(m, t, outs, shape) ==
          OutputValue{WriterOut{{0, 1}, 5}});
  }

  SECTION("distribution collapse is the expected value") {
    MonadKind m = distribution_monad();
    TState t{DistState{{{0, Rational(1, 2)}, {1, Rational(1, 2)}}}};
    std::vector<OutputValue> outs{{RationalOut{Rational(1)}},
                                  {RationalOut{Rational(0)}}};
    OutputValue shape{RationalOut{Rational(0)}};
    CHECK(algebra_combine(m, t, outs, shape) ==
          OutputValue{RationalOut{Rational(1, 2)}});
  }

  SECTION("stack predicate collapse rewrites through the clauses") {
    MonadKind m = stack_state_monad({"s", "x"});
    StackSym s = 0, x = 1;
    std::vector<OutputValue> outs{{StackPredicate{{{x}}, {}}},
                                  {StackPredicate{{}, {{x}}}}};
    OutputValue shape{StackPredicate{}};
    // Clause (s, q0, x): holds exactly when the rewritten stack is x, so the
    // input stack must be exactly s.
    TState t0{StackTable{{StackRule{{s}, 0, {x}}}}};
    CHECK(algebra_combine(m, t0, outs, shape) ==
          OutputValue{StackPredicate{{{s}}, {}}});
    // Same clause against the cone x...: every input starting with s works.
    TState t1{StackTable{{StackRule{{s}, 1, {x}}}}};
    CHECK(algebra_combine(m, t1, outs, shape) ==
          OutputValue{StackPredicate{{}, {{s}}}});
    // The empty table never observes anything.
    CHECK(algebra_combine(m, TState{StackTable{}}, outs, shape) ==
          OutputValue{StackPredicate{}});
  }
}

TEST_CASE("canonical forms") {
  SECTION("state sets are sorted and deduplicated") {
    PsetState p{{2, 0, 1, 1}};
    canonicalize(p);
    CHECK(p.elems == std::vector<StateId>{0, 1, 2});
  }

  SECTION("distributions merge duplicates and drop zeros") {
    DistState d{{{1, Rational(1, 4)},
                 {0, Rational(1, 2)},
                 {1, Rational(1, 4)},
                 {2, Rational(0)}}};
    canonicalize(d);
    CHECK(d == DistState{{{0, Rational(1, 2)}, {1, Rational(1, 2)}}});
  }

  SECTION("distributions with a bad total are rejected") {
    DistState d{{{0, Rational(1, 2)}}};
    CHECK_THROWS_AS(canonicalize(d), InvariantViolation);
    DistState neg{{{0, Rational(3, 2)}, {1, Rational(-1, 2)}}};
    CHECK_THROWS_AS(canonicalize(neg), InvariantViolation);
  }

  SECTION("stack tables drop clauses implied by shorter patterns") {
    StackSym b = 0, x = 1;
    StackTable t{{StackRule{{}, 0, {x}}, StackRule{{b}, 0, {x, b}}}};
    canonicalize(t);
    CHECK(t == StackTable{{StackRule{{}, 0, {x}}}});
  }

  SECTION("stack predicates fold complete fans into their root") {
    StackPredicate p{{{}}, {{0}, {1}}};
    canonicalize(p, 2);
    CHECK(p == StackPredicate{{}, {Stack{}}});
  }

  SECTION("stack predicates keep incomplete fans apart") {
    StackPredicate p{{{}}, {{0}}};
    canonicalize(p, 2);
    CHECK(p == StackPredicate{{Stack{}}, {{0}}});
  }

  SECTION("canonicalize is idempotent on random structures") {
    for (int i = 0; i < 7; ++i) {
      MonadKind m = all_kinds(i);
      detail::LawGen gen(m, 100u + std::uint64_t(i));
      for (int k = 0; k < 200; ++k) {
        TState ts = gen.random_tstate(4);
        TState once = ts;
        canonicalize(m, once);
        TState twice = once;
        canonicalize(m, twice);
        CAPTURE(monad_name(m.tag), k);
        CHECK(once == twice);
      }
    }
  }
}

TEST_CASE("t-state validation rejects malformed payloads") {
  CHECK_THROWS_AS(
      validate_tstate(powerset_monad(), 3, TState{PsetState{{1, 0}}}),
      InvariantViolation);
  CHECK_THROWS_AS(
      validate_tstate(powerset_monad(), 3, TState{PsetState{{3}}}),
      InvariantViolation);
  CHECK_THROWS_AS(
      validate_tstate(partiality_monad(), 3, TState{PsetState{{0}}}),
      InvariantViolation);
  CHECK_THROWS_AS(validate_tstate(exception_monad({"e0"}), 3,
                                  TState{ExcState{true, 1}}),
                  InvariantViolation);
  CHECK_THROWS_AS(validate_tstate(side_effect_monad({"s0", "s1"}), 3,
                                  TState{EffState{{{0, 0}}}}),
                  InvariantViolation);
  CHECK_THROWS_AS(validate_tstate(writer_monad({"o0"}), 3,
                                  TState{WriterState{{1}, 0}}),
                  InvariantViolation);
  CHECK_THROWS_AS(
      validate_tstate(distribution_monad(), 3,
                      TState{DistState{{{0, Rational(1, 2)}}}}),
      InvariantViolation);
  CHECK_THROWS_AS(validate_tstate(stack_state_monad({"b0"}), 3,
                                  TState{StackTable{{StackRule{{1}, 0, {}}}}}),
                  InvariantViolation);
  CHECK_NOTHROW(
      validate_tstate(powerset_monad(), 3, TState{PsetState{{0, 2}}}));
}

TEST_CASE("law suite passes for every monad") {
  for (int i = 0; i < 7; ++i) {
    MonadKind m = all_kinds(i);
    LawReport r = check_monad_laws(m, 120);
    CAPTURE(monad_name(m.tag), r.violations);
    CHECK(r.samples == 120);
    CHECK(r.ok());
  }
}
