// Oracles and corpus generators: reproducibility, the promised structural
// properties of each family, witness soundness, bounded lasso equivalence,
// and the brute-force game solver's guard rails.
#include <catch_amalgamated.hpp>

#include <vector>

#include "hdbuchi/analysis.hpp"
#include "hdbuchi/constructions.hpp"
#include "hdbuchi/oracles.hpp"
#include "testutil.hpp"

using namespace hdbuchi;
using testutil::fig1;
using testutil::mk;
using testutil::random_arena;
using testutil::t_acc;
using testutil::t_rej;

TEST_CASE("generation is a pure function of the spec", "[oracles]") {
  for (GenKind kind :
       {GenKind::UniversalSd, GenKind::DbaCopies, GenKind::RawRandom}) {
    GenSpec spec;
    spec.kind = kind;
    spec.states = 4;
    spec.alphabet_size = 2;
    spec.seed = 17;
    GenResult first = gen(spec);
    GenResult second = gen(spec);
    REQUIRE(first.automaton == second.automaton);
    REQUIRE(first.witness == second.witness);

    spec.seed = 18;
    REQUIRE(gen(spec).automaton != first.automaton);
  }
}

TEST_CASE("universal family delivers universal SD automata", "[oracles]") {
  GenSpec spec;
  spec.kind = GenKind::UniversalSd;

  SECTION("smallest instance shape") {
    spec.states = 1;
    spec.alphabet_size = 1;
    spec.density_permille = 1;  // rejecting extras almost surely absent
    spec.seed = 5;
    GenResult g = gen(spec);
    REQUIRE(g.automaton.n_states() == 1);
    REQUIRE(!g.automaton.transitions.empty());
    REQUIRE(g.automaton.transitions[0] == Transition{0, 0, 2, 0});
    REQUIRE(g.witness);
    REQUIRE(g.witness->n_states() == 1);
    REQUIRE(is_deterministic(*g.witness));
  }

  SECTION("every instance is complete, SD, and equivalent to its witness") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      spec.states = 2 + static_cast<int>(seed % 3);
      spec.alphabet_size = 2;
      spec.seed = seed;
      GenResult g = gen(spec);
      CAPTURE(seed);
      REQUIRE(is_complete(g.automaton));
      REQUIRE(is_sd(g.automaton).sd);
      REQUIRE(bounded_lasso_equiv(g.automaton, *g.witness, 3, 3).equal);
    }
  }
}

TEST_CASE("dba copies family is SD with the base DBA's language",
          "[oracles]") {
  GenSpec spec;
  spec.kind = GenKind::DbaCopies;
  spec.alphabet_size = 2;
  spec.copies = 2;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    spec.states = 2 + static_cast<int>(seed % 3);
    spec.seed = seed;
    GenResult g = gen(spec);
    CAPTURE(seed);
    REQUIRE(g.automaton.n_states() ==
            static_cast<std::size_t>(spec.states) * 2);
    REQUIRE(is_complete(g.automaton));
    REQUIRE(g.witness);
    REQUIRE(is_deterministic(*g.witness));
    REQUIRE(is_complete(*g.witness));
    REQUIRE(is_sd(g.automaton).sd);
    REQUIRE(bounded_lasso_equiv(g.automaton, *g.witness, 4, 4).equal);
  }
}

TEST_CASE("witness-based HD decision agrees with the Joker game",
          "[oracles]") {
  // On families that ship a deterministic witness the two HD decision
  // procedures share no arena, so agreement is a real cross-check.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GenSpec spec;
    spec.kind = seed % 2 ? GenKind::UniversalSd : GenKind::DbaCopies;
    spec.states = 2 + static_cast<int>(seed % 3);
    spec.alphabet_size = 2;
    spec.seed = seed;
    GenResult g = gen(spec);
    CAPTURE(seed);
    REQUIRE(hd_exact_given_dba(g.automaton, *g.witness) ==
            is_hd_buchi(g.automaton));
  }

  // A non-HD automaton with a correct witness must be refuted.  The commit
  // automaton's language a(a^w + b^w) needs the second letter to settle the
  // commitment, hence the 5-state DBA: start, "one a read", the two
  // committed loops, and a rejecting sink.
  ParityAutomaton commit = mk(4, 2,
                              {{0, 0, 1, 1},
                               {0, 0, 1, 2},
                               {0, 1, 1, 3},
                               {1, 0, 2, 1},
                               {1, 1, 1, 3},
                               {2, 0, 1, 3},
                               {2, 1, 2, 2},
                               {3, 0, 1, 3},
                               {3, 1, 1, 3}});
  ParityAutomaton witness = mk(5, 2,
                               {{0, 0, 1, 1},
                                {0, 1, 1, 4},
                                {1, 0, 1, 2},
                                {1, 1, 1, 3},
                                {2, 0, 2, 2},
                                {2, 1, 1, 4},
                                {3, 0, 1, 4},
                                {3, 1, 2, 3},
                                {4, 0, 1, 4},
                                {4, 1, 1, 4}});
  REQUIRE(bounded_lasso_equiv(commit, witness, 4, 4).equal);
  REQUIRE(!hd_exact_given_dba(commit, witness));
  REQUIRE(hd_exact_given_dba(witness, witness));  // deterministic: HD

  // Witness validation: nondeterministic, then deterministic non-Buchi.
  REQUIRE_THROWS_AS(hd_exact_given_dba(t_acc(), commit), PreconditionError);
  REQUIRE_THROWS_AS(hd_exact_given_dba(t_acc(), mk(1, 1, {{0, 0, 3, 0}}, 1, 3)),
                    PreconditionError);
}

TEST_CASE("bounded lasso equivalence finds the smallest refutation",
          "[oracles]") {
  LassoEquivResult r = bounded_lasso_equiv(t_acc(), t_rej(), 2, 2);
  REQUIRE(!r.equal);
  REQUIRE(r.counterexample);
  REQUIRE(r.counterexample->spoke.empty());
  REQUIRE(r.counterexample->cycle == std::vector<LetterId>{0});

  REQUIRE(bounded_lasso_equiv(t_acc(), t_acc(), 3, 3).equal);

  // The delayed automaton keeps the language; bounded equivalence agrees.
  ParityAutomaton f = fig1();
  REQUIRE(bounded_lasso_equiv(f, delay(f), 4, 4).equal);

  // Distinct languages that agree on short lassos stay "equal" within the
  // bound: refutation-completeness holds only up to the bound.
  REQUIRE_THROWS_AS(bounded_lasso_equiv(t_acc(), fig1(), 2, 2),
                    PreconditionError);  // alphabet mismatch is refused
}

TEST_CASE("brute-force winner agrees with the production solvers",
          "[oracles]") {
  Rng rng(99);
  int checked = 0;
  for (int i = 0; i < 40; ++i) {
    GameArena g = random_arena(rng, 4 + static_cast<int>(rng.below(20)), 3,
                               /*max_priority=*/2);
    Solution s = solve_02(g);
    CAPTURE(i);
    REQUIRE(brute_force_02_winner(g) ==
            (s.eve_wins(g.initial) ? Owner::Eve : Owner::Adam));
    ++checked;
  }
  REQUIRE(checked == 40);
}

TEST_CASE("brute-force solver enforces its guard rails", "[oracles]") {
  Rng rng(7);
  GameArena big = random_arena(rng, 61, 3, 2);
  REQUIRE_THROWS_AS(brute_force_02_winner(big), ResourceError);
  GameArena small = random_arena(rng, 10, 3, 2);
  REQUIRE_NOTHROW(brute_force_02_winner(small, 10));

  GameArena bad = random_arena(rng, 6, 3, 2);
  bad.edges[0].priority = 3;
  REQUIRE_THROWS_AS(brute_force_02_winner(bad), PreconditionError);
}

TEST_CASE("generator specs are validated", "[oracles]") {
  GenSpec spec;
  spec.states = 0;
  REQUIRE_THROWS_AS(gen(spec), PreconditionError);
  spec = GenSpec{};
  spec.density_permille = 0;
  REQUIRE_THROWS_AS(gen(spec), PreconditionError);
  spec = GenSpec{};
  spec.accept_permille = 1001;
  REQUIRE_THROWS_AS(gen(spec), PreconditionError);
  spec = GenSpec{};
  spec.kind = GenKind::DbaCopies;
  spec.copies = 0;
  REQUIRE_THROWS_AS(gen(spec), PreconditionError);
}
