// HD analysis: game winners, simulation/sprint tables, semantic determinism,
// goodness, the good subautomaton, the sprint witness, and the fixed-strategy
// verifiers reproducing the paper's [1,3] counterexample.
#include <catch_amalgamated.hpp>

#include <set>
#include <vector>

#include "hdbuchi/analysis.hpp"
#include "hdbuchi/oracles.hpp"
#include "testutil.hpp"

using namespace hdbuchi;
using testutil::fig1;
using testutil::mk;
using testutil::t_acc;
using testutil::t_rej;

namespace {

// The classic complete non-HD Buchi automaton: after the first letter Eve
// must commit to "only a's from now on" (q1) or "only b's" (q2); a rejecting
// sink q3 completes the transition table.  L = a a^w + a b^w.
ParityAutomaton commit_automaton() {
  return mk(4, 2,
            {
                {0, 0, 1, 1},
                {0, 0, 1, 2},
                {0, 1, 1, 3},
                {1, 0, 2, 1},
                {1, 1, 1, 3},
                {2, 0, 1, 3},
                {2, 1, 2, 2},
                {3, 0, 1, 3},
                {3, 1, 1, 3},
            });
}

// Runs F deterministically on u from q; true iff it fires an accepting
// transition at some step (undefined moves end the run without firing).
bool f_fires(const ParityAutomaton& f, StateId q,
             const std::vector<LetterId>& u) {
  Adj adj(f);
  StateId cur = q;
  for (LetterId l : u) {
    auto out = adj.out(cur, l);
    if (out.empty()) return false;
    if (accepting(out[0])) return true;
    cur = out[0].dst;
  }
  return false;
}

// True iff some run from q on u contains an accepting transition (and reads
// all of u).
bool some_run_fires(const ParityAutomaton& a, StateId q,
                    const std::vector<LetterId>& u) {
  Adj adj(a);
  std::set<std::pair<StateId, bool>> front = {{q, false}};
  for (LetterId l : u) {
    std::set<std::pair<StateId, bool>> next;
    for (auto [s, fired] : front)
      for (const Transition& t : adj.out(s, l))
        next.insert({t.dst, fired || accepting(t)});
    front = std::move(next);
  }
  for (auto [s, fired] : front) {
    (void)s;
    if (fired) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("HD verdicts on canned automata") {
  REQUIRE(is_hd_buchi(t_acc()));
  REQUIRE(is_hd_buchi(t_rej()));  // deterministic, hence HD
  ParityAutomaton c = commit_automaton();
  REQUIRE(!is_hd_buchi(c));
  REQUIRE(!eve_wins_g1(c));
  REQUIRE(!eve_wins_k_token(c, 2));
}

TEST_CASE("game winners agree across characterizations on SD corpora") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    GenSpec spec;
    spec.kind = seed % 2 ? GenKind::DbaCopies : GenKind::UniversalSd;
    spec.states = 2 + static_cast<int>(seed % 3);
    spec.alphabet_size = 2;
    spec.copies = 2;
    spec.seed = seed * 7919 + 1;
    GenResult r = gen(spec);
    bool g1 = eve_wins_g1(r.automaton);
    bool joker = eve_wins_joker(r.automaton);
    bool two_token = eve_wins_k_token(r.automaton, 2);
    bool exact = hd_exact_given_dba(r.automaton, *r.witness);
    REQUIRE(g1 == joker);
    REQUIRE(joker == two_token);
    REQUIRE(two_token == exact);
  }
}

TEST_CASE("simulation and sprint tables read off single arena solves") {
  PairTable sim = simulation_table(t_acc(), t_rej());
  REQUIRE(sim(0, 0));  // Adam's run never accepts
  PairTable rev = simulation_table(t_rej(), t_acc());
  REQUIRE(!rev(0, 0));

  REQUIRE(sprint_table(t_acc(), t_rej())(0, 0));
  REQUIRE(!sprint_table(t_rej(), t_acc())(0, 0));
  REQUIRE(sprint_table(t_rej(), t_rej())(0, 0));  // no accepting move at all

  Rng rng(42);
  for (int iter = 0; iter < 10; ++iter) {
    ParityAutomaton a = testutil::random_buchi(rng, 3, 2);
    // Simulation is reflexive; seeing Adam's move first only helps Eve.
    PairTable self = simulation_table(a, a);
    PairTable step = stepahead_table(a, a);
    for (StateId p = 0; p < a.n_states(); ++p) {
      REQUIRE(self(p, p));
      for (StateId q = 0; q < a.n_states(); ++q)
        if (step(p, q)) REQUIRE(self(p, q));
    }
  }
}

TEST_CASE("deterministic automata sprint-simulate themselves everywhere") {
  Rng rng(7);
  for (int iter = 0; iter < 10; ++iter) {
    GenSpec spec;
    spec.kind = GenKind::DbaCopies;
    spec.states = 3;
    spec.copies = 1;  // the identity fan-out: a plain random DBA
    spec.seed = 1000 + iter;
    ParityAutomaton d = gen(spec).automaton;
    REQUIRE(is_deterministic(d));
    PairTable t = sprint_table(d, d);
    for (StateId q = 0; q < d.n_states(); ++q) REQUIRE(t(q, q));
  }
}

TEST_CASE("state equivalence via mutual simulation spots copies") {
  GenSpec spec;
  spec.kind = GenKind::DbaCopies;
  spec.states = 3;
  spec.copies = 2;
  spec.seed = 99;
  ParityAutomaton a = gen(spec).automaton;
  PairTable eq = state_equiv_table(a);
  for (StateId q = 0; q < a.n_states(); ++q) {
    REQUIRE(eq(q, q));
    // Copies sit at q*copies + i; siblings are equivalent.
    StateId base = (q / 2) * 2;
    REQUIRE(eq(base, base + 1));
  }
}

TEST_CASE("semantic determinism verdicts and their exactness flags") {
  SdReport r1 = is_sd(t_acc());
  REQUIRE(r1.sd);
  REQUIRE(r1.exact);

  // All states of a dba_copies instance are HD: exact regime.
  GenSpec spec;
  spec.kind = GenKind::DbaCopies;
  spec.states = 3;
  spec.copies = 2;
  spec.seed = 5;
  SdReport r2 = is_sd(gen(spec).automaton);
  REQUIRE(r2.sd);
  REQUIRE(r2.exact);

  // universal_sd instances are SD but usually not HD: bounded positive.
  GenSpec uspec;
  uspec.kind = GenKind::UniversalSd;
  uspec.states = 3;
  uspec.seed = 17;
  uspec.density_permille = 500;
  ParityAutomaton u = gen(uspec).automaton;
  SdReport r3 = is_sd(u);
  REQUIRE(r3.sd);

  // FIG1 is [1,3]: the Joker regime does not apply, bounded search only.
  SdReport r4 = is_sd(fig1());
  REQUIRE(r4.sd);
  REQUIRE(!r4.exact);

  // The commit automaton's siblings q1, q2 disagree on a^w: exact refusal.
  SdReport r5 = is_sd(commit_automaton());
  REQUIRE(!r5.sd);
  REQUIRE(r5.exact);
}

TEST_CASE("goodness reports") {
  GoodnessReport g1 = check_good(t_acc());
  REQUIRE(g1.is_good);
  REQUIRE(g1.joker_winning_states == std::vector<StateId>{0});

  GoodnessReport g2 = check_good(commit_automaton());
  REQUIRE(!g2.is_good);
  REQUIRE(!g2.all_reachable_hd);

  // SD but not all states HD: universal_sd with several states is usually
  // not even initially HD; is_good must come out false whenever some
  // reachable state loses the Joker game.
  GenSpec uspec;
  uspec.kind = GenKind::UniversalSd;
  uspec.states = 3;
  uspec.seed = 23;
  uspec.density_permille = 700;
  ParityAutomaton u = gen(uspec).automaton;
  GoodnessReport g3 = check_good(u);
  REQUIRE(g3.is_good == (g3.sd.sd && g3.all_reachable_hd));
}

TEST_CASE("make_good keeps exactly Eve's strategy transitions") {
  // t_acc plus a useless rejecting self-loop: the strategy never takes it.
  ParityAutomaton a = mk(1, 1, {{0, 0, 1, 0}, {0, 0, 2, 0}});
  ParityAutomaton g = make_good(a);
  REQUIRE(g.transitions == std::vector<Transition>{{0, 0, 2, 0}});

  REQUIRE_THROWS_AS(make_good(commit_automaton()), PreconditionError);
}

TEST_CASE("make_good outputs are good and language-equal on HD corpora") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    GenSpec spec;
    spec.kind = GenKind::DbaCopies;
    spec.states = 2 + static_cast<int>(seed % 3);
    spec.copies = 2;
    spec.seed = 31 * seed + 2;
    GenResult r = gen(spec);
    if (!is_hd_buchi(r.automaton)) continue;  // dba_copies are always HD
    ParityAutomaton g = make_good(r.automaton);
    REQUIRE(check_good(g).is_good);
    REQUIRE(bounded_lasso_equiv(g, *r.witness, 4, 4).equal);
    REQUIRE(g.n_states() <= r.automaton.n_states());
    REQUIRE(is_complete(g));  // strategy totality makes the result complete
  }
}

TEST_CASE("sprint witness on deterministic automata is the automaton") {
  REQUIRE(sprint_deterministic_witness(t_acc()).f == t_acc());
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    GenSpec spec;
    spec.kind = GenKind::DbaCopies;
    spec.states = 3;
    spec.copies = 1;
    spec.seed = 400 + seed;
    ParityAutomaton d = gen(spec).automaton;
    SprintWitness w = sprint_deterministic_witness(d);
    for (StateId q = 0; q < d.n_states(); ++q) REQUIRE(w.sd_states[q]);
    REQUIRE(w.f == d);
  }
}

TEST_CASE("sprint witness word property on good automata") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GenSpec spec;
    spec.kind = GenKind::DbaCopies;
    spec.states = 2;
    spec.copies = 2;
    spec.seed = 600 + seed;
    ParityAutomaton h = make_good(gen(spec).automaton);
    SprintWitness w = sprint_deterministic_witness(h);
    std::size_t bound = 2 * h.n_states();
    auto words = detail::all_words(h.n_letters(), bound);
    for (StateId q = 0; q < h.n_states(); ++q) {
      if (!w.sd_states[q]) continue;
      for (const auto& u : words)
        if (some_run_fires(h, q, u)) REQUIRE(f_fires(w.f, q, u));
    }
  }
}

TEST_CASE("the Fig. 1 analysis: Eve wins Joker, Adam wins HD") {
  ParityAutomaton a = fig1();
  REQUIRE(verify_fixed_joker_strategy(a, make_switch_strategy(a)));
  REQUIRE(!verify_fixed_joker_strategy(a, make_stay_strategy(a)));

  LetterMap adam = {{0, 0}, {1, 1}};  // p -> a, q -> b
  REQUIRE(verify_adam_letter_strategy(a, adam, true));
  LetterMap bad = {{0, 1}, {1, 0}};  // p -> b lets Eve loop on priority 2
  REQUIRE(!verify_adam_letter_strategy(a, bad, true));
}

TEST_CASE("fixed-strategy verifier validates inputs") {
  ParityAutomaton a = fig1();
  REQUIRE_THROWS_AS(verify_fixed_joker_strategy(a, TransitionStrategy{}),
                    PreconditionError);
  REQUIRE_THROWS_AS(verify_adam_letter_strategy(a, LetterMap{{0, 0}}, true),
                    PreconditionError);
  REQUIRE_THROWS_AS(verify_adam_letter_strategy(a, LetterMap{}, false),
                    PreconditionError);
  // Universality refuted: t_rej accepts nothing.
  REQUIRE_THROWS_AS(verify_adam_letter_strategy(t_rej(), LetterMap{{0, 0}},
                                                true),
                    PreconditionError);
}

TEST_CASE("verifier agrees with the solver on extracted Joker strategies") {
  Rng rng(1234);
  int positives = 0;
  for (int iter = 0; iter < 40; ++iter) {
    ParityAutomaton a = testutil::random_buchi(rng, 2 + iter % 3, 2);
    GameArena g = build_joker(a);
    Solution s = solve_02(g);
    if (!s.eve_wins(g.initial)) continue;
    ++positives;
    TransitionStrategy str;
    for (const auto& [v, eid] : s.eve_strategy) {
      const VertexPayload& pl = g.payload[v];
      if (pl.kind != VKind::LetterV2) continue;
      str[{pl.states[0], *pl.letter, pl.states[1]}] = g.edges[eid].trans;
    }
    REQUIRE(verify_fixed_joker_strategy(a, str));
  }
  REQUIRE(positives > 0);
}

TEST_CASE("lookahead winners at small k") {
  REQUIRE(eve_wins_lookahead(t_acc(), 1));
  REQUIRE(!eve_wins_lookahead(commit_automaton(), 1));
}
