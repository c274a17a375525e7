// Determinisation pipeline: optimal ranks, prune/promote normalisation,
// the deterministic pair product, the exact output verifier, and the
// end-to-end entry point with its non-HD refusal.
//
// The central fixture is a four-state instance whose ranks, prune/promote
// sets, and product were derived by hand (see the comments); the tests pin
// those values rather than recomputing them through the code under test.
#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "hdbuchi/determinize.hpp"
#include "hdbuchi/oracles.hpp"
#include "testutil.hpp"

using namespace hdbuchi;
using testutil::fig1;
using testutil::mk;
using testutil::t_acc;
using testutil::t_rej;

namespace {

// States i=q0 (initial), q=q1, x=q2, y=q3 over {a,b}.  The component {x,y}
// is deterministic and accepts exactly the words with infinitely many
// repeated-letter factors (aa or bb); q and i funnel into it, so every state
// has that same language and the automaton is good.  q is strictly worse
// than x as a target (its optimal rank is 1, everyone else's 0): the
// pipeline must prune i-b->q, promote all of q's transitions, and then drop
// the orphaned q at the pass boundary.
ParityAutomaton pipeline_instance() {
  return mk(4, 2,
            {
                {0, 0, 1, 2},  // i a x
                {0, 1, 1, 1},  // i b q
                {0, 1, 1, 2},  // i b x
                {1, 0, 1, 2},  // q a x
                {1, 0, 1, 3},  // q a y
                {1, 1, 1, 3},  // q b y
                {2, 0, 2, 2},  // x a x  (accepting)
                {2, 1, 1, 3},  // x b y
                {3, 0, 1, 2},  // y a x
                {3, 1, 2, 3},  // y b y  (accepting)
            });
}

// The same automaton after one pipeline pass, renumbered i=0, x=1, y=2.
ParityAutomaton pipeline_fixpoint_shape() {
  ParityAutomaton h = mk(3, 2,
                         {
                             {0, 0, 1, 1},
                             {0, 1, 1, 1},
                             {1, 0, 2, 1},
                             {1, 1, 1, 2},
                             {2, 0, 1, 1},
                             {2, 1, 2, 2},
                         });
  h.state_names = {"q0", "q2", "q3"};
  return h;
}

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

}  // namespace

TEST_CASE("optimal ranks on the pipeline instance match the hand derivation",
          "[determinize]") {
  OptRanks r = opt_ranks(pipeline_instance());

  // Same-word-reachable pairs and their ranks, (Eve state, Adam state).
  std::map<std::pair<StateId, StateId>, std::uint64_t> expected = {
      {{0, 0}, 0},  // (i,i): Eve tracks Adam exactly
      {{1, 1}, 1},  // (q,q): Adam commits a->y, fires y-b while Eve sits at x
      {{1, 2}, 1},  // (q,x): Adam fires x-a before Eve can
      {{2, 1}, 0},  // (x,q): Eve fires x-a immediately on a
      {{2, 2}, 0},
      {{2, 3}, 1},  // (x,y): Adam plays b and fires y-b first
      {{3, 2}, 1},  // (y,x): Adam plays a and fires x-a first
      {{3, 3}, 0},
  };
  REQUIRE(r.rank == expected);
  REQUIRE(r.opt == std::vector<std::uint64_t>{0, 1, 0, 0});
}

TEST_CASE("prune and promote apply exactly the derived sets",
          "[determinize]") {
  ParityAutomaton h = pipeline_instance();
  OptRanks r = opt_ranks(h);

  ParityAutomaton pruned = prune_step(h, r);
  // Exactly i-b->q goes (opt 0 -> opt 1); nothing is renumbered.
  REQUIRE(pruned.n_states() == 4);
  REQUIRE(pruned.state_names == h.state_names);
  std::vector<Transition> expect_pruned = h.transitions;
  expect_pruned.erase(
      std::find(expect_pruned.begin(), expect_pruned.end(),
                Transition{0, 1, 1, 1}));
  REQUIRE(pruned.transitions == expect_pruned);

  ParityAutomaton promoted = promote_step(pruned, r);
  // Exactly q's three transitions become accepting (opt 1 -> opt 0).
  REQUIRE(promoted.n_states() == 4);
  REQUIRE(promoted.transitions == std::vector<Transition>{
                                      {0, 0, 1, 2},
                                      {0, 1, 1, 2},
                                      {1, 0, 2, 2},
                                      {1, 0, 2, 3},
                                      {1, 1, 2, 3},
                                      {2, 0, 2, 2},
                                      {2, 1, 1, 3},
                                      {3, 0, 1, 2},
                                      {3, 1, 2, 3},
                                  });
}

TEST_CASE("normalize runs one productive pass on the pipeline instance",
          "[determinize]") {
  ParityAutomaton h = pipeline_instance();
  auto [hstar, trace] = normalize(h);

  REQUIRE(trace.iterations.size() == 2);
  REQUIRE(trace.terminated_at == 1);

  const PipelineIteration& first = trace.iterations[0];
  REQUIRE(first.snapshot == h);
  REQUIRE(first.removed == std::vector<Transition>{{0, 1, 1, 1}});
  REQUIRE(first.promoted == std::vector<Transition>{
                                {1, 0, 1, 2}, {1, 0, 1, 3}, {1, 1, 1, 3}});
  REQUIRE(first.opts == std::vector<std::uint64_t>{0, 1, 0, 0});

  // The pass boundary trims the orphaned q; nothing changes afterwards.
  const PipelineIteration& last = trace.iterations[1];
  REQUIRE(last.snapshot == pipeline_fixpoint_shape());
  REQUIRE(last.removed.empty());
  REQUIRE(last.promoted.empty());
  REQUIRE(last.opts == std::vector<std::uint64_t>{0, 0, 0});

  REQUIRE(hstar == pipeline_fixpoint_shape());
}

TEST_CASE("normalize on a fixpoint is the identity", "[determinize]") {
  ParityAutomaton h = pipeline_fixpoint_shape();
  auto [hstar, trace] = normalize(h);
  REQUIRE(hstar == h);
  REQUIRE(trace.iterations.size() == 1);
  REQUIRE(trace.terminated_at == 0);

  auto [tstar, ttrace] = normalize(t_acc());
  REQUIRE(tstar == t_acc());
  REQUIRE(ttrace.terminated_at == 0);
}

TEST_CASE("pair product on the normalised instance", "[determinize]") {
  ParityAutomaton h = pipeline_fixpoint_shape();
  ParityAutomaton d = build_d(h);

  // Hand construction: (i,i) -a/b-> (x,x); x must re-partner with itself
  // (x does not sprint-simulate i: Adam answers b from i and then fires
  // x-a against Eve stuck at y); y re-partners with i.  Four states total.
  REQUIRE(d.n_states() == 4);
  REQUIRE(is_deterministic(d));
  REQUIRE(is_complete(d));
  REQUIRE(d.is_buchi());

  DetVerification v = verify_determinization(h, d);
  REQUIRE(v.ok);
  REQUIRE(v.reason.empty());
  REQUIRE(!v.counterexample);
  REQUIRE(bounded_lasso_equiv(pipeline_instance(), d, 4, 4).equal);
}

TEST_CASE("end-to-end determinisation of the pipeline instance",
          "[determinize]") {
  ParityAutomaton a = pipeline_instance();
  DeterminizeResult res = determinize_hd(a);
  REQUIRE(is_deterministic(res.automaton));
  REQUIRE(res.automaton.n_states() <= a.n_states() * a.n_states());
  REQUIRE(!res.trace.iterations.empty());
  REQUIRE(verify_determinization(a, res.automaton).ok);
  REQUIRE(bounded_lasso_equiv(a, res.automaton, 4, 4).equal);
}

TEST_CASE("single-state inputs determinise to themselves", "[determinize]") {
  OptRanks r = opt_ranks(t_acc());
  REQUIRE(r.opt == std::vector<std::uint64_t>{0});
  REQUIRE(r.rank ==
          std::map<std::pair<StateId, StateId>, std::uint64_t>{{{0, 0}, 0}});

  ParityAutomaton da = determinize_hd(t_acc()).automaton;
  REQUIRE(da.n_states() == 1);
  REQUIRE(da.transitions == std::vector<Transition>{{0, 0, 2, 0}});

  ParityAutomaton dr = determinize_hd(t_rej()).automaton;
  REQUIRE(dr.n_states() == 1);
  REQUIRE(dr.transitions == std::vector<Transition>{{0, 0, 1, 0}});
}

TEST_CASE("dba copies corpus round-trips through determinisation",
          "[determinize]") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    GenSpec spec;
    spec.kind = GenKind::DbaCopies;
    spec.states = 2 + static_cast<int>(seed % 4);  // 2..5 base states
    spec.alphabet_size = 2;
    spec.copies = 2;
    spec.seed = seed;
    GenResult g = gen(spec);
    CAPTURE(seed);

    DeterminizeResult res = determinize_hd(g.automaton);  // verify=true
    REQUIRE(is_deterministic(res.automaton));
    REQUIRE(res.automaton.n_states() <=
            g.automaton.n_states() * g.automaton.n_states());
    // Against the independent witness DBA, not just the input.
    REQUIRE(bounded_lasso_equiv(res.automaton, *g.witness, 4, 4).equal);
  }
}

TEST_CASE("non-HD input is refused with Adam's Joker certificate",
          "[determinize]") {
  ParityAutomaton bad = commit_automaton();
  bool caught = false;
  try {
    determinize_hd(bad);
  } catch (const NotHdError& e) {
    caught = true;
    REQUIRE(!e.certificate.empty());
    REQUIRE(e.certificate.find("Adam wins the Joker game") !=
            std::string::npos);
    REQUIRE(e.certificate.find("->") != std::string::npos);
  }
  REQUIRE(caught);

  // The refusal must also be catchable as a precondition failure (the CLI's
  // exit-code mapping relies on the subclassing).
  REQUIRE_THROWS_AS(determinize_hd(bad), PreconditionError);

  REQUIRE_THROWS_AS(adam_joker_certificate(t_acc()), PreconditionError);
}

TEST_CASE("verifier refuses malformed outputs", "[determinize]") {
  // Not deterministic.
  ParityAutomaton nondet = mk(1, 1, {{0, 0, 1, 0}, {0, 0, 2, 0}});
  DetVerification v1 = verify_determinization(t_acc(), nondet);
  REQUIRE(!v1.ok);
  REQUIRE(v1.reason == "output is not deterministic");

  // Not Buchi.
  ParityAutomaton wide = mk(1, 1, {{0, 0, 3, 0}}, 1, 3);
  DetVerification v2 = verify_determinization(t_acc(), wide);
  REQUIRE(!v2.ok);
  REQUIRE(v2.reason == "output is not a Buchi automaton");

  // Correct language but one state too many for the quadratic bound.
  ParityAutomaton two = mk(2, 1, {{0, 0, 2, 1}, {1, 0, 2, 0}});
  DetVerification v3 = verify_determinization(t_acc(), two);
  REQUIRE(!v3.ok);
  REQUIRE(v3.reason == "output exceeds the quadratic state bound");

  // Alphabet mismatch.
  ParityAutomaton twoletter = mk(1, 2, {{0, 0, 2, 0}, {0, 1, 2, 0}});
  DetVerification v4 = verify_determinization(t_acc(), twoletter);
  REQUIRE(!v4.ok);
  REQUIRE(v4.reason == "alphabet mismatch");

  REQUIRE_THROWS_AS(verify_determinization(fig1(), t_acc()),
                    PreconditionError);
}

TEST_CASE("verifier rejects over-accepting outputs by simulation",
          "[determinize]") {
  // D accepts everything, H nothing: L(D) escapes L(H).
  DetVerification v = verify_determinization(t_rej(), t_acc());
  REQUIRE(!v.ok);
  REQUIRE(v.reason.find("L(D) is not contained in L(H)") == 0);
  REQUIRE(!v.counterexample);  // this direction reports no lasso
}

TEST_CASE("verifier extracts an escaping lasso", "[determinize]") {
  // H accepts everything, D nothing: the smallest lasso escapes.
  DetVerification v = verify_determinization(t_acc(), t_rej());
  REQUIRE(!v.ok);
  REQUIRE(v.reason == "L(H) is not contained in L(D)");
  REQUIRE(v.counterexample);
  REQUIRE(v.counterexample->spoke.empty());
  REQUIRE(v.counterexample->cycle == std::vector<LetterId>{0});

  // A correct product with all its priorities flattened to rejecting: the
  // verifier must produce a word H accepts and the mutant does not.
  ParityAutomaton h = pipeline_instance();
  ParityAutomaton dmut = determinize_hd(h).automaton;
  for (Transition& t : dmut.transitions) t.priority = 1;
  dmut.canonicalize();
  DetVerification vm = verify_determinization(h, dmut);
  REQUIRE(!vm.ok);
  REQUIRE(vm.reason == "L(H) is not contained in L(D)");
  REQUIRE(vm.counterexample);
  REQUIRE(lasso_accepts(h, *vm.counterexample, h.initial));
  REQUIRE(!lasso_accepts(dmut, *vm.counterexample, dmut.initial));
}

TEST_CASE("pipeline preconditions and integrity checks", "[determinize]") {
  // Non-Buchi inputs are refused up front.
  REQUIRE_THROWS_AS(opt_ranks(fig1()), PreconditionError);
  REQUIRE_THROWS_AS(normalize(fig1()), PreconditionError);
  REQUIRE_THROWS_AS(build_d(fig1()), PreconditionError);
  REQUIRE_THROWS_AS(determinize_hd(fig1()), PreconditionError);

  // Untrimmed input: the unreachable state has no pair to take a rank from.
  ParityAutomaton loose = mk(2, 1, {{0, 0, 2, 0}, {1, 0, 2, 1}});
  REQUIRE_THROWS_AS(opt_ranks(loose), PreconditionError);

  // Non-good input: Adam wins the 1-token game somewhere.
  REQUIRE_THROWS_AS(opt_ranks(commit_automaton()), IntegrityError);
}
