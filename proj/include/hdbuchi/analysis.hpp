// hdbuchi/analysis.hpp -- the HD decision machinery: game winners, simulation
// and sprint tables, semantic determinism, goodness, the good subautomaton,
// the sprint-deterministic witness automaton, and the fixed-strategy
// verifiers used for the [1,3] counterexample analysis.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "hdbuchi/automaton.hpp"
#include "hdbuchi/base.hpp"
#include "hdbuchi/constructions.hpp"
#include "hdbuchi/games.hpp"
#include "hdbuchi/solver.hpp"

namespace hdbuchi {

// ---------------------------------------------------------------------------
// Game winners at the initial position.

inline bool eve_wins_g1(const ParityAutomaton& a) {
  GameArena g = build_g1(a);
  return solve_02(g).eve_wins(g.initial);
}

inline bool eve_wins_joker(const ParityAutomaton& a) {
  GameArena g = build_joker(a);
  return solve_02(g).eve_wins(g.initial);
}

inline bool eve_wins_k_token(const ParityAutomaton& a, unsigned k,
                             std::size_t cap = 1'000'000) {
  GameArena g = build_k_token(a, k, cap);
  return solve_02(g).eve_wins(g.initial);
}

inline bool eve_wins_lookahead(const ParityAutomaton& a, unsigned k,
                               std::size_t state_cap = 1'000'000) {
  GameArena g = build_lookahead(a, k, state_cap);
  return solve_02(g).eve_wins(g.initial);
}

// A Buchi automaton is HD iff Eve wins its Joker game (Buchi-only; the Joker
// criterion fails beyond [1,2]).
inline bool is_hd_buchi(const ParityAutomaton& a) { return eve_wins_joker(a); }

// ---------------------------------------------------------------------------
// All-pairs winner tables: one arena build + solve answers every (p,q) query.

struct PairTable {
  std::size_t n_right = 0;
  std::vector<bool> bits;  // bits[p * n_right + q] = Eve wins from (p,q)
  bool operator()(StateId p, StateId q) const {
    return bits[p * n_right + q];
  }
};

namespace detail {

inline PairTable table_from(const GameArena& g, const Solution& s,
                            std::size_t n_left, std::size_t n_right) {
  PairTable t;
  t.n_right = n_right;
  t.bits.assign(n_left * n_right, false);
  for (const auto& [pair, id] : g.v1_index)
    t.bits[pair.first * n_right + pair.second] = s.eve_wins(id);
  return t;
}

}  // namespace detail

// Eve on `a` simulates Adam on `b` (Adam moves first each round).
inline PairTable simulation_table(const ParityAutomaton& a,
                                  const ParityAutomaton& b) {
  GameArena g = build_simulation(a, b);
  Solution s = solve_02(g);
  return detail::table_from(g, s, a.n_states(), b.n_states());
}

// Step-ahead simulation (Eve moves first each round).
inline PairTable stepahead_table(const ParityAutomaton& a,
                                 const ParityAutomaton& b) {
  GameArena g = build_stepahead(a, b);
  Solution s = solve_02(g);
  return detail::table_from(g, s, a.n_states(), b.n_states());
}

// Sprint simulation: (a,p) sprint-simulates (b,q) iff the table is set.
inline PairTable sprint_table(const ParityAutomaton& a,
                              const ParityAutomaton& b) {
  GameArena g = build_sprint(a, 0, b, 0);
  Solution s = solve_01(g);
  return detail::table_from(g, s, a.n_states(), b.n_states());
}

inline bool sprint_simulates(const ParityAutomaton& a, StateId p, StateId q) {
  return sprint_table(a, a)(p, q);
}

// Mutual simulation within one automaton.  For HD Buchi automata simulation
// coincides with containment, so this decides language equivalence of states.
inline PairTable state_equiv_table(const ParityAutomaton& a) {
  PairTable sim = simulation_table(a, a);
  PairTable eq;
  eq.n_right = a.n_states();
  eq.bits.assign(a.n_states() * a.n_states(), false);
  for (StateId p = 0; p < a.n_states(); ++p)
    for (StateId q = 0; q < a.n_states(); ++q)
      eq.bits[p * eq.n_right + q] = sim(p, q) && sim(q, p);
  return eq;
}

inline bool state_equiv(const ParityAutomaton& a, StateId p, StateId q) {
  return state_equiv_table(a)(p, q);
}

// ---------------------------------------------------------------------------
// Semantic determinism and goodness.

struct SdReport {
  bool sd = false;
  // True when the verdict is exact: either all reachable states are HD (so
  // mutual simulation decides state equivalence), or a concrete refuting
  // lasso was found.  False only on bounded-search positives.
  bool exact = false;
};

namespace detail {

// Siblings q1, q2 behave identically on all lassos within the bound?
inline bool lasso_distinguishes(const ParityAutomaton& a, StateId q1,
                                StateId q2, std::size_t max_u,
                                std::size_t max_v) {
  std::vector<std::vector<LetterId>> words = {{}};
  std::size_t level_begin = 0;
  for (std::size_t len = 1; len <= std::max(max_u, max_v); ++len) {
    std::size_t level_end = words.size();
    for (std::size_t i = level_begin; i < level_end; ++i)
      for (LetterId l = 0; l < a.n_letters(); ++l) {
        auto w = words[i];
        w.push_back(l);
        words.push_back(std::move(w));
      }
    level_begin = level_end;
  }
  for (const auto& u : words) {
    if (u.size() > max_u) continue;
    for (const auto& v : words) {
      if (v.empty() || v.size() > max_v) continue;
      Lasso w{u, v};
      if (lasso_accepts(a, w, q1) != lasso_accepts(a, w, q2)) return true;
    }
  }
  return false;
}

// Shared SD core: every two same-(state,letter) successors of a reachable
// state must be language-equivalent.  In the exact regime the equivalence is
// decided by mutual simulation; otherwise by bounded lasso refutation.
inline SdReport sd_core(const ParityAutomaton& a, bool exact_regime,
                        std::size_t lasso_bound) {
  std::vector<bool> reach = reachable_states(a);
  Adj adj(a);
  std::optional<PairTable> equiv;
  if (exact_regime) equiv = state_equiv_table(a);
  for (StateId p = 0; p < a.n_states(); ++p) {
    if (!reach[p]) continue;
    for (LetterId l = 0; l < a.n_letters(); ++l) {
      std::set<StateId> dsts;
      for (const Transition& t : adj.out(p, l)) dsts.insert(t.dst);
      for (auto i = dsts.begin(); i != dsts.end(); ++i)
        for (auto j = std::next(i); j != dsts.end(); ++j) {
          bool differ = exact_regime
                            ? !(*equiv)(*i, *j)
                            : lasso_distinguishes(a, *i, *j, lasso_bound,
                                                  lasso_bound);
          if (differ) return {false, true};  // refutations are always exact
        }
    }
  }
  return {true, exact_regime};
}

}  // namespace detail

// Semantic determinism of the automaton as handed in (callers trim first).
inline SdReport is_sd(const ParityAutomaton& a, std::size_t lasso_bound = 4) {
  bool exact_regime = false;
  if (a.is_buchi()) {
    GameArena g = build_joker(a);
    Solution s = solve_02(g);
    std::vector<bool> reach = reachable_states(a);
    exact_regime = true;
    for (StateId q = 0; q < a.n_states(); ++q)
      if (reach[q] && !s.eve_wins(g.v1_index.at({q, q}))) {
        exact_regime = false;
        break;
      }
  }
  return detail::sd_core(a, exact_regime, lasso_bound);
}

struct GoodnessReport {
  SdReport sd;
  std::vector<StateId> joker_winning_states;  // reachable q with (q,q) won
  bool all_reachable_hd = false;
  bool is_good = false;
};

// Goodness = semantically deterministic + Eve wins the Joker game from every
// reachable state.  One Joker solve answers both the per-state HD column and
// the SD regime question.
inline GoodnessReport check_good(const ParityAutomaton& a,
                                 std::size_t lasso_bound = 4) {
  GameArena g = build_joker(a);
  Solution s = solve_02(g);
  std::vector<bool> reach = reachable_states(a);
  GoodnessReport rep;
  rep.all_reachable_hd = true;
  for (StateId q = 0; q < a.n_states(); ++q) {
    if (!reach[q]) continue;
    if (s.eve_wins(g.v1_index.at({q, q})))
      rep.joker_winning_states.push_back(q);
    else
      rep.all_reachable_hd = false;
  }
  rep.sd = detail::sd_core(a, rep.all_reachable_hd, lasso_bound);
  rep.is_good = rep.sd.sd && rep.all_reachable_hd;
  return rep;
}

// ---------------------------------------------------------------------------
// The good subautomaton: fix a positional winning Joker strategy for Eve and
// keep exactly the transitions it uses on strategy-reachable positions (Adam
// unconstrained, Jokers included).  On HD inputs the result is good.
inline ParityAutomaton make_good(const ParityAutomaton& a) {
  GameArena g = build_joker(a);
  Solution s = solve_02(g);
  if (!s.eve_wins(g.initial))
    throw PreconditionError("make_good: input is not history-deterministic");

  std::set<std::uint32_t> seen = {g.initial};
  std::vector<std::uint32_t> stack = {g.initial};
  std::set<Transition> kept;
  while (!stack.empty()) {
    std::uint32_t v = stack.back();
    stack.pop_back();
    std::vector<std::uint32_t> eids;
    if (g.owner[v] == Owner::Eve) {
      auto it = s.eve_strategy.find(v);
      if (it == s.eve_strategy.end())
        throw IntegrityError("make_good: no strategy at a reachable position");
      eids = {it->second};
      kept.insert(g.edges[it->second].trans);
    } else {
      eids.assign(g.out[v].begin(), g.out[v].end());
    }
    for (std::uint32_t eid : eids)
      if (seen.insert(g.edges[eid].dst).second)
        stack.push_back(g.edges[eid].dst);
  }

  ParityAutomaton b = a;
  b.transitions.assign(kept.begin(), kept.end());
  b.canonicalize();
  return trim(b);
}

// ---------------------------------------------------------------------------
// Sprint-deterministic witness.  SD-states are those that sprint-simulate
// themselves; for them a single deterministic subautomaton F reaches an
// accepting transition whenever any run can.  F's strategy is extracted from
// the diagonal of the solved step-ahead game on the reachability lift.

struct SprintWitness {
  std::vector<bool> sd_states;  // sprint-deterministic states of H
  ParityAutomaton f;            // deterministic on SD-state moves
};

inline SprintWitness sprint_deterministic_witness(const ParityAutomaton& h) {
  if (!h.is_buchi())
    throw PreconditionError(
        "sprint_deterministic_witness: input must be Buchi");
  SprintWitness w;
  PairTable sprint = sprint_table(h, h);
  w.sd_states.assign(h.n_states(), false);
  for (StateId q = 0; q < h.n_states(); ++q) w.sd_states[q] = sprint(q, q);

  ParityAutomaton hs = reachability_lift(h);
  const StateId f_state = static_cast<StateId>(h.n_states());
  const StateId r_state = f_state + 1;
  GameArena g = build_stepahead(hs, hs);
  Solution s = solve_02(g);

  Adj adj(h);
  w.f = h;
  w.f.transitions.clear();
  for (StateId q = 0; q < h.n_states(); ++q) {
    if (!w.sd_states[q]) continue;
    if (!s.eve_wins(g.v1_index.at({q, q})))
      throw IntegrityError(
          "sprint witness: lift diagonal lost for a sprint-deterministic "
          "state");
    for (LetterId l = 0; l < h.n_letters(); ++l) {
      if (adj.out(q, l).empty()) continue;
      std::uint32_t v2 = g.eve_index.at({q, l, q});
      auto it = s.eve_strategy.find(v2);
      if (it == s.eve_strategy.end())
        throw IntegrityError("sprint witness: no strategy at lift diagonal");
      const Transition& ts = g.edges[it->second].trans;
      if (ts.dst == f_state) {
        // The chosen lift move certifies an accepting (q,l) transition;
        // materialize it as the least accepting transition of H.
        std::optional<Transition> acc;
        for (const Transition& t : adj.out(q, l))
          if (accepting(t)) {
            acc = t;
            break;
          }
        if (!acc)
          throw IntegrityError("sprint witness: phantom accepting move");
        w.f.transitions.push_back(*acc);
      } else if (ts.dst == r_state) {
        throw IntegrityError("sprint witness: strategy takes a # move");
      } else {
        w.f.transitions.push_back({q, l, 1, ts.dst});
      }
    }
  }
  w.f.canonicalize();
  return w;
}

// ---------------------------------------------------------------------------
// Fixed-strategy verifiers (the Fig. 1 analysis).  These work on raw
// transition priorities, so they apply beyond Buchi ([1,3] included).

// Eve's positional Joker strategy: (her state, letter, Adam's state) -> the
// transition she takes.
using TransitionStrategy =
    std::map<std::tuple<StateId, LetterId, StateId>, Transition>;

// "Switch" generalizes the Fig. 1 strategy: move to a different state when
// the tokens differ, self-loop when they coincide; least such transition,
// falling back to the least available one.
inline TransitionStrategy make_switch_strategy(const ParityAutomaton& a) {
  Adj adj(a);
  TransitionStrategy str;
  for (StateId p = 0; p < a.n_states(); ++p)
    for (LetterId l = 0; l < a.n_letters(); ++l) {
      std::vector<Transition> out = adj.out(p, l);
      if (out.empty()) continue;
      for (StateId q = 0; q < a.n_states(); ++q) {
        std::optional<Transition> pick;
        for (const Transition& t : out)
          if (p != q ? t.dst != p : t.dst == p) {
            pick = t;
            break;
          }
        str[{p, l, q}] = pick.value_or(out[0]);
      }
    }
  return str;
}

// "Stay": prefer the least self-loop, falling back to the least transition.
inline TransitionStrategy make_stay_strategy(const ParityAutomaton& a) {
  Adj adj(a);
  TransitionStrategy str;
  for (StateId p = 0; p < a.n_states(); ++p)
    for (LetterId l = 0; l < a.n_letters(); ++l) {
      std::vector<Transition> out = adj.out(p, l);
      if (out.empty()) continue;
      for (StateId q = 0; q < a.n_states(); ++q) {
        std::optional<Transition> pick;
        for (const Transition& t : out)
          if (t.dst == p) {
            pick = t;
            break;
          }
        str[{p, l, q}] = pick.value_or(out[0]);
      }
    }
  return str;
}

// Does Eve's fixed positional strategy win the Joker game?  She loses exactly
// when some strategy-reachable Joker-free cycle gives Adam an accepting run
// (payload max priority even) while hers is rejecting (payload max odd);
// plays with infinitely many Jokers always go to Eve.
inline bool verify_fixed_joker_strategy(const ParityAutomaton& a,
                                        const TransitionStrategy& strategy) {
  GameArena g = build_joker(a, /*allow_any_index=*/true);

  // Restrict Eve to the strategy; keep Adam (letters, moves, Jokers) free.
  std::vector<std::optional<std::uint32_t>> eve_choice(g.n_vertices());
  auto choice_at = [&](std::uint32_t v) -> std::uint32_t {
    const VertexPayload& pl = g.payload[v];
    auto it = strategy.find({pl.states[0], *pl.letter, pl.states[1]});
    if (it == strategy.end())
      throw PreconditionError(
          "verify_fixed_joker_strategy: strategy not total on a reachable "
          "position (" + g.describe(v) + ")");
    for (std::uint32_t eid : g.out[v])
      if (g.edges[eid].has_trans && g.edges[eid].trans == it->second)
        return eid;
    throw PreconditionError(
        "verify_fixed_joker_strategy: strategy transition unavailable at " +
        g.describe(v));
  };

  std::vector<bool> reach(g.n_vertices(), false);
  std::vector<std::uint32_t> stack = {g.initial};
  reach[g.initial] = true;
  while (!stack.empty()) {
    std::uint32_t v = stack.back();
    stack.pop_back();
    std::vector<std::uint32_t> eids;
    if (g.owner[v] == Owner::Eve && g.payload[v].kind == VKind::LetterV2) {
      bool any_move = false;
      for (std::uint32_t eid : g.out[v])
        any_move = any_move || g.edges[eid].has_trans;
      if (!any_move) return false;  // Eve is stuck: Adam steered her off A
      eve_choice[v] = choice_at(v);
      eids = {*eve_choice[v]};
    } else {
      eids.assign(g.out[v].begin(), g.out[v].end());
    }
    for (std::uint32_t eid : eids) {
      std::uint32_t d = g.edges[eid].dst;
      if (!reach[d]) {
        reach[d] = true;
        stack.push_back(d);
      }
    }
  }

  // Enumerate candidate (Adam max, Eve max) pairs and look for a reachable
  // Joker-free cycle realizing them: one SCC pass per pair over the subgraph
  // of payload priorities bounded by (ca, ce).
  for (int ca = a.index_lo; ca <= a.index_hi; ++ca) {
    if (ca % 2 != 0) continue;
    for (int ce = a.index_lo; ce <= a.index_hi; ++ce) {
      if (ce % 2 == 0) continue;
      std::vector<detail::SccEdge> edges;
      std::vector<const GameEdge*> moves;
      for (std::uint32_t v = 0; v < g.n_vertices(); ++v) {
        if (!reach[v]) continue;
        if (g.owner[v] == Owner::Eve && g.payload[v].kind == VKind::LetterV2) {
          const GameEdge& e = g.edges[*eve_choice[v]];
          if (e.trans.priority <= ce && reach[e.dst]) {
            edges.push_back({e.src, e.dst, e.trans.priority});
            moves.push_back(&e);
          }
          continue;
        }
        for (std::uint32_t eid : g.out[v]) {
          const GameEdge& e = g.edges[eid];
          if (!reach[e.dst]) continue;
          if (e.kind == EKind::Joker) continue;  // infinite Jokers favor Eve
          if (e.kind == EKind::AdamMove) {
            if (e.trans.priority <= ca) {
              edges.push_back({e.src, e.dst, e.trans.priority});
              moves.push_back(&e);
            }
          } else if (e.kind == EKind::Letter) {
            edges.push_back({e.src, e.dst, 0});
            moves.push_back(nullptr);
          }
        }
      }
      std::vector<std::uint32_t> comp = detail::scc_ids(g.n_vertices(), edges);
      std::set<std::uint32_t> has_adam_max, has_eve_max;
      for (std::size_t i = 0; i < edges.size(); ++i) {
        if (comp[edges[i].src] != comp[edges[i].dst]) continue;
        if (!moves[i]) continue;
        if (moves[i]->kind == EKind::AdamMove &&
            moves[i]->trans.priority == ca)
          has_adam_max.insert(comp[edges[i].src]);
        if (moves[i]->kind == EKind::EveMove && moves[i]->trans.priority == ce)
          has_eve_max.insert(comp[edges[i].src]);
      }
      for (std::uint32_t c : has_adam_max)
        if (has_eve_max.count(c)) return false;
    }
  }
  return true;
}

// Does Adam's letter strategy (letter chosen by Eve's current state) win the
// HD game, assuming L(A,q) = Sigma^omega on all reachable states?  With the
// letters fixed, Eve's options form a one-player graph; Adam wins iff no
// reachable cycle has an even maximum priority.
inline bool verify_adam_letter_strategy(const ParityAutomaton& a,
                                        const LetterMap& letters,
                                        bool assume_universal) {
  if (!assume_universal)
    throw PreconditionError(
        "verify_adam_letter_strategy: requires the universality claim");
  // The claim is the caller's, but cheap lies are refuted: every reachable
  // state must accept all short lassos.
  std::vector<bool> reach_a = reachable_states(a);
  {
    std::vector<std::vector<LetterId>> words = {{}};
    for (LetterId l = 0; l < a.n_letters(); ++l) words.push_back({l});
    for (LetterId l = 0; l < a.n_letters(); ++l)
      for (LetterId m = 0; m < a.n_letters(); ++m)
        words.push_back({l, m});
    for (StateId q = 0; q < a.n_states(); ++q) {
      if (!reach_a[q]) continue;
      for (const auto& u : words)
        for (const auto& v : words) {
          if (v.empty()) continue;
          if (!lasso_accepts(a, Lasso{u, v}, q))
            throw PreconditionError(
                "verify_adam_letter_strategy: universality claim refuted on "
                "state " + a.state_names[q]);
        }
    }
  }

  Adj adj(a);
  std::vector<bool> reach(a.n_states(), false);
  std::vector<StateId> stack = {a.initial};
  reach[a.initial] = true;
  std::vector<detail::SccEdge> all_edges;
  while (!stack.empty()) {
    StateId p = stack.back();
    stack.pop_back();
    auto it = letters.find(p);
    if (it == letters.end())
      throw PreconditionError(
          "verify_adam_letter_strategy: no letter for reachable state " +
          a.state_names[p]);
    for (const Transition& t : adj.out(p, it->second)) {
      all_edges.push_back({t.src, t.dst, t.priority});
      if (!reach[t.dst]) {
        reach[t.dst] = true;
        stack.push_back(t.dst);
      }
    }
  }

  for (int c = a.index_lo; c <= a.index_hi; ++c) {
    if (c % 2 != 0) continue;
    std::vector<detail::SccEdge> edges;
    for (const auto& e : all_edges)
      if (e.priority <= c) edges.push_back(e);
    std::vector<std::uint32_t> comp = detail::scc_ids(a.n_states(), edges);
    for (const auto& e : edges)
      if (e.priority == c && comp[e.src] == comp[e.dst]) return false;
  }
  return true;
}

}  // namespace hdbuchi
