// hdbuchi/determinize.hpp -- the determinisation pipeline: optimal ranks on
// the 1-token game, the prune/promote iteration towards a sprint
// self-simulation, the pair-product deterministic automaton, and the exact
// output verifier.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hdbuchi/analysis.hpp"
#include "hdbuchi/automaton.hpp"
#include "hdbuchi/base.hpp"
#include "hdbuchi/games.hpp"
#include "hdbuchi/solver.hpp"

namespace hdbuchi {

// Refusal to determinize a non-HD input.  A PreconditionError at heart, but
// callers (the CLI) report it as a negative verdict rather than bad usage,
// and it carries Adam's Joker-game strategy as the certificate.
struct NotHdError : PreconditionError {
  std::string certificate;
  NotHdError(const std::string& m, std::string cert)
      : PreconditionError(m), certificate(std::move(cert)) {}
};

// Renders Adam's positional winning strategy in the Joker game, restricted to
// the vertices his strategy can actually reach from the initial position.
// Precondition: Adam wins (the input is not HD).
inline std::string adam_joker_certificate(const ParityAutomaton& a) {
  GameArena g = build_joker(a);
  Solution s = solve_02(g);
  if (s.eve_wins(g.initial))
    throw PreconditionError(
        "adam_joker_certificate: Eve wins the Joker game; no certificate");
  AdamCertificate cert = adam_strategy_02(g, s);

  // Adam's region is closed under Eve's moves, so following his strategy
  // edges and all of Eve's edges stays inside it.
  std::vector<bool> seen(g.n_vertices(), false);
  std::vector<std::uint32_t> stack = {g.initial};
  seen[g.initial] = true;
  while (!stack.empty()) {
    std::uint32_t v = stack.back();
    stack.pop_back();
    std::vector<std::uint32_t> eids;
    if (auto it = cert.adam_strategy.find(v); it != cert.adam_strategy.end())
      eids = {it->second};
    else
      eids.assign(g.out[v].begin(), g.out[v].end());
    for (std::uint32_t eid : eids) {
      std::uint32_t w = g.edges[eid].dst;
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }

  std::ostringstream out;
  out << "Adam wins the Joker game from " << g.describe(g.initial)
      << "; his positional strategy on the reachable region:\n";
  for (std::uint32_t v = 0; v < g.n_vertices(); ++v) {
    if (!seen[v]) continue;
    auto it = cert.adam_strategy.find(v);
    if (it == cert.adam_strategy.end()) continue;
    const GameEdge& e = g.edges[it->second];
    out << "  " << g.describe(v) << " -> " << g.describe(e.dst)
        << (e.kind == EKind::Joker ? "  (joker)" : "") << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Optimal ranks.  rank(q,p) is the largest number of Adam-accepting
// transitions Adam can force before Eve's first accepting one in the 1-token
// game, starting from the same-word-reachable pair (q,p); opt(q) minimizes
// over the partners p.

struct OptRanks {
  std::map<std::pair<StateId, StateId>, std::uint64_t> rank;
  std::vector<std::uint64_t> opt;
};

inline OptRanks opt_ranks(const ParityAutomaton& h) {
  if (!h.is_buchi())
    throw PreconditionError("opt_ranks: input must be Buchi [1,2]");
  GameArena g = build_g1(h);
  Solution s = solve_02(g);
  OptRanks r;
  const std::uint64_t none = ~std::uint64_t{0};
  r.opt.assign(h.n_states(), none);
  for (const auto& [pair, id] : g.v1_index) {
    const std::optional<std::uint64_t>& rk = s.rank[id];
    if (!rk)
      throw IntegrityError("opt_ranks: Adam wins the 1-token game from (" +
                           h.state_names[pair.first] + "," +
                           h.state_names[pair.second] +
                           "); the input is not good");
    r.rank[pair] = *rk;
    r.opt[pair.first] = std::min(r.opt[pair.first], *rk);
  }
  for (StateId q = 0; q < h.n_states(); ++q)
    if (r.opt[q] == none)
      throw PreconditionError("opt_ranks: state " + h.state_names[q] +
                              " has no reachable pair (input not trimmed?)");
  return r;
}

namespace detail {

// Rejecting transitions into a strictly better-ranked state are never useful:
// they form the prune set.  Rejecting transitions into a strictly worse
// ranked state witness progress and form the promote set.  The conditions are
// disjoint, so pruning first does not change what gets promoted.
inline std::vector<Transition> prune_set(const ParityAutomaton& h,
                                         const OptRanks& r) {
  std::vector<Transition> out;
  for (const Transition& t : h.transitions)
    if (t.priority == 1 && r.opt.at(t.src) < r.opt.at(t.dst))
      out.push_back(t);
  return out;
}

inline std::vector<Transition> promote_set(const ParityAutomaton& h,
                                           const OptRanks& r) {
  std::vector<Transition> out;
  for (const Transition& t : h.transitions)
    if (t.priority == 1 && r.opt.at(t.src) > r.opt.at(t.dst))
      out.push_back(t);
  return out;
}

}  // namespace detail

// Removes exactly the rejecting transitions whose optimal rank strictly
// increases.  States are kept even if this orphans them, so that the promote
// step can read the same iteration's ranks against unchanged state indices;
// the normalisation loop re-trims at every pass boundary.
inline ParityAutomaton prune_step(const ParityAutomaton& h,
                                  const OptRanks& r) {
  std::vector<Transition> doomed_v = detail::prune_set(h, r);
  std::set<Transition> doomed(doomed_v.begin(), doomed_v.end());
  ParityAutomaton out = h;
  out.transitions.clear();
  for (const Transition& t : h.transitions)
    if (!doomed.count(t)) out.transitions.push_back(t);
  out.canonicalize();
  return out;
}

// Makes accepting exactly the rejecting transitions whose optimal rank
// strictly decreases, using the ranks from the same iteration as the prune.
inline ParityAutomaton promote_step(const ParityAutomaton& hp,
                                    const OptRanks& r) {
  std::vector<Transition> up_v = detail::promote_set(hp, r);
  std::set<Transition> up(up_v.begin(), up_v.end());
  ParityAutomaton out = hp;
  for (Transition& t : out.transitions)
    if (up.count(t)) t.priority = 2;
  out.canonicalize();
  return out;
}

// ---------------------------------------------------------------------------
// The normalisation loop.

struct PipelineIteration {
  ParityAutomaton snapshot;          // H_i, trimmed
  std::vector<Transition> removed;   // pruned this pass (H_i coordinates)
  std::vector<Transition> promoted;  // promoted this pass, pre-promotion form
  std::vector<std::uint64_t> opts;   // opt per snapshot state
};

struct PipelineTrace {
  std::vector<PipelineIteration> iterations;  // last entry is the fixpoint
  std::size_t terminated_at = 0;              // number of productive passes
};

namespace detail {

inline bool mutually_simulates(const ParityAutomaton& a,
                               const ParityAutomaton& b) {
  GameArena g1 = build_simulation(a, b);
  GameArena g2 = build_simulation(b, a);
  return solve_02(g1).eve_wins(g1.initial) && solve_02(g2).eve_wins(g2.initial);
}

}  // namespace detail

// Iterates (rank, prune, promote) to a fixpoint.  Every productive pass
// strictly shrinks the set of rejecting transitions, so at most as many
// passes run as the trimmed input has transitions.  Each pass must preserve
// the language (checked by mutual simulation, exact on these inputs), and
// the fixpoint must give every state a language-equivalent state that it
// sprint-simulates; violations abort rather than degrade.
inline std::pair<ParityAutomaton, PipelineTrace> normalize(
    const ParityAutomaton& h) {
  if (!h.is_buchi())
    throw PreconditionError("normalize: input must be Buchi [1,2]");
  ParityAutomaton cur = trim(h);
  const std::size_t delta0 = cur.transitions.size();
  PipelineTrace trace;
  for (;;) {
    OptRanks r = opt_ranks(cur);
    ParityAutomaton pruned = prune_step(cur, r);
    PipelineIteration it;
    it.snapshot = cur;
    it.removed = detail::prune_set(cur, r);
    it.promoted = detail::promote_set(pruned, r);
    it.opts = r.opt;
    bool done = it.removed.empty() && it.promoted.empty();
    trace.iterations.push_back(std::move(it));
    if (done) break;
    if (++trace.terminated_at > delta0)
      throw IntegrityError("normalize: iteration bound exceeded");
    ParityAutomaton next = trim(promote_step(pruned, r));
    if (!detail::mutually_simulates(next, cur))
      throw IntegrityError("normalize: an iteration changed the language");
    cur = std::move(next);
  }

  PairTable eq = state_equiv_table(cur);
  PairTable sprint = sprint_table(cur, cur);
  for (StateId p = 0; p < cur.n_states(); ++p) {
    bool ok = false;
    for (StateId q = 0; q < cur.n_states() && !ok; ++q)
      ok = eq(p, q) && sprint(p, q);
    if (!ok)
      throw IntegrityError(
          "normalize: fixpoint lacks a sprint self-simulation at state " +
          cur.state_names[p]);
  }
  return {std::move(cur), std::move(trace)};
}

// ---------------------------------------------------------------------------
// The deterministic pair-product automaton over a normalised input.

// States are pairs (q,p): q tracks the language, p is a sprint-deterministic
// partner that q sprint-simulates.  On a letter with an accepting move from
// q, take the least one and re-partner; otherwise follow Eve's global sprint
// strategy on q and the deterministic witness F on p.  Priorities come from
// the q component.
inline ParityAutomaton build_d(const ParityAutomaton& hstar) {
  if (!hstar.is_buchi())
    throw PreconditionError("build_d: input must be Buchi [1,2]");
  const ParityAutomaton& h = hstar;
  Adj adj(h);
  PairTable eq = state_equiv_table(h);
  GameArena gs = build_sprint(h, 0, h, 0);
  Solution ss = solve_01(gs);
  PairTable sprint = detail::table_from(gs, ss, h.n_states(), h.n_states());
  SprintWitness wit = sprint_deterministic_witness(h);
  Adj fadj(wit.f);

  auto valid = [&](StateId q, StateId p) {
    return eq(q, p) && sprint(q, p) && wit.sd_states[p];
  };
  auto partner = [&](StateId q) -> StateId {
    for (StateId p = 0; p < h.n_states(); ++p)
      if (valid(q, p)) return p;
    throw IntegrityError("build_d: no valid partner for state " +
                         h.state_names[q]);
  };
  auto tau = [&](StateId q, LetterId l, StateId p) -> const Transition& {
    auto vit = gs.eve_index.find({q, l, p});
    if (vit == gs.eve_index.end())
      throw IntegrityError("build_d: sprint game has no position (" +
                           h.state_names[q] + "," + h.alphabet[l] + "," +
                           h.state_names[p] + ")");
    auto sit = ss.eve_strategy.find(vit->second);
    if (sit == ss.eve_strategy.end() || !gs.edges[sit->second].has_trans)
      throw IntegrityError("build_d: no sprint strategy at (" +
                           h.state_names[q] + "," + h.alphabet[l] + "," +
                           h.state_names[p] + ")");
    return gs.edges[sit->second].trans;
  };

  using DState = std::pair<StateId, StateId>;
  std::map<DState, StateId> id;
  std::vector<DState> order;
  auto intern = [&](DState d) {
    auto [it, fresh] = id.insert({d, static_cast<StateId>(order.size())});
    if (fresh) order.push_back(d);
    return it->second;
  };

  ParityAutomaton out;
  out.index_lo = 1;
  out.index_hi = 2;
  out.alphabet = h.alphabet;
  out.initial = intern({h.initial, partner(h.initial)});
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto [q, p] = order[i];
    StateId src = static_cast<StateId>(i);
    for (LetterId l = 0; l < h.n_letters(); ++l) {
      std::vector<Transition> qmoves = adj.out(q, l);
      if (qmoves.empty())
        throw IntegrityError("build_d: no transition from " +
                             h.state_names[q] + " on " + h.alphabet[l] +
                             " (normalised input must be complete)");
      std::optional<Transition> acc;
      for (const Transition& t : qmoves)
        if (accepting(t)) {
          acc = t;  // transitions are sorted: this is the least destination
          break;
        }
      if (acc) {
        StateId qn = acc->dst;
        out.transitions.push_back({src, l, 2, intern({qn, partner(qn)})});
      } else {
        StateId qn = tau(q, l, p).dst;
        std::vector<Transition> fstep = fadj.out(p, l);
        if (fstep.empty())
          throw IntegrityError("build_d: witness undefined at " +
                               h.state_names[p] + " on " + h.alphabet[l]);
        StateId pn = fstep[0].dst;
        if (!valid(qn, pn))
          throw IntegrityError("build_d: rejecting move left the product (" +
                               h.state_names[qn] + "," + h.state_names[pn] +
                               ")");
        out.transitions.push_back({src, l, 1, intern({qn, pn})});
      }
    }
  }
  for (const DState& d : order)
    out.state_names.push_back(h.state_names[d.first] + "," +
                              h.state_names[d.second]);
  // Pair names are almost always unique; fall back to indexed names if the
  // input's own names make them collide.
  std::set<std::string> uniq(out.state_names.begin(), out.state_names.end());
  if (uniq.size() != out.state_names.size())
    for (std::size_t i = 0; i < out.state_names.size(); ++i)
      out.state_names[i] += "#" + std::to_string(i);
  out.canonicalize();
  if (!is_deterministic(out))
    throw IntegrityError("build_d: output is not deterministic");
  return out;
}

// ---------------------------------------------------------------------------
// Exact verification of a determinisation.

struct DetVerification {
  bool ok = false;
  std::string reason;                   // empty when ok
  std::optional<Lasso> counterexample;  // a word in L(H) \ L(D)
  explicit operator bool() const { return ok; }
};

namespace detail {

// Emptiness of L(H) \ L(D) via the complement product: D, deterministic, is
// read as a co-Buchi complement (its accepting transitions become the "bad"
// edges; falling off D accepts everything).  A word of H escapes D iff the
// product has a reachable cycle with an H-accepting edge and no bad edge.
inline std::optional<Lasso> escape_lasso(const ParityAutomaton& h,
                                         const ParityAutomaton& d) {
  const StateId sink = static_cast<StateId>(d.n_states());
  Adj hadj(h), dadj(d);
  auto dstep = [&](StateId dq, LetterId l) -> std::pair<StateId, bool> {
    if (dq == sink) return {sink, false};
    std::vector<Transition> out = dadj.out(dq, l);
    if (out.empty()) return {sink, false};
    return {out[0].dst, out[0].priority == 2};
  };

  struct PEdge {
    std::uint32_t src, dst;
    LetterId letter;
    bool h_acc, bad;  // bad: D takes an accepting transition here
  };
  std::map<std::pair<StateId, StateId>, std::uint32_t> id;
  std::vector<std::pair<StateId, StateId>> nodes;
  auto intern = [&](StateId hq, StateId dq) {
    auto [it, fresh] =
        id.insert({{hq, dq}, static_cast<std::uint32_t>(nodes.size())});
    if (fresh) nodes.push_back({hq, dq});
    return it->second;
  };
  std::vector<PEdge> edges;
  std::vector<std::vector<std::uint32_t>> eout;
  intern(h.initial, d.initial);
  for (std::uint32_t v = 0; v < nodes.size(); ++v) {
    auto [hq, dq] = nodes[v];
    eout.emplace_back();
    for (LetterId l = 0; l < h.n_letters(); ++l)
      for (const Transition& t : hadj.out(hq, l)) {
        auto [dn, bad] = dstep(dq, l);
        eout[v].push_back(static_cast<std::uint32_t>(edges.size()));
        edges.push_back({v, intern(t.dst, dn), l, accepting(t), bad});
      }
  }

  std::vector<SccEdge> ok_edges;
  for (const PEdge& e : edges)
    if (!e.bad) ok_edges.push_back({e.src, e.dst, 0});
  std::vector<std::uint32_t> comp = scc_ids(nodes.size(), ok_edges);
  const PEdge* witness = nullptr;
  for (const PEdge& e : edges)
    if (e.h_acc && !e.bad && comp[e.src] == comp[e.dst]) {
      witness = &e;
      break;
    }
  if (!witness) return std::nullopt;

  // in_scc restricts the search to good edges inside the witness component.
  auto path = [&](std::uint32_t from, std::uint32_t to,
                  bool in_scc) -> std::vector<LetterId> {
    std::vector<std::optional<std::uint32_t>> via(nodes.size());
    std::vector<bool> seen(nodes.size(), false);
    std::vector<std::uint32_t> queue = {from};
    seen[from] = true;
    for (std::size_t qi = 0; qi < queue.size() && !seen[to]; ++qi)
      for (std::uint32_t eid : eout[queue[qi]]) {
        const PEdge& e = edges[eid];
        if (seen[e.dst]) continue;
        if (in_scc && (e.bad || comp[e.dst] != comp[from])) continue;
        seen[e.dst] = true;
        via[e.dst] = eid;
        queue.push_back(e.dst);
      }
    if (!seen[to])
      throw IntegrityError("escape_lasso: witness path does not close");
    std::vector<LetterId> word;
    for (std::uint32_t v = to; v != from;) {
      const PEdge& e = edges[*via[v]];
      word.push_back(e.letter);
      v = e.src;
    }
    std::reverse(word.begin(), word.end());
    return word;
  };

  Lasso cx;
  cx.spoke = path(0, witness->src, false);
  cx.cycle = {witness->letter};
  if (witness->dst != witness->src) {
    std::vector<LetterId> back = path(witness->dst, witness->src, true);
    cx.cycle.insert(cx.cycle.end(), back.begin(), back.end());
  }
  return cx;
}

}  // namespace detail

// Exact check that D is a correct determinisation of the Buchi automaton H:
// Buchi and deterministic, within the quadratic state bound, and language
// equal.  L(D) <= L(H) is decided by simulation, which is exact when H is
// HD; the converse direction uses the complement product and reports a
// concrete escaping lasso on failure.
inline DetVerification verify_determinization(const ParityAutomaton& h,
                                              const ParityAutomaton& d) {
  if (!h.is_buchi())
    throw PreconditionError("verify_determinization: H must be Buchi [1,2]");
  DetVerification v;
  if (!d.is_buchi()) {
    v.reason = "output is not a Buchi automaton";
    return v;
  }
  if (!is_deterministic(d)) {
    v.reason = "output is not deterministic";
    return v;
  }
  if (d.n_states() > h.n_states() * h.n_states()) {
    v.reason = "output exceeds the quadratic state bound";
    return v;
  }
  if (h.alphabet != d.alphabet) {
    v.reason = "alphabet mismatch";
    return v;
  }
  GameArena g = build_simulation(h, d);
  if (!solve_02(g).eve_wins(g.initial)) {
    v.reason = "L(D) is not contained in L(H): H fails to simulate D";
    return v;
  }
  if (std::optional<Lasso> cx = detail::escape_lasso(h, d)) {
    v.reason = "L(H) is not contained in L(D)";
    v.counterexample = std::move(cx);
    return v;
  }
  v.ok = true;
  return v;
}

// ---------------------------------------------------------------------------
// End-to-end determinisation.

struct DeterminizeResult {
  ParityAutomaton automaton;
  PipelineTrace trace;
};

// trim, restrict to a good subautomaton, normalise, build the pair product,
// and (by default) verify the result exactly against the trimmed input.
// Non-HD inputs are refused with Adam's Joker strategy as the certificate.
inline DeterminizeResult determinize_hd(const ParityAutomaton& a,
                                        bool verify = true) {
  if (!a.is_buchi())
    throw PreconditionError("determinize_hd: input must be Buchi [1,2]");
  ParityAutomaton t = trim(a);
  if (!is_hd_buchi(t))
    throw NotHdError("determinize_hd: input is not history-deterministic",
                     adam_joker_certificate(t));
  DeterminizeResult res;
  auto [hstar, trace] = normalize(make_good(t));
  res.trace = std::move(trace);
  res.automaton = build_d(hstar);
  if (verify) {
    DetVerification v = verify_determinization(t, res.automaton);
    if (!v.ok)
      throw IntegrityError("determinize_hd: output verification failed: " +
                           v.reason);
  }
  return res;
}

}  // namespace hdbuchi
