// hdbuchi/constructions.hpp -- automaton-to-automaton constructions: the
// delayed automaton, the reachability lift A#, and universalization.
#pragma once

#include <set>
#include <string>
#include <vector>

#include "hdbuchi/automaton.hpp"

namespace hdbuchi {
namespace detail {

// Picks `base` if unused, otherwise base_2, base_3, ...  Registers the result.
inline std::string unique_name(std::set<std::string>& used,
                               const std::string& base) {
  std::string name = base;
  for (int i = 2; used.count(name); ++i)
    name = base + "_" + std::to_string(i);
  used.insert(name);
  return name;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Delay(A): runs one letter behind A.  State (p,a) means "A sits at p and the
// letter a is pending"; reading a' fires a pending-letter transition of A and
// stores a'.  The fresh initial state only buffers the first letter, so its
// outgoing transitions carry the least priority of the index (they occur once
// and never influence acceptance).
inline ParityAutomaton delay(const ParityAutomaton& a) {
  ParityAutomaton r;
  r.index_lo = a.index_lo;
  r.index_hi = a.index_hi;
  r.alphabet = a.alphabet;
  std::set<std::string> used;
  const std::size_t nl = a.n_letters();
  // State layout: pair (p, l) at index p*|Sigma|+l, fresh initial last.
  for (StateId p = 0; p < a.n_states(); ++p)
    for (LetterId l = 0; l < nl; ++l)
      r.state_names.push_back(
          detail::unique_name(used, a.state_names[p] + "@" + a.alphabet[l]));
  StateId s = static_cast<StateId>(r.state_names.size());
  r.state_names.push_back(detail::unique_name(used, "s"));
  r.initial = s;
  auto pair_id = [&](StateId p, LetterId l) {
    return static_cast<StateId>(p * nl + l);
  };
  for (LetterId l = 0; l < nl; ++l)
    r.transitions.push_back({s, l, a.index_lo, pair_id(a.initial, l)});
  for (const Transition& t : a.transitions)
    for (LetterId l2 = 0; l2 < nl; ++l2)
      r.transitions.push_back(
          {pair_id(t.src, t.letter), l2, t.priority, pair_id(t.dst, l2)});
  r.canonicalize();
  return r;
}

inline ParityAutomaton delay_k(const ParityAutomaton& a, unsigned k,
                               std::size_t state_cap = 1'000'000) {
  // Project the growth n -> 1 + n*|Sigma| before each application.
  ParityAutomaton cur = a;
  for (unsigned i = 0; i < k; ++i) {
    std::size_t projected = 1 + cur.n_states() * cur.n_letters();
    if (projected > state_cap)
      throw ResourceError("delay_k: " + std::to_string(projected) +
                          " states would exceed cap " +
                          std::to_string(state_cap));
    cur = delay(cur);
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Reachability lift A#: rejecting transitions survive; taking an accepting
// transition is replaced by a jump to the all-accepting sink f; the fresh
// letter # is a one-way exit to the all-rejecting sink r.  Both sinks loop on
// every letter of the extended alphabet so A# never deadlocks.
inline ParityAutomaton reachability_lift(const ParityAutomaton& a) {
  if (!a.is_buchi())
    throw PreconditionError("reachability_lift: input must be Buchi [1,2]");
  ParityAutomaton r;
  r.index_lo = 1;
  r.index_hi = 2;
  std::set<std::string> used_letters(a.alphabet.begin(), a.alphabet.end());
  r.alphabet = a.alphabet;
  r.alphabet.push_back(detail::unique_name(used_letters, "#"));
  const LetterId hash = static_cast<LetterId>(r.alphabet.size() - 1);
  std::set<std::string> used(a.state_names.begin(), a.state_names.end());
  r.state_names = a.state_names;
  const StateId f = static_cast<StateId>(r.state_names.size());
  r.state_names.push_back(detail::unique_name(used, "f"));
  const StateId rr = static_cast<StateId>(r.state_names.size());
  r.state_names.push_back(detail::unique_name(used, "r"));
  r.initial = a.initial;
  for (const Transition& t : a.transitions) {
    if (t.priority == 2)
      r.transitions.push_back({t.src, t.letter, 1, f});
    else
      r.transitions.push_back(t);
  }
  for (StateId p = 0; p < a.n_states(); ++p)
    r.transitions.push_back({p, hash, 1, rr});
  for (LetterId l = 0; l < r.alphabet.size(); ++l) {
    r.transitions.push_back({f, l, 2, f});
    r.transitions.push_back({rr, l, 1, rr});
  }
  r.canonicalize();
  return r;
}

// ---------------------------------------------------------------------------
// universalize(A, S): full product of A with a deterministic safety automaton
// S, completed into a total automaton by an accepting sink f.  When
// L(S) <= L(A) and A is semantically deterministic, every reachable state of
// the result accepts every word (not checked here).
inline ParityAutomaton universalize(const ParityAutomaton& a,
                                    const ParityAutomaton& s) {
  if (!is_deterministic(s))
    throw PreconditionError("universalize: S must be deterministic");
  for (const Transition& t : s.transitions)
    if (t.priority != 0)
      throw PreconditionError("universalize: S must be safety (all priorities 0)");
  if (s.index_lo != 0)
    throw PreconditionError("universalize: S must have index_lo 0");
  if (a.alphabet != s.alphabet)
    throw PreconditionError("universalize: alphabet mismatch");
  ParityAutomaton r;
  r.index_lo = a.index_lo;
  r.index_hi = std::max(a.index_hi, 2);
  r.alphabet = a.alphabet;
  std::set<std::string> used;
  const std::size_t ns = s.n_states();
  auto pair_id = [&](StateId q, StateId st) {
    return static_cast<StateId>(q * ns + st);
  };
  for (StateId q = 0; q < a.n_states(); ++q)
    for (StateId st = 0; st < ns; ++st)
      r.state_names.push_back(detail::unique_name(
          used, a.state_names[q] + "," + s.state_names[st]));
  const StateId f = static_cast<StateId>(r.state_names.size());
  r.state_names.push_back(detail::unique_name(used, "f"));
  r.initial = pair_id(a.initial, s.initial);
  Adj adj_a(a), adj_s(s);
  for (StateId q = 0; q < a.n_states(); ++q)
    for (StateId st = 0; st < ns; ++st)
      for (LetterId l = 0; l < a.n_letters(); ++l) {
        std::vector<Transition> sa = adj_a.out(q, l);
        std::vector<Transition> ss = adj_s.out(st, l);
        if (sa.empty() || ss.empty()) {
          r.transitions.push_back({pair_id(q, st), l, 2, f});
          continue;
        }
        for (const Transition& ta : sa)
          r.transitions.push_back(
              {pair_id(q, st), l, ta.priority, pair_id(ta.dst, ss[0].dst)});
      }
  for (LetterId l = 0; l < a.n_letters(); ++l)
    r.transitions.push_back({f, l, 2, f});
  r.canonicalize();
  return r;
}

}  // namespace hdbuchi
