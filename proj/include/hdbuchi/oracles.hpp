// hdbuchi/oracles.hpp -- independent ground truth at desk scale: a brute-force
// game solver sharing no code with the production one, bounded lasso
// equivalence, an exact HD decision given a deterministic witness, and corpus
// generators whose outputs have known properties.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hdbuchi/automaton.hpp"
#include "hdbuchi/base.hpp"
#include "hdbuchi/games.hpp"
#include "hdbuchi/solver.hpp"

namespace hdbuchi {

// ---------------------------------------------------------------------------
// Brute-force [0,2] winner: naive Jacobi value iteration over the rank
// lattice.  Every sweep recomputes all vertices from the previous vector with
// no lifting-order cleverness, so agreement with the worklist solver is a
// meaningful cross-check.  Top is represented as R+1 rather than an optional.
inline Owner brute_force_02_winner(const GameArena& g,
                                   std::size_t vertex_cap = 60) {
  if (g.n_vertices() > vertex_cap)
    throw ResourceError("brute_force_02_winner: arena exceeds vertex cap");
  for (const GameEdge& e : g.edges)
    if (e.priority < 0 || e.priority > 2)
      throw PreconditionError("brute_force_02_winner: priority out of range");

  std::uint64_t n_rejecting = 0;
  for (const GameEdge& e : g.edges)
    if (e.priority == 1) ++n_rejecting;
  const std::uint64_t top = n_rejecting + 1;

  std::vector<std::uint64_t> cur(g.n_vertices(), 0), nxt(g.n_vertices(), 0);
  auto edge_value = [&](const GameEdge& e) -> std::uint64_t {
    std::uint64_t d = cur[e.dst];
    if (e.priority == 2) return d >= top ? top : 0;
    if (e.priority == 1) return d + 1 >= top ? top : d + 1;
    return d;
  };
  for (;;) {
    bool changed = false;
    for (std::uint32_t v = 0; v < g.n_vertices(); ++v) {
      std::uint64_t best = g.owner[v] == Owner::Eve
                               ? std::numeric_limits<std::uint64_t>::max()
                               : 0;
      for (std::uint32_t eid : g.out[v]) {
        std::uint64_t val = edge_value(g.edges[eid]);
        best = g.owner[v] == Owner::Eve ? std::min(best, val)
                                        : std::max(best, val);
      }
      nxt[v] = best;
      changed = changed || nxt[v] != cur[v];
    }
    cur.swap(nxt);
    if (!changed) break;
  }
  return cur[g.initial] >= top ? Owner::Adam : Owner::Eve;
}

// ---------------------------------------------------------------------------
// Bounded lasso equivalence: agreement of lasso_accepts on every u v^omega
// with |u| <= max_u and 1 <= |v| <= max_v.  Refutation-complete within the
// bound; a positive answer is *not* a proof of equivalence.
struct LassoEquivResult {
  bool equal = true;
  std::optional<Lasso> counterexample;  // set iff !equal
  explicit operator bool() const { return equal; }
};

namespace detail {

// All words over nl letters of length 0..max_len, shortest first, then
// lexicographic; deterministic order makes counterexamples reproducible.
inline std::vector<std::vector<LetterId>> all_words(std::size_t nl,
                                                    std::size_t max_len) {
  std::vector<std::vector<LetterId>> words = {{}};
  std::size_t level_begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::size_t level_end = words.size();
    for (std::size_t i = level_begin; i < level_end; ++i)
      for (LetterId l = 0; l < nl; ++l) {
        std::vector<LetterId> w = words[i];
        w.push_back(l);
        words.push_back(std::move(w));
      }
    level_begin = level_end;
  }
  return words;
}

}  // namespace detail

inline LassoEquivResult bounded_lasso_equiv(const ParityAutomaton& a,
                                            const ParityAutomaton& b,
                                            std::size_t max_u,
                                            std::size_t max_v) {
  if (a.alphabet != b.alphabet)
    throw PreconditionError("bounded_lasso_equiv: alphabet mismatch");
  auto words = detail::all_words(a.n_letters(), std::max(max_u, max_v));
  LassoEquivResult res;
  for (const auto& u : words) {
    if (u.size() > max_u) continue;
    for (const auto& v : words) {
      if (v.empty() || v.size() > max_v) continue;
      Lasso w{u, v};
      if (lasso_accepts(a, w, a.initial) != lasso_accepts(b, w, b.initial)) {
        res.equal = false;
        res.counterexample = w;
        return res;
      }
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Exact HD decision given a deterministic language-equal witness: A is HD iff
// it simulates an equivalent deterministic automaton.  Independent of the
// Joker/G1 machinery (different arena shape, witness-based).
inline bool hd_exact_given_dba(const ParityAutomaton& a,
                               const ParityAutomaton& d) {
  if (!is_deterministic(d))
    throw PreconditionError("hd_exact_given_dba: witness not deterministic");
  if (!d.is_buchi())
    throw PreconditionError("hd_exact_given_dba: witness not Buchi");
  GameArena g = build_simulation(a, d);
  Solution s = solve_02(g);
  return s.eve_wins(g.initial);
}

// ---------------------------------------------------------------------------
// Corpus generators.  Generation is a pure function of the spec; rationals
// are carried as permille to keep draws integer-only.

enum class GenKind { UniversalSd, DbaCopies, RawRandom };

struct GenSpec {
  GenKind kind = GenKind::RawRandom;
  int states = 2;
  int alphabet_size = 2;
  int copies = 2;            // dba_copies only
  int density_permille = 300;     // in (0, 1000]
  int accept_permille = 400;      // in [0, 1000]
  std::uint64_t seed = 0;
};

struct GenResult {
  ParityAutomaton automaton;
  std::optional<ParityAutomaton> witness;  // deterministic, same language
};

namespace detail {

inline void validate(const GenSpec& s) {
  if (s.states < 1 || s.alphabet_size < 1)
    throw PreconditionError("gen: states and alphabet_size must be positive");
  if (s.kind == GenKind::DbaCopies && s.copies < 1)
    throw PreconditionError("gen: copies must be positive");
  if (s.density_permille < 1 || s.density_permille > 1000)
    throw PreconditionError("gen: density must be in (0,1]");
  if (s.accept_permille < 0 || s.accept_permille > 1000)
    throw PreconditionError("gen: accept_prob must be in [0,1]");
}

inline ParityAutomaton gen_skeleton(int n_states, int n_letters) {
  ParityAutomaton a;
  for (int i = 0; i < n_letters; ++i) {
    std::string name;
    int x = i;
    do {
      name.insert(name.begin(), static_cast<char>('a' + x % 26));
      x = x / 26 - 1;
    } while (x >= 0);
    a.alphabet.push_back(name);
  }
  for (int i = 0; i < n_states; ++i)
    a.state_names.push_back("q" + std::to_string(i));
  a.initial = 0;
  return a;
}

// The 1-state DBA accepting every word over the given alphabet.
inline ParityAutomaton all_accepting_dba(const Alphabet& alphabet) {
  ParityAutomaton d;
  d.alphabet = alphabet;
  d.state_names = {"u"};
  d.initial = 0;
  for (LetterId l = 0; l < alphabet.size(); ++l)
    d.transitions.push_back({0, l, 2, 0});
  d.canonicalize();
  return d;
}

}  // namespace detail

// universal_sd: every (state, letter) gets one accepting transition with a
// random target, so every word has an all-accepting run from every state:
// the automaton is universal and all states are equivalent, hence SD.
// Random rejecting transitions are sprinkled in by density.
inline GenResult gen_universal_sd(const GenSpec& s) {
  Rng rng(s.seed);
  ParityAutomaton a = detail::gen_skeleton(s.states, s.alphabet_size);
  for (StateId p = 0; p < static_cast<StateId>(s.states); ++p)
    for (LetterId l = 0; l < static_cast<LetterId>(s.alphabet_size); ++l) {
      a.transitions.push_back(
          {p, l, 2, static_cast<StateId>(rng.below(s.states))});
      for (StateId q = 0; q < static_cast<StateId>(s.states); ++q)
        if (rng.chance(s.density_permille, 1000))
          a.transitions.push_back({p, l, 1, q});
    }
  a.canonicalize();
  ParityAutomaton witness = detail::all_accepting_dba(a.alphabet);
  return {std::move(a), std::move(witness)};
}

// dba_copies: a random total DBA D0, then `copies` interchangeable copies of
// each state; every D0 transition fans out to a random nonempty subset of the
// target's copies with the priority inherited.  All copies of a state are
// language-equivalent, so the result is SD with L = L(D0).
inline GenResult gen_dba_copies(const GenSpec& s) {
  Rng rng(s.seed);
  const int n = s.states, c = s.copies, nl = s.alphabet_size;
  ParityAutomaton d0 = detail::gen_skeleton(n, nl);
  for (StateId p = 0; p < static_cast<StateId>(n); ++p)
    for (LetterId l = 0; l < static_cast<LetterId>(nl); ++l)
      d0.transitions.push_back({p, l,
                                rng.chance(s.accept_permille, 1000) ? 2 : 1,
                                static_cast<StateId>(rng.below(n))});
  d0.canonicalize();
  Adj adj(d0);

  ParityAutomaton a = detail::gen_skeleton(n * c, nl);
  for (int i = 0; i < n * c; ++i)
    a.state_names[i] =
        d0.state_names[i / c] + "_c" + std::to_string(i % c);
  auto pack = [&](StateId q, int copy) {
    return static_cast<StateId>(q * c + copy);
  };
  for (StateId p = 0; p < static_cast<StateId>(n); ++p)
    for (int i = 0; i < c; ++i)
      for (LetterId l = 0; l < static_cast<LetterId>(nl); ++l) {
        const Transition t = adj.out(p, l)[0];
        std::vector<int> targets;
        for (int j = 0; j < c; ++j)
          if (rng.chance(s.density_permille, 1000)) targets.push_back(j);
        if (targets.empty())
          targets.push_back(static_cast<int>(rng.below(c)));
        for (int j : targets)
          a.transitions.push_back(
              {pack(p, i), l, t.priority, pack(t.dst, j)});
      }
  a.initial = pack(d0.initial, 0);
  a.canonicalize();
  return {std::move(a), std::move(d0)};
}

// raw_random: unconstrained random Buchi automaton, complete so that the
// lookahead/delay agreement theorems apply; no witness.
inline GenResult gen_raw_random(const GenSpec& s) {
  Rng rng(s.seed);
  ParityAutomaton a = detail::gen_skeleton(s.states, s.alphabet_size);
  for (StateId p = 0; p < static_cast<StateId>(s.states); ++p)
    for (LetterId l = 0; l < static_cast<LetterId>(s.alphabet_size); ++l) {
      bool any = false;
      for (StateId q = 0; q < static_cast<StateId>(s.states); ++q)
        if (rng.chance(s.density_permille, 1000)) {
          a.transitions.push_back(
              {p, l, rng.chance(s.accept_permille, 1000) ? 2 : 1, q});
          any = true;
        }
      if (!any)
        a.transitions.push_back(
            {p, l, rng.chance(s.accept_permille, 1000) ? 2 : 1,
             static_cast<StateId>(rng.below(s.states))});
    }
  a.canonicalize();
  return {std::move(a), std::nullopt};
}

inline GenResult gen(const GenSpec& s) {
  detail::validate(s);
  switch (s.kind) {
    case GenKind::UniversalSd:
      return gen_universal_sd(s);
    case GenKind::DbaCopies:
      return gen_dba_copies(s);
    case GenKind::RawRandom:
      return gen_raw_random(s);
  }
  throw PreconditionError("gen: unknown kind");
}

}  // namespace hdbuchi
