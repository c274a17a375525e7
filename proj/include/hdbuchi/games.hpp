// hdbuchi/games.hpp -- constructions of the concrete games: 1-token (G1),
// Joker, simulation, step-ahead simulation, sprint simulation, lookahead and
// k-token games, all as explicit GameArenas.
//
// Shared encoding for the Buchi simulation family ([0,2] parity): an edge
// carrying an accepting Eve transition has priority 2, an edge carrying an
// accepting Adam transition priority 1, everything else 0.  Then "Adam's run
// accepting implies Eve's run accepting" is exactly "max priority occurring
// infinitely often is even".  Sprint games are [0,1]: the race ends at a
// winner's sink; infinite sink-free plays have priority 0 (Eve wins).
//
// Incomplete automata: a player with no transition on the chosen letter is
// routed to an immediate-loss sink (Eve stuck -> priority-1 Adam-win loop;
// Adam stuck -> priority-2 Eve-win loop; sprint sinks use 1/0).
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "hdbuchi/arena.hpp"
#include "hdbuchi/automaton.hpp"
#include "hdbuchi/constructions.hpp"

namespace hdbuchi {

inline bool accepting(const Transition& t) { return t.priority % 2 == 0; }

enum class MoveOrder { EveFirst, AdamFirst };
enum class WinCond { Parity02, Sprint01 };
enum class V1Domain { ReachableSameWord, AllPairs };

struct PairGameOptions {
  MoveOrder order = MoveOrder::EveFirst;
  WinCond cond = WinCond::Parity02;
  bool joker = false;
  V1Domain domain = V1Domain::AllPairs;
  // Accept non-Buchi inputs; the [0,2] encoding then treats even priorities
  // as accepting.  Only the fixed-strategy verifiers use this: they analyse
  // raw transition priorities from edge payloads, not the encoded game.
  bool allow_any_index = false;
  std::string name = "game";
  std::optional<std::pair<StateId, StateId>> start;
};

namespace detail {

// Pairs of states of (ea, aa) reachable from their initial states by reading
// the same word (both components move on the same letters).
inline std::vector<std::pair<StateId, StateId>> product_reachable(
    const ParityAutomaton& ea, const ParityAutomaton& aa) {
  Adj adj_e(ea), adj_a(aa);
  std::set<std::pair<StateId, StateId>> seen;
  std::vector<std::pair<StateId, StateId>> stack;
  seen.insert({ea.initial, aa.initial});
  stack.push_back({ea.initial, aa.initial});
  while (!stack.empty()) {
    auto [p, q] = stack.back();
    stack.pop_back();
    for (LetterId l = 0; l < ea.n_letters(); ++l)
      for (const Transition& tp : adj_e.out(p, l))
        for (const Transition& tq : adj_a.out(q, l)) {
          std::pair<StateId, StateId> nx{tp.dst, tq.dst};
          if (seen.insert(nx).second) stack.push_back(nx);
        }
  }
  return {seen.begin(), seen.end()};
}

}  // namespace detail

// Unified builder for the two-token-style games (one Eve token on `ea`, one
// Adam token on `aa`; both move on Adam's letters).  V1 holds round starts,
// V2 the letter-chosen phase, V3 the phase after the first mover's move.
inline GameArena build_pair_game(const ParityAutomaton& ea,
                                 const ParityAutomaton& aa,
                                 const PairGameOptions& o) {
  if (!o.allow_any_index && (!ea.is_buchi() || !aa.is_buchi()))
    throw PreconditionError(o.name + ": input automata must be Buchi [1,2]");
  if (ea.alphabet != aa.alphabet)
    throw PreconditionError(o.name + ": alphabet mismatch");
  if (o.joker && (o.order != MoveOrder::EveFirst || o.cond != WinCond::Parity02))
    throw IntegrityError("build_pair_game: joker requires EveFirst/Parity02");

  Adj adj_e(ea), adj_a(aa);
  const LetterId nl = static_cast<LetterId>(ea.n_letters());

  // ---- V1 ------------------------------------------------------------
  std::vector<std::pair<StateId, StateId>> v1;
  if (o.domain == V1Domain::ReachableSameWord) {
    v1 = detail::product_reachable(ea, aa);
  } else {
    for (StateId p = 0; p < ea.n_states(); ++p)
      for (StateId q = 0; q < aa.n_states(); ++q) v1.push_back({p, q});
  }

  // ---- V3 keys and sink requirements ----------------------------------
  // Plain V3 key: (first mover's successor, other state, letter); joker V3
  // additionally remembers Eve's round-start state (the appendix arena's
  // Joker edges fire transitions from it, so it must stay decodable).
  std::set<std::tuple<StateId, StateId, LetterId>> v3_plain;
  std::set<std::tuple<StateId, StateId, StateId, LetterId>> v3_joker;
  bool need_eve_sink = false, need_adam_sink = false;

  for (auto [p, q] : v1)
    for (LetterId l = 0; l < nl; ++l) {
      if (o.order == MoveOrder::EveFirst) {
        std::vector<Transition> em = adj_e.out(p, l);
        if (em.empty()) {
          need_adam_sink = true;  // Eve stuck at V2
          continue;
        }
        for (const Transition& t : em) {
          if (o.cond == WinCond::Sprint01 && accepting(t)) {
            need_eve_sink = true;  // Eve's race won: play ends
            continue;
          }
          if (o.joker)
            v3_joker.insert({p, t.dst, q, l});
          else
            v3_plain.insert({t.dst, q, l});
        }
      } else {
        std::vector<Transition> am = adj_a.out(q, l);
        if (am.empty()) {
          need_eve_sink = true;  // Adam stuck at V2
          continue;
        }
        for (const Transition& t : am) v3_plain.insert({p, t.dst, l});
      }
    }
  if (o.order == MoveOrder::EveFirst && !o.joker) {
    for (auto [pp, q, l] : v3_plain) {
      (void)pp;
      std::vector<Transition> am = adj_a.out(q, l);
      if (am.empty()) need_eve_sink = true;  // Adam stuck at V3
      if (o.cond == WinCond::Sprint01)
        for (const Transition& t : am)
          if (accepting(t)) need_adam_sink = true;  // Adam's race won
    }
  } else if (o.order == MoveOrder::AdamFirst) {
    for (auto [p, qq, l] : v3_plain) {
      (void)qq;
      if (adj_e.out(p, l).empty()) need_adam_sink = true;  // Eve stuck at V3
    }
  }
  // Joker arenas: Adam is never stuck at V3 (Eve's round-start state has an
  // l-transition there, so a Joker move always exists).

  // ---- vertex allocation: V1 block, V2 block, V3 block, sinks ----------
  GameArena g;
  g.name = o.name;
  g.max_priority = (o.cond == WinCond::Parity02) ? 2 : 1;
  g.eve_state_names = ea.state_names;
  g.adam_state_names = aa.state_names;
  g.letter_names = ea.alphabet;

  for (auto [p, q] : v1) {
    VertexPayload pl;
    pl.kind = VKind::PairV1;
    pl.states = {p, q};
    std::uint32_t id = g.add_vertex(Owner::Adam, std::move(pl));
    g.v1_index[{p, q}] = id;
  }
  auto v2_id = [&](std::size_t v1_pos, LetterId l) {
    return static_cast<std::uint32_t>(v1.size() + v1_pos * nl + l);
  };
  for (std::size_t i = 0; i < v1.size(); ++i)
    for (LetterId l = 0; l < nl; ++l) {
      VertexPayload pl;
      pl.kind = VKind::LetterV2;
      pl.states = {v1[i].first, v1[i].second};
      pl.letter = l;
      Owner own =
          (o.order == MoveOrder::EveFirst) ? Owner::Eve : Owner::Adam;
      std::uint32_t id = g.add_vertex(own, std::move(pl));
      if (o.order == MoveOrder::EveFirst)
        g.eve_index[{v1[i].first, l, v1[i].second}] = id;
    }
  std::map<std::tuple<StateId, StateId, LetterId>, std::uint32_t> v3p_id;
  std::map<std::tuple<StateId, StateId, StateId, LetterId>, std::uint32_t>
      v3j_id;
  if (o.joker) {
    for (auto key : v3_joker) {
      auto [p, pd, q, l] = key;
      VertexPayload pl;
      pl.kind = VKind::MovedV3;
      pl.states = {p, pd, q};
      pl.letter = l;
      v3j_id[key] = g.add_vertex(Owner::Adam, std::move(pl));
    }
  } else {
    for (auto key : v3_plain) {
      auto [x, y, l] = key;
      VertexPayload pl;
      pl.kind = VKind::MovedV3;
      pl.states = {x, y};
      pl.letter = l;
      Owner own =
          (o.order == MoveOrder::EveFirst) ? Owner::Adam : Owner::Eve;
      std::uint32_t id = g.add_vertex(own, std::move(pl));
      v3p_id[key] = id;
      if (o.order == MoveOrder::AdamFirst) g.eve_index[{x, l, y}] = id;
    }
  }
  std::uint32_t eve_sink = 0, adam_sink = 0;
  if (need_eve_sink) {
    VertexPayload pl;
    pl.kind = VKind::Sink;
    pl.sink_winner = Owner::Eve;
    eve_sink = g.add_vertex(Owner::Eve, std::move(pl));
  }
  if (need_adam_sink) {
    VertexPayload pl;
    pl.kind = VKind::Sink;
    pl.sink_winner = Owner::Adam;
    adam_sink = g.add_vertex(Owner::Adam, std::move(pl));
  }

  // ---- edges -----------------------------------------------------------
  for (std::size_t i = 0; i < v1.size(); ++i)
    for (LetterId l = 0; l < nl; ++l)
      g.add_edge(g.v1_index[v1[i]], v2_id(i, l), 0, EKind::Letter);

  for (std::size_t i = 0; i < v1.size(); ++i) {
    auto [p, q] = v1[i];
    for (LetterId l = 0; l < nl; ++l) {
      std::uint32_t v2 = v2_id(i, l);
      if (o.order == MoveOrder::EveFirst) {
        std::vector<Transition> em = adj_e.out(p, l);
        if (em.empty()) {
          g.add_edge(v2, adam_sink, 0, EKind::ToSink);
          continue;
        }
        for (const Transition& t : em) {
          if (o.cond == WinCond::Sprint01 && accepting(t)) {
            g.add_move_edge(v2, eve_sink, 0, EKind::EveMove, t);
          } else if (o.cond == WinCond::Sprint01) {
            g.add_move_edge(v2, v3p_id[{t.dst, q, l}], 0, EKind::EveMove, t);
          } else if (o.joker) {
            g.add_move_edge(v2, v3j_id[{p, t.dst, q, l}],
                            accepting(t) ? 2 : 0, EKind::EveMove, t);
          } else {
            g.add_move_edge(v2, v3p_id[{t.dst, q, l}], accepting(t) ? 2 : 0,
                            EKind::EveMove, t);
          }
        }
      } else {
        std::vector<Transition> am = adj_a.out(q, l);
        if (am.empty()) {
          g.add_edge(v2, eve_sink, 0, EKind::ToSink);
          continue;
        }
        for (const Transition& t : am)
          g.add_move_edge(v2, v3p_id[{p, t.dst, l}], accepting(t) ? 1 : 0,
                          EKind::AdamMove, t);
      }
    }
  }

  if (o.joker) {
    for (auto& [key, v3] : v3j_id) {
      auto [p, pd, q, l] = key;
      for (const Transition& t : adj_a.out(q, l))
        g.add_move_edge(v3, g.v1_index[{pd, t.dst}], accepting(t) ? 1 : 0,
                        EKind::AdamMove, t);
      // Joker: Adam re-seats his token on a successor of Eve's round start.
      for (const Transition& t : adj_e.out(p, l))
        g.add_move_edge(v3, g.v1_index[{pd, t.dst}], 2, EKind::Joker, t);
    }
  } else if (o.order == MoveOrder::EveFirst) {
    for (auto& [key, v3] : v3p_id) {
      auto [pd, q, l] = key;
      std::vector<Transition> am = adj_a.out(q, l);
      if (am.empty()) {
        g.add_edge(v3, eve_sink, 0, EKind::ToSink);
        continue;
      }
      for (const Transition& t : am) {
        if (o.cond == WinCond::Sprint01 && accepting(t))
          g.add_move_edge(v3, adam_sink, 0, EKind::AdamMove, t);
        else if (o.cond == WinCond::Sprint01)
          g.add_move_edge(v3, g.v1_index[{pd, t.dst}], 0, EKind::AdamMove, t);
        else
          g.add_move_edge(v3, g.v1_index[{pd, t.dst}], accepting(t) ? 1 : 0,
                          EKind::AdamMove, t);
      }
    }
  } else {
    for (auto& [key, v3] : v3p_id) {
      auto [p, qd, l] = key;
      std::vector<Transition> em = adj_e.out(p, l);
      if (em.empty()) {
        g.add_edge(v3, adam_sink, 0, EKind::ToSink);
        continue;
      }
      for (const Transition& t : em)
        g.add_move_edge(v3, g.v1_index[{t.dst, qd}], accepting(t) ? 2 : 0,
                        EKind::EveMove, t);
    }
  }
  if (need_eve_sink)
    g.add_edge(eve_sink, eve_sink, o.cond == WinCond::Parity02 ? 2 : 0,
               EKind::SinkLoop);
  if (need_adam_sink) g.add_edge(adam_sink, adam_sink, 1, EKind::SinkLoop);

  // ---- initial ----------------------------------------------------------
  std::pair<StateId, StateId> start =
      o.start.value_or(std::pair<StateId, StateId>{ea.initial, aa.initial});
  auto it = g.v1_index.find(start);
  if (it == g.v1_index.end())
    throw IntegrityError(o.name + ": start pair not in arena");
  g.initial = it->second;
  g.check();
  return g;
}

// ---------------------------------------------------------------------------
// The concrete games.

// 1-token game G1(A): Eve and Adam each run one token on A; Adam picks the
// letters, Eve moves first.  V1 is restricted to same-word reachable pairs.
inline GameArena build_g1(const ParityAutomaton& a) {
  PairGameOptions o;
  o.order = MoveOrder::EveFirst;
  o.cond = WinCond::Parity02;
  o.domain = V1Domain::ReachableSameWord;
  o.name = "g1";
  return build_pair_game(a, a, o);
}

// Joker game G_J(A): like G1 over all state pairs, but Adam may additionally
// "joker": take any transition from Eve's round-start state (priority 2).
inline GameArena build_joker(const ParityAutomaton& a,
                             bool allow_any_index = false) {
  PairGameOptions o;
  o.order = MoveOrder::EveFirst;
  o.cond = WinCond::Parity02;
  o.joker = true;
  o.domain = V1Domain::AllPairs;
  o.allow_any_index = allow_any_index;
  o.name = "joker";
  return build_pair_game(a, a, o);
}

// Simulation game: Eve on A (first argument) simulates Adam on B; Adam moves
// his token before Eve in every round.
inline GameArena build_simulation(const ParityAutomaton& a,
                                  const ParityAutomaton& b) {
  PairGameOptions o;
  o.order = MoveOrder::AdamFirst;
  o.cond = WinCond::Parity02;
  o.domain = V1Domain::AllPairs;
  o.name = "simulation";
  return build_pair_game(a, b, o);
}

// Step-ahead simulation: as simulation, but Eve moves before Adam.
inline GameArena build_stepahead(const ParityAutomaton& a,
                                 const ParityAutomaton& b) {
  PairGameOptions o;
  o.order = MoveOrder::EveFirst;
  o.cond = WinCond::Parity02;
  o.domain = V1Domain::AllPairs;
  o.name = "stepahead";
  return build_pair_game(a, b, o);
}

// Sprint simulation game between (A, p) and (B, q): step-ahead move order,
// first accepting transition ends the play, Eve's checked first; infinite
// accepting-free plays go to Eve.  The arena covers all pairs, so one build
// answers sprint queries for every (p, q).
inline GameArena build_sprint(const ParityAutomaton& a, StateId p,
                              const ParityAutomaton& b, StateId q) {
  PairGameOptions o;
  o.order = MoveOrder::EveFirst;
  o.cond = WinCond::Sprint01;
  o.domain = V1Domain::AllPairs;
  o.name = "sprint";
  o.start = {{p, q}};
  return build_pair_game(a, b, o);
}

// k-lookahead game: simulation between A and Delay^k(A).
inline GameArena build_lookahead(const ParityAutomaton& a, unsigned k,
                                 std::size_t state_cap = 1'000'000) {
  if (k == 0) throw PreconditionError("build_lookahead: k must be positive");
  return build_simulation(a, delay_k(a, k, state_cap));
}

// ---------------------------------------------------------------------------
// k-token game: Adam runs k tokens.  Token tuples are kept sorted -- Adam's
// tokens are interchangeable (his moves and the winning condition are
// symmetric in them), so the quotient arena has the same winner.  Adam's
// combined move carries priority 1 iff at least one chosen transition is
// accepting: over a finite set of tokens, "some token accepting infinitely
// often" and "infinitely many rounds where some chosen transition accepts"
// coincide by pigeonhole.
inline GameArena build_k_token(const ParityAutomaton& a, unsigned k,
                               std::size_t cap = 1'000'000) {
  if (!a.is_buchi())
    throw PreconditionError("build_k_token: input must be Buchi [1,2]");
  if (k == 0) throw PreconditionError("build_k_token: k must be positive");
  // Resource estimate from the spec: k * |Q|^(k+1) * |Sigma|.
  long double est = static_cast<long double>(k) * a.n_letters();
  for (unsigned i = 0; i <= k; ++i) est *= a.n_states();
  if (est > static_cast<long double>(cap))
    throw ResourceError("build_k_token: estimated size exceeds cap");

  Adj adj(a);
  const LetterId nl = static_cast<LetterId>(a.n_letters());
  using Tokens = std::vector<StateId>;
  using V1Key = std::pair<StateId, Tokens>;

  // Adam's combined moves from a token tuple on letter l, deduplicated by
  // (resulting sorted tuple, any-accepting flag).  Empty iff a token is stuck.
  auto combined_moves = [&](const Tokens& toks, LetterId l) {
    std::set<std::pair<Tokens, bool>> moves;
    std::vector<std::vector<Transition>> opts;
    for (StateId t : toks) {
      opts.push_back(adj.out(t, l));
      if (opts.back().empty()) return moves;  // Adam stuck
    }
    std::vector<std::size_t> idx(toks.size(), 0);
    for (;;) {
      Tokens dst;
      bool acc = false;
      for (std::size_t i = 0; i < toks.size(); ++i) {
        dst.push_back(opts[i][idx[i]].dst);
        acc = acc || accepting(opts[i][idx[i]]);
      }
      std::sort(dst.begin(), dst.end());
      moves.insert({dst, acc});
      std::size_t j = 0;
      while (j < idx.size() && ++idx[j] == opts[j].size()) idx[j++] = 0;
      if (j == idx.size()) break;
    }
    return moves;
  };

  // Pass 1: BFS over round-start positions; collect V3 keys and sink needs.
  std::set<V1Key> v1set;
  std::set<std::tuple<StateId, Tokens, LetterId>> v3set;
  bool need_eve_sink = false, need_adam_sink = false;
  V1Key start{a.initial, Tokens(k, a.initial)};
  std::vector<V1Key> queue = {start};
  v1set.insert(start);
  while (!queue.empty()) {
    auto [q, toks] = queue.back();
    queue.pop_back();
    if (v1set.size() > cap)
      throw ResourceError("build_k_token: arena exceeds cap");
    for (LetterId l = 0; l < nl; ++l) {
      std::vector<Transition> em = adj.out(q, l);
      if (em.empty()) {
        need_adam_sink = true;  // Eve stuck at V2
        continue;
      }
      auto moves = combined_moves(toks, l);
      for (const Transition& t : em) {
        v3set.insert({t.dst, toks, l});
        if (moves.empty()) {
          need_eve_sink = true;  // Adam stuck at V3
          continue;
        }
        for (const auto& [dst, acc] : moves) {
          (void)acc;
          V1Key nx{t.dst, dst};
          if (v1set.insert(nx).second) queue.push_back(nx);
        }
      }
    }
  }

  // Pass 2: allocate vertices (V1 block, V2 block, V3 block, sinks).
  GameArena g;
  g.name = "ktoken";
  g.max_priority = 2;
  g.eve_state_names = a.state_names;
  g.adam_state_names = a.state_names;
  g.letter_names = a.alphabet;
  std::map<V1Key, std::uint32_t> v1_id;
  for (const V1Key& key : v1set) {
    VertexPayload pl;
    pl.kind = VKind::TokenTuple;
    pl.phase = 1;
    pl.states.push_back(key.first);
    for (StateId t : key.second) pl.states.push_back(t);
    std::uint32_t id = g.add_vertex(Owner::Adam, std::move(pl));
    v1_id[key] = id;
    if (k == 1) g.v1_index[{key.first, key.second[0]}] = id;
  }
  std::map<std::pair<V1Key, LetterId>, std::uint32_t> v2_id;
  for (const V1Key& key : v1set)
    for (LetterId l = 0; l < nl; ++l) {
      VertexPayload pl;
      pl.kind = VKind::TokenTuple;
      pl.phase = 2;
      pl.states.push_back(key.first);
      for (StateId t : key.second) pl.states.push_back(t);
      pl.letter = l;
      std::uint32_t id = g.add_vertex(Owner::Eve, std::move(pl));
      v2_id[{key, l}] = id;
      if (k == 1) g.eve_index[{key.first, l, key.second[0]}] = id;
    }
  std::map<std::tuple<StateId, Tokens, LetterId>, std::uint32_t> v3_id;
  for (const auto& key : v3set) {
    auto& [qd, toks, l] = key;
    VertexPayload pl;
    pl.kind = VKind::TokenTuple;
    pl.phase = 3;
    pl.states.push_back(qd);
    for (StateId t : toks) pl.states.push_back(t);
    pl.letter = l;
    v3_id[key] = g.add_vertex(Owner::Adam, std::move(pl));
  }
  std::uint32_t eve_sink = 0, adam_sink = 0;
  if (need_eve_sink) {
    VertexPayload pl;
    pl.kind = VKind::Sink;
    pl.sink_winner = Owner::Eve;
    eve_sink = g.add_vertex(Owner::Eve, std::move(pl));
  }
  if (need_adam_sink) {
    VertexPayload pl;
    pl.kind = VKind::Sink;
    pl.sink_winner = Owner::Adam;
    adam_sink = g.add_vertex(Owner::Adam, std::move(pl));
  }

  // Pass 3: edges.
  for (const V1Key& key : v1set)
    for (LetterId l = 0; l < nl; ++l)
      g.add_edge(v1_id[key], v2_id[{key, l}], 0, EKind::Letter);
  for (const V1Key& key : v1set)
    for (LetterId l = 0; l < nl; ++l) {
      std::uint32_t v2 = v2_id[{key, l}];
      std::vector<Transition> em = adj.out(key.first, l);
      if (em.empty()) {
        g.add_edge(v2, adam_sink, 0, EKind::ToSink);
        continue;
      }
      for (const Transition& t : em)
        g.add_move_edge(v2, v3_id[{t.dst, key.second, l}],
                        accepting(t) ? 2 : 0, EKind::EveMove, t);
    }
  for (const auto& [key, v3] : v3_id) {
    auto& [qd, toks, l] = key;
    auto moves = combined_moves(toks, l);
    if (moves.empty()) {
      g.add_edge(v3, eve_sink, 0, EKind::ToSink);
      continue;
    }
    for (const auto& [dst, acc] : moves)
      g.add_edge(v3, v1_id[{qd, dst}], acc ? 1 : 0, EKind::AdamMove);
  }
  if (need_eve_sink) g.add_edge(eve_sink, eve_sink, 2, EKind::SinkLoop);
  if (need_adam_sink) g.add_edge(adam_sink, adam_sink, 1, EKind::SinkLoop);

  g.initial = v1_id[start];
  g.check();
  return g;
}

}  // namespace hdbuchi
