// hdbuchi/arena.hpp -- explicit finite game arenas with edge priorities.
//
// Every game in this library is a two-player max-parity game on a finite
// directed graph whose edges carry priorities from {0,1,2} (or {0,1} for the
// sprint games).  Vertices are tagged with a decoded payload so strategies
// can be read back as automaton transitions.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "hdbuchi/automaton.hpp"

namespace hdbuchi {

enum class Owner { Eve, Adam };

enum class VKind {
  PairV1,     // round start (eve state, adam state)
  LetterV2,   // letter chosen, nobody has moved yet
  MovedV3,    // letter chosen, first mover has moved
  TokenTuple, // k-token game position (phase field disambiguates)
  Sink,       // absorbing win/loss vertex
};

struct VertexPayload {
  VKind kind = VKind::Sink;
  // Decoded automaton states; layout depends on kind and game:
  //   PairV1:            {eve, adam}
  //   LetterV2:          {eve, adam}           + letter
  //   MovedV3 (plain):   {eve', adam}          + letter
  //   MovedV3 (joker):   {eve, eve', adam}     + letter  (eve = round start)
  //   MovedV3 (adam 1st):{eve, adam'}          + letter
  //   TokenTuple:        {eve, tok_1..tok_k}   + letter in phases 2,3
  std::vector<StateId> states;
  std::optional<LetterId> letter;
  int phase = 0;                   // token games: 1, 2 or 3
  Owner sink_winner = Owner::Eve;  // Sink only

  friend bool operator==(const VertexPayload&, const VertexPayload&) = default;
};

enum class EKind {
  Letter,    // Adam picks a letter
  EveMove,   // Eve fires an automaton transition (payload present)
  AdamMove,  // Adam fires automaton transition(s)
  Joker,     // Adam jokers: fires a transition from Eve's round-start state
  ToSink,    // a stuck or decided player is routed to a sink
  SinkLoop,  // sink self-loop
};

struct GameEdge {
  std::uint32_t src = 0;
  std::uint32_t dst = 0;
  int priority = 0;
  EKind kind = EKind::Letter;
  bool has_trans = false;
  Transition trans{};  // the automaton transition behind the move, if any
};

struct GameArena {
  std::string name;
  std::vector<Owner> owner;
  std::vector<VertexPayload> payload;
  std::vector<GameEdge> edges;
  std::vector<std::vector<std::uint32_t>> out;  // vertex -> edge ids, in order
  std::uint32_t initial = 0;
  int max_priority = 2;

  // Decoded-name tables so dumps are self-contained.
  std::vector<std::string> eve_state_names, adam_state_names, letter_names;

  // Lookup helpers for analysis code (pair games; token games fill v1_index
  // only for k = 1).  eve_index maps (eve state, letter, adam component at
  // the moment Eve moves) to the vertex where Eve picks her transition.
  std::map<std::pair<StateId, StateId>, std::uint32_t> v1_index;
  std::map<std::tuple<StateId, LetterId, StateId>, std::uint32_t> eve_index;

  std::size_t n_vertices() const { return owner.size(); }

  std::uint32_t add_vertex(Owner o, VertexPayload p) {
    owner.push_back(o);
    payload.push_back(std::move(p));
    out.emplace_back();
    return static_cast<std::uint32_t>(owner.size() - 1);
  }

  std::uint32_t add_edge(std::uint32_t src, std::uint32_t dst, int priority,
                         EKind kind) {
    GameEdge e;
    e.src = src;
    e.dst = dst;
    e.priority = priority;
    e.kind = kind;
    edges.push_back(e);
    std::uint32_t id = static_cast<std::uint32_t>(edges.size() - 1);
    out[src].push_back(id);
    return id;
  }

  std::uint32_t add_move_edge(std::uint32_t src, std::uint32_t dst,
                              int priority, EKind kind, const Transition& t) {
    std::uint32_t id = add_edge(src, dst, priority, kind);
    edges[id].has_trans = true;
    edges[id].trans = t;
    return id;
  }

  // Structural sanity: deadlock-freedom, in-range priorities and endpoints.
  void check() const {
    if (initial >= n_vertices())
      throw IntegrityError(name + ": initial vertex out of range");
    for (std::size_t v = 0; v < n_vertices(); ++v)
      if (out[v].empty())
        throw IntegrityError(name + ": vertex " + std::to_string(v) +
                             " has no outgoing edge");
    for (const GameEdge& e : edges) {
      if (e.src >= n_vertices() || e.dst >= n_vertices())
        throw IntegrityError(name + ": edge endpoint out of range");
      if (e.priority < 0 || e.priority > max_priority)
        throw IntegrityError(name + ": edge priority out of range");
    }
  }

  std::string describe(std::uint32_t v) const {
    const VertexPayload& p = payload[v];
    auto ename = [&](StateId s) {
      return s < eve_state_names.size() ? eve_state_names[s]
                                        : std::to_string(s);
    };
    auto aname = [&](StateId s) {
      return s < adam_state_names.size() ? adam_state_names[s]
                                         : std::to_string(s);
    };
    auto lname = [&](LetterId l) {
      return l < letter_names.size() ? letter_names[l] : std::to_string(l);
    };
    std::ostringstream s;
    switch (p.kind) {
      case VKind::PairV1:
        s << "V1(" << ename(p.states[0]) << "," << aname(p.states[1]) << ")";
        break;
      case VKind::LetterV2:
        s << "V2(" << ename(p.states[0]) << "," << lname(*p.letter) << ","
          << aname(p.states[1]) << ")";
        break;
      case VKind::MovedV3:
        s << "V3(";
        for (std::size_t i = 0; i < p.states.size(); ++i) {
          if (i) s << ",";
          // Last component is Adam's, the rest are Eve-side states.
          s << (i + 1 == p.states.size() ? aname(p.states[i])
                                         : ename(p.states[i]));
        }
        s << "," << lname(*p.letter) << ")";
        break;
      case VKind::TokenTuple: {
        s << "T" << p.phase << "(" << ename(p.states[0]) << "|";
        for (std::size_t i = 1; i < p.states.size(); ++i) {
          if (i > 1) s << ",";
          s << aname(p.states[i]);
        }
        if (p.letter) s << "|" << lname(*p.letter);
        s << ")";
        break;
      }
      case VKind::Sink:
        s << "SINK(" << (p.sink_winner == Owner::Eve ? "eve" : "adam") << ")";
        break;
    }
    return s.str();
  }

  // Debug dump: `V <id> <owner> <payload>` and `E <src> <dst> <priority>`
  // lines, vertices by id, edges grouped by source in option order.
  std::string dump() const {
    std::ostringstream s;
    for (std::uint32_t v = 0; v < n_vertices(); ++v)
      s << "V " << v << " " << (owner[v] == Owner::Eve ? "eve" : "adam") << " "
        << describe(v) << "\n";
    for (std::uint32_t v = 0; v < n_vertices(); ++v)
      for (std::uint32_t eid : out[v])
        s << "E " << edges[eid].src << " " << edges[eid].dst << " "
          << edges[eid].priority << "\n";
    return s.str();
  }
};

}  // namespace hdbuchi
