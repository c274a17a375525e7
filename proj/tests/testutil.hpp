// Shared helpers for the unit tests: canned automata, compact builders, and
// a tiny harness for spawning the CLI binary.
#pragma once

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <tuple>
#include <vector>

#include "hdbuchi/arena.hpp"
#include "hdbuchi/automaton.hpp"
#include "hdbuchi/base.hpp"

namespace testutil {

using namespace hdbuchi;

// Fig.-1 style running example: 2 states, [1,3], every word accepted from p.
inline const char* kFig1Text =
    "parity 1 3\n"
    "alphabet a b\n"
    "states p q\n"
    "initial p\n"
    "trans p a 1 p\n"
    "trans p a 3 q\n"
    "trans p b 2 p\n"
    "trans p b 3 q\n"
    "trans q a 2 q\n"
    "trans q a 3 p\n"
    "trans q b 1 q\n"
    "trans q b 3 p\n";

inline ParityAutomaton fig1() { return parse_automaton(kFig1Text); }

// Compact builder: states/letters named by index ("q0","q1",.../"a","b",...).
inline ParityAutomaton mk(int n_states, int n_letters,
                          std::vector<Transition> trans, int lo = 1,
                          int hi = 2, StateId initial = 0) {
  ParityAutomaton a;
  a.index_lo = lo;
  a.index_hi = hi;
  for (int i = 0; i < n_letters; ++i)
    a.alphabet.push_back(std::string(1, static_cast<char>('a' + i)));
  for (int i = 0; i < n_states; ++i)
    a.state_names.push_back("q" + std::to_string(i));
  a.initial = initial;
  a.transitions = std::move(trans);
  a.canonicalize();
  return a;
}

// One-state Buchi automaton accepting a^omega.
inline ParityAutomaton t_acc() { return mk(1, 1, {{0, 0, 2, 0}}); }
// One-state Buchi automaton rejecting everything.
inline ParityAutomaton t_rej() { return mk(1, 1, {{0, 0, 1, 0}}); }

// Random Buchi automaton; every (state,letter) has >= 1 transition when
// `complete` is set, otherwise some pairs may be empty.
inline ParityAutomaton random_buchi(Rng& rng, int n_states, int n_letters,
                                    bool complete = true) {
  std::vector<Transition> trans;
  for (StateId p = 0; p < static_cast<StateId>(n_states); ++p)
    for (LetterId l = 0; l < static_cast<LetterId>(n_letters); ++l) {
      std::uint64_t cnt = rng.below(3);  // 0..2 extra transitions
      if (complete && cnt == 0) cnt = 1;
      for (std::uint64_t i = 0; i < cnt; ++i)
        trans.push_back({p, l,
                         rng.chance(2, 5) ? 2 : 1,
                         static_cast<StateId>(rng.below(n_states))});
    }
  if (trans.empty()) trans.push_back({0, 0, 2, 0});
  return mk(n_states, n_letters, std::move(trans));
}

// Random [0,max_priority] game arena with out-degree >= 1 everywhere; used to
// exercise the solvers on shapes the game builders never produce.
inline GameArena random_arena(Rng& rng, int n_vertices, int max_degree,
                              int max_priority = 2) {
  GameArena g;
  g.name = "random";
  g.max_priority = max_priority;
  for (int v = 0; v < n_vertices; ++v) {
    VertexPayload pl;
    pl.kind = VKind::PairV1;
    pl.states = {static_cast<StateId>(v), 0};
    g.add_vertex(rng.chance(1, 2) ? Owner::Eve : Owner::Adam, std::move(pl));
  }
  for (int v = 0; v < n_vertices; ++v) {
    std::uint64_t deg = 1 + rng.below(max_degree);
    for (std::uint64_t i = 0; i < deg; ++i)
      g.add_edge(static_cast<std::uint32_t>(v),
                 static_cast<std::uint32_t>(rng.below(n_vertices)),
                 static_cast<int>(rng.below(max_priority + 1)),
                 EKind::Letter);
  }
  g.initial = 0;
  g.check();
  return g;
}

inline std::string env_or_die(const char* name) {
  const char* v = std::getenv(name);
  if (!v) throw std::runtime_error(std::string("missing env var ") + name);
  return v;
}

inline std::string cli_path() { return env_or_die("HDB_CLI"); }
inline std::string data_dir() { return env_or_die("HDB_DATA"); }

// Runs a shell command, captures stdout, returns (exit code, stdout).
inline std::pair<int, std::string> run_command(const std::string& cmd) {
  std::string full = cmd + " 2>/dev/null";
  FILE* pipe = popen(full.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed");
  std::string out;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    out.append(buf.data(), got);
  int status = pclose(pipe);
  int code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  return {code, out};
}

}  // namespace testutil
