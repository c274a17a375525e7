// hdbuchi/automaton.hpp -- transition-based parity automata, the TAF text
// format, and the basic graph queries everything else builds on.
//
// Conventions used throughout the library:
//   * Acceptance is transition-based max-parity: a run is accepting iff the
//     highest priority occurring infinitely often along it is even.
//   * Buchi means index [1,2] (priority 2 = accepting), co-Buchi [0,1],
//     safety all-0.
//   * All tie-breaking uses declaration order of states and letters.
#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hdbuchi/base.hpp"

namespace hdbuchi {

using StateId = std::uint32_t;
using LetterId = std::uint32_t;
using Alphabet = std::vector<std::string>;

struct Transition {
  StateId src = 0;
  LetterId letter = 0;
  int priority = 0;
  StateId dst = 0;

  friend auto operator<=>(const Transition&, const Transition&) = default;
};

struct ParityAutomaton {
  int index_lo = 1;
  int index_hi = 2;
  Alphabet alphabet;
  std::vector<std::string> state_names;
  StateId initial = 0;
  // Kept sorted by (src, letter, priority, dst) and duplicate-free.
  std::vector<Transition> transitions;

  std::size_t n_states() const { return state_names.size(); }
  std::size_t n_letters() const { return alphabet.size(); }
  bool is_buchi() const { return index_lo == 1 && index_hi == 2; }

  std::optional<StateId> state_index(const std::string& name) const {
    for (std::size_t i = 0; i < state_names.size(); ++i)
      if (state_names[i] == name) return static_cast<StateId>(i);
    return std::nullopt;
  }
  std::optional<LetterId> letter_index(const std::string& name) const {
    for (std::size_t i = 0; i < alphabet.size(); ++i)
      if (alphabet[i] == name) return static_cast<LetterId>(i);
    return std::nullopt;
  }

  // Sorts and dedupes transitions, then checks every structural invariant.
  // Construction code calls this after building; violations are bugs.
  void canonicalize() {
    std::sort(transitions.begin(), transitions.end());
    transitions.erase(std::unique(transitions.begin(), transitions.end()),
                      transitions.end());
    if (alphabet.empty()) throw IntegrityError("automaton: empty alphabet");
    if (state_names.empty()) throw IntegrityError("automaton: no states");
    if (index_lo != 0 && index_lo != 1)
      throw IntegrityError("automaton: index_lo must be 0 or 1");
    if (index_lo >= index_hi)
      throw IntegrityError("automaton: index_lo >= index_hi");
    if (initial >= n_states())
      throw IntegrityError("automaton: initial state out of range");
    std::set<std::string> seen(state_names.begin(), state_names.end());
    if (seen.size() != state_names.size())
      throw IntegrityError("automaton: duplicate state name");
    std::set<std::string> seenl(alphabet.begin(), alphabet.end());
    if (seenl.size() != alphabet.size())
      throw IntegrityError("automaton: duplicate letter");
    for (const Transition& t : transitions) {
      if (t.src >= n_states() || t.dst >= n_states())
        throw IntegrityError("automaton: transition state out of range");
      if (t.letter >= n_letters())
        throw IntegrityError("automaton: transition letter out of range");
      if (t.priority < index_lo || t.priority > index_hi)
        throw IntegrityError("automaton: transition priority out of index");
    }
  }

  friend bool operator==(const ParityAutomaton&, const ParityAutomaton&) =
      default;
};

// Ultimately periodic word u.v^omega, letters as indices into some alphabet.
struct Lasso {
  std::vector<LetterId> spoke;
  std::vector<LetterId> cycle;
};

// Positional Adam letter strategy: state index -> letter index.
using LetterMap = std::map<StateId, LetterId>;

// ---------------------------------------------------------------------------
// Adjacency view.  Transitions are already sorted by (src, letter, ...), so a
// per-state offset table gives contiguous slices; per-letter lookup scans the
// slice (state fan-outs are small everywhere this library operates).
class Adj {
 public:
  explicit Adj(const ParityAutomaton& a) : a_(&a), offset_(a.n_states() + 1, 0) {
    for (const Transition& t : a.transitions) offset_[t.src + 1]++;
    for (std::size_t i = 1; i < offset_.size(); ++i) offset_[i] += offset_[i - 1];
  }

  // All transitions leaving p, in canonical order.
  std::pair<const Transition*, const Transition*> out(StateId p) const {
    const Transition* base = a_->transitions.data();
    return {base + offset_[p], base + offset_[p + 1]};
  }

  std::vector<Transition> out(StateId p, LetterId a) const {
    std::vector<Transition> r;
    auto [lo, hi] = out(p);
    for (const Transition* t = lo; t != hi; ++t)
      if (t->letter == a) r.push_back(*t);
    return r;
  }

  bool has(StateId p, LetterId a) const {
    auto [lo, hi] = out(p);
    for (const Transition* t = lo; t != hi; ++t)
      if (t->letter == a) return true;
    return false;
  }

 private:
  const ParityAutomaton* a_;
  std::vector<std::size_t> offset_;
};

// ---------------------------------------------------------------------------
// TAF parsing / serialization.

namespace detail {
inline std::vector<std::string> tokens(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream iss(line);
  std::string t;
  while (iss >> t) out.push_back(t);
  return out;
}

inline int parse_int(const std::string& tok, int lineno, const char* what) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(tok, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != tok.size())
    throw ParseError("line " + std::to_string(lineno) + ": bad " + what +
                     " '" + tok + "'");
  return v;
}
}  // namespace detail

inline ParityAutomaton parse_automaton(const std::string& text) {
  ParityAutomaton a;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  // Section order is fixed: parity, alphabet, states, initial, trans*.
  int section = 0;
  bool have_initial = false;
  auto fail = [&](const std::string& msg) -> ParseError {
    return ParseError("line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::vector<std::string> tok = detail::tokens(line);
    if (tok.empty() || tok[0][0] == '#') continue;
    const std::string& kw = tok[0];
    if (kw == "parity") {
      if (section != 0) throw fail("unexpected 'parity'");
      if (tok.size() != 3) throw fail("expected: parity <lo> <hi>");
      a.index_lo = detail::parse_int(tok[1], lineno, "priority");
      a.index_hi = detail::parse_int(tok[2], lineno, "priority");
      if (a.index_lo != 0 && a.index_lo != 1)
        throw fail("index_lo must be 0 or 1");
      if (a.index_lo >= a.index_hi) throw fail("index_lo must be < index_hi");
      section = 1;
    } else if (kw == "alphabet") {
      if (section != 1) throw fail("unexpected 'alphabet'");
      if (tok.size() < 2) throw fail("alphabet needs at least one letter");
      for (std::size_t i = 1; i < tok.size(); ++i) {
        if (a.letter_index(tok[i])) throw fail("duplicate letter '" + tok[i] + "'");
        a.alphabet.push_back(tok[i]);
      }
      section = 2;
    } else if (kw == "states") {
      if (section != 2) throw fail("unexpected 'states'");
      if (tok.size() < 2) throw fail("states needs at least one state");
      for (std::size_t i = 1; i < tok.size(); ++i) {
        if (a.state_index(tok[i])) throw fail("duplicate state '" + tok[i] + "'");
        a.state_names.push_back(tok[i]);
      }
      section = 3;
    } else if (kw == "initial") {
      if (section != 3) throw fail("unexpected 'initial'");
      if (tok.size() != 2) throw fail("expected: initial <state>");
      std::optional<StateId> s = a.state_index(tok[1]);
      if (!s) throw fail("unknown state '" + tok[1] + "'");
      a.initial = *s;
      have_initial = true;
      section = 4;
    } else if (kw == "trans") {
      if (section != 4) throw fail("unexpected 'trans'");
      if (tok.size() != 5) throw fail("expected: trans <src> <letter> <priority> <dst>");
      std::optional<StateId> src = a.state_index(tok[1]);
      if (!src) throw fail("unknown state '" + tok[1] + "'");
      std::optional<LetterId> let = a.letter_index(tok[2]);
      if (!let) throw fail("unknown letter '" + tok[2] + "'");
      int pr = detail::parse_int(tok[3], lineno, "priority");
      if (pr < a.index_lo || pr > a.index_hi)
        throw fail("priority " + std::to_string(pr) + " outside index [" +
                   std::to_string(a.index_lo) + "," +
                   std::to_string(a.index_hi) + "]");
      std::optional<StateId> dst = a.state_index(tok[4]);
      if (!dst) throw fail("unknown state '" + tok[4] + "'");
      a.transitions.push_back({*src, *let, pr, *dst});
    } else {
      throw fail("unknown keyword '" + kw + "'");
    }
  }
  if (!have_initial) throw ParseError("missing sections: file ends before 'initial'");
  a.canonicalize();
  return a;
}

inline std::string serialize_automaton(const ParityAutomaton& a) {
  std::ostringstream out;
  out << "parity " << a.index_lo << ' ' << a.index_hi << '\n';
  out << "alphabet";
  for (const std::string& l : a.alphabet) out << ' ' << l;
  out << '\n';
  out << "states";
  for (const std::string& s : a.state_names) out << ' ' << s;
  out << '\n';
  out << "initial " << a.state_names[a.initial] << '\n';
  for (const Transition& t : a.transitions)
    out << "trans " << a.state_names[t.src] << ' ' << a.alphabet[t.letter]
        << ' ' << t.priority << ' ' << a.state_names[t.dst] << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Basic queries and the trim construction.

inline std::vector<bool> reachable_states(const ParityAutomaton& a) {
  std::vector<bool> seen(a.n_states(), false);
  std::vector<StateId> stack = {a.initial};
  seen[a.initial] = true;
  Adj adj(a);
  while (!stack.empty()) {
    StateId p = stack.back();
    stack.pop_back();
    auto [lo, hi] = adj.out(p);
    for (const Transition* t = lo; t != hi; ++t)
      if (!seen[t->dst]) {
        seen[t->dst] = true;
        stack.push_back(t->dst);
      }
  }
  return seen;
}

// Restriction of A to the states reachable from the initial state.
inline ParityAutomaton trim(const ParityAutomaton& a) {
  std::vector<bool> keep = reachable_states(a);
  std::vector<StateId> remap(a.n_states(), 0);
  ParityAutomaton r;
  r.index_lo = a.index_lo;
  r.index_hi = a.index_hi;
  r.alphabet = a.alphabet;
  for (StateId q = 0; q < a.n_states(); ++q)
    if (keep[q]) {
      remap[q] = static_cast<StateId>(r.state_names.size());
      r.state_names.push_back(a.state_names[q]);
    }
  r.initial = remap[a.initial];
  for (const Transition& t : a.transitions)
    if (keep[t.src] && keep[t.dst])
      r.transitions.push_back({remap[t.src], t.letter, t.priority, remap[t.dst]});
  r.canonicalize();
  return r;
}

inline bool is_deterministic(const ParityAutomaton& a) {
  // Transitions are sorted by (src, letter, ...): duplicates are adjacent.
  for (std::size_t i = 1; i < a.transitions.size(); ++i)
    if (a.transitions[i].src == a.transitions[i - 1].src &&
        a.transitions[i].letter == a.transitions[i - 1].letter)
      return false;
  return true;
}

inline bool is_complete(const ParityAutomaton& a) {
  Adj adj(a);
  for (StateId p = 0; p < a.n_states(); ++p)
    for (LetterId l = 0; l < a.n_letters(); ++l)
      if (!adj.has(p, l)) return false;
  return true;
}

// Pairs of states reachable from (initial, initial) by reading the same word.
inline std::set<std::pair<StateId, StateId>> reachable_pairs(
    const ParityAutomaton& a) {
  std::set<std::pair<StateId, StateId>> seen;
  std::vector<std::pair<StateId, StateId>> stack;
  Adj adj(a);
  seen.insert({a.initial, a.initial});
  stack.push_back({a.initial, a.initial});
  while (!stack.empty()) {
    auto [p, q] = stack.back();
    stack.pop_back();
    for (LetterId l = 0; l < a.n_letters(); ++l)
      for (const Transition& tp : adj.out(p, l))
        for (const Transition& tq : adj.out(q, l)) {
          std::pair<StateId, StateId> nx{tp.dst, tq.dst};
          if (seen.insert(nx).second) stack.push_back(nx);
        }
  }
  return seen;
}

// ---------------------------------------------------------------------------
// Exact lasso membership: does some run on u.v^omega from `from` accept?
//
// Product the automaton with the cycle positions, then look for a reachable
// SCC that realizes an even maximum priority (classic max-parity check: for
// each even c, restrict to edges of priority <= c and ask for an SCC that
// contains a priority-c edge).
namespace detail {

struct SccEdge {
  std::uint32_t src, dst;
  int priority;
};

// Tarjan over an explicit edge list; returns component id per vertex.
inline std::vector<std::uint32_t> scc_ids(std::size_t n,
                                          const std::vector<SccEdge>& edges) {
  std::vector<std::vector<std::uint32_t>> succ(n);
  for (const SccEdge& e : edges) succ[e.src].push_back(e.dst);
  std::vector<std::uint32_t> comp(n, 0), index(n, 0), low(n, 0);
  std::vector<bool> onstack(n, false), visited(n, false);
  std::vector<std::uint32_t> stack;
  std::uint32_t next_index = 1, next_comp = 0;
  // Iterative DFS: frame = (vertex, next successor position).
  std::vector<std::pair<std::uint32_t, std::size_t>> frames;
  for (std::uint32_t root = 0; root < n; ++root) {
    if (visited[root]) continue;
    frames.push_back({root, 0});
    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      if (pos == 0) {
        visited[v] = true;
        index[v] = low[v] = next_index++;
        stack.push_back(v);
        onstack[v] = true;
      }
      if (pos < succ[v].size()) {
        std::uint32_t w = succ[v][pos++];
        if (!visited[w]) {
          frames.push_back({w, 0});
        } else if (onstack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
      } else {
        if (low[v] == index[v]) {
          for (;;) {
            std::uint32_t w = stack.back();
            stack.pop_back();
            onstack[w] = false;
            comp[w] = next_comp;
            if (w == v) break;
          }
          ++next_comp;
        }
        std::uint32_t vv = v;
        frames.pop_back();
        if (!frames.empty())
          low[frames.back().first] =
              std::min(low[frames.back().first], low[vv]);
      }
    }
  }
  return comp;
}

}  // namespace detail

inline bool lasso_accepts(const ParityAutomaton& a, const Lasso& w,
                          StateId from) {
  if (w.cycle.empty()) throw PreconditionError("lasso_accepts: empty cycle");
  for (LetterId l : w.spoke)
    if (l >= a.n_letters()) throw PreconditionError("lasso_accepts: letter out of range");
  for (LetterId l : w.cycle)
    if (l >= a.n_letters()) throw PreconditionError("lasso_accepts: letter out of range");
  Adj adj(a);
  // States reachable from `from` along the spoke (runs may die out).
  std::set<StateId> cur = {from};
  for (LetterId l : w.spoke) {
    std::set<StateId> nxt;
    for (StateId p : cur)
      for (const Transition& t : adj.out(p, l)) nxt.insert(t.dst);
    cur = std::move(nxt);
    if (cur.empty()) return false;
  }
  // Product with cycle positions: vertex (q, i) has id q * |v| + i.
  const std::size_t m = w.cycle.size();
  const std::size_t n = a.n_states() * m;
  std::vector<detail::SccEdge> edges;
  for (StateId q = 0; q < a.n_states(); ++q)
    for (std::size_t i = 0; i < m; ++i)
      for (const Transition& t : adj.out(q, w.cycle[i]))
        edges.push_back({static_cast<std::uint32_t>(q * m + i),
                         static_cast<std::uint32_t>(t.dst * m + (i + 1) % m),
                         t.priority});
  // Reachability from the start set in the full product.
  std::vector<bool> reach(n, false);
  std::vector<std::uint32_t> stack;
  for (StateId q : cur) {
    reach[q * m] = true;
    stack.push_back(static_cast<std::uint32_t>(q * m));
  }
  std::vector<std::vector<std::uint32_t>> succ(n);
  for (const detail::SccEdge& e : edges) succ[e.src].push_back(e.dst);
  while (!stack.empty()) {
    std::uint32_t v = stack.back();
    stack.pop_back();
    for (std::uint32_t nxt : succ[v])
      if (!reach[nxt]) {
        reach[nxt] = true;
        stack.push_back(nxt);
      }
  }
  // For each even priority c: SCCs of the (priority <= c) subgraph; accept if
  // a reachable SCC contains a priority-c edge inside it.
  for (int c = (a.index_lo == 0 ? 0 : 2); c <= a.index_hi; c += 2) {
    std::vector<detail::SccEdge> sub;
    for (const detail::SccEdge& e : edges)
      if (e.priority <= c) sub.push_back(e);
    std::vector<std::uint32_t> comp = detail::scc_ids(n, sub);
    for (const detail::SccEdge& e : sub)
      if (e.priority == c && comp[e.src] == comp[e.dst] && reach[e.src])
        return true;
  }
  return false;
}

}  // namespace hdbuchi
