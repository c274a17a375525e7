// hdbuchi/solver.hpp -- exact solving of [0,1] and [0,2] max-parity arenas.
//
// Three independent engines, used to cross-check each other:
//   * spm: small-progress-measure lifting over edge priorities.  Computes the
//     ranks of the paper ("largest number of 1's Adam can force before a 2"),
//     Eve's winning region (finite rank) and a rank-optimal Eve strategy.
//   * solve_01 winners: iterated safety-core / attractor fixpoint for the
//     [0,1] games (co-Buchi for Eve).  Winners must match spm's.
//   * zielonka: recursive McNaughton/Zielonka on an edge-subdivided copy.
//     Supplies Adam's positional winning strategy (spm only yields Eve's) and
//     a third winner computation.
#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hdbuchi/arena.hpp"

namespace hdbuchi {

struct Solution {
  // rank[v]: finite value iff Eve wins from v; nullopt encodes "top".
  std::vector<std::optional<std::uint64_t>> rank;
  std::vector<Owner> winner;
  // Eve-won Eve vertex -> chosen edge id (rank-optimal, least-edge tiebreak).
  std::map<std::uint32_t, std::uint32_t> eve_strategy;

  bool eve_wins(std::uint32_t v) const { return winner[v] == Owner::Eve; }
};

namespace detail {

// Total order on the rank lattice; nullopt (top) is the largest element.
inline bool rank_less(const std::optional<std::uint64_t>& a,
                      const std::optional<std::uint64_t>& b) {
  if (!a) return false;
  if (!b) return true;
  return *a < *b;
}

inline std::vector<std::vector<std::uint32_t>> predecessor_edges(
    const GameArena& g) {
  std::vector<std::vector<std::uint32_t>> pred(g.n_vertices());
  for (std::uint32_t e = 0; e < g.edges.size(); ++e)
    pred[g.edges[e].dst].push_back(e);
  return pred;
}

// Small-progress-measure lifting.  The measure of a vertex is the number of
// priority-1 edges Adam can still force before a priority-2 edge occurs,
// capped at R = #priority-1 edges (values beyond R collapse to top).
inline Solution spm_solve(const GameArena& g) {
  const std::size_t n = g.n_vertices();
  std::uint64_t R = 0;
  for (const GameEdge& e : g.edges)
    if (e.priority == 1) ++R;
  std::vector<std::optional<std::uint64_t>> mu(n, std::uint64_t{0});

  auto val = [&](const GameEdge& e) -> std::optional<std::uint64_t> {
    const std::optional<std::uint64_t>& m = mu[e.dst];
    switch (e.priority) {
      case 2:
        if (!m) return std::nullopt;
        return std::uint64_t{0};
      case 1:
        if (!m || *m + 1 > R) return std::nullopt;
        return *m + 1;
      default:
        return m;
    }
  };
  auto best = [&](std::uint32_t v) {
    std::optional<std::uint64_t> b;
    bool first = true;
    for (std::uint32_t eid : g.out[v]) {
      std::optional<std::uint64_t> w = val(g.edges[eid]);
      if (first) {
        b = w;
        first = false;
      } else if (g.owner[v] == Owner::Eve ? rank_less(w, b)
                                          : rank_less(b, w)) {
        b = w;
      }
    }
    return b;
  };

  std::vector<std::vector<std::uint32_t>> pred = predecessor_edges(g);
  std::deque<std::uint32_t> work;
  std::vector<bool> queued(n, true);
  for (std::uint32_t v = 0; v < n; ++v) work.push_back(v);
  while (!work.empty()) {
    std::uint32_t v = work.front();
    work.pop_front();
    queued[v] = false;
    std::optional<std::uint64_t> b = best(v);
    if (rank_less(mu[v], b)) {
      mu[v] = b;
      for (std::uint32_t eid : pred[v]) {
        std::uint32_t u = g.edges[eid].src;
        if (!queued[u]) {
          queued[u] = true;
          work.push_back(u);
        }
      }
    }
  }

  Solution s;
  s.rank = std::move(mu);
  s.winner.resize(n);
  for (std::uint32_t v = 0; v < n; ++v)
    s.winner[v] = s.rank[v] ? Owner::Eve : Owner::Adam;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (g.owner[v] != Owner::Eve || !s.rank[v]) continue;
    for (std::uint32_t eid : g.out[v]) {
      const GameEdge& e = g.edges[eid];
      std::optional<std::uint64_t> w = [&]() -> std::optional<std::uint64_t> {
        switch (e.priority) {
          case 2:
            return s.rank[e.dst] ? std::optional<std::uint64_t>{0}
                                 : std::nullopt;
          case 1:
            return (s.rank[e.dst] && *s.rank[e.dst] + 1 <= R)
                       ? std::optional<std::uint64_t>{*s.rank[e.dst] + 1}
                       : std::nullopt;
          default:
            return s.rank[e.dst];
        }
      }();
      if (w == s.rank[v]) {
        s.eve_strategy[v] = eid;
        break;
      }
    }
    if (!s.eve_strategy.count(v))
      throw IntegrityError("spm_solve: no rank-achieving edge at Eve vertex");
  }
  return s;
}

// Player attractor on the full arena (no subgame mask).
inline std::vector<bool> attractor(const GameArena& g,
                                   const std::vector<bool>& target,
                                   Owner player) {
  const std::size_t n = g.n_vertices();
  std::vector<std::vector<std::uint32_t>> pred = predecessor_edges(g);
  std::vector<std::size_t> cnt(n, 0);
  for (std::uint32_t v = 0; v < n; ++v) cnt[v] = g.out[v].size();
  std::vector<bool> in(target);
  std::deque<std::uint32_t> work;
  for (std::uint32_t v = 0; v < n; ++v)
    if (in[v]) work.push_back(v);
  while (!work.empty()) {
    std::uint32_t u = work.front();
    work.pop_front();
    for (std::uint32_t eid : pred[u]) {
      std::uint32_t w = g.edges[eid].src;
      if (in[w]) continue;
      if (g.owner[w] == player) {
        in[w] = true;
        work.push_back(w);
      } else if (--cnt[w] == 0) {
        in[w] = true;
        work.push_back(w);
      }
    }
  }
  return in;
}

}  // namespace detail

// Exact solve of a [0,2] arena via small progress measures.
inline Solution solve_02(const GameArena& g) {
  for (const GameEdge& e : g.edges)
    if (e.priority < 0 || e.priority > 2)
      throw PreconditionError("solve_02: priority out of range");
  return detail::spm_solve(g);
}

// Exact solve of a [0,1] arena (Eve wins iff finitely many priority-1 edges).
// Winners are computed twice: by the iterated safety-core/attractor fixpoint
// and by progress measures; a mismatch is an internal error.
inline Solution solve_01(const GameArena& g) {
  for (const GameEdge& e : g.edges)
    if (e.priority < 0 || e.priority > 1)
      throw PreconditionError("solve_01: priority out of range");
  Solution s = detail::spm_solve(g);

  const std::size_t n = g.n_vertices();
  std::vector<bool> won(n, false);
  for (;;) {
    // Largest S disjoint from won where Eve can keep priorities at 0 forever,
    // allowing drops into the already-won region.
    std::vector<bool> in_s(n);
    for (std::uint32_t v = 0; v < n; ++v) in_s[v] = !won[v];
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::uint32_t v = 0; v < n; ++v) {
        if (!in_s[v]) continue;
        bool ok;
        if (g.owner[v] == Owner::Eve) {
          ok = false;
          for (std::uint32_t eid : g.out[v]) {
            const GameEdge& e = g.edges[eid];
            if (won[e.dst] || (e.priority == 0 && in_s[e.dst])) ok = true;
          }
        } else {
          ok = true;
          for (std::uint32_t eid : g.out[v]) {
            const GameEdge& e = g.edges[eid];
            if (!(won[e.dst] || (e.priority == 0 && in_s[e.dst]))) ok = false;
          }
        }
        if (!ok) {
          in_s[v] = false;
          changed = true;
        }
      }
    }
    std::vector<bool> target(n);
    for (std::uint32_t v = 0; v < n; ++v) target[v] = won[v] || in_s[v];
    std::vector<bool> grown = detail::attractor(g, target, Owner::Eve);
    if (grown == won) break;
    won = std::move(grown);
  }
  for (std::uint32_t v = 0; v < n; ++v)
    if (won[v] != (s.winner[v] == Owner::Eve))
      throw IntegrityError("solve_01: attractor and measure winners disagree");
  return s;
}

// ---------------------------------------------------------------------------
// Rank monotonicity audit (the paper's rank lemma): along any Adam edge, and
// along Eve's strategy edges, the rank never increases unless the edge has
// priority 2, and strictly decreases on priority-1 edges.
inline std::optional<std::string> rank_monotonicity_violation(
    const GameArena& g, const Solution& s) {
  auto check_edge = [&](std::uint32_t eid) -> std::optional<std::string> {
    const GameEdge& e = g.edges[eid];
    if (e.priority == 2) return std::nullopt;
    const auto& rv = s.rank[e.src];
    const auto& ru = s.rank[e.dst];
    if (!rv) return std::nullopt;  // nothing claimed from Adam-won vertices
    if (!ru)
      return "edge " + std::to_string(eid) + ": finite rank into top";
    if (e.priority == 1 ? !(*rv > *ru) : !(*rv >= *ru))
      return "edge " + std::to_string(eid) + ": rank " + std::to_string(*rv) +
             " !>= " + std::to_string(*ru) +
             (e.priority == 1 ? " (strict required)" : "");
    return std::nullopt;
  };
  for (std::uint32_t v = 0; v < g.n_vertices(); ++v) {
    if (g.owner[v] == Owner::Adam) {
      for (std::uint32_t eid : g.out[v])
        if (auto err = check_edge(eid)) return err;
    } else if (auto it = s.eve_strategy.find(v); it != s.eve_strategy.end()) {
      if (auto err = check_edge(it->second)) return err;
    }
  }
  return std::nullopt;
}

// True iff the solution passes the rank audit above.
inline bool rank_monotonicity_check(const GameArena& g, const Solution& s) {
  return !rank_monotonicity_violation(g, s).has_value();
}

// ---------------------------------------------------------------------------
// Zielonka on an edge-subdivided copy: yields positional strategies for both
// players, in particular Adam's (progress measures only give Eve's).

namespace detail {

struct ZGraph {
  std::vector<Owner> owner;
  std::vector<int> prio;  // max-parity vertex priority
  std::vector<std::vector<std::uint32_t>> succ;
  std::vector<std::vector<std::uint32_t>> pred;
};

struct ZSolution {
  std::vector<Owner> winner;
  // Chosen successor for vertices owned by their winner.
  std::vector<std::optional<std::uint32_t>> choice;
};

// Attractor of `target` for `player` within `alive`; fills `choice` with the
// attracting successor for player-owned attracted vertices.
inline std::vector<bool> z_attr(const ZGraph& zg, const std::vector<bool>& alive,
                                const std::vector<bool>& target, Owner player,
                                std::vector<std::optional<std::uint32_t>>& choice) {
  const std::size_t n = zg.owner.size();
  std::vector<std::size_t> cnt(n, 0);
  for (std::uint32_t v = 0; v < n; ++v) {
    if (!alive[v]) continue;
    for (std::uint32_t w : zg.succ[v])
      if (alive[w]) ++cnt[v];
  }
  std::vector<bool> in(n, false);
  std::deque<std::uint32_t> work;
  for (std::uint32_t v = 0; v < n; ++v)
    if (alive[v] && target[v]) {
      in[v] = true;
      work.push_back(v);
    }
  while (!work.empty()) {
    std::uint32_t u = work.front();
    work.pop_front();
    for (std::uint32_t w : zg.pred[u]) {
      if (!alive[w] || in[w]) continue;
      if (zg.owner[w] == player) {
        in[w] = true;
        choice[w] = u;
        work.push_back(w);
      } else if (--cnt[w] == 0) {
        in[w] = true;
        work.push_back(w);
      }
    }
  }
  return in;
}

inline void z_solve(const ZGraph& zg, std::vector<bool> alive,
                    ZSolution& out) {
  const std::size_t n = zg.owner.size();
  for (;;) {
    int d = -1;
    for (std::uint32_t v = 0; v < n; ++v)
      if (alive[v]) d = std::max(d, zg.prio[v]);
    if (d < 0) return;  // nothing alive
    Owner p = (d % 2 == 0) ? Owner::Eve : Owner::Adam;
    Owner o = (p == Owner::Eve) ? Owner::Adam : Owner::Eve;

    std::vector<bool> top(n, false);
    for (std::uint32_t v = 0; v < n; ++v)
      if (alive[v] && zg.prio[v] == d) top[v] = true;
    std::vector<std::optional<std::uint32_t>> attr_choice(n);
    std::vector<bool> a = z_attr(zg, alive, top, p, attr_choice);

    std::vector<bool> sub(n, false);
    bool sub_any = false;
    for (std::uint32_t v = 0; v < n; ++v) {
      sub[v] = alive[v] && !a[v];
      sub_any = sub_any || sub[v];
    }
    ZSolution rec;
    rec.winner.assign(n, Owner::Eve);
    rec.choice.assign(n, std::nullopt);
    if (sub_any) z_solve(zg, sub, rec);

    std::vector<bool> opp_win(n, false);
    bool opp_any = false;
    for (std::uint32_t v = 0; v < n; ++v)
      if (sub[v] && rec.winner[v] == o) {
        opp_win[v] = true;
        opp_any = true;
      }

    if (!opp_any) {
      // p wins everything alive: attractor play to the top set, recursive
      // strategy inside the subgame, any alive successor on the top set.
      for (std::uint32_t v = 0; v < n; ++v) {
        if (!alive[v]) continue;
        out.winner[v] = p;
        if (zg.owner[v] != p) continue;
        if (top[v]) {
          for (std::uint32_t w : zg.succ[v])
            if (alive[w]) {
              out.choice[v] = w;
              break;
            }
        } else if (a[v]) {
          out.choice[v] = attr_choice[v];
        } else {
          out.choice[v] = rec.choice[v];
        }
      }
      return;
    }

    // The opponent keeps their subgame region plus its attractor; that part
    // is settled for good.  Shrink and repeat.
    std::vector<std::optional<std::uint32_t>> ochoice(n);
    std::vector<bool> b = z_attr(zg, alive, opp_win, o, ochoice);
    for (std::uint32_t v = 0; v < n; ++v) {
      if (!alive[v] || !b[v]) continue;
      out.winner[v] = o;
      if (zg.owner[v] == o)
        out.choice[v] = opp_win[v] ? rec.choice[v] : ochoice[v];
      alive[v] = false;
    }
  }
}

// Subdivide arena edges into priority-carrying midpoints; original vertices
// get priority 0, which never dominates (an all-0 play is an Eve win in the
// [0,2] encoding either way).
inline ZGraph subdivide(const GameArena& g) {
  const std::size_t n = g.n_vertices();
  ZGraph zg;
  const std::size_t total = n + g.edges.size();
  zg.owner.resize(total);
  zg.prio.assign(total, 0);
  zg.succ.resize(total);
  zg.pred.resize(total);
  for (std::uint32_t v = 0; v < n; ++v) zg.owner[v] = g.owner[v];
  for (std::uint32_t e = 0; e < g.edges.size(); ++e) {
    std::uint32_t mid = static_cast<std::uint32_t>(n + e);
    zg.owner[mid] = Owner::Adam;  // single successor; owner irrelevant
    zg.prio[mid] = g.edges[e].priority;
    zg.succ[g.edges[e].src].push_back(mid);
    zg.pred[mid].push_back(g.edges[e].src);
    zg.succ[mid].push_back(g.edges[e].dst);
    zg.pred[g.edges[e].dst].push_back(mid);
  }
  return zg;
}

}  // namespace detail

struct AdamCertificate {
  std::vector<Owner> winner;
  // Adam-won Adam vertex -> winning edge id.
  std::map<std::uint32_t, std::uint32_t> adam_strategy;
};

// Adam's positional winning strategy on his region, via Zielonka.  Winners
// are cross-checked against the given progress-measure solution.
inline AdamCertificate adam_strategy_02(const GameArena& g,
                                        const Solution& s) {
  detail::ZGraph zg = detail::subdivide(g);
  detail::ZSolution zs;
  zs.winner.assign(zg.owner.size(), Owner::Eve);
  zs.choice.assign(zg.owner.size(), std::nullopt);
  std::vector<bool> alive(zg.owner.size(), true);
  detail::z_solve(zg, std::move(alive), zs);

  AdamCertificate cert;
  cert.winner.resize(g.n_vertices());
  for (std::uint32_t v = 0; v < g.n_vertices(); ++v) {
    cert.winner[v] = zs.winner[v];
    if (cert.winner[v] != s.winner[v])
      throw IntegrityError("adam_strategy_02: zielonka disagrees with ranks");
    if (g.owner[v] == Owner::Adam && cert.winner[v] == Owner::Adam) {
      if (!zs.choice[v])
        throw IntegrityError("adam_strategy_02: missing Adam choice");
      cert.adam_strategy[v] =
          static_cast<std::uint32_t>(*zs.choice[v] - g.n_vertices());
    }
  }
  return cert;
}

}  // namespace hdbuchi
