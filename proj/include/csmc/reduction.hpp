#pragma once

#include <numeric>
#include <set>
#include <vector>

#include "csmc/formula.hpp"
#include "csmc/reach_graph.hpp"
#include "csmc/views.hpp"

namespace csmc {

// Simplified formula-relative reduction: maximal linear chains of states
// sharing one valuation over the given atom set collapse to a single
// quotient state. An arc u->v joins u and v into a chain only when the
// valuations agree, u has no other successor and v has no other
// predecessor, so entries happen at chain heads and exits at chain tails
// and quotient paths from a representative match original paths up to
// stutter.
struct ReducedGraph {
  ReachabilityGraph quotient;                 // states are classes
  std::vector<StateId> class_of;              // original -> class
  std::vector<StateId> representative;        // class -> chain head
  std::vector<std::vector<StateId>> members;  // class -> originals, ascending
  std::vector<std::string> notes;
};

inline std::vector<bool> atom_valuation(const ReachabilityGraph& rg, StateId s,
                                        const std::vector<Atom>& atoms) {
  std::vector<bool> v(atoms.size());
  for (size_t i = 0; i < atoms.size(); ++i) {
    const Atom& a = atoms[i];
    if (a.kind == Atom::Kind::Signal)
      v[i] = rg.generates(s, rg.net.signal_id(a.signal));
    else
      v[i] = rg.local_of(s, rg.net.automaton_index(a.desig.automaton)) ==
             rg.net.automata[static_cast<size_t>(
                                 rg.net.automaton_index(a.desig.automaton))]
                 .local_index(a.desig.local);
  }
  return v;
}

inline ReducedGraph reduce(const ReachabilityGraph& rg,
                           const std::set<Atom>& atom_set) {
  const size_t n = rg.num_states();
  ReducedGraph red;
  std::vector<Atom> atoms(atom_set.begin(), atom_set.end());
  if (atoms.empty())
    red.notes.push_back(
        "empty atom set: every linear chain collapses; the quotient keeps "
        "branching structure only");

  std::vector<std::vector<bool>> val(n);
  for (StateId s = 0; s < n; ++s) val[s] = atom_valuation(rg, s, atoms);

  // union-find over chain-merge arcs
  std::vector<StateId> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<StateId(StateId)> find = [&](StateId x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  auto outdeg = [&](StateId s) { return rg.succ_off[s + 1] - rg.succ_off[s]; };
  auto indeg = [&](StateId s) { return rg.pred_off[s + 1] - rg.pred_off[s]; };
  for (StateId u = 0; u < n; ++u) {
    if (outdeg(u) != 1) continue;
    StateId v = rg.succ_dst[rg.succ_off[u]];
    if (indeg(v) != 1 || val[u] != val[v]) continue;
    parent[find(u)] = find(v);
  }

  // classes numbered by smallest member
  std::vector<StateId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<StateId> root_class(n, kNoState);
  red.class_of.assign(n, kNoState);
  for (StateId s : order) {
    StateId r = find(s);
    if (root_class[r] == kNoState) {
      root_class[r] = static_cast<StateId>(red.members.size());
      red.members.emplace_back();
    }
    red.class_of[s] = root_class[r];
    red.members[root_class[r]].push_back(s);
  }
  const size_t nc = red.members.size();

  // representative: the chain head (no merge-arc predecessor in the class);
  // a fully merged cycle has none, so the smallest member stands in.
  red.representative.resize(nc);
  for (size_t c = 0; c < nc; ++c) {
    std::set<StateId> targeted;
    for (StateId u : red.members[c]) {
      if (outdeg(u) != 1) continue;
      StateId v = rg.succ_dst[rg.succ_off[u]];
      if (red.class_of[v] == c && indeg(v) == 1 && val[u] == val[v] && u != v)
        targeted.insert(v);
    }
    StateId head = kNoState;
    for (StateId m : red.members[c])
      if (!targeted.count(m)) {
        head = m;
        break;
      }
    red.representative[c] = head == kNoState ? red.members[c].front() : head;
  }

  // quotient graph over representatives
  ReachabilityGraph& q = red.quotient;
  q.net = rg.net;
  q.initial = red.class_of[rg.initial];
  std::vector<std::map<StateId, MoverMask>> adj(nc);
  std::vector<std::uint8_t> self_cycle(nc, 0);
  for (StateId u = 0; u < n; ++u) {
    StateId cu = red.class_of[u];
    for (std::uint32_t k = rg.succ_off[u]; k < rg.succ_off[u + 1]; ++k) {
      StateId v = rg.succ_dst[k];
      StateId cv = red.class_of[v];
      if (cu != cv)
        adj[cu][cv] |= rg.succ_movers[k];
      else if (v == red.representative[cv])
        self_cycle[cu] = 1;  // internal arc back to the head closes a cycle
    }
  }
  for (size_t c = 0; c < nc; ++c)
    if (self_cycle[c]) adj[c][static_cast<StateId>(c)] |= 0;

  for (size_t c = 0; c < nc; ++c) {
    q.components.push_back(rg.components[red.representative[c]]);
    for (size_t sig = 0; sig < rg.net.signals.size(); ++sig)
      q.generated.push_back(
          rg.generated[static_cast<size_t>(red.representative[c]) *
                           rg.net.signals.size() +
                       sig]);
  }
  q.succ_off.assign(nc + 1, 0);
  for (size_t c = 0; c < nc; ++c)
    q.succ_off[c + 1] = q.succ_off[c] + static_cast<std::uint32_t>(adj[c].size());
  std::vector<std::uint32_t> indeg_q(nc, 0);
  for (size_t c = 0; c < nc; ++c)
    for (const auto& [dst, mv] : adj[c]) {
      q.succ_dst.push_back(dst);
      q.succ_movers.push_back(mv);
      ++indeg_q[dst];
    }
  q.pred_off.assign(nc + 1, 0);
  for (size_t c = 0; c < nc; ++c) q.pred_off[c + 1] = q.pred_off[c] + indeg_q[c];
  q.pred_src.assign(q.succ_dst.size(), 0);
  std::vector<std::uint32_t> fill(q.pred_off.begin(), q.pred_off.end() - 1);
  for (StateId c = 0; c < nc; ++c)
    for (std::uint32_t k = q.succ_off[c]; k < q.succ_off[c + 1]; ++k)
      q.pred_src[fill[q.succ_dst[k]]++] = c;
  return red;
}

// Maps a path of the original graph into the quotient, dropping consecutive
// duplicates.
inline std::vector<StateId> project_sequence(const std::vector<StateId>& seq,
                                             const ReducedGraph& red) {
  std::vector<StateId> out;
  for (StateId s : seq) {
    StateId c = red.class_of[s];
    if (out.empty() || out.back() != c) out.push_back(c);
  }
  return out;
}

// Positions of a sequence surviving the projection: the first state and
// every state entering a new class. Original 1-based numbering is kept, as
// the signals of the dropped states are exactly what the reduction loses.
inline std::vector<std::pair<int, StateId>> projected_positions(
    const std::vector<StateId>& seq, const ReducedGraph& red) {
  std::vector<std::pair<int, StateId>> out;
  for (size_t k = 0; k < seq.size(); ++k)
    if (k == 0 || red.class_of[seq[k]] != red.class_of[seq[k - 1]])
      out.emplace_back(static_cast<int>(k) + 1, seq[k]);
  return out;
}

inline std::string render_seqdiagram_projected(const ReachabilityGraph& rg,
                                               const std::vector<StateId>& seq,
                                               const ReducedGraph& red) {
  return detail::seqdiagram_lines(rg, projected_positions(seq, red));
}

}  // namespace csmc
