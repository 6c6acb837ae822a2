#pragma once

#include <cstdint>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "csmc/model.hpp"

namespace csmc {

using MoverMask = std::uint64_t;

struct BuildOptions {
  size_t state_cap = 1'000'000;
};

// Global product state space, closed under the synchronous step rule and
// restricted to states reachable from the product of the initials.
//
// Step rule: all automata fire simultaneously. Guards read the signals
// generated in the current global state. An automaton with at least one
// enabled arc must take one of them (each combination is a successor); an
// automaton with no enabled arc keeps its local state and is not a mover.
// An enabled arc whose target equals its source makes the automaton a mover.
//
// Arcs are deduplicated per (src, dst); movers is the union over all firing
// combinations producing the pair. State ids follow BFS discovery order, so
// two builds of the same network are identical.
class ReachabilityGraph {
 public:
  AutomataNetwork net;
  // components[s] holds one byte per automaton: the local-state index.
  std::vector<std::string> components;
  StateId initial = 0;

  // CSR adjacency, successor lists sorted by destination id.
  std::vector<std::uint32_t> succ_off;
  std::vector<StateId> succ_dst;
  std::vector<MoverMask> succ_movers;
  std::vector<std::uint32_t> pred_off;
  std::vector<StateId> pred_src;

  // generated[s * nsignals + sig]
  std::vector<bool> generated;

  size_t num_states() const { return components.size(); }
  size_t num_arcs() const { return succ_dst.size(); }

  int local_of(StateId s, int automaton) const {
    return static_cast<unsigned char>(components[s][static_cast<size_t>(automaton)]);
  }

  bool generates(StateId s, int sig_id) const {
    return sig_id >= 0 &&
           generated[static_cast<size_t>(s) * net.signals.size() +
                     static_cast<size_t>(sig_id)];
  }

  struct SuccRange {
    const ReachabilityGraph* g;
    std::uint32_t b, e;
    struct Iter {
      const ReachabilityGraph* g;
      std::uint32_t i;
      StateId operator*() const { return g->succ_dst[i]; }
      Iter& operator++() { ++i; return *this; }
      bool operator!=(const Iter& o) const { return i != o.i; }
    };
    Iter begin() const { return {g, b}; }
    Iter end() const { return {g, e}; }
  };

  SuccRange successors(StateId s) const {
    return {this, succ_off[s], succ_off[s + 1]};
  }

  // Movers on the deduplicated arc src->dst, or 0 when there is no such arc.
  MoverMask arc_movers(StateId src, StateId dst) const {
    for (std::uint32_t i = succ_off[src]; i < succ_off[src + 1]; ++i)
      if (succ_dst[i] == dst) return succ_movers[i];
    return 0;
  }

  bool has_arc(StateId src, StateId dst) const {
    for (std::uint32_t i = succ_off[src]; i < succ_off[src + 1]; ++i)
      if (succ_dst[i] == dst) return true;
    return false;
  }

  struct PredRange {
    const std::vector<StateId>* v;
    std::uint32_t b, e;
    const StateId* begin() const { return v->data() + b; }
    const StateId* end() const { return v->data() + e; }
  };

  PredRange predecessors(StateId s) const {
    return {&pred_src, pred_off[s], pred_off[s + 1]};
  }

  // Signals generated in s, as sorted names.
  std::set<std::string> generated_signals(StateId s) const {
    std::set<std::string> out;
    for (size_t i = 0; i < net.signals.size(); ++i)
      if (generated[static_cast<size_t>(s) * net.signals.size() + i])
        out.insert(net.signals[i]);
    return out;
  }

  // Automata whose current local state has an outgoing arc whose guard
  // mentions the signal, regardless of the guard's truth value.
  std::set<std::string> listeners(StateId s, const std::string& signal) const {
    std::set<std::string> out;
    int sig = net.signal_id(signal);
    if (sig < 0) return out;
    for (size_t a = 0; a < net.automata.size(); ++a) {
      int loc = local_of(s, static_cast<int>(a));
      if (net.mention_bits[a][static_cast<size_t>(loc)][static_cast<size_t>(sig)])
        out.insert(net.automata[a].name);
    }
    return out;
  }

  std::vector<int> listener_indices(StateId s, int sig_id) const {
    std::vector<int> out;
    if (sig_id < 0) return out;
    for (size_t a = 0; a < net.automata.size(); ++a) {
      int loc = local_of(s, static_cast<int>(a));
      if (net.mention_bits[a][static_cast<size_t>(loc)][static_cast<size_t>(sig_id)])
        out.push_back(static_cast<int>(a));
    }
    return out;
  }

  // All reachable states whose named component is in the named local state,
  // ascending. Names must already be validated.
  std::vector<StateId> states_matching(int automaton, int local) const {
    std::vector<StateId> out;
    for (StateId s = 0; s < num_states(); ++s)
      if (local_of(s, automaton) == local) out.push_back(s);
    return out;
  }

  std::string state_label(StateId s) const {
    std::string out = "(";
    for (size_t a = 0; a < net.automata.size(); ++a) {
      if (a) out += ",";
      out += net.automata[a].locals[static_cast<size_t>(local_of(s, static_cast<int>(a)))];
    }
    out += ")";
    return out;
  }
};

inline std::vector<bool> compute_generated(const AutomataNetwork& net,
                                           const std::string& comps) {
  std::vector<bool> present(net.signals.size(), false);
  for (size_t a = 0; a < net.automata.size(); ++a) {
    const auto& bits = net.emit_bits[a][static_cast<unsigned char>(comps[a])];
    for (size_t i = 0; i < bits.size(); ++i)
      if (bits[i]) present[i] = true;
  }
  return present;
}

inline ReachabilityGraph build_rg(AutomataNetwork net,
                                  const BuildOptions& opts = {}) {
  ReachabilityGraph rg;
  rg.net = std::move(net);
  const auto& aut = rg.net.automata;
  const size_t n_aut = aut.size();
  const size_t n_sig = rg.net.signals.size();

  std::string init(n_aut, '\0');
  for (size_t a = 0; a < n_aut; ++a)
    init[a] = static_cast<char>(aut[a].initial_idx);

  std::unordered_map<std::string, StateId> ids;
  std::vector<std::map<StateId, MoverMask>> adj;  // per src: dst -> movers
  ids.emplace(init, 0);
  rg.components.push_back(init);
  adj.emplace_back();

  struct Choice {
    unsigned char target;
    bool moved;
  };

  for (StateId s = 0; s < rg.components.size(); ++s) {
    const std::string comps = rg.components[s];
    std::vector<bool> present = compute_generated(rg.net, comps);
    for (size_t i = 0; i < n_sig; ++i) rg.generated.push_back(present[i]);

    std::vector<std::vector<Choice>> choices(n_aut);
    for (size_t a = 0; a < n_aut; ++a) {
      int loc = static_cast<unsigned char>(comps[a]);
      for (int ai : rg.net.arcs_from[a][static_cast<size_t>(loc)]) {
        const Arc& arc = aut[a].arcs[static_cast<size_t>(ai)];
        if (!arc.guard.eval(present)) continue;
        Choice c{static_cast<unsigned char>(arc.to_idx), true};
        bool dup = false;
        for (const auto& prev : choices[a])
          if (prev.target == c.target) { dup = true; break; }
        if (!dup) choices[a].push_back(c);
      }
      if (choices[a].empty())
        choices[a].push_back({static_cast<unsigned char>(loc), false});
    }

    // Cartesian product of the per-automaton choice sets.
    std::vector<size_t> pick(n_aut, 0);
    for (;;) {
      std::string dst(n_aut, '\0');
      MoverMask movers = 0;
      for (size_t a = 0; a < n_aut; ++a) {
        const Choice& c = choices[a][pick[a]];
        dst[a] = static_cast<char>(c.target);
        if (c.moved) movers |= (MoverMask{1} << a);
      }
      auto [it, fresh] = ids.emplace(dst, static_cast<StateId>(rg.components.size()));
      if (fresh) {
        if (rg.components.size() >= opts.state_cap)
          throw CapacityError("state count cap exceeded (" +
                              std::to_string(opts.state_cap) + ")");
        rg.components.push_back(dst);
        adj.emplace_back();
      }
      adj[s][it->second] |= movers;

      size_t a = 0;
      while (a < n_aut && ++pick[a] == choices[a].size()) {
        pick[a] = 0;
        ++a;
      }
      if (a == n_aut) break;
    }
  }

  const size_t n = rg.components.size();
  rg.succ_off.assign(n + 1, 0);
  for (size_t s = 0; s < n; ++s)
    rg.succ_off[s + 1] = rg.succ_off[s] + static_cast<std::uint32_t>(adj[s].size());
  rg.succ_dst.reserve(rg.succ_off[n]);
  rg.succ_movers.reserve(rg.succ_off[n]);
  std::vector<std::uint32_t> indeg(n, 0);
  for (size_t s = 0; s < n; ++s) {
    for (const auto& [dst, mv] : adj[s]) {
      rg.succ_dst.push_back(dst);
      rg.succ_movers.push_back(mv);
      ++indeg[dst];
    }
  }
  rg.pred_off.assign(n + 1, 0);
  for (size_t s = 0; s < n; ++s) rg.pred_off[s + 1] = rg.pred_off[s] + indeg[s];
  rg.pred_src.assign(rg.succ_dst.size(), 0);
  std::vector<std::uint32_t> fill(rg.pred_off.begin(), rg.pred_off.end() - 1);
  for (StateId s = 0; s < n; ++s)
    for (std::uint32_t i = rg.succ_off[s]; i < rg.succ_off[s + 1]; ++i)
      rg.pred_src[fill[rg.succ_dst[i]]++] = s;
  return rg;
}

}  // namespace csmc
