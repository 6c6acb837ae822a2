#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <vector>

#include "csmc/reach_graph.hpp"

namespace csmc {

using StatePred = std::function<bool(StateId)>;

// Lazily yields the spheres of a source state: SPH_0 = {s}, SPH_i = the
// successors of SPH_{i-1} members not seen in any earlier sphere. With a
// restriction predicate, states failing it still enter spheres (so they can
// be tested as sequence endpoints) but are never expanded through.
//
// Sphere members come out sorted by state id.
class SphereGenerator {
 public:
  SphereGenerator(const ReachabilityGraph& rg, StateId source,
                  StatePred restrict_pred = {})
      : rg_(rg),
        restrict_(std::move(restrict_pred)),
        seen_(rg.num_states(), 0) {
    current_ = {source};
    seen_[source] = 1;
  }

  // The sphere produced by the last next(); SPH_0 before any call.
  const std::vector<StateId>& current() const { return current_; }
  int index() const { return index_; }

  // Advances to the next sphere; empty result means exhaustion.
  const std::vector<StateId>& next() {
    std::vector<StateId> fresh;
    for (StateId s : current_) {
      if (restrict_ && !restrict_(s)) continue;
      for (StateId t : rg_.successors(s)) {
        if (!seen_[t]) {
          seen_[t] = 1;
          fresh.push_back(t);
        }
      }
    }
    std::sort(fresh.begin(), fresh.end());
    current_ = std::move(fresh);
    ++index_;
    return current_;
  }

 private:
  const ReachabilityGraph& rg_;
  StatePred restrict_;
  std::vector<std::uint8_t> seen_;
  std::vector<StateId> current_;
  int index_ = 0;
};

// Eagerly collected spheres of a state (no restriction), for callers that
// want the whole succession.
inline std::vector<std::vector<StateId>> spheres(const ReachabilityGraph& rg,
                                                 StateId s) {
  std::vector<std::vector<StateId>> out;
  SphereGenerator gen(rg, s);
  out.push_back(gen.current());
  while (!gen.next().empty()) out.push_back(gen.current());
  return out;
}

// The (SRC, cond1, cond2) search parameterization. `side`, `cond1res` and
// `cond2res` are carried for interface fidelity and have no behavior here.
struct SequenceQuery {
  const ReachabilityGraph* rg = nullptr;
  StateId source = 0;
  StatePred restrict_pred;  // states admitted into sphere expansion
  StatePred target;         // cond1
  StatePred side;           // cond2
  bool cond1res = false;
  bool cond2res = false;
};

// Expands spheres from the source until one contains a target state, then
// backtracks: in each earlier sphere the smallest-id predecessor that was
// expanded through. Returns the arc-connected path source..target, or
// nullopt when no target is reachable under the restriction.
inline std::optional<std::vector<StateId>> find_sequence(const SequenceQuery& q) {
  const ReachabilityGraph& rg = *q.rg;
  SphereGenerator gen(rg, q.source, q.restrict_pred);
  std::vector<std::vector<StateId>> layers;
  layers.push_back(gen.current());

  auto hit = [&](const std::vector<StateId>& layer) -> std::optional<StateId> {
    for (StateId s : layer)
      if (q.target(s)) return s;  // members sorted, first match = smallest id
    return std::nullopt;
  };

  std::optional<StateId> found = hit(layers.back());
  while (!found) {
    const auto& layer = gen.next();
    if (layer.empty()) return std::nullopt;
    layers.push_back(layer);
    found = hit(layer);
  }

  std::vector<StateId> path(layers.size(), kNoState);
  path.back() = *found;
  for (size_t i = layers.size() - 1; i > 0; --i) {
    StateId best = kNoState;
    for (StateId p : rg.predecessors(path[i])) {
      if (q.restrict_pred && !q.restrict_pred(p)) continue;
      if (!std::binary_search(layers[i - 1].begin(), layers[i - 1].end(), p))
        continue;
      if (best == kNoState || p < best) best = p;
    }
    if (best == kNoState)
      throw InternalError("sphere backtracking found no predecessor");
    path[i - 1] = best;
  }
  return path;
}

}  // namespace csmc
