#pragma once

#include <map>
#include <string>
#include <vector>

#include "csmc/formula.hpp"
#include "csmc/spheres.hpp"

namespace csmc {

struct EvalOptions {
  bool memoization = true;    // per-(node, state) verdict cache
  bool short_circuit = true;  // lazy evaluation of binary Boolean operands
};

// Evaluation state for one (graph, formula) pair. Verdict caching is exact
// per state; subtrees whose verdict depends on an enclosing quantifier
// binding are never cached. A context is cheap to recreate; reuse one to
// share the cache across start states.
class EvalContext {
 public:
  EvalContext(const ReachabilityGraph& rg, const Formula& f,
              EvalOptions opts = {})
      : rg_(&rg), f_(&f), opts_(opts) {
    if (!f.resolved)
      throw EvalError("formula not resolved against the network");
    open_ = f.open_subtrees();
    memo_.resize(f.nodes.size());
    set_cache_.resize(f.nodes.size());
  }

  const ReachabilityGraph& rg() const { return *rg_; }
  const Formula& formula() const { return *f_; }
  const EvalOptions& options() const { return opts_; }
  const std::vector<std::string>& diagnostics() const { return diags_; }

  void bind(const std::string& var, StateId s) { bindings_[var] = s; }
  void unbind(const std::string& var) { bindings_.erase(var); }
  StateId binding(const std::string& var) const {
    auto it = bindings_.find(var);
    if (it == bindings_.end())
      throw EvalError("unbound state variable '" + var + "'");
    return it->second;
  }

  // Reachable global states matched by the designator, ascending.
  const std::vector<StateId>& designated_set(int node_index) {
    auto& cache = set_cache_[static_cast<size_t>(node_index)];
    if (cache) return *cache;
    const FormulaNode& n = f_->nodes[static_cast<size_t>(node_index)];
    std::vector<StateId> states;
    for (StateId s = 0; s < rg_->num_states(); ++s)
      for (const auto& d : n.set)
        if (rg_->local_of(s, d.aut_idx) == d.local_idx) {
          states.push_back(s);
          break;
        }
    cache = std::move(states);
    return *cache;
  }

  // The single state named by an AtState operator.
  StateId designated_state(int node_index) {
    const FormulaNode& n = f_->nodes[static_cast<size_t>(node_index)];
    if (n.desig_is_var) return binding(n.name);
    StateId found = kNoState;
    for (StateId s = 0; s < rg_->num_states(); ++s) {
      if (rg_->local_of(s, n.desig.aut_idx) != n.desig.local_idx) continue;
      if (found != kNoState)
        throw EvalError("designator '" + n.desig.text() +
                        "' matches multiple reachable states; use a quantifier");
      found = s;
    }
    if (found == kNoState)
      throw EvalError("designator '" + n.desig.text() +
                      "' matches no reachable state");
    return found;
  }

  bool eval(int node_index, StateId s) {
    const bool cacheable =
        opts_.memoization && !open_[static_cast<size_t>(node_index)];
    if (cacheable) {
      auto& slot = memo_[static_cast<size_t>(node_index)];
      if (!slot.empty() && slot[s] != kUnknown) return slot[s] == kTrue;
    }
    bool v = compute(node_index, s);
    if (cacheable) {
      auto& slot = memo_[static_cast<size_t>(node_index)];
      if (slot.empty()) slot.assign(rg_->num_states(), kUnknown);
      slot[s] = v ? kTrue : kFalse;
    }
    return v;
  }

  bool eval(StateId s) { return eval(f_->root(), s); }

  void note(std::string msg) { diags_.push_back(std::move(msg)); }

 private:
  static constexpr std::int8_t kUnknown = -1, kFalse = 0, kTrue = 1;

  bool compute(int i, StateId s) {
    const FormulaNode& n = f_->nodes[static_cast<size_t>(i)];
    switch (n.kind) {
      case FKind::ConstTrue: return true;
      case FKind::ConstFalse: return false;
      case FKind::AtomSignal: return rg_->generates(s, n.sig_id);
      case FKind::AtomIn:
        return rg_->local_of(s, n.desig.aut_idx) == n.desig.local_idx;
      case FKind::AtomStateVar: return s == binding(n.name);
      case FKind::Not: return !eval(n.child0, s);
      case FKind::And: {
        bool a = eval(n.child0, s);
        if (opts_.short_circuit && !a) return false;
        bool b = eval(n.child1, s);
        return a && b;
      }
      case FKind::Or: {
        bool a = eval(n.child0, s);
        if (opts_.short_circuit && a) return true;
        bool b = eval(n.child1, s);
        return a || b;
      }
      case FKind::Implies: {
        bool a = eval(n.child0, s);
        if (opts_.short_circuit && !a) return true;
        bool b = eval(n.child1, s);
        return !a || b;
      }
      case FKind::Iff: {
        bool a = eval(n.child0, s);
        bool b = eval(n.child1, s);
        return a == b;
      }
      case FKind::Next: {
        for (StateId t : rg_->successors(s))
          if (!eval(n.child0, t)) return false;
        return true;
      }
      case FKind::NextIn: {
        const MoverMask bit = MoverMask{1} << n.aut_idx;
        for (std::uint32_t k = rg_->succ_off[s]; k < rg_->succ_off[s + 1]; ++k) {
          if (!(rg_->succ_movers[k] & bit)) continue;
          if (!eval(n.child0, rg_->succ_dst[k])) return false;
        }
        return true;
      }
      case FKind::Globally: {
        // AG: the child must hold on {s} and every sphere around it.
        SphereGenerator gen(*rg_, s);
        for (const auto* layer = &gen.current(); !layer->empty();
             layer = &gen.next())
          for (StateId t : *layer)
            if (!eval(n.child0, t)) return false;
        return true;
      }
      case FKind::Finally: {
        // AF fails exactly when a cycle is reachable inside the child-false
        // region; expand spheres through that region and look for one.
        if (eval(n.child0, s)) return true;
        auto bad = [&](StateId t) { return !eval(n.child0, t); };
        std::vector<StateId> region;
        SphereGenerator gen(*rg_, s, bad);
        for (const auto* layer = &gen.current(); !layer->empty();
             layer = &gen.next())
          for (StateId t : *layer)
            if (bad(t)) region.push_back(t);
        return !has_cycle(region);
      }
      case FKind::WeakUntil: {
        // A(phi Uw psi) fails exactly when some path stays psi-free up to a
        // state where phi also fails; expand through phi&!psi states.
        auto phi = [&](StateId t) { return eval(n.child0, t); };
        auto psi = [&](StateId t) { return eval(n.child1, t); };
        auto expand = [&](StateId t) { return phi(t) && !psi(t); };
        SphereGenerator gen(*rg_, s, expand);
        for (const auto* layer = &gen.current(); !layer->empty();
             layer = &gen.next())
          for (StateId t : *layer)
            if (!psi(t) && !phi(t)) return false;
        return true;
      }
      case FKind::AtState: return eval(n.child0, designated_state(i));
      case FKind::ForAllStates: {
        const auto& members = designated_set(i);
        if (members.empty()) {
          note("quantifier set of node " + std::to_string(f_->node_id(i)) +
               " is empty; forall is vacuously true");
          return true;
        }
        bool all = true;
        for (StateId m : members) {
          bind(n.var, m);
          if (!eval(n.child0, m)) {
            all = false;
            break;
          }
        }
        unbind(n.var);
        return all;
      }
      case FKind::ExistsStates: {
        const auto& members = designated_set(i);
        if (members.empty()) {
          note("quantifier set of node " + std::to_string(f_->node_id(i)) +
               " is empty; exists is vacuously false");
          return false;
        }
        bool any = false;
        for (StateId m : members) {
          bind(n.var, m);
          if (eval(n.child0, m)) {
            any = true;
            break;
          }
        }
        unbind(n.var);
        return any;
      }
    }
    return false;
  }

  // Cycle (including self-loop) within the subgraph induced by `region`,
  // by iterative DFS with an on-stack marker.
  bool has_cycle(const std::vector<StateId>& region) const {
    if (region.empty()) return false;
    std::vector<std::uint8_t> in_region(rg_->num_states(), 0);
    for (StateId r : region) in_region[r] = 1;
    std::vector<std::uint8_t> mark(rg_->num_states(), 0);  // 0 new,1 open,2 closed
    struct Frame {
      StateId s;
      std::uint32_t next;
    };
    std::vector<Frame> stack;
    for (StateId r : region) {
      if (mark[r]) continue;
      stack.push_back({r, rg_->succ_off[r]});
      mark[r] = 1;
      while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.next == rg_->succ_off[f.s + 1]) {
          mark[f.s] = 2;
          stack.pop_back();
          continue;
        }
        StateId t = rg_->succ_dst[f.next++];
        if (!in_region[t]) continue;
        if (mark[t] == 1) return true;
        if (mark[t] == 0) {
          mark[t] = 1;
          stack.push_back({t, rg_->succ_off[t]});
        }
      }
    }
    return false;
  }

  const ReachabilityGraph* rg_;
  const Formula* f_;
  EvalOptions opts_;
  std::vector<bool> open_;
  std::map<std::string, StateId> bindings_;
  std::vector<std::vector<std::int8_t>> memo_;
  std::vector<std::optional<std::vector<StateId>>> set_cache_;
  std::vector<std::string> diags_;
};

inline bool eval(EvalContext& ctx, StateId s) { return ctx.eval(s); }

}  // namespace csmc
