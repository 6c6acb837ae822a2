#pragma once

#include <map>
#include <vector>

#include "csmc/eval.hpp"

namespace csmc {

// Classical label-set evaluation: computes, bottom-up, the set of states
// satisfying each subformula by fixed-point iteration. Kept structurally
// independent from the sphere engine; used for differential testing.
class OracleContext {
 public:
  OracleContext(const ReachabilityGraph& rg, const Formula& f)
      : rg_(&rg), f_(&f) {
    if (!f.resolved)
      throw EvalError("formula not resolved against the network");
    open_ = f.open_subtrees();
    cache_.resize(f.nodes.size());
  }

  bool eval(StateId s) { return labels(f_->root())[s]; }
  bool eval(int node_index, StateId s) { return labels(node_index)[s]; }

  void bind(const std::string& var, StateId s) {
    bindings_[var] = s;
    scratch_.clear();
  }
  void unbind(const std::string& var) {
    bindings_.erase(var);
    scratch_.clear();
  }

  const std::vector<char>& labels(int i) {
    const bool cacheable = !open_[static_cast<size_t>(i)];
    if (cacheable && !cache_[static_cast<size_t>(i)].empty())
      return cache_[static_cast<size_t>(i)];
    scratch_[i] = compute(i);
    if (cacheable) {
      cache_[static_cast<size_t>(i)] = scratch_[i];
      return cache_[static_cast<size_t>(i)];
    }
    return scratch_[i];
  }

 private:
  std::vector<char> compute(int i) {
    const FormulaNode& n = f_->nodes[static_cast<size_t>(i)];
    const size_t nst = rg_->num_states();
    std::vector<char> out(nst, 0);
    switch (n.kind) {
      case FKind::ConstTrue:
        out.assign(nst, 1);
        break;
      case FKind::ConstFalse:
        break;
      case FKind::AtomSignal:
        for (StateId s = 0; s < nst; ++s) out[s] = rg_->generates(s, n.sig_id);
        break;
      case FKind::AtomIn:
        for (StateId s = 0; s < nst; ++s)
          out[s] = rg_->local_of(s, n.desig.aut_idx) == n.desig.local_idx;
        break;
      case FKind::AtomStateVar: {
        auto it = bindings_.find(n.name);
        if (it == bindings_.end())
          throw EvalError("unbound state variable '" + n.name + "'");
        out[it->second] = 1;
        break;
      }
      case FKind::Not: {
        auto a = labels(n.child0);
        for (StateId s = 0; s < nst; ++s) out[s] = !a[s];
        break;
      }
      case FKind::And: {
        auto a = labels(n.child0);
        auto b = labels(n.child1);
        for (StateId s = 0; s < nst; ++s) out[s] = a[s] && b[s];
        break;
      }
      case FKind::Or: {
        auto a = labels(n.child0);
        auto b = labels(n.child1);
        for (StateId s = 0; s < nst; ++s) out[s] = a[s] || b[s];
        break;
      }
      case FKind::Implies: {
        auto a = labels(n.child0);
        auto b = labels(n.child1);
        for (StateId s = 0; s < nst; ++s) out[s] = !a[s] || b[s];
        break;
      }
      case FKind::Iff: {
        auto a = labels(n.child0);
        auto b = labels(n.child1);
        for (StateId s = 0; s < nst; ++s) out[s] = a[s] == b[s];
        break;
      }
      case FKind::Next: {
        auto a = labels(n.child0);
        for (StateId s = 0; s < nst; ++s) {
          char all = 1;
          for (StateId t : rg_->successors(s))
            if (!a[t]) { all = 0; break; }
          out[s] = all;
        }
        break;
      }
      case FKind::NextIn: {
        auto a = labels(n.child0);
        const MoverMask bit = MoverMask{1} << n.aut_idx;
        for (StateId s = 0; s < nst; ++s) {
          char all = 1;
          for (std::uint32_t k = rg_->succ_off[s]; k < rg_->succ_off[s + 1]; ++k)
            if ((rg_->succ_movers[k] & bit) && !a[rg_->succ_dst[k]]) {
              all = 0;
              break;
            }
          out[s] = all;
        }
        break;
      }
      case FKind::Globally: {
        // greatest fixed point of X = phi /\ AX X
        auto phi = labels(n.child0);
        out = phi;
        bool changed = true;
        while (changed) {
          changed = false;
          for (StateId s = 0; s < nst; ++s) {
            if (!out[s]) continue;
            for (StateId t : rg_->successors(s))
              if (!out[t]) {
                out[s] = 0;
                changed = true;
                break;
              }
          }
        }
        break;
      }
      case FKind::Finally: {
        // least fixed point of X = phi \/ AX X
        auto phi = labels(n.child0);
        out = phi;
        bool changed = true;
        while (changed) {
          changed = false;
          for (StateId s = 0; s < nst; ++s) {
            if (out[s]) continue;
            char all = 1;
            for (StateId t : rg_->successors(s))
              if (!out[t]) { all = 0; break; }
            if (all) {
              out[s] = 1;
              changed = true;
            }
          }
        }
        break;
      }
      case FKind::WeakUntil: {
        // greatest fixed point of X = psi \/ (phi /\ AX X)
        auto phi = labels(n.child0);
        auto psi = labels(n.child1);
        out.assign(nst, 1);
        bool changed = true;
        while (changed) {
          changed = false;
          for (StateId s = 0; s < nst; ++s) {
            if (!out[s]) continue;
            if (psi[s]) continue;
            bool keep = phi[s];
            if (keep)
              for (StateId t : rg_->successors(s))
                if (!out[t]) { keep = false; break; }
            if (!keep) {
              out[s] = 0;
              changed = true;
            }
          }
        }
        break;
      }
      case FKind::AtState: {
        StateId d;
        if (n.desig_is_var) {
          auto it = bindings_.find(n.name);
          if (it == bindings_.end())
            throw EvalError("unbound state variable '" + n.name + "'");
          d = it->second;
        } else {
          d = kNoState;
          for (StateId s = 0; s < nst; ++s) {
            if (rg_->local_of(s, n.desig.aut_idx) != n.desig.local_idx) continue;
            if (d != kNoState)
              throw EvalError("designator '" + n.desig.text() +
                              "' matches multiple reachable states; use a quantifier");
            d = s;
          }
          if (d == kNoState)
            throw EvalError("designator '" + n.desig.text() +
                            "' matches no reachable state");
        }
        char v = labels(n.child0)[d];
        out.assign(nst, v);
        break;
      }
      case FKind::ForAllStates:
      case FKind::ExistsStates: {
        std::vector<StateId> members;
        for (StateId s = 0; s < nst; ++s)
          for (const auto& d : n.set)
            if (rg_->local_of(s, d.aut_idx) == d.local_idx) {
              members.push_back(s);
              break;
            }
        bool forall = n.kind == FKind::ForAllStates;
        char v = forall ? 1 : 0;
        for (StateId m : members) {
          bindings_[n.var] = m;
          scratch_.clear();
          char at = labels(n.child0)[m];
          if (forall && !at) { v = 0; break; }
          if (!forall && at) { v = 1; break; }
        }
        bindings_.erase(n.var);
        scratch_.clear();
        out.assign(nst, v);
        break;
      }
    }
    return out;
  }

  const ReachabilityGraph* rg_;
  const Formula* f_;
  std::vector<bool> open_;
  std::vector<std::vector<char>> cache_;          // closed subtrees
  std::map<int, std::vector<char>> scratch_;      // open subtrees, per binding
  std::map<std::string, StateId> bindings_;
};

inline bool eval_oracle(const ReachabilityGraph& rg, const Formula& f,
                        StateId s) {
  OracleContext ctx(rg, f);
  return ctx.eval(s);
}

}  // namespace csmc
