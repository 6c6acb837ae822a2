#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "csmc/eval.hpp"
#include "csmc/rules.hpp"

namespace csmc {

// Strongly connected components of the subgraph induced by a subset of
// states (iterative Tarjan). `comp` maps state -> component id (-1 outside
// the subset); `cyclic[c]` is set when component c contains a cycle, i.e.
// has more than one member or a self-arc.
struct SccResult {
  std::vector<int> comp;
  std::vector<std::uint8_t> cyclic;
  int count = 0;
};

inline SccResult scc_of_subset(const ReachabilityGraph& rg,
                               const std::vector<StateId>& subset) {
  const size_t n = rg.num_states();
  SccResult res;
  res.comp.assign(n, -1);
  std::vector<std::uint8_t> in(n, 0);
  for (StateId s : subset) in[s] = 1;

  std::vector<int> index(n, -1), low(n, 0);
  std::vector<std::uint8_t> onstack(n, 0);
  std::vector<StateId> stack;
  int next_index = 0;

  struct Frame {
    StateId s;
    std::uint32_t next;
  };
  std::vector<Frame> call;

  for (StateId root : subset) {
    if (index[root] >= 0) continue;
    call.push_back({root, rg.succ_off[root]});
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    onstack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.next < rg.succ_off[f.s + 1]) {
        StateId t = rg.succ_dst[f.next++];
        if (!in[t]) continue;
        if (index[t] < 0) {
          index[t] = low[t] = next_index++;
          stack.push_back(t);
          onstack[t] = 1;
          call.push_back({t, rg.succ_off[t]});
        } else if (onstack[t]) {
          low[f.s] = std::min(low[f.s], index[t]);
        }
        continue;
      }
      if (low[f.s] == index[f.s]) {
        int c = res.count++;
        StateId w;
        size_t members = 0;
        do {
          w = stack.back();
          stack.pop_back();
          onstack[w] = 0;
          res.comp[w] = c;
          ++members;
        } while (w != f.s);
        bool cyc = members > 1;
        if (!cyc) cyc = rg.has_arc(f.s, f.s);
        res.cyclic.push_back(cyc ? 1 : 0);
      }
      StateId done = f.s;
      call.pop_back();
      if (!call.empty())
        low[call.back().s] = std::min(low[call.back().s], low[done]);
    }
  }
  return res;
}

struct SequenceEntry {
  bool constructed = false;
  bool desired = false;
  bool actual = false;
  int rule_row = 0;                // 0: no row (leaf or skipped)
  std::vector<StateId> states;     // nonempty iff constructed
  enum class Skip { None, ValueAsDesired, NotReached } skipped = Skip::None;
  bool jump = false;  // sequence starts at a designated state, not the
                      // parent's endpoint (AtState and quantifier nodes)
};

// One sequence per formula node, linked by the sticking property: each
// constructed child's sequence begins where its parent's ends, except
// across jump edges.
struct CriticalTree {
  Formula formula;
  StateId start = 0;
  std::vector<SequenceEntry> entries;  // indexed like formula.nodes
};

namespace detail {

class TreeBuilder {
 public:
  TreeBuilder(const ReachabilityGraph& rg, const Formula& f)
      : rg_(rg), f_(f), ctx_(rg, f, EvalOptions{true, false}) {}

  CriticalTree build(StateId s0) {
    if (ctx_.eval(s0))
      throw EvalError("critical tree requested for a true verdict");
    out_.formula = f_;
    out_.start = s0;
    out_.entries.assign(f_.nodes.size(), SequenceEntry{});
    for (auto& e : out_.entries) e.skipped = SequenceEntry::Skip::NotReached;
    visit(f_.root(), s0, true);
    return std::move(out_);
  }

 private:
  const ReachabilityGraph& rg_;
  const Formula& f_;
  EvalContext ctx_;
  CriticalTree out_;

  bool verdict(int node, StateId s) { return ctx_.eval(node, s); }

  void visit(int node, StateId start, bool desired) {
    const FormulaNode& n = f_.nodes[static_cast<size_t>(node)];
    SequenceEntry& e = out_.entries[static_cast<size_t>(node)];
    e.skipped = SequenceEntry::Skip::None;
    e.desired = desired;
    e.actual = verdict(node, start);
    if (e.actual == desired)
      throw InternalError("tree construction visited a node whose value is as desired");

    if (!rule_applicable(n.kind)) {
      e.constructed = true;
      e.states = {start};
      return;
    }

    Rule rule = dispatch_rule(n.kind, desired);
    e.rule_row = rule.row;
    e.jump = f_.is_jump_node(node);

    bool vacuous = false;
    e.states = endpoint_search(rule.row, node, start, vacuous);
    e.constructed = true;
    StateId endpoint = e.states.back();

    if (vacuous) return;  // children stay "not reached"

    const bool quantifier = f_.is_quantifier(node);
    if (quantifier) ctx_.bind(n.var, endpoint);

    const int children[2] = {n.child0, n.child1};
    for (int k = 0; k < 2; ++k) {
      if (!rule.child[static_cast<size_t>(k)] || children[k] < 0) continue;
      const ChildDirective& dir = *rule.child[static_cast<size_t>(k)];
      bool child_actual = verdict(children[k], endpoint);
      bool child_desired = dir.mode == ChildDirective::Mode::Opposite
                               ? !child_actual
                               : dir.desired;
      if (child_actual == child_desired) {
        SequenceEntry& ce = out_.entries[static_cast<size_t>(children[k])];
        ce.skipped = SequenceEntry::Skip::ValueAsDesired;
        ce.desired = child_desired;
        ce.actual = child_actual;
      } else {
        visit(children[k], endpoint, child_desired);
      }
    }

    if (quantifier) ctx_.unbind(n.var);
  }

  std::vector<StateId> endpoint_search(int row, int node, StateId start,
                                       bool& vacuous) {
    const FormulaNode& n = f_.nodes[static_cast<size_t>(node)];
    switch (row) {
      case 1: case 2: case 3: case 4: case 5:
      case 6: case 7: case 8: case 9: case 10:
      case 17:
        return {start};

      case 11:
      case 12: {
        bool want = row == 11;  // child value at the endpoint
        for (StateId t : rg_.successors(start))
          if (verdict(n.child0, t) == want) return {start, t};
        throw InternalError("no qualifying successor for rule " +
                            std::to_string(row));
      }

      case 13:
      case 14: {
        bool want = row == 13;
        const MoverMask bit = MoverMask{1} << n.aut_idx;
        bool any = false;
        for (std::uint32_t k = rg_.succ_off[start]; k < rg_.succ_off[start + 1];
             ++k) {
          if (!(rg_.succ_movers[k] & bit)) continue;
          any = true;
          StateId t = rg_.succ_dst[k];
          if (verdict(n.child0, t) == want) return {start, t};
        }
        if (row == 13 && !any) {
          // Vacuously true AX_a: no moved successor exists to finish the
          // sequence, so it degenerates to the starting state.
          vacuous = true;
          return {start};
        }
        throw InternalError("no qualifying moved successor for rule " +
                            std::to_string(row));
      }

      case 15:
      case 18: {
        bool want = row == 15;
        auto path = run_query(start, {}, [&](StateId t) {
          return verdict(n.child0, t) == want;
        });
        if (!path)
          throw InternalError("no endpoint for rule " + std::to_string(row));
        return *path;
      }

      case 16: {
        auto bad = [&](StateId t) { return !verdict(n.child0, t); };
        auto cyc = cyclic_set(start, bad);
        auto path = run_query(start, bad, [&](StateId t) { return cyc[t] != 0; });
        if (!path)
          throw InternalError("no cyclic endpoint for rule 16");
        return *path;
      }

      case 20: {
        auto phi = [&](StateId t) { return verdict(n.child0, t); };
        auto psi = [&](StateId t) { return verdict(n.child1, t); };
        auto path = run_query(
            start, [&](StateId t) { return phi(t) && !psi(t); },
            [&](StateId t) { return !phi(t) && !psi(t); });
        if (!path)
          throw InternalError("no endpoint for rule 20");
        return *path;
      }

      case 19: {
        auto phi = [&](StateId t) { return verdict(n.child0, t); };
        auto psi = [&](StateId t) { return verdict(n.child1, t); };
        // First choice: a state holding both arguments.
        if (auto path = run_query(
                start, [&](StateId t) { return phi(t) && !psi(t); },
                [&](StateId t) { return phi(t) && psi(t); }))
          return *path;
        // Second: the predecessor of the cycle entry on a cycle holding the
        // left argument.
        auto cyc = cyclic_set(start, phi);
        if (auto entry_path =
                run_query(start, phi, [&](StateId t) { return cyc[t] != 0; })) {
          StateId c = entry_path->back();
          auto scc = scc_of_subset_cache_;
          StateId pred = kNoState;
          for (StateId p : rg_.predecessors(c)) {
            if (scc.comp[p] >= 0 && scc.comp[p] == scc.comp[c])
              if (pred == kNoState || p < pred) pred = p;
          }
          if (pred == kNoState)
            throw InternalError("cycle entry without in-component predecessor");
          auto path = run_query(start, phi,
                                [&](StateId t) { return t == pred; });
          if (!path)
            throw InternalError("cycle predecessor unreachable for rule 19");
          return *path;
        }
        // Last resort: the first state where the right argument holds; the
        // table's two finishing states need not exist for a true weak until
        // (every path may simply reach the right argument), so the classical
        // witness finishes the sequence.
        if (auto path = run_query(
                start, [&](StateId t) { return phi(t) && !psi(t); },
                [&](StateId t) { return psi(t); }))
          return *path;
        throw InternalError("no endpoint for rule 19");
      }

      case 21:
      case 22:
        return {ctx_.designated_state(node)};

      case 23: case 24: case 25: case 26: {
        bool want = (row == 23 || row == 25);  // child value at the member
        const auto members = ctx_.designated_set(node);
        if (members.empty()) {
          // Vacuous quantifier (forall over nothing is true, exists over
          // nothing is false): no member can finish the sequence.
          if (row == 24 || row == 25)
            throw InternalError("empty quantifier set cannot decide rule " +
                                std::to_string(row));
          vacuous = true;
          return {start};
        }
        for (StateId m : members) {
          ctx_.bind(n.var, m);
          bool v = verdict(n.child0, m);
          ctx_.unbind(n.var);
          if (v == want) return {m};
        }
        throw InternalError("no qualifying member for rule " +
                            std::to_string(row));
      }

      default:
        throw InternalError("unknown rule row");
    }
  }

  std::optional<std::vector<StateId>> run_query(StateId start,
                                                StatePred restrict_pred,
                                                StatePred target) {
    SequenceQuery q;
    q.rg = &rg_;
    q.source = start;
    q.restrict_pred = std::move(restrict_pred);
    q.target = std::move(target);
    return find_sequence(q);
  }

  // States on a cycle inside the `keep`-restricted subgraph reachable from
  // `start`. Also stashes the component map for rule 19's predecessor pick.
  std::vector<std::uint8_t> cyclic_set(StateId start, StatePred keep) {
    std::vector<StateId> region;
    SphereGenerator gen(rg_, start, keep);
    for (const auto* layer = &gen.current(); !layer->empty();
         layer = &gen.next())
      for (StateId t : *layer)
        if (keep(t)) region.push_back(t);
    SccResult scc = scc_of_subset(rg_, region);
    std::vector<std::uint8_t> out(rg_.num_states(), 0);
    for (StateId t : region)
      if (scc.cyclic[static_cast<size_t>(scc.comp[t])]) out[t] = 1;
    scc_of_subset_cache_ = std::move(scc);
    return out;
  }

  SccResult scc_of_subset_cache_;
};

}  // namespace detail

// Builds the counterexample tree for a formula evaluating to false at s0.
// The second evaluation pass keeps exact per-state verdicts but never
// short-circuits binary operators.
inline CriticalTree build_tree(const ReachabilityGraph& rg, const Formula& f,
                               StateId s0) {
  detail::TreeBuilder b(rg, f);
  return b.build(s0);
}

// Compressed form: adjacent single-state sequences sharing one state merge
// into one node; multi-state sequences become edges. Lossless.
struct CompressedTree {
  struct Node {
    StateId state = 0;
    std::vector<int> members;  // formula node indices, tree order
  };
  struct Edge {
    int from = -1;
    int to = -1;
    int node = -1;  // formula node whose sequence this edge carries
    std::vector<StateId> states;
    bool jump = false;
  };
  Formula formula;
  StateId start = 0;
  std::vector<SequenceEntry> meta;  // per formula node, states cleared
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  std::vector<int> node_of;  // formula node -> merged node id, or -1
  std::vector<int> edge_of;  // formula node -> edge id, or -1
  std::vector<std::uint8_t> merged;  // formula node joined an existing node
};

namespace detail {

inline void compress_walk(const CriticalTree& t, int node, int attach,
                          CompressedTree& out) {
  const SequenceEntry& e = t.entries[static_cast<size_t>(node)];
  if (!e.constructed) return;
  int here;
  if (e.states.size() == 1) {
    StateId s = e.states[0];
    if (attach >= 0 && out.nodes[static_cast<size_t>(attach)].state == s) {
      out.nodes[static_cast<size_t>(attach)].members.push_back(node);
      out.merged[static_cast<size_t>(node)] = 1;
      here = attach;
    } else {
      here = static_cast<int>(out.nodes.size());
      out.nodes.push_back({s, {node}});
      if (attach >= 0)
        out.edges.push_back({attach, here, node, {}, true});
    }
    out.node_of[static_cast<size_t>(node)] = here;
  } else {
    int from = attach;
    if (from < 0) {
      from = static_cast<int>(out.nodes.size());
      out.nodes.push_back({e.states.front(), {}});
    }
    here = static_cast<int>(out.nodes.size());
    out.nodes.push_back({e.states.back(), {}});
    out.edges.push_back({from, here, node, e.states, e.jump});
    out.edge_of[static_cast<size_t>(node)] = static_cast<int>(out.edges.size()) - 1;
  }
  const FormulaNode& n = t.formula.nodes[static_cast<size_t>(node)];
  if (n.child0 >= 0) compress_walk(t, n.child0, here, out);
  if (n.child1 >= 0) compress_walk(t, n.child1, here, out);
}

}  // namespace detail

inline CompressedTree compress(const CriticalTree& t) {
  CompressedTree out;
  out.formula = t.formula;
  out.start = t.start;
  out.meta = t.entries;
  for (auto& m : out.meta) m.states.clear();
  out.node_of.assign(t.entries.size(), -1);
  out.edge_of.assign(t.entries.size(), -1);
  out.merged.assign(t.entries.size(), 0);
  detail::compress_walk(t, t.formula.root(), -1, out);
  return out;
}

inline CriticalTree decompress(const CompressedTree& c) {
  CriticalTree t;
  t.formula = c.formula;
  t.start = c.start;
  t.entries = c.meta;
  for (size_t i = 0; i < t.entries.size(); ++i) {
    if (!t.entries[i].constructed) continue;
    if (c.edge_of[i] >= 0)
      t.entries[i].states = c.edges[static_cast<size_t>(c.edge_of[i])].states;
    else
      t.entries[i].states = {c.nodes[static_cast<size_t>(c.node_of[i])].state};
  }
  return t;
}

}  // namespace csmc
