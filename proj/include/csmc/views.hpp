#pragma once

#include <string>
#include <vector>

#include "csmc/critical_tree.hpp"
#include "csmc/xml.hpp"

namespace csmc {
namespace detail {

inline std::string rtrim(std::string s) {
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

inline std::string pad(std::string s, size_t w) {
  while (s.size() < w) s += ' ';
  return s;
}

inline std::string state_name(StateId s) { return "s" + std::to_string(s); }

inline std::string skip_note(SequenceEntry::Skip sk) {
  return sk == SequenceEntry::Skip::ValueAsDesired
             ? "(value as desired — not constructed)"
             : "(not reached — not constructed)";
}

// Signals emitted by one component in a global state, with listener
// suffixes: "sig(->L1,L2)", no listeners shown as "sig(->)".
inline std::vector<std::string> signal_cell(const ReachabilityGraph& rg,
                                            StateId s, int automaton) {
  std::vector<std::string> out;
  const auto& net = rg.net;
  int loc = rg.local_of(s, automaton);
  for (size_t sig = 0; sig < net.signals.size(); ++sig) {
    if (!net.emit_bits[static_cast<size_t>(automaton)][static_cast<size_t>(loc)][sig])
      continue;
    std::string cell = net.signals[sig] + "(->";
    bool first = true;
    for (int l : rg.listener_indices(s, static_cast<int>(sig))) {
      if (!first) cell += ",";
      first = false;
      cell += net.automata[static_cast<size_t>(l)].name;
    }
    cell += ")";
    out.push_back(std::move(cell));
  }
  return out;
}

inline std::string join(const std::vector<std::string>& parts,
                        const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace detail

// "States" view: the parse tree in indent form, each operator followed by
// its sequence; every state marked OK except the last, marked ERROR.
// Quantifier and at-state designations stay in the operator line; their
// single-state sequences are not repeated below it.
inline std::string render_states(const CriticalTree& t,
                                 const ReachabilityGraph& rg,
                                 const CompressedTree* ct = nullptr) {
  (void)rg;
  std::string out;
  auto depths = t.formula.depths();
  for (size_t i = 0; i < t.formula.nodes.size(); ++i) {
    std::string indent(2 * static_cast<size_t>(depths[i]), ' ');
    out += indent + node_label(t.formula, static_cast<int>(i)) + "\n";
    const SequenceEntry& e = t.entries[i];
    if (e.skipped != SequenceEntry::Skip::None) {
      out += indent + "  " + detail::skip_note(e.skipped) + "\n";
      continue;
    }
    if (t.formula.is_jump_node(static_cast<int>(i))) continue;
    if (ct && ct->merged[i]) {
      out += indent + "  (merged: " + detail::state_name(e.states[0]) + ")\n";
      continue;
    }
    for (size_t k = 0; k < e.states.size(); ++k)
      out += indent + "  " + detail::state_name(e.states[k]) + "\t" +
             (k + 1 == e.states.size() ? "ERROR" : "OK") + "\n";
  }
  return out;
}

namespace detail {

// Shared skeleton of the two columnar views.
template <typename CellFn>
std::string render_columnar(const CriticalTree& t, const ReachabilityGraph& rg,
                            const CompressedTree* ct, CellFn cell) {
  const auto& net = rg.net;
  const size_t n_aut = net.automata.size();

  size_t wst = 5;  // "state"
  std::vector<size_t> w(n_aut);
  for (size_t a = 0; a < n_aut; ++a) w[a] = net.automata[a].name.size();
  for (const auto& e : t.entries) {
    if (!e.constructed) continue;
    for (StateId s : e.states) {
      wst = std::max(wst, state_name(s).size());
      for (size_t a = 0; a < n_aut; ++a)
        w[a] = std::max(w[a], cell(s, static_cast<int>(a)).size());
    }
  }

  std::string out = pad("state", wst);
  for (size_t a = 0; a < n_aut; ++a) out += "  " + pad(net.automata[a].name, w[a]);
  out = rtrim(out) + "\n";

  auto depths = t.formula.depths();
  for (size_t i = 0; i < t.formula.nodes.size(); ++i) {
    std::string indent(2 * static_cast<size_t>(depths[i]), ' ');
    out += indent + node_label(t.formula, static_cast<int>(i)) + "\n";
    const SequenceEntry& e = t.entries[i];
    if (e.skipped != SequenceEntry::Skip::None) {
      out += indent + "  " + skip_note(e.skipped) + "\n";
      continue;
    }
    if (t.formula.is_jump_node(static_cast<int>(i))) continue;
    if (ct && ct->merged[i]) {
      out += indent + "  (merged: " + state_name(e.states[0]) + ")\n";
      continue;
    }
    for (size_t k = 0; k < e.states.size(); ++k) {
      StateId s = e.states[k];
      std::string row = pad(state_name(s), wst);
      for (size_t a = 0; a < n_aut; ++a) {
        bool changed = k == 0 || rg.local_of(s, static_cast<int>(a)) !=
                                     rg.local_of(e.states[k - 1], static_cast<int>(a));
        row += "  " + pad(changed ? cell(s, static_cast<int>(a)) : "", w[a]);
      }
      row += "  ";
      row += (k + 1 == e.states.size() ? "ERROR" : "OK");
      out += rtrim(row) + "\n";
    }
  }
  return out;
}

}  // namespace detail

// "States in automata" view: one column per automaton; a local state is
// shown only when it changed against the previous state of the sequence.
inline std::string render_states_in_automata(const CriticalTree& t,
                                             const ReachabilityGraph& rg,
                                             const CompressedTree* ct = nullptr) {
  return detail::render_columnar(t, rg, ct, [&](StateId s, int a) {
    return rg.net.automata[static_cast<size_t>(a)]
        .locals[static_cast<size_t>(rg.local_of(s, a))];
  });
}

// "Signals" view: local-state names replaced by the signals generated there,
// each followed by the automata listening to it.
inline std::string render_signals(const CriticalTree& t,
                                  const ReachabilityGraph& rg,
                                  const CompressedTree* ct = nullptr) {
  return detail::render_columnar(t, rg, ct, [&](StateId s, int a) {
    return detail::join(detail::signal_cell(rg, s, a), " ");
  });
}

namespace detail {

inline void xml_state(const ReachabilityGraph& rg, StateId s, bool last,
                      int depth, std::string& out) {
  std::string ind(2 * static_cast<size_t>(depth), ' ');
  out += ind + "<state id=\"" + state_name(s) + "\" mark=\"" +
         (last ? "ERROR" : "OK") + "\">\n";
  const auto& net = rg.net;
  for (size_t a = 0; a < net.automata.size(); ++a)
    out += ind + "  <component automaton=\"" + xml_escape(net.automata[a].name) +
           "\" local=\"" +
           xml_escape(net.automata[a].locals[static_cast<size_t>(
               rg.local_of(s, static_cast<int>(a)))]) +
           "\"/>\n";
  for (size_t a = 0; a < net.automata.size(); ++a) {
    int loc = rg.local_of(s, static_cast<int>(a));
    for (size_t sig = 0; sig < net.signals.size(); ++sig) {
      if (!net.emit_bits[a][static_cast<size_t>(loc)][sig]) continue;
      auto listeners = rg.listener_indices(s, static_cast<int>(sig));
      out += ind + "  <signal name=\"" + xml_escape(net.signals[sig]) +
             "\" from=\"" + xml_escape(net.automata[a].name) + "\"";
      if (listeners.empty()) {
        out += "/>\n";
      } else {
        out += ">\n";
        for (int l : listeners)
          out += ind + "    <listener automaton=\"" +
                 xml_escape(net.automata[static_cast<size_t>(l)].name) + "\"/>\n";
        out += ind + "  </signal>\n";
      }
    }
  }
  out += ind + "</state>\n";
}

inline void xml_node(const CriticalTree& t, const ReachabilityGraph& rg,
                     const CompressedTree* ct, int i, int depth,
                     std::string& out) {
  const Formula& f = t.formula;
  const FormulaNode& n = f.nodes[static_cast<size_t>(i)];
  const SequenceEntry& e = t.entries[static_cast<size_t>(i)];
  std::string ind(2 * static_cast<size_t>(depth), ' ');
  out += ind + "<node id=\"" + std::to_string(f.node_id(i)) + "\" op=\"" +
         xml_escape(node_label(f, i)) + "\" rule=\"" +
         std::to_string(e.rule_row) + "\" desired=\"" +
         (e.desired ? "true" : "false") + "\" actual=\"" +
         (e.actual ? "true" : "false") + "\"";
  if (e.skipped != SequenceEntry::Skip::None) {
    out += std::string(" skipped=\"") +
           (e.skipped == SequenceEntry::Skip::ValueAsDesired
                ? "value-as-desired"
                : "not-reached") +
           "\"/>\n";
    return;
  }
  bool merged = ct && ct->merged[static_cast<size_t>(i)];
  if (merged)
    out += " merged=\"" + state_name(e.states[0]) + "\"";

  // Collect operator children (atoms are folded into their parent's states).
  std::vector<int> kids;
  for (int c : {n.child0, n.child1})
    if (c >= 0 && rule_applicable(f.nodes[static_cast<size_t>(c)].kind))
      kids.push_back(c);

  if (merged && kids.empty()) {
    out += "/>\n";
    return;
  }
  out += ">\n";
  if (!merged) {
    out += ind + "  <sequence>\n";
    for (size_t k = 0; k < e.states.size(); ++k)
      xml_state(rg, e.states[k], k + 1 == e.states.size(), depth + 2, out);
    out += ind + "  </sequence>\n";
  }
  for (int c : kids) xml_node(t, rg, ct, c, depth + 1, out);
  out += ind + "</node>\n";
}

}  // namespace detail

// "XML" view: the synthesis of the other three. Atom nodes are not emitted;
// their single-state sequences coincide with the enclosing operator's
// endpoint, whose components and signals the <state> elements already carry.
inline std::string render_xml(const CriticalTree& t,
                              const ReachabilityGraph& rg,
                              const CompressedTree* ct = nullptr) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<critical-tree formula=\"" + xml_escape(pretty_print(t.formula)) +
         "\" result=\"false\">\n";
  detail::xml_node(t, rg, ct, t.formula.root(), 1, out);
  out += "</critical-tree>\n";
  return out;
}

namespace detail {

// One sequence-diagram line block per state. Display numbers are 1-based;
// callers may renumber (the reduced projection keeps original positions).
inline std::string seqdiagram_lines(
    const ReachabilityGraph& rg,
    const std::vector<std::pair<int, StateId>>& states) {
  const auto& net = rg.net;
  std::string out;
  for (const auto& [num, s] : states) {
    std::vector<std::string> lines;
    for (size_t a = 0; a < net.automata.size(); ++a) {
      int loc = rg.local_of(s, static_cast<int>(a));
      for (size_t sig = 0; sig < net.signals.size(); ++sig) {
        if (!net.emit_bits[a][static_cast<size_t>(loc)][sig]) continue;
        for (int l : rg.listener_indices(s, static_cast<int>(sig)))
          lines.push_back(net.automata[a].name + " --{ " + net.signals[sig] +
                          " }--> " + net.automata[static_cast<size_t>(l)].name);
      }
    }
    if (lines.empty()) {
      out += std::to_string(num) + ".\n";
    } else {
      for (size_t k = 0; k < lines.size(); ++k)
        out += (k == 0 ? std::to_string(num) + ". " : " ") + lines[k] + "\n";
    }
  }
  return out;
}

}  // namespace detail

// Textual sequence diagram for the multi-state sequence of one formula node:
// `src --{ signal }--> dst` per listener, a bare numbered line when a state
// passes no signal, continuation lines indented one space.
inline std::string render_seqdiagram(const CriticalTree& t,
                                     const ReachabilityGraph& rg,
                                     int node_id) {
  if (node_id < 1 || node_id > static_cast<int>(t.formula.nodes.size()))
    throw EvalError("unknown node id " + std::to_string(node_id));
  const SequenceEntry& e =
      t.entries[static_cast<size_t>(t.formula.index_of_id(node_id))];
  if (!e.constructed || e.states.size() < 2)
    throw EvalError("no temporal sequence at node " + std::to_string(node_id));
  std::vector<std::pair<int, StateId>> numbered;
  for (size_t k = 0; k < e.states.size(); ++k)
    numbered.emplace_back(static_cast<int>(k) + 1, e.states[k]);
  return detail::seqdiagram_lines(rg, numbered);
}

}  // namespace csmc
