#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "csmc/model.hpp"

namespace csmc {

enum class FKind {
  ConstTrue,
  ConstFalse,
  AtomSignal,    // x being generated
  AtomIn,        // staying in a.p
  AtomStateVar,  // staying in the state bound to a quantifier variable
  Not,
  And,
  Or,
  Implies,
  Iff,
  Next,      // AX
  NextIn,    // AX restricted to arcs where an automaton moves
  Finally,   // AF
  Globally,  // AG
  WeakUntil, // A(phi Uw psi)
  AtState,       // d: phi, d naming exactly one global state
  ForAllStates,  // A v in {..}; phi
  ExistsStates,  // E v in {..}; phi
};

struct Designator {
  std::string automaton;
  std::string local;
  int aut_idx = -1;
  int local_idx = -1;
  bool operator==(const Designator& o) const {
    return automaton == o.automaton && local == o.local;
  }
  bool operator<(const Designator& o) const {
    if (automaton != o.automaton) return automaton < o.automaton;
    return local < o.local;
  }
  std::string text() const { return automaton + "." + local; }
};

// An atomic proposition as seen by the reduction: a signal or an in-state
// predicate.
struct Atom {
  enum class Kind { Signal, In } kind;
  std::string signal;  // Kind::Signal
  Designator desig;    // Kind::In
  bool operator<(const Atom& o) const {
    if (kind != o.kind) return kind < o.kind;
    if (kind == Kind::Signal) return signal < o.signal;
    return desig < o.desig;
  }
  bool operator==(const Atom& o) const {
    return kind == o.kind && signal == o.signal && desig == o.desig;
  }
  std::string text() const {
    return kind == Kind::Signal ? signal : "in " + desig.text();
  }
};

struct FormulaNode {
  FKind kind = FKind::ConstTrue;
  int child0 = -1;  // node indices; node_id = index + 1 (pre-order, dense)
  int child1 = -1;
  std::string name;        // AtomSignal: signal; NextIn: automaton;
                           // AtomStateVar / var-form AtState: variable
  Designator desig;        // AtomIn; designator-form AtState
  bool desig_is_var = false;  // AtState picks `name` over `desig`
  std::vector<Designator> set;  // quantifier set expression
  std::string var;              // quantifier bound variable
  int sig_id = -1;              // resolved AtomSignal
  int aut_idx = -1;             // resolved NextIn automaton
};

// Parse tree flattened in pre-order: node ids are 1..N with the root at 1 and
// every subtree occupying a contiguous index block.
struct Formula {
  std::vector<FormulaNode> nodes;
  bool resolved = false;

  int root() const { return 0; }
  int node_id(int index) const { return index + 1; }
  int index_of_id(int id) const { return id - 1; }

  int subtree_size(int index) const {
    const FormulaNode& n = nodes[static_cast<size_t>(index)];
    int size = 1;
    if (n.child0 >= 0) size += subtree_size(n.child0);
    if (n.child1 >= 0) size += subtree_size(n.child1);
    return size;
  }

  bool is_leaf(int index) const {
    return nodes[static_cast<size_t>(index)].child0 < 0;
  }

  bool is_quantifier(int index) const {
    FKind k = nodes[static_cast<size_t>(index)].kind;
    return k == FKind::ForAllStates || k == FKind::ExistsStates;
  }

  bool is_jump_node(int index) const {
    FKind k = nodes[static_cast<size_t>(index)].kind;
    return k == FKind::AtState || k == FKind::ForAllStates ||
           k == FKind::ExistsStates;
  }

  std::vector<int> parents() const {
    std::vector<int> up(nodes.size(), -1);
    for (size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i].child0 >= 0) up[static_cast<size_t>(nodes[i].child0)] = static_cast<int>(i);
      if (nodes[i].child1 >= 0) up[static_cast<size_t>(nodes[i].child1)] = static_cast<int>(i);
    }
    return up;
  }

  std::vector<int> depths() const {
    std::vector<int> d(nodes.size(), 0);
    auto up = parents();
    for (size_t i = 1; i < nodes.size(); ++i)
      d[i] = d[static_cast<size_t>(up[i])] + 1;
    return d;
  }

  // True when the subtree mentions a state variable it does not bind itself;
  // verdicts of such subtrees depend on the enclosing bindings.
  std::vector<bool> open_subtrees() const {
    std::vector<bool> open(nodes.size(), false);
    collect_open(0, open);
    return open;
  }

 private:
  // Returns the set of free variables of the subtree and fills `open`.
  std::set<std::string> collect_open(int i, std::vector<bool>& open) const {
    const FormulaNode& n = nodes[static_cast<size_t>(i)];
    std::set<std::string> free;
    if (n.kind == FKind::AtomStateVar) free.insert(n.name);
    if (n.kind == FKind::AtState && n.desig_is_var) free.insert(n.name);
    if (n.child0 >= 0) {
      auto f = collect_open(n.child0, open);
      free.insert(f.begin(), f.end());
    }
    if (n.child1 >= 0) {
      auto f = collect_open(n.child1, open);
      free.insert(f.begin(), f.end());
    }
    if (n.kind == FKind::ForAllStates || n.kind == FKind::ExistsStates)
      free.erase(n.var);
    open[static_cast<size_t>(i)] = !free.empty();
    return free;
  }
};

// Operator lexeme as shown in tree listings and XML.
inline std::string node_label(const Formula& f, int index) {
  const FormulaNode& n = f.nodes[static_cast<size_t>(index)];
  switch (n.kind) {
    case FKind::ConstTrue: return "true";
    case FKind::ConstFalse: return "false";
    case FKind::AtomSignal: return n.name;
    case FKind::AtomIn: return "in " + n.desig.text();
    case FKind::AtomStateVar: return "in " + n.name;
    case FKind::Not: return "!";
    case FKind::And: return "*";
    case FKind::Or: return "+";
    case FKind::Implies: return "=>";
    case FKind::Iff: return "<=>";
    case FKind::Next: return "N";
    case FKind::NextIn: return "N[" + n.name + "]";
    case FKind::Finally: return "F";
    case FKind::Globally: return "G";
    case FKind::WeakUntil: return "U";
    case FKind::AtState:
      return (n.desig_is_var ? n.name : n.desig.text()) + ":";
    case FKind::ForAllStates:
    case FKind::ExistsStates: {
      std::string s = (n.kind == FKind::ForAllStates ? "A " : "E ");
      s += n.var + " in {";
      for (size_t i = 0; i < n.set.size(); ++i) {
        if (i) s += ", ";
        s += n.set[i].text();
      }
      s += "};";
      return s;
    }
  }
  return "?";
}

namespace detail {

// Precedence levels for printing; higher binds tighter.
inline int print_prec(FKind k) {
  switch (k) {
    case FKind::Implies:
    case FKind::Iff: return 1;
    case FKind::WeakUntil: return 2;
    case FKind::Or: return 3;
    case FKind::And: return 4;
    case FKind::Not:
    case FKind::Next:
    case FKind::NextIn:
    case FKind::Finally:
    case FKind::Globally: return 5;
    case FKind::AtState:
    case FKind::ForAllStates:
    case FKind::ExistsStates: return 0;
    default: return 6;
  }
}

inline void print_node(const Formula& f, int i, int min_prec, std::string& out) {
  const FormulaNode& n = f.nodes[static_cast<size_t>(i)];
  int prec = print_prec(n.kind);
  bool paren = prec < min_prec;
  if (paren) out += "(";
  switch (n.kind) {
    case FKind::ConstTrue: out += "true"; break;
    case FKind::ConstFalse: out += "false"; break;
    case FKind::AtomSignal: out += n.name; break;
    case FKind::AtomIn: out += "in " + n.desig.text(); break;
    case FKind::AtomStateVar: out += "in " + n.name; break;
    case FKind::Not:
      out += "!";
      print_node(f, n.child0, 5, out);
      break;
    case FKind::Next:
    case FKind::NextIn:
    case FKind::Finally:
    case FKind::Globally: {
      out += (n.kind == FKind::Next ? "N"
              : n.kind == FKind::NextIn ? "N[" + n.name + "]"
              : n.kind == FKind::Finally ? "F" : "G");
      out += " ";
      print_node(f, n.child0, 5, out);
      break;
    }
    case FKind::And:
      print_node(f, n.child0, 4, out);
      out += " * ";
      print_node(f, n.child1, 5, out);
      break;
    case FKind::Or:
      print_node(f, n.child0, 3, out);
      out += " + ";
      print_node(f, n.child1, 4, out);
      break;
    case FKind::WeakUntil:
      print_node(f, n.child0, 3, out);
      out += " U ";
      print_node(f, n.child1, 2, out);
      break;
    case FKind::Implies:
      print_node(f, n.child0, 2, out);
      out += " => ";
      print_node(f, n.child1, 1, out);
      break;
    case FKind::Iff:
      print_node(f, n.child0, 2, out);
      out += " <=> ";
      print_node(f, n.child1, 1, out);
      break;
    case FKind::AtState:
      out += (n.desig_is_var ? n.name : n.desig.text()) + ": ";
      print_node(f, n.child0, 0, out);
      break;
    case FKind::ForAllStates:
    case FKind::ExistsStates: {
      out += (n.kind == FKind::ForAllStates ? "A " : "E ");
      out += n.var + " in {";
      for (size_t d = 0; d < n.set.size(); ++d) {
        if (d) out += ", ";
        out += n.set[d].text();
      }
      out += "}; ";
      print_node(f, n.child0, 0, out);
      break;
    }
  }
  if (paren) out += ")";
}

}  // namespace detail

inline std::string pretty_print(const Formula& f) {
  std::string out;
  detail::print_node(f, 0, 0, out);
  return out;
}

// The set of atomic propositions occurring in the formula: AtomIn
// designators and AtomSignal names. Bound-variable atoms are excluded.
inline std::set<Atom> free_atoms(const Formula& f) {
  std::set<Atom> out;
  for (const auto& n : f.nodes) {
    if (n.kind == FKind::AtomSignal)
      out.insert(Atom{Atom::Kind::Signal, n.name, {}});
    else if (n.kind == FKind::AtomIn)
      out.insert(Atom{Atom::Kind::In, "", n.desig});
  }
  return out;
}

// free_atoms plus the designators named by quantifier sets and designator
// AtState operators, as in-state atoms. This is the valuation alphabet a
// reduction must respect for the formula's verdict to survive the quotient.
inline std::set<Atom> relevant_atoms(const Formula& f) {
  std::set<Atom> out = free_atoms(f);
  for (const auto& n : f.nodes) {
    if (n.kind == FKind::ForAllStates || n.kind == FKind::ExistsStates)
      for (const auto& d : n.set) out.insert(Atom{Atom::Kind::In, "", d});
    if (n.kind == FKind::AtState && !n.desig_is_var)
      out.insert(Atom{Atom::Kind::In, "", n.desig});
  }
  return out;
}

// Resolves designators, signal names and NextIn automata against a network.
// Unknown signals are left unresolved (they are never generated); unknown
// automata or local states are errors.
inline void resolve(Formula& f, const AutomataNetwork& net) {
  auto fix = [&](Designator& d) {
    d.aut_idx = net.automaton_index(d.automaton);
    if (d.aut_idx < 0)
      throw ParseError("unknown automaton '" + d.automaton + "'", 0, 0);
    d.local_idx = net.automata[static_cast<size_t>(d.aut_idx)].local_index(d.local);
    if (d.local_idx < 0)
      throw ParseError("unknown local state '" + d.local + "' in automaton '" +
                           d.automaton + "'",
                       0, 0);
  };
  for (auto& n : f.nodes) {
    switch (n.kind) {
      case FKind::AtomSignal: n.sig_id = net.signal_id(n.name); break;
      case FKind::AtomIn: fix(n.desig); break;
      case FKind::AtState:
        if (!n.desig_is_var) fix(n.desig);
        break;
      case FKind::NextIn:
        n.aut_idx = net.automaton_index(n.name);
        if (n.aut_idx < 0)
          throw ParseError("unknown automaton '" + n.name + "'", 0, 0);
        break;
      case FKind::ForAllStates:
      case FKind::ExistsStates:
        for (auto& d : n.set) fix(d);
        break;
      default: break;
    }
  }
  f.resolved = true;
}

}  // namespace csmc
