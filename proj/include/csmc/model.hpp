#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace csmc {

using StateId = std::uint32_t;
inline constexpr StateId kNoState = static_cast<StateId>(-1);

// Thrown for malformed model or formula text. Positions are 1-based.
struct ParseError : std::runtime_error {
  int line = 0;
  int col = 0;
  ParseError(std::string msg, int l, int c)
      : std::runtime_error(std::move(msg)), line(l), col(c) {}
};

struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The engine promised something it could not deliver (a bug, not bad input).
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

// Boolean expression over signal atoms, used as an arc guard.
struct GuardExpr {
  enum class Kind { True, False, Signal, Not, And, Or };
  Kind kind = Kind::True;
  std::string signal;             // Kind::Signal
  int sig_id = -1;                // resolved against the network signal table
  std::vector<GuardExpr> child;   // 1 for Not, 2 for And/Or

  static GuardExpr constant(bool v) {
    GuardExpr g;
    g.kind = v ? Kind::True : Kind::False;
    return g;
  }
  static GuardExpr atom(std::string name) {
    GuardExpr g;
    g.kind = Kind::Signal;
    g.signal = std::move(name);
    return g;
  }
  static GuardExpr negate(GuardExpr e) {
    GuardExpr g;
    g.kind = Kind::Not;
    g.child.push_back(std::move(e));
    return g;
  }
  static GuardExpr binary(Kind k, GuardExpr a, GuardExpr b) {
    GuardExpr g;
    g.kind = k;
    g.child.push_back(std::move(a));
    g.child.push_back(std::move(b));
    return g;
  }

  // Evaluates against the set of signals generated in the current global
  // state, given as a bitmap indexed by resolved signal id.
  bool eval(const std::vector<bool>& present) const {
    switch (kind) {
      case Kind::True: return true;
      case Kind::False: return false;
      case Kind::Signal: return sig_id >= 0 && present[static_cast<size_t>(sig_id)];
      case Kind::Not: return !child[0].eval(present);
      case Kind::And: return child[0].eval(present) && child[1].eval(present);
      case Kind::Or: return child[0].eval(present) || child[1].eval(present);
    }
    return false;
  }

  void collect_signals(std::set<std::string>& out) const {
    if (kind == Kind::Signal) out.insert(signal);
    for (const auto& c : child) c.collect_signals(out);
  }
};

struct Arc {
  std::string from;
  std::string to;
  GuardExpr guard;
  int from_idx = -1;  // resolved local-state indices
  int to_idx = -1;
};

struct Automaton {
  std::string name;
  std::vector<std::string> locals;  // declaration order
  std::string initial;
  int initial_idx = -1;
  std::map<std::string, std::set<std::string>> emits;  // local -> signal names
  std::vector<Arc> arcs;

  int local_index(const std::string& s) const {
    for (size_t i = 0; i < locals.size(); ++i)
      if (locals[i] == s) return static_cast<int>(i);
    return -1;
  }
};

// A network of communicating automata. After finalize(), signal names are
// interned into a dense table (sorted lexicographically) and per-local emit
// and guard-mention bitmaps are available for fast product construction.
struct AutomataNetwork {
  std::vector<Automaton> automata;
  std::vector<std::string> signals;  // sorted; index = signal id

  // emit_bits[a][local] / mention_bits[a][local]: signal-id bitmaps.
  std::vector<std::vector<std::vector<bool>>> emit_bits;
  std::vector<std::vector<std::vector<bool>>> mention_bits;
  // arcs_from[a][local]: indices into automata[a].arcs.
  std::vector<std::vector<std::vector<int>>> arcs_from;

  int automaton_index(const std::string& name) const {
    for (size_t i = 0; i < automata.size(); ++i)
      if (automata[i].name == name) return static_cast<int>(i);
    return -1;
  }

  int signal_id(const std::string& name) const {
    auto it = std::lower_bound(signals.begin(), signals.end(), name);
    if (it != signals.end() && *it == name)
      return static_cast<int>(it - signals.begin());
    return -1;
  }

  // Resolves names to indices and builds the lookup tables. Throws
  // ParseError (position 0:0) on semantic problems so callers report
  // construction and text-parse failures uniformly.
  void finalize() {
    if (automata.empty()) throw ParseError("no automata declared", 0, 0);
    if (automata.size() > 64)
      throw ParseError("too many automata (limit 64)", 0, 0);
    std::set<std::string> names;
    std::set<std::string> sigset;
    for (auto& a : automata) {
      if (!names.insert(a.name).second)
        throw ParseError("duplicate automaton name '" + a.name + "'", 0, 0);
      std::set<std::string> locs;
      for (auto& l : a.locals)
        if (!locs.insert(l).second)
          throw ParseError("duplicate local state '" + l + "' in automaton '" +
                               a.name + "'",
                           0, 0);
      if (a.locals.empty())
        throw ParseError("automaton '" + a.name + "' has no states", 0, 0);
      if (a.locals.size() > 255)
        throw ParseError("too many local states in '" + a.name + "' (limit 255)",
                         0, 0);
      if (a.initial.empty())
        throw ParseError("missing initial state in automaton '" + a.name + "'",
                         0, 0);
      a.initial_idx = a.local_index(a.initial);
      if (a.initial_idx < 0)
        throw ParseError("unknown local state '" + a.initial +
                             "' declared initial in automaton '" + a.name + "'",
                         0, 0);
      for (auto& [loc, sigs] : a.emits) {
        if (a.local_index(loc) < 0)
          throw ParseError("unknown local state '" + loc + "'", 0, 0);
        for (auto& s : sigs) sigset.insert(s);
      }
      for (auto& arc : a.arcs) {
        arc.from_idx = a.local_index(arc.from);
        arc.to_idx = a.local_index(arc.to);
        if (arc.from_idx < 0)
          throw ParseError("unknown local state '" + arc.from +
                               "' in arc of automaton '" + a.name + "'",
                           0, 0);
        if (arc.to_idx < 0)
          throw ParseError("unknown local state '" + arc.to +
                               "' in arc of automaton '" + a.name + "'",
                           0, 0);
      }
    }
    signals.assign(sigset.begin(), sigset.end());

    emit_bits.clear();
    mention_bits.clear();
    arcs_from.clear();
    for (auto& a : automata) {
      std::vector<std::vector<bool>> em(a.locals.size(),
                                        std::vector<bool>(signals.size(), false));
      std::vector<std::vector<bool>> me = em;
      std::vector<std::vector<int>> af(a.locals.size());
      for (auto& [loc, sigs] : a.emits) {
        int li = a.local_index(loc);
        for (auto& s : sigs) em[static_cast<size_t>(li)][static_cast<size_t>(signal_id(s))] = true;
      }
      for (size_t ai = 0; ai < a.arcs.size(); ++ai) {
        auto& arc = a.arcs[ai];
        resolve_guard(arc.guard);
        std::set<std::string> used;
        arc.guard.collect_signals(used);
        for (auto& s : used)
          me[static_cast<size_t>(arc.from_idx)][static_cast<size_t>(signal_id(s))] = true;
        af[static_cast<size_t>(arc.from_idx)].push_back(static_cast<int>(ai));
      }
      emit_bits.push_back(std::move(em));
      mention_bits.push_back(std::move(me));
      arcs_from.push_back(std::move(af));
    }
  }

 private:
  void resolve_guard(GuardExpr& g) {
    if (g.kind == GuardExpr::Kind::Signal) {
      g.sig_id = signal_id(g.signal);
      if (g.sig_id < 0)
        throw ParseError("undeclared signal '" + g.signal + "' in guard", 0, 0);
    }
    for (auto& c : g.child) resolve_guard(c);
  }
};

}  // namespace csmc
