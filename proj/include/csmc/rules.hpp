#pragma once

#include <array>
#include <optional>
#include <string>

#include "csmc/formula.hpp"

namespace csmc {

// How an operator's rule row directs the construction of a child sequence.
// `Fixed` carries the tabulated desired result; the child is constructed
// only when its actual value differs (otherwise it is recorded as "value as
// desired"). `Opposite` means desired = !actual, so the child is always
// constructed.
struct ChildDirective {
  enum class Mode { Fixed, Opposite } mode = Mode::Fixed;
  bool desired = false;  // Mode::Fixed
};

// One row of the construction table: keyed by (operator, desired result),
// where the desired result is the opposite of the actual one.
struct Rule {
  int row = 0;
  std::string endpoint;  // description of the state finishing the sequence
  std::array<std::optional<ChildDirective>, 2> child;
};

inline bool rule_applicable(FKind k) {
  switch (k) {
    case FKind::ConstTrue:
    case FKind::ConstFalse:
    case FKind::AtomSignal:
    case FKind::AtomIn:
    case FKind::AtomStateVar:
      return false;
    default:
      return true;
  }
}

// Total over all operators; atoms and constants have no rows (their
// sequences are singletons recorded at the parent's endpoint).
inline Rule dispatch_rule(FKind op, bool desired) {
  auto fixed = [](bool d) {
    return ChildDirective{ChildDirective::Mode::Fixed, d};
  };
  auto opposite = [] {
    return ChildDirective{ChildDirective::Mode::Opposite, false};
  };
  Rule r;
  switch (op) {
    case FKind::Not:
      r.row = desired ? 2 : 1;
      r.endpoint = "starting state";
      r.child[0] = fixed(!desired);
      return r;
    case FKind::Or:
      r.row = desired ? 4 : 3;
      r.endpoint = "starting state";
      r.child[0] = fixed(desired);
      r.child[1] = fixed(desired);
      return r;
    case FKind::And:
      r.row = desired ? 6 : 5;
      r.endpoint = "starting state";
      r.child[0] = fixed(desired);
      r.child[1] = fixed(desired);
      return r;
    case FKind::Implies:
      if (desired) {
        r.row = 8;
        r.endpoint = "starting state";
        r.child[0] = fixed(false);
        r.child[1] = fixed(true);
      } else {
        r.row = 7;
        r.endpoint = "starting state";
        r.child[0] = opposite();
        r.child[1] = opposite();
      }
      return r;
    case FKind::Iff:
      r.row = desired ? 10 : 9;
      r.endpoint = "starting state";
      r.child[0] = opposite();
      r.child[1] = opposite();
      return r;
    case FKind::Next:
      r.row = desired ? 12 : 11;
      r.endpoint = desired ? "successor not holding the argument"
                           : "successor holding the argument";
      r.child[0] = fixed(desired);
      return r;
    case FKind::NextIn:
      r.row = desired ? 14 : 13;
      r.endpoint = desired ? "moved successor not holding the argument"
                           : "moved successor holding the argument";
      r.child[0] = fixed(desired);
      return r;
    case FKind::Finally:
      if (desired) {
        r.row = 16;
        r.endpoint = "member of a strongly connected subgraph avoiding the argument";
      } else {
        r.row = 15;
        r.endpoint = "state holding the argument";
      }
      r.child[0] = fixed(desired);
      return r;
    case FKind::Globally:
      if (desired) {
        r.row = 18;
        r.endpoint = "state not holding the argument";
      } else {
        r.row = 17;
        r.endpoint = "starting state";
      }
      r.child[0] = fixed(desired);
      return r;
    case FKind::WeakUntil:
      if (desired) {
        r.row = 20;
        r.endpoint = "state holding neither argument";
        r.child[0] = fixed(true);
        r.child[1] = fixed(true);
      } else {
        r.row = 19;
        r.endpoint = "state holding both arguments, or last in a cycle holding the left";
        r.child[0] = fixed(false);
        r.child[1] = fixed(false);
      }
      return r;
    case FKind::AtState:
      r.row = desired ? 22 : 21;
      r.endpoint = "the designated state";
      r.child[0] = fixed(desired);
      return r;
    case FKind::ForAllStates:
      r.row = desired ? 24 : 23;
      r.endpoint = desired ? "member of the set not satisfying the argument"
                           : "member of the set satisfying the argument";
      r.child[0] = fixed(desired);
      return r;
    case FKind::ExistsStates:
      r.row = desired ? 26 : 25;
      r.endpoint = desired ? "member of the set not satisfying the argument"
                           : "member of the set satisfying the argument";
      r.child[0] = fixed(desired);
      return r;
    default:
      throw InternalError("dispatch_rule on a leaf node");
  }
}

}  // namespace csmc
