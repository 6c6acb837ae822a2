#pragma once

#include <random>
#include <string>
#include <vector>

#include "csmc/formula_parser.hpp"
#include "csmc/model_parser.hpp"
#include "csmc/reach_graph.hpp"

namespace corpus {

// Random model/formula corpus with a fixed-seed RNG so failures reproduce.

inline csmc::GuardExpr random_guard(std::mt19937& rng,
                                    const std::vector<std::string>& pool,
                                    int depth) {
  std::uniform_int_distribution<int> d100(0, 99);
  int roll = d100(rng);
  if (depth == 0 || pool.empty() || roll < 45) {
    if (pool.empty() || roll >= 90)
      return csmc::GuardExpr::constant(roll % 2 == 0);
    std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
    return csmc::GuardExpr::atom(pool[pick(rng)]);
  }
  if (roll < 60) return csmc::GuardExpr::negate(random_guard(rng, pool, depth - 1));
  auto kind = roll < 80 ? csmc::GuardExpr::Kind::And : csmc::GuardExpr::Kind::Or;
  return csmc::GuardExpr::binary(kind, random_guard(rng, pool, depth - 1),
                                 random_guard(rng, pool, depth - 1));
}

// Up to 5 automata x 4 local states x 3 signals each. Regenerates until the
// product stays under a few hundred states so whole-corpus runs stay fast.
inline csmc::AutomataNetwork random_network(std::mt19937& rng,
                                            size_t state_budget = 400) {
  for (;;) {
    csmc::AutomataNetwork net;
    std::uniform_int_distribution<int> n_aut(1, 5);
    std::uniform_int_distribution<int> n_loc(1, 4);
    std::uniform_int_distribution<int> d100(0, 99);
    int na = n_aut(rng);
    std::vector<std::string> pool;
    for (int a = 0; a < na; ++a) {
      csmc::Automaton aut;
      aut.name = std::string(1, static_cast<char>('P' + a));
      int nl = n_loc(rng);
      for (int l = 0; l < nl; ++l)
        aut.locals.push_back(aut.name + std::to_string(l));
      aut.initial = aut.locals[0];
      int nsig = d100(rng) % 4;  // 0..3 signals
      for (int s = 0; s < nsig; ++s) {
        std::string sig = "sig" + aut.name + std::to_string(s);
        pool.push_back(sig);
        // each signal emitted by one or two random locals
        std::uniform_int_distribution<size_t> pick(0, aut.locals.size() - 1);
        aut.emits[aut.locals[pick(rng)]].insert(sig);
        if (d100(rng) < 30) aut.emits[aut.locals[pick(rng)]].insert(sig);
      }
      net.automata.push_back(std::move(aut));
    }
    for (auto& aut : net.automata) {
      std::uniform_int_distribution<size_t> pick(0, aut.locals.size() - 1);
      std::uniform_int_distribution<int> n_arcs(0, 2);
      for (const auto& from : aut.locals) {
        int k = n_arcs(rng);
        for (int i = 0; i < k; ++i) {
          csmc::Arc arc;
          arc.from = from;
          arc.to = aut.locals[pick(rng)];
          arc.guard = random_guard(rng, pool, 2);
          aut.arcs.push_back(std::move(arc));
        }
      }
    }
    try {
      net.finalize();
      csmc::BuildOptions opts;
      opts.state_cap = state_budget;
      csmc::build_rg(net, opts);  // probe the size
      return net;
    } catch (const csmc::CapacityError&) {
      continue;
    }
  }
}

inline std::string random_designator_text(std::mt19937& rng,
                                          const csmc::AutomataNetwork& net) {
  std::uniform_int_distribution<size_t> pa(0, net.automata.size() - 1);
  const auto& aut = net.automata[pa(rng)];
  std::uniform_int_distribution<size_t> pl(0, aut.locals.size() - 1);
  return aut.name + "." + aut.locals[pl(rng)];
}

inline std::string random_atom_text(std::mt19937& rng,
                                    const csmc::AutomataNetwork& net) {
  std::uniform_int_distribution<int> d100(0, 99);
  if (net.signals.empty() || d100(rng) < 40)
    return "in " + random_designator_text(rng, net);
  std::uniform_int_distribution<size_t> ps(0, net.signals.size() - 1);
  return net.signals[ps(rng)];
}

struct FormulaOptions {
  int max_depth = 4;
  bool allow_next = true;
  bool allow_state_identity = true;  // quantified-variable atoms, at-state
};

inline std::string random_formula_text(std::mt19937& rng,
                                       const csmc::AutomataNetwork& net,
                                       const FormulaOptions& opts,
                                       int depth, int& var_counter,
                                       std::vector<std::string>& bound) {
  std::uniform_int_distribution<int> d100(0, 99);
  int roll = d100(rng);
  if (depth <= 0) roll = 0;
  auto sub = [&](int d) {
    return "(" +
           random_formula_text(rng, net, opts, d, var_counter, bound) + ")";
  };
  if (roll < 22) {
    if (opts.allow_state_identity && !bound.empty() && d100(rng) < 25)
      return "in " + bound[static_cast<size_t>(d100(rng)) % bound.size()];
    if (d100(rng) < 8) return d100(rng) % 2 ? "true" : "false";
    return random_atom_text(rng, net);
  }
  int d = depth - 1;
  if (roll < 32) return "!" + sub(d);
  if (roll < 40) return sub(d) + " * " + sub(d);
  if (roll < 48) return sub(d) + " + " + sub(d);
  if (roll < 53) return sub(d) + " => " + sub(d);
  if (roll < 57) return sub(d) + " <=> " + sub(d);
  if (roll < 64 && opts.allow_next) return "N " + sub(d);
  if (roll < 69 && opts.allow_next) {
    std::uniform_int_distribution<size_t> pa(0, net.automata.size() - 1);
    return "N[" + net.automata[pa(rng)].name + "] " + sub(d);
  }
  if (roll < 77) return "F " + sub(d);
  if (roll < 85) return "G " + sub(d);
  if (roll < 93) return sub(d) + " U " + sub(d);
  if (roll < 97 || !opts.allow_state_identity || bound.empty()) {
    // quantifier with a one- or two-designator set
    std::string var = "v" + std::to_string(var_counter++);
    std::string set = random_designator_text(rng, net);
    if (d100(rng) < 35) set += ", " + random_designator_text(rng, net);
    bound.push_back(var);
    std::string body =
        random_formula_text(rng, net, opts, d, var_counter, bound);
    bound.pop_back();
    return std::string(d100(rng) % 2 ? "A " : "E ") + var + " in {" + set +
           "}; " + body;
  }
  return bound[static_cast<size_t>(d100(rng)) % bound.size()] + ": " + sub(d);
}

inline csmc::Formula random_formula(std::mt19937& rng,
                                    const csmc::ReachabilityGraph& rg,
                                    const FormulaOptions& opts = {}) {
  int var_counter = 0;
  std::vector<std::string> bound;
  std::string text =
      random_formula_text(rng, rg.net, opts, opts.max_depth, var_counter, bound);
  return csmc::parse_formula(text, &rg.net);
}

}  // namespace corpus
