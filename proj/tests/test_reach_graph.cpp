#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "support/fixtures.hpp"

using namespace csmc;

namespace {

// Brute-force product enumerator, independent of build_rg: explores the
// closure by recomputing choice sets per state from the raw declarations,
// keyed by component tuples instead of ids.
struct BruteGraph {
  std::set<std::vector<std::string>> states;
  std::map<std::pair<std::vector<std::string>, std::vector<std::string>>,
           std::set<std::string>>
      arcs;  // (src tuple, dst tuple) -> mover names
};

BruteGraph brute_force(const AutomataNetwork& net) {
  BruteGraph g;
  std::vector<std::string> init;
  for (const auto& a : net.automata) init.push_back(a.initial);
  std::vector<std::vector<std::string>> work{init};
  g.states.insert(init);
  while (!work.empty()) {
    auto cur = work.back();
    work.pop_back();
    std::set<std::string> gen;
    for (size_t a = 0; a < net.automata.size(); ++a) {
      auto it = net.automata[a].emits.find(cur[a]);
      if (it != net.automata[a].emits.end())
        gen.insert(it->second.begin(), it->second.end());
    }
    std::vector<bool> present(net.signals.size(), false);
    for (const auto& s : gen) present[static_cast<size_t>(net.signal_id(s))] = true;

    // per automaton: list of (target local, is a move)
    std::vector<std::vector<std::pair<std::string, bool>>> options;
    for (size_t a = 0; a < net.automata.size(); ++a) {
      std::vector<std::pair<std::string, bool>> opts;
      for (const auto& arc : net.automata[a].arcs) {
        if (arc.from != cur[a]) continue;
        if (!arc.guard.eval(present)) continue;
        if (std::find(opts.begin(), opts.end(),
                      std::make_pair(arc.to, true)) == opts.end())
          opts.emplace_back(arc.to, true);
      }
      if (opts.empty()) opts.emplace_back(cur[a], false);
      options.push_back(opts);
    }

    std::vector<size_t> pick(net.automata.size(), 0);
    for (;;) {
      std::vector<std::string> dst;
      std::set<std::string> movers;
      for (size_t a = 0; a < net.automata.size(); ++a) {
        dst.push_back(options[a][pick[a]].first);
        if (options[a][pick[a]].second) movers.insert(net.automata[a].name);
      }
      auto& entry = g.arcs[{cur, dst}];
      entry.insert(movers.begin(), movers.end());
      if (g.states.insert(dst).second) work.push_back(dst);

      size_t a = 0;
      while (a < net.automata.size() && ++pick[a] == options[a].size()) {
        pick[a] = 0;
        ++a;
      }
      if (a == net.automata.size()) break;
    }
  }
  return g;
}

std::vector<std::string> tuple_of(const ReachabilityGraph& rg, StateId s) {
  std::vector<std::string> t;
  for (size_t a = 0; a < rg.net.automata.size(); ++a)
    t.push_back(rg.net.automata[a].locals[static_cast<size_t>(
        rg.local_of(s, static_cast<int>(a)))]);
  return t;
}

void check_against_brute_force(const ReachabilityGraph& rg) {
  BruteGraph ref = brute_force(rg.net);
  REQUIRE(rg.num_states() == ref.states.size());
  std::set<std::vector<std::string>> got;
  for (StateId s = 0; s < rg.num_states(); ++s) got.insert(tuple_of(rg, s));
  CHECK(got == ref.states);
  size_t arc_count = 0;
  for (StateId s = 0; s < rg.num_states(); ++s) {
    for (std::uint32_t k = rg.succ_off[s]; k < rg.succ_off[s + 1]; ++k) {
      ++arc_count;
      auto key = std::make_pair(tuple_of(rg, s), tuple_of(rg, rg.succ_dst[k]));
      auto it = ref.arcs.find(key);
      REQUIRE(it != ref.arcs.end());
      std::set<std::string> movers;
      for (size_t a = 0; a < rg.net.automata.size(); ++a)
        if (rg.succ_movers[k] & (MoverMask{1} << a))
          movers.insert(rg.net.automata[a].name);
      CHECK(movers == it->second);
    }
  }
  CHECK(arc_count == ref.arcs.size());
}

}  // namespace

TEST_CASE("toy graph is the expected 4-state chain") {
  auto rg = fixtures::graph(fixtures::kToy1);
  REQUIRE(rg.num_states() == 4);
  CHECK(rg.state_label(0) == "(a0,b0)");
  CHECK(rg.state_label(1) == "(a0,b1)");
  CHECK(rg.state_label(2) == "(a1,b1)");
  CHECK(rg.state_label(3) == "(a1,b0)");
  REQUIRE(rg.num_arcs() == 4);
  CHECK(rg.has_arc(0, 1));
  CHECK(rg.has_arc(1, 2));
  CHECK(rg.has_arc(2, 3));
  CHECK(rg.has_arc(3, 3));
  CHECK(rg.arc_movers(0, 1) == 0b10);  // only B moves
  CHECK(rg.arc_movers(1, 2) == 0b01);
  CHECK(rg.arc_movers(3, 3) == 0);     // pure stay self-loop
  check_against_brute_force(rg);
}

TEST_CASE("single automaton with no arcs degenerates to a self-loop") {
  auto rg = fixtures::graph("automaton A { state a0; init a0; }");
  REQUIRE(rg.num_states() == 1);
  REQUIRE(rg.num_arcs() == 1);
  CHECK(rg.has_arc(0, 0));
}

TEST_CASE("k independent togglers reach 2^k states") {
  for (int k = 1; k <= 10; ++k) {
    std::string text;
    for (int i = 0; i < k; ++i) {
      std::string n = "T" + std::to_string(i);
      text += "automaton " + n + " { state u; state d; init u;";
      text += " arc u -> d when true; arc u -> u when true;";
      text += " arc d -> u when true; arc d -> d when true; }\n";
    }
    auto rg = fixtures::graph(text.c_str());
    CHECK(rg.num_states() == (size_t{1} << k));
    if (k <= 5) check_against_brute_force(rg);
  }
}

TEST_CASE("state cap aborts the build instead of truncating") {
  std::string text;
  for (int i = 0; i < 6; ++i) {
    std::string n = "T" + std::to_string(i);
    text += "automaton " + n + " { state u; state d; init u;";
    text += " arc u -> d when true; arc u -> u when true;";
    text += " arc d -> u when true; arc d -> d when true; }\n";
  }
  BuildOptions opts;
  opts.state_cap = 32;
  REQUIRE_THROWS_AS(build_rg(parse_model(text), opts), CapacityError);
}

TEST_CASE("generated signals per state match the fixture emits") {
  auto rg = fixtures::graph(fixtures::kToy1);
  CHECK(rg.generated_signals(0) == std::set<std::string>{"go"});
  CHECK(rg.generated_signals(1) == std::set<std::string>{"go", "ack"});
  CHECK(rg.generated_signals(3) == std::set<std::string>{});
}

TEST_CASE("listeners follow guard mentions of the current locals") {
  auto rg = fixtures::graph(fixtures::kToy1);
  CHECK(rg.listeners(0, "go") == std::set<std::string>{"B"});
  CHECK(rg.listeners(0, "ack") == std::set<std::string>{"A"});
  // b0's guard mentions go whether or not it is generated
  CHECK(rg.listeners(3, "go") == std::set<std::string>{"B"});
  CHECK(rg.listeners(2, "go") == std::set<std::string>{"B"});  // via !go
}

TEST_CASE("rebuilding the same text yields identical graphs") {
  auto a = fixtures::graph(fixtures::kSigChain);
  auto b = fixtures::graph(fixtures::kSigChain);
  CHECK(a.components == b.components);
  CHECK(a.succ_dst == b.succ_dst);
  CHECK(a.succ_movers == b.succ_movers);
  CHECK(a.generated == b.generated);
}

TEST_CASE("sig chain cycles through three global states") {
  auto rg = fixtures::graph(fixtures::kSigChain);
  REQUIRE(rg.num_states() == 3);
  CHECK(rg.has_arc(0, 1));
  CHECK(rg.has_arc(1, 2));
  CHECK(rg.has_arc(2, 0));
  CHECK(rg.generated_signals(0).empty());
  CHECK(rg.generated_signals(1) == std::set<std::string>{"sConn"});
  CHECK(rg.generated_signals(2) == std::set<std::string>{"CGVar"});
}
