#include <catch2/catch_amalgamated.hpp>

#include "csmc/eval.hpp"
#include "csmc/oracle.hpp"
#include "csmc/spheres.hpp"
#include "support/corpus.hpp"
#include "support/fixtures.hpp"

using namespace csmc;

namespace {
bool check(const ReachabilityGraph& rg, const std::string& text, StateId s,
           EvalOptions opts = {}) {
  auto f = fixtures::formula(text, rg);
  EvalContext ctx(rg, f, opts);
  return ctx.eval(s);
}
}  // namespace

TEST_CASE("spheres partition the future") {
  auto rg = fixtures::graph(fixtures::kToy1);
  auto sp = spheres(rg, 0);
  REQUIRE(sp.size() == 4);
  CHECK(sp[0] == std::vector<StateId>{0});
  CHECK(sp[1] == std::vector<StateId>{1});
  CHECK(sp[2] == std::vector<StateId>{2});
  CHECK(sp[3] == std::vector<StateId>{3});

  // self-loop successors other than the state itself are excluded
  auto last = spheres(rg, 3);
  REQUIRE(last.size() == 1);
  CHECK(last[0] == std::vector<StateId>{3});
}

TEST_CASE("sphere partition property on a branching graph") {
  auto rg = fixtures::graph(
      "automaton T0 { state u; state d; init u;"
      " arc u -> d when true; arc u -> u when true;"
      " arc d -> u when true; arc d -> d when true; }"
      "automaton T1 { state u; state d; init u;"
      " arc u -> d when true; arc u -> u when true; }");
  for (StateId s = 0; s < rg.num_states(); ++s) {
    auto sp = spheres(rg, s);
    std::set<StateId> all;
    size_t total = 0;
    for (const auto& layer : sp) {
      for (StateId t : layer) all.insert(t);
      total += layer.size();
    }
    CHECK(all.size() == total);  // pairwise disjoint
    // union = {s} + future(s): future via plain BFS
    std::set<StateId> expect{s};
    std::vector<StateId> work{s};
    while (!work.empty()) {
      StateId u = work.back();
      work.pop_back();
      for (StateId t : rg.successors(u))
        if (expect.insert(t).second) work.push_back(t);
    }
    CHECK(all == expect);
  }
}

TEST_CASE("toy verdicts") {
  auto rg = fixtures::graph(fixtures::kToy1);
  CHECK_FALSE(check(rg, "G !ack", 0));
  CHECK(check(rg, "F in A.a1", 0));
  CHECK(check(rg, "go U ack", 0));
  CHECK_FALSE(check(rg, "F go", 2));
  for (StateId s = 0; s < rg.num_states(); ++s) CHECK(check(rg, "G true", s));
}

TEST_CASE("verdicts are identical with optimizations off") {
  auto rg = fixtures::graph(fixtures::kToy1);
  for (const char* text :
       {"G !ack", "F in A.a1", "go U ack", "F go", "go * ack", "go + ack",
        "go => ack", "N go <=> N ack", "A s in {A.a0}; G !ack"}) {
    for (StateId s = 0; s < rg.num_states(); ++s) {
      bool on = check(rg, text, s, EvalOptions{true, true});
      bool off = check(rg, text, s, EvalOptions{false, false});
      CHECK(on == off);
    }
  }
}

TEST_CASE("at-state and quantifier evaluation") {
  auto rg = fixtures::graph(fixtures::kChain2);
  // M.m0 matches exactly one reachable state
  CHECK(check(rg, "M.m0: x", 1));
  CHECK_FALSE(check(rg, "M.m0: y", 0));
  CHECK(check(rg, "A s in {M.m0, M.m1}; (x + y)", 0));
  CHECK(check(rg, "E s in {M.m0, M.m1}; y", 0));
  CHECK_FALSE(check(rg, "E s in {M.m0, M.m1}; (x * y)", 0));
  // bound variable atom: in s holds exactly at the bound member
  CHECK(check(rg, "A s in {M.m1}; F in s", 0));
  CHECK_FALSE(check(rg, "A s in {M.m0}; N in s", 0));
}

TEST_CASE("vacuous quantifiers carry a diagnostic") {
  auto rg = fixtures::graph(fixtures::kChain2);
  auto f = fixtures::formula("A s in {M2.z1}; false", rg);
  EvalContext ctx(rg, f);
  CHECK(ctx.eval(0));
  REQUIRE_FALSE(ctx.diagnostics().empty());
  auto g = fixtures::formula("E s in {M2.z1}; true", rg);
  EvalContext ctx2(rg, g);
  CHECK_FALSE(ctx2.eval(0));
  REQUIRE_FALSE(ctx2.diagnostics().empty());
}

TEST_CASE("at-state designator must name exactly one state") {
  auto rg = fixtures::graph(fixtures::kToy1);
  auto f = fixtures::formula("A.a0: go", rg);  // matches s0 and s1
  EvalContext ctx(rg, f);
  REQUIRE_THROWS_WITH(ctx.eval(0),
                      Catch::Matchers::ContainsSubstring("multiple"));
  auto g = fixtures::formula("A s in {M2.z1}; x", fixtures::graph(fixtures::kChain2));
  // zero-match designator inside a quantifier set is a vacuous set, fine;
  // but an at-state zero match is an error
  auto rg2 = fixtures::graph(fixtures::kChain2);
  auto h = fixtures::formula("M2.z1: x", rg2);
  EvalContext ctx2(rg2, h);
  REQUIRE_THROWS_WITH(ctx2.eval(0),
                      Catch::Matchers::ContainsSubstring("no reachable state"));
}

TEST_CASE("next-in quantifies over moved successors only") {
  auto rg = fixtures::graph(fixtures::kToy1);
  // from s0 only B moves; A never moves on the arc, so N[A] is vacuous
  CHECK(check(rg, "N[B] ack", 0));
  CHECK(check(rg, "N[A] false", 0));
  CHECK_FALSE(check(rg, "N[B] false", 0));
  CHECK(check(rg, "N[A] in A.a1", 1));
}

TEST_CASE("oracle agrees on the toy catalogue") {
  auto rg = fixtures::graph(fixtures::kToy1);
  const char* catalogue[] = {
      "go", "ack", "in A.a0", "in B.b1", "true", "false", "!go", "go * ack",
      "go + ack", "go => ack", "go <=> ack", "N go", "N[A] go", "N[B] ack",
      "F ack", "G go", "go U ack", "ack U go", "F (go * ack)", "G (go + ack)",
  };
  int checked = 0;
  for (const char* text : catalogue) {
    auto f = fixtures::formula(text, rg);
    EvalContext ctx(rg, f);
    for (StateId s = 0; s < rg.num_states(); ++s) {
      INFO(text << " at s" << s);
      CHECK(ctx.eval(s) == eval_oracle(rg, f, s));
      ++checked;
    }
  }
  CHECK(checked == 80);
}

TEST_CASE("AG equals unreachability of the negation") {
  std::mt19937 rng(7);
  for (int round = 0; round < 30; ++round) {
    auto net = corpus::random_network(rng);
    auto rg = build_rg(net);
    auto atom = corpus::random_atom_text(rng, rg.net);
    auto f = fixtures::formula("G (" + atom + ")", rg);
    auto inner = fixtures::formula(atom, rg);
    EvalContext ctx(rg, f);
    EvalContext actx(rg, inner);
    for (StateId s = 0; s < rg.num_states(); ++s) {
      // plain BFS reachability of a !atom state
      bool bad = false;
      std::vector<char> seen(rg.num_states(), 0);
      std::vector<StateId> work{s};
      seen[s] = 1;
      while (!work.empty() && !bad) {
        StateId u = work.back();
        work.pop_back();
        if (!actx.eval(u)) bad = true;
        for (StateId t : rg.successors(u))
          if (!seen[t]) {
            seen[t] = 1;
            work.push_back(t);
          }
      }
      CHECK(ctx.eval(s) == !bad);
    }
  }
}

TEST_CASE("find_sequence walks sphere layers") {
  auto rg = fixtures::graph(fixtures::kToy1);
  SequenceQuery q;
  q.rg = &rg;
  q.source = 0;
  q.target = [&](StateId s) { return rg.generates(s, rg.net.signal_id("ack")); };
  auto path = find_sequence(q);
  REQUIRE(path);
  CHECK(*path == std::vector<StateId>{0, 1});

  q.target = [](StateId s) { return s == 0; };
  path = find_sequence(q);
  REQUIRE(path);
  CHECK(*path == std::vector<StateId>{0});

  // restriction: the only route to A.a1 passes the ack state
  q.restrict_pred = [&](StateId s) {
    return !rg.generates(s, rg.net.signal_id("ack"));
  };
  q.target = [&](StateId s) { return rg.local_of(s, 0) == 1; };
  CHECK_FALSE(find_sequence(q));
}

TEST_CASE("found paths are arc-connected and sphere-monotone") {
  std::mt19937 rng(11);
  for (int round = 0; round < 40; ++round) {
    auto net = corpus::random_network(rng);
    auto rg = build_rg(net);
    std::uniform_int_distribution<StateId> pick(0, static_cast<StateId>(rg.num_states() - 1));
    StateId src = pick(rng);
    StateId dst = pick(rng);
    SequenceQuery q;
    q.rg = &rg;
    q.source = src;
    q.target = [dst](StateId s) { return s == dst; };
    auto path = find_sequence(q);
    auto sp = spheres(rg, src);
    auto sphere_of = [&](StateId s) {
      for (size_t i = 0; i < sp.size(); ++i)
        if (std::binary_search(sp[i].begin(), sp[i].end(), s))
          return static_cast<int>(i);
      return -1;
    };
    if (!path) {
      CHECK(sphere_of(dst) == -1);
      continue;
    }
    REQUIRE(path->front() == src);
    REQUIRE(path->back() == dst);
    for (size_t i = 0; i + 1 < path->size(); ++i) {
      CHECK(rg.has_arc((*path)[i], (*path)[i + 1]));
      CHECK(sphere_of((*path)[i]) == static_cast<int>(i));
    }
  }
}
