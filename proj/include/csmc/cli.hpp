#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "csmc/critical_tree.hpp"
#include "csmc/formula_parser.hpp"
#include "csmc/model_parser.hpp"
#include "csmc/oracle.hpp"
#include "csmc/reduction.hpp"
#include "csmc/views.hpp"

namespace csmc {
namespace cli {

// Exit codes: 0 formula holds, 1 formula fails (counterexample emitted),
// 2 usage or input error, 3 state cap exceeded, 4 internal inconsistency
// (including an --oracle disagreement).
enum ExitCode {
  kTrue = 0,
  kFalse = 1,
  kUsage = 2,
  kCapacity = 3,
  kInternal = 4,
};

struct RunConfig {
  std::string model_path;
  std::string formula_text;
  std::string formula_path;
  std::string view = "states";
  std::string out_path;
  std::string xml_path;
  bool compress = false;
  bool reduced = false;
  bool force = false;
  bool oracle = false;
  int node = 0;
  size_t cap = 1'000'000;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void emit(const RunConfig& cfg, const std::string& doc,
                 std::ostream& out) {
  if (cfg.out_path.empty()) {
    out << doc;
    return;
  }
  std::ofstream f(cfg.out_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write file '" + cfg.out_path + "'");
  f << doc;
}

struct Loaded {
  AutomataNetwork net;
  ReachabilityGraph rg;
  Formula formula;
};

inline Loaded load(const RunConfig& cfg, std::ostream& err) {
  Loaded l;
  std::string model_text = read_file(cfg.model_path);
  try {
    l.net = parse_model(model_text);
  } catch (const ParseError& e) {
    throw std::runtime_error(cfg.model_path + ":" + std::to_string(e.line) +
                             ":" + std::to_string(e.col) + ": " + e.what());
  }
  std::string ftext = cfg.formula_text;
  std::string fsource = "<formula>";
  if (!cfg.formula_path.empty()) {
    ftext = read_file(cfg.formula_path);
    fsource = cfg.formula_path;
  }
  try {
    l.formula = parse_formula(ftext, &l.net);
  } catch (const ParseError& e) {
    throw std::runtime_error(fsource + ":" + std::to_string(e.line) + ":" +
                             std::to_string(e.col) + ": " + e.what());
  }
  for (const auto& n : l.formula.nodes)
    if (n.kind == FKind::AtomSignal && n.sig_id < 0)
      err << "warning: signal '" << n.name
          << "' is not generated by any automaton; the atom is always false\n";
  BuildOptions bo;
  bo.state_cap = cfg.cap;
  l.rg = build_rg(std::move(l.net), bo);
  l.net = l.rg.net;
  return l;
}

inline std::string render_view(const std::string& view, const CriticalTree& t,
                               const ReachabilityGraph& rg,
                               const CompressedTree* ct) {
  if (view == "states") return render_states(t, rg, ct);
  if (view == "automata") return render_states_in_automata(t, rg, ct);
  if (view == "signals") return render_signals(t, rg, ct);
  return render_xml(t, rg, ct);
}

}  // namespace detail

inline int cmd_check(const RunConfig& cfg, std::ostream& out,
                     std::ostream& err) {
  detail::Loaded l = detail::load(cfg, err);
  std::optional<ReducedGraph> red;
  const ReachabilityGraph* graph = &l.rg;
  if (cfg.reduced) {
    red = reduce(l.rg, relevant_atoms(l.formula));
    for (const auto& n : red->notes) err << "note: " << n << "\n";
    graph = &red->quotient;
  }
  EvalContext ctx(*graph, l.formula);
  StateId start = graph->initial;
  bool verdict = ctx.eval(start);
  for (const auto& n : ctx.diagnostics()) err << "note: " << n << "\n";
  if (cfg.oracle) {
    bool check = eval_oracle(*graph, l.formula, start);
    if (check != verdict) {
      err << "internal error: sphere engine and fixed-point oracle disagree\n";
      return kInternal;
    }
  }
  out << (verdict ? "TRUE" : "FALSE") << "\n";
  if (verdict) return kTrue;
  if (cfg.reduced && !cfg.force) {
    out << "critical tree suppressed: it was computed over a reduced state "
           "space and would skip the states the reduction collapsed.\n"
           "Evaluate once again over the original state space to obtain a "
           "usable critical tree (or pass --force).\n";
    return kFalse;
  }
  CriticalTree tree = build_tree(*graph, l.formula, start);
  std::optional<CompressedTree> ct;
  if (cfg.compress) ct = compress(tree);
  detail::emit(cfg, detail::render_view(cfg.view, tree, *graph,
                                        ct ? &*ct : nullptr),
               out);
  return kFalse;
}

inline int cmd_seqdiag(const RunConfig& cfg, std::ostream& out,
                       std::ostream& err) {
  if (!cfg.xml_path.empty()) {
    XmlNode root = xml_parse(detail::read_file(cfg.xml_path));
    if (root.name != "critical-tree")
      throw std::runtime_error("not a critical-tree document");
    // Find the node, then replay its sequence straight from the XML.
    std::string want = std::to_string(cfg.node);
    const XmlNode* found = nullptr;
    std::vector<const XmlNode*> stack{&root};
    while (!stack.empty() && !found) {
      const XmlNode* n = stack.back();
      stack.pop_back();
      if (n->name == "node" && n->attr("id") && *n->attr("id") == want)
        found = n;
      for (const auto& c : n->children) stack.push_back(&c);
    }
    if (!found)
      throw std::runtime_error("unknown node id " + std::to_string(cfg.node));
    const XmlNode* seq = found->child("sequence");
    if (!seq || seq->children.size() < 2)
      throw std::runtime_error("no temporal sequence at node " +
                               std::to_string(cfg.node));
    std::string doc;
    int num = 0;
    for (const auto& st : seq->children) {
      ++num;
      std::vector<std::string> lines;
      for (const auto& sg : st.children) {
        if (sg.name != "signal") continue;
        for (const auto& li : sg.children)
          if (li.name == "listener")
            lines.push_back(*sg.attr("from") + " --{ " + *sg.attr("name") +
                            " }--> " + *li.attr("automaton"));
      }
      if (lines.empty()) {
        doc += std::to_string(num) + ".\n";
      } else {
        for (size_t k = 0; k < lines.size(); ++k)
          doc += (k == 0 ? std::to_string(num) + ". " : " ") + lines[k] + "\n";
      }
    }
    detail::emit(cfg, doc, out);
    return kTrue;
  }

  detail::Loaded l = detail::load(cfg, err);
  EvalContext ctx(l.rg, l.formula);
  if (ctx.eval(l.rg.initial)) {
    err << "error: formula holds; there is no critical tree to draw from\n";
    return kUsage;
  }
  CriticalTree tree = build_tree(l.rg, l.formula, l.rg.initial);
  detail::emit(cfg, render_seqdiagram(tree, l.rg, cfg.node), out);
  return kTrue;
}

inline int cmd_reduce_report(const RunConfig& cfg, std::ostream& out,
                             std::ostream& err) {
  detail::Loaded l = detail::load(cfg, err);
  EvalContext ctx(l.rg, l.formula);
  if (ctx.eval(l.rg.initial)) {
    err << "error: formula holds over the original state space; nothing to "
           "compare\n";
    return kUsage;
  }
  ReducedGraph red = reduce(l.rg, relevant_atoms(l.formula));
  for (const auto& n : red.notes) err << "note: " << n << "\n";
  EvalContext rctx(red.quotient, l.formula);
  if (rctx.eval(red.quotient.initial)) {
    err << "error: formula holds over the reduced state space; the "
           "comparison needs a false verdict on both\n";
    return kUsage;
  }
  CriticalTree tree = build_tree(l.rg, l.formula, l.rg.initial);

  int node = cfg.node;
  if (node == 0) {
    for (size_t i = 0; i < tree.entries.size(); ++i)
      if (tree.entries[i].constructed && tree.entries[i].states.size() >= 2) {
        node = tree.formula.node_id(static_cast<int>(i));
        break;
      }
    if (node == 0) {
      err << "error: the critical tree has no temporal sequence to compare\n";
      return kUsage;
    }
  }
  const SequenceEntry& e =
      tree.entries[static_cast<size_t>(tree.formula.index_of_id(node))];
  if (!e.constructed || e.states.size() < 2)
    throw std::runtime_error("no temporal sequence at node " +
                             std::to_string(node));

  auto projected = projected_positions(e.states, red);
  std::string doc;
  doc += "verdict original: FALSE\n";
  doc += "verdict reduced:  FALSE\n";
  doc += "node " + std::to_string(node) + " (" +
         node_label(tree.formula, tree.formula.index_of_id(node)) + ")\n";
  doc += "original sequence: " + std::to_string(e.states.size()) + " states\n";
  doc += render_seqdiagram(tree, l.rg, node);
  doc += "reduced sequence: " + std::to_string(projected.size()) +
         " states preserved of " + std::to_string(e.states.size()) + "\n";
  doc += csmc::detail::seqdiagram_lines(l.rg, projected);
  doc +=
      "advisory: the reduced sequence skips every state whose atomic "
      "valuation repeats, so the actions between the preserved states are "
      "lost.\nEvaluate once again over the original state space to obtain "
      "the full critical tree.\n";
  detail::emit(cfg, doc, out);
  return kFalse;
}

// Builds the CLI11 command tree and runs one invocation.
inline int run(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"model checker for networks of communicating automata"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_model_formula = [&](CLI::App* c, bool model_required) {
    auto* m = c->add_option("--model", cfg.model_path, "model file");
    if (model_required) m->required();
    auto* f = c->add_option("--formula", cfg.formula_text, "formula text");
    auto* ff = c->add_option("--formula-file", cfg.formula_path, "formula file");
    f->excludes(ff);
    c->add_option("--cap", cfg.cap, "state count cap");
    c->add_option("--out", cfg.out_path, "write the document to a file");
  };

  CLI::App* check = app.add_subcommand("check", "evaluate a formula");
  add_model_formula(check, true);
  check->add_option("--view", cfg.view, "states|automata|signals|xml")
      ->check(CLI::IsMember({"states", "automata", "signals", "xml"}));
  check->add_flag("--compress", cfg.compress, "compress the critical tree");
  check->add_flag("--reduced", cfg.reduced, "evaluate over the reduced space");
  check->add_flag("--force", cfg.force, "allow a tree over the reduced space");
  check->add_flag("--oracle", cfg.oracle, "cross-check with the fixed-point oracle");

  CLI::App* seq = app.add_subcommand("seqdiag", "export a sequence diagram");
  add_model_formula(seq, false);
  seq->add_option("--xml", cfg.xml_path, "replay a previously emitted XML view");
  seq->add_option("--node", cfg.node, "formula node id")->required();

  CLI::App* rep = app.add_subcommand("reduce-report",
                                     "compare a sequence against its reduction");
  add_model_formula(rep, true);
  rep->add_option("--node", cfg.node, "formula node id");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kTrue;
    }
    err << e.what() << "\n";
    return kUsage;
  }

  try {
    if (check->parsed()) {
      bool has_formula = !cfg.formula_text.empty() || !cfg.formula_path.empty();
      if (!has_formula) {
        err << "error: one of --formula / --formula-file is required\n";
        return kUsage;
      }
      return cmd_check(cfg, out, err);
    }
    if (seq->parsed()) {
      if (cfg.xml_path.empty()) {
        if (cfg.model_path.empty() ||
            (cfg.formula_text.empty() && cfg.formula_path.empty())) {
          err << "error: seqdiag needs --xml or --model with a formula\n";
          return kUsage;
        }
      }
      return cmd_seqdiag(cfg, out, err);
    }
    return cmd_reduce_report(cfg, out, err);
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << "\n";
    return kCapacity;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace cli
}  // namespace csmc
