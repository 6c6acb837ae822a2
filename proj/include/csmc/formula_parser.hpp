#pragma once

#include <string_view>
#include <vector>

#include "csmc/formula.hpp"
#include "csmc/model_parser.hpp"

namespace csmc {
namespace detail {

// Temporary pointer tree; flattened into pre-order once parsing is done.
struct PNode {
  FormulaNode data;
  std::unique_ptr<PNode> left, right;
};

}  // namespace detail

// Recursive-descent parser for the formula grammar.
//
// Precedence, tightest first: atoms and parentheses; unary "!", "N", "N[a]",
// "F", "G"; "*"; "+"; "U" (right-associative); "=>", "<=>" (right-
// associative). Quantifiers ("A v in {..}; body", "E v in {..}; body") and
// at-state prefixes ("a.p: body", "v: body") bind the whole following
// formula.
//
// A bare identifier resolves in order: quantifier-bound variable, "a.p"
// designator, signal.
class FormulaParser {
 public:
  static Formula parse(std::string_view text, const AutomataNetwork* net) {
    FormulaParser p(text);
    auto tree = p.parse_formula();
    if (p.lx_.peek().kind != detail::Token::Kind::End) {
      const auto& t = p.lx_.peek();
      throw ParseError("unexpected trailing input '" + t.text + "'", t.line,
                       t.col);
    }
    Formula f;
    flatten(tree.get(), f);
    if (net) resolve(f, *net);
    return f;
  }

 private:
  using P = std::unique_ptr<detail::PNode>;

  explicit FormulaParser(std::string_view text) : lx_(text) {}

  detail::Lexer lx_;
  std::vector<std::string> bound_;

  static void flatten(const detail::PNode* n, Formula& f) {
    int idx = static_cast<int>(f.nodes.size());
    f.nodes.push_back(n->data);
    if (n->left) {
      f.nodes[static_cast<size_t>(idx)].child0 = static_cast<int>(f.nodes.size());
      flatten(n->left.get(), f);
    }
    if (n->right) {
      f.nodes[static_cast<size_t>(idx)].child1 = static_cast<int>(f.nodes.size());
      flatten(n->right.get(), f);
    }
  }

  static P make(FKind k, P l = nullptr, P r = nullptr) {
    auto n = std::make_unique<detail::PNode>();
    n->data.kind = k;
    n->left = std::move(l);
    n->right = std::move(r);
    return n;
  }

  bool is_ident(const detail::Token& t, const char* s) const {
    return t.kind == detail::Token::Kind::Ident && t.text == s;
  }
  bool is_punct(const detail::Token& t, const char* s) const {
    return t.kind == detail::Token::Kind::Punct && t.text == s;
  }

  bool bound_var(const std::string& v) const {
    for (const auto& b : bound_) if (b == v) return true;
    return false;
  }

  P parse_formula() {
    const auto& t0 = lx_.peek(0);
    const auto& t1 = lx_.peek(1);
    if (t0.kind == detail::Token::Kind::Ident) {
      // quantifier: (A|E) var in {...}; body
      if ((t0.text == "A" || t0.text == "E") &&
          t1.kind == detail::Token::Kind::Ident && is_ident(lx_.peek(2), "in"))
        return parse_quantifier();
      // at-state: designator ":" body | var ":" body
      if (is_punct(t1, ":")) return parse_at_state(false);
      if (is_punct(t1, ".") && lx_.peek(2).kind == detail::Token::Kind::Ident &&
          is_punct(lx_.peek(3), ":"))
        return parse_at_state(true);
    }
    return parse_iff();
  }

  P parse_quantifier() {
    auto q = lx_.take();  // A | E
    auto n = make(q.text == "A" ? FKind::ForAllStates : FKind::ExistsStates);
    n->data.var = lx_.take().text;
    lx_.take();  // in
    expect_punct("{");
    n->data.set.push_back(parse_designator());
    while (accept_punct(",")) n->data.set.push_back(parse_designator());
    expect_punct("}");
    expect_punct(";");
    bound_.push_back(n->data.var);
    n->left = parse_formula();
    bound_.pop_back();
    return n;
  }

  P parse_at_state(bool designator_form) {
    auto n = make(FKind::AtState);
    if (designator_form) {
      n->data.desig = parse_designator();
    } else {
      auto t = lx_.take();
      if (!bound_var(t.text))
        throw ParseError("unbound state variable '" + t.text + "'", t.line,
                         t.col);
      n->data.name = t.text;
      n->data.desig_is_var = true;
    }
    expect_punct(":");
    n->left = parse_formula();
    return n;
  }

  Designator parse_designator() {
    Designator d;
    auto t = lx_.take();
    if (t.kind != detail::Token::Kind::Ident)
      throw ParseError("expected designator", t.line, t.col);
    d.automaton = t.text;
    expect_punct(".");
    auto t2 = lx_.take();
    if (t2.kind != detail::Token::Kind::Ident)
      throw ParseError("expected local state name", t2.line, t2.col);
    d.local = t2.text;
    return d;
  }

  P parse_iff() {
    P lhs = parse_until();
    const auto& t = lx_.peek();
    if (is_punct(t, "=>")) {
      lx_.take();
      return make(FKind::Implies, std::move(lhs), parse_iff());
    }
    if (is_punct(t, "<=>")) {
      lx_.take();
      return make(FKind::Iff, std::move(lhs), parse_iff());
    }
    return lhs;
  }

  P parse_until() {
    P lhs = parse_or();
    if (is_ident(lx_.peek(), "U")) {
      lx_.take();
      return make(FKind::WeakUntil, std::move(lhs), parse_until());
    }
    return lhs;
  }

  P parse_or() {
    P lhs = parse_and();
    while (accept_punct("+"))
      lhs = make(FKind::Or, std::move(lhs), parse_and());
    return lhs;
  }

  P parse_and() {
    P lhs = parse_unary();
    while (accept_punct("*"))
      lhs = make(FKind::And, std::move(lhs), parse_unary());
    return lhs;
  }

  P parse_unary() {
    const auto& t = lx_.peek();
    if (is_punct(t, "!")) {
      lx_.take();
      return make(FKind::Not, parse_unary());
    }
    if (t.kind == detail::Token::Kind::Ident &&
        (t.text == "N" || t.text == "F" || t.text == "G")) {
      // Unary keyword only when an operand can follow; "F" alone at the end
      // of input or before ')' would be a plain signal atom, which the
      // grammar keywords forbid anyway, so take it unconditionally.
      auto op = lx_.take();
      if (op.text == "N" && accept_punct("[")) {
        auto n = make(FKind::NextIn);
        auto a = lx_.take();
        if (a.kind != detail::Token::Kind::Ident)
          throw ParseError("expected automaton name", a.line, a.col);
        n->data.name = a.text;
        expect_punct("]");
        n->left = parse_unary();
        return n;
      }
      FKind k = op.text == "N"   ? FKind::Next
                : op.text == "F" ? FKind::Finally
                                 : FKind::Globally;
      return make(k, parse_unary());
    }
    return parse_atom();
  }

  P parse_atom() {
    auto t = lx_.take();
    if (is_punct(t, "(")) {
      P inner = parse_formula();
      expect_punct(")");
      return inner;
    }
    if (t.kind != detail::Token::Kind::Ident)
      throw ParseError("expected formula", t.line, t.col);
    if (t.text == "true") return make(FKind::ConstTrue);
    if (t.text == "false") return make(FKind::ConstFalse);
    if (t.text == "in") {
      // in a.p | in var
      auto t1 = lx_.take();
      if (t1.kind != detail::Token::Kind::Ident)
        throw ParseError("expected state designator after 'in'", t1.line, t1.col);
      if (is_punct(lx_.peek(), ".")) {
        lx_.take();
        auto t2 = lx_.take();
        if (t2.kind != detail::Token::Kind::Ident)
          throw ParseError("expected local state name", t2.line, t2.col);
        auto n = make(FKind::AtomIn);
        n->data.desig = Designator{t1.text, t2.text};
        return n;
      }
      if (!bound_var(t1.text))
        throw ParseError("unbound state variable '" + t1.text + "'", t1.line,
                         t1.col);
      auto n = make(FKind::AtomStateVar);
      n->data.name = t1.text;
      return n;
    }
    if (bound_var(t.text)) {
      auto n = make(FKind::AtomStateVar);
      n->data.name = t.text;
      return n;
    }
    if (is_punct(lx_.peek(), ".")) {
      lx_.take();
      auto t2 = lx_.take();
      if (t2.kind != detail::Token::Kind::Ident)
        throw ParseError("expected local state name", t2.line, t2.col);
      auto n = make(FKind::AtomIn);
      n->data.desig = Designator{t.text, t2.text};
      return n;
    }
    auto n = make(FKind::AtomSignal);
    n->data.name = t.text;
    return n;
  }

  void expect_punct(const char* p) {
    auto t = lx_.take();
    if (t.kind != detail::Token::Kind::Punct || t.text != p)
      throw ParseError(std::string("expected '") + p + "'", t.line, t.col);
  }

  bool accept_punct(const char* p) {
    if (is_punct(lx_.peek(), p)) {
      lx_.take();
      return true;
    }
    return false;
  }
};

inline Formula parse_formula(std::string_view text,
                             const AutomataNetwork* net = nullptr) {
  return FormulaParser::parse(text, net);
}

}  // namespace csmc
