#pragma once

#include <cctype>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "csmc/model.hpp"

namespace csmc {
namespace detail {

// Shared lexer for the model and formula grammars. Identifiers, a fixed
// punctuation set, `#` line comments.
struct Token {
  enum class Kind { Ident, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek(int ahead = 0) {
    while (static_cast<int>(queue_.size()) <= ahead) queue_.push_back(lex());
    return queue_[static_cast<size_t>(ahead)];
  }

  Token take() {
    Token t = peek();
    queue_.erase(queue_.begin());
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = queue_.empty() ? eof_ : queue_.front();
    throw ParseError(msg, t.line, t.col);
  }

 private:
  void advance() {}

  Token lex() {
    skip_ws();
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= src_.size()) {
      t.kind = Token::Kind::End;
      eof_ = t;
      return t;
    }
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_'))
        bump();
      t.kind = Token::Kind::Ident;
      t.text = std::string(src_.substr(start, pos_ - start));
      return t;
    }
    // multi-char punctuation first
    for (std::string_view p : {"->", "=>", "<=>"}) {
      if (src_.substr(pos_).starts_with(p)) {
        for (size_t i = 0; i < p.size(); ++i) bump();
        t.kind = Token::Kind::Punct;
        t.text = std::string(p);
        return t;
      }
    }
    static constexpr std::string_view kSingles = "{};,.!*+()[]:";
    if (kSingles.find(c) != std::string_view::npos) {
      bump();
      t.kind = Token::Kind::Punct;
      t.text = std::string(1, c);
      return t;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
  }

  void skip_ws() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') bump();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else {
        break;
      }
    }
  }

  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view src_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  std::vector<Token> queue_;
  Token eof_;
};

}  // namespace detail

// Parses the model grammar:
//   network    := automaton+
//   automaton  := "automaton" IDENT "{" decl* "}"
//   decl       := "state" IDENT ("emits" IDENT ("," IDENT)*)? ";"
//               | "init" IDENT ";"
//               | "arc" IDENT "->" IDENT "when" guard ";"
//   guard      := "true" | "false" | IDENT | "!" guard
//               | guard "*" guard | guard "+" guard | "(" guard ")"
// Precedence: "!" > "*" > "+", binary operators left-associative.
class ModelParser {
 public:
  static AutomataNetwork parse(std::string_view text) {
    ModelParser p(text);
    AutomataNetwork net;
    while (p.lx_.peek().kind != detail::Token::Kind::End)
      net.automata.push_back(p.parse_automaton());
    net.finalize();
    return net;
  }

 private:
  explicit ModelParser(std::string_view text) : lx_(text) {}

  detail::Lexer lx_;

  std::string expect_ident(const char* what) {
    auto t = lx_.take();
    if (t.kind != detail::Token::Kind::Ident)
      throw ParseError(std::string("expected ") + what, t.line, t.col);
    return t.text;
  }

  void expect_punct(const std::string& p) {
    auto t = lx_.take();
    if (t.kind != detail::Token::Kind::Punct || t.text != p)
      throw ParseError("expected '" + p + "'", t.line, t.col);
  }

  bool accept_punct(const std::string& p) {
    const auto& t = lx_.peek();
    if (t.kind == detail::Token::Kind::Punct && t.text == p) {
      lx_.take();
      return true;
    }
    return false;
  }

  bool peek_ident(const std::string& kw, int ahead = 0) {
    const auto& t = lx_.peek(ahead);
    return t.kind == detail::Token::Kind::Ident && t.text == kw;
  }

  Automaton parse_automaton() {
    auto t = lx_.take();
    if (t.kind != detail::Token::Kind::Ident || t.text != "automaton")
      throw ParseError("expected 'automaton'", t.line, t.col);
    Automaton a;
    a.name = expect_ident("automaton name");
    expect_punct("{");
    while (!accept_punct("}")) {
      if (peek_ident("state")) {
        lx_.take();
        std::string s = expect_ident("state name");
        if (a.local_index(s) >= 0) {
          const auto& tok = lx_.peek();
          throw ParseError("duplicate local state '" + s + "'", tok.line, tok.col);
        }
        a.locals.push_back(s);
        if (peek_ident("emits")) {
          lx_.take();
          a.emits[s].insert(expect_ident("signal name"));
          while (accept_punct(",")) a.emits[s].insert(expect_ident("signal name"));
        }
        expect_punct(";");
      } else if (peek_ident("init")) {
        lx_.take();
        std::string s = expect_ident("state name");
        if (!a.initial.empty()) {
          const auto& tok = lx_.peek();
          throw ParseError("duplicate init declaration", tok.line, tok.col);
        }
        a.initial = s;
        expect_punct(";");
      } else if (peek_ident("arc")) {
        lx_.take();
        Arc arc;
        arc.from = expect_ident("state name");
        expect_punct("->");
        arc.to = expect_ident("state name");
        auto kw = lx_.take();
        if (kw.kind != detail::Token::Kind::Ident || kw.text != "when")
          throw ParseError("expected 'when'", kw.line, kw.col);
        arc.guard = parse_guard_or();
        expect_punct(";");
        a.arcs.push_back(std::move(arc));
      } else {
        const auto& tok = lx_.peek();
        throw ParseError("expected 'state', 'init' or 'arc'", tok.line, tok.col);
      }
    }
    return a;
  }

  GuardExpr parse_guard_or() {
    GuardExpr g = parse_guard_and();
    while (accept_punct("+"))
      g = GuardExpr::binary(GuardExpr::Kind::Or, std::move(g), parse_guard_and());
    return g;
  }

  GuardExpr parse_guard_and() {
    GuardExpr g = parse_guard_unary();
    while (accept_punct("*"))
      g = GuardExpr::binary(GuardExpr::Kind::And, std::move(g), parse_guard_unary());
    return g;
  }

  GuardExpr parse_guard_unary() {
    if (accept_punct("!")) return GuardExpr::negate(parse_guard_unary());
    if (accept_punct("(")) {
      GuardExpr g = parse_guard_or();
      expect_punct(")");
      return g;
    }
    auto t = lx_.take();
    if (t.kind != detail::Token::Kind::Ident)
      throw ParseError("expected guard expression", t.line, t.col);
    if (t.text == "true") return GuardExpr::constant(true);
    if (t.text == "false") return GuardExpr::constant(false);
    return GuardExpr::atom(t.text);
  }
};

inline AutomataNetwork parse_model(std::string_view text) {
  return ModelParser::parse(text);
}

}  // namespace csmc
