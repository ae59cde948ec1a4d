#include "shiftlab/parse.hpp"

#include <cctype>
#include <vector>

namespace shiftlab {

ParseError::ParseError(const std::string& msg, int line, int column)
    : std::runtime_error(msg + " at " + std::to_string(line) + ":" + std::to_string(column)),
      line(line),
      column(column) {}

namespace {

enum class Tok { Ident, Backslash, Dot, LParen, RParen, LAngle, RAngle, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

struct Lexer {
  const std::string& src;
  std::size_t pos = 0;
  int line = 1;
  int column = 1;

  explicit Lexer(const std::string& s) : src(s) {}

  void advance() {
    if (pos < src.size() && src[pos] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
    ++pos;
  }

  std::vector<Token> run() {
    std::vector<Token> out;
    while (pos < src.size()) {
      char c = src[pos];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
        continue;
      }
      int l = line, col = column;
      if (std::isalpha(static_cast<unsigned char>(c))) {
        std::string id;
        while (pos < src.size()) {
          char d = src[pos];
          if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '\'') {
            id += d;
            advance();
          } else {
            break;
          }
        }
        out.push_back({Tok::Ident, id, l, col});
        continue;
      }
      switch (c) {
        case '\\': out.push_back({Tok::Backslash, "\\", l, col}); break;
        case '.': out.push_back({Tok::Dot, ".", l, col}); break;
        case '(': out.push_back({Tok::LParen, "(", l, col}); break;
        case ')': out.push_back({Tok::RParen, ")", l, col}); break;
        case '<': out.push_back({Tok::LAngle, "<", l, col}); break;
        case '>': out.push_back({Tok::RAngle, ">", l, col}); break;
        default:
          throw ParseError(std::string("unexpected character '") + c + "'", l, col);
      }
      advance();
    }
    out.push_back({Tok::End, "", line, column});
    return out;
  }
};

struct Parser {
  std::vector<Token> toks;
  std::size_t at = 0;

  const Token& peek(std::size_t k = 0) const {
    return toks[std::min(at + k, toks.size() - 1)];
  }
  const Token& next() { return toks[at < toks.size() - 1 ? at++ : at]; }

  [[noreturn]] void fail(const std::string& msg, const Token& t) {
    throw ParseError(msg, t.line, t.column);
  }

  Token expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail(std::string("expected ") + what, peek());
    return next();
  }

  // A shift begins with the identifier S followed by a binder and a dot;
  // a bare S elsewhere is an ordinary variable.
  bool at_shift() const {
    return peek().kind == Tok::Ident && peek().text == "S" && peek(1).kind == Tok::Ident &&
           peek(2).kind == Tok::Dot;
  }
  bool at_binder_form() const { return peek().kind == Tok::Backslash || at_shift(); }
  bool at_atom() const {
    return (peek().kind == Tok::Ident && !at_shift()) || peek().kind == Tok::LParen ||
           peek().kind == Tok::LAngle;
  }

  TermPtr parse_term() {
    if (peek().kind == Tok::Backslash) {
      next();
      Token b = expect(Tok::Ident, "a binder");
      expect(Tok::Dot, "'.'");
      return lam(b.text, parse_term());
    }
    if (at_shift()) {
      next();
      Token b = expect(Tok::Ident, "a binder");
      expect(Tok::Dot, "'.'");
      return shift(b.text, parse_term());
    }
    return parse_app();
  }

  TermPtr parse_app() {
    TermPtr t = parse_atom();
    for (;;) {
      if (at_atom()) {
        t = app(t, parse_atom());
      } else if (at_binder_form()) {
        // Trailing lambda/shift argument extends maximally right.
        return app(t, parse_term());
      } else {
        return t;
      }
    }
  }

  TermPtr parse_atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Ident:
        next();
        return var(t.text);
      case Tok::LParen: {
        next();
        TermPtr inner = parse_term();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::LAngle: {
        next();
        TermPtr inner = parse_term();
        expect(Tok::RAngle, "'>'");
        return reset(inner);
      }
      default:
        fail("expected a term", t);
    }
  }
};

void print_rec(const TermPtr& t, std::string& out) {
  switch (t->kind) {
    case TermKind::Var:
      out += t->name;
      return;
    case TermKind::Lam:
      out += '\\';
      out += t->name;
      out += ". ";
      print_rec(t->sub0, out);
      return;
    case TermKind::Shift:
      out += "S ";
      out += t->name;
      out += ". ";
      print_rec(t->sub0, out);
      return;
    case TermKind::Reset:
      out += '<';
      print_rec(t->sub0, out);
      out += '>';
      return;
    case TermKind::App: {
      const TermPtr& l = t->sub0;
      const TermPtr& r = t->sub1;
      bool parens_l = l->kind == TermKind::Lam || l->kind == TermKind::Shift;
      bool parens_r =
          r->kind == TermKind::App || r->kind == TermKind::Lam || r->kind == TermKind::Shift;
      if (parens_l) out += '(';
      print_rec(l, out);
      if (parens_l) out += ')';
      out += ' ';
      if (parens_r) out += '(';
      print_rec(r, out);
      if (parens_r) out += ')';
      return;
    }
  }
}

}  // namespace

TermPtr parse(const std::string& text) {
  Lexer lex(text);
  Parser p{lex.run()};
  TermPtr t = p.parse_term();
  if (p.peek().kind != Tok::End) p.fail("trailing input", p.peek());
  return t;
}

std::string print(const TermPtr& t) {
  std::string out;
  out.reserve(64);
  print_rec(t, out);
  return out;
}

std::string print(const PureCtxPtr& e) { return print(plug_pure(e, var("_"))); }

std::string print(const EvalCtxPtr& f) { return print(plug_eval(f, var("_"))); }

}  // namespace shiftlab
