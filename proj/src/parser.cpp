#include "tracebound/parser.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

namespace tb {

ParseError::ParseError(const std::string& msg, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

namespace {

enum class Tok { Ident, Number, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

const std::set<std::string> kKeywords = {"skip", "if",   "then",  "else", "while", "do",  "true", "false",
                                         "True", "False", "not", "and",  "or",    "pre", "prog", "post",
                                         "bound"};

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  static const char* puncts[] = {"<+>", ":=", "[]", "==", "!=", "<=", ">=", "&&", "||", "{", "}", "(", ")",
                                 ";",   "+",  "-",  "*",  "=",  "<",  ">",  "!",  "/"};
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#' || (c == '/' && i + 1 < text.size() && text[i + 1] == '/')) {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    int tl = line, tc = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      out.push_back({Tok::Ident, std::string(text.substr(i, j - i)), tl, tc});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j < text.size() && text[j] == '.') {
        ++j;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      }
      out.push_back({Tok::Number, std::string(text.substr(i, j - i)), tl, tc});
      advance(j - i);
      continue;
    }
    bool matched = false;
    for (const char* p : puncts) {
      std::string_view ps(p);
      if (text.substr(i, ps.size()) == ps) {
        out.push_back({Tok::Punct, std::string(ps), tl, tc});
        advance(ps.size());
        matched = true;
        break;
      }
    }
    if (!matched) throw ParseError(std::string("unexpected character '") + c + "'", tl, tc);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  bool at_end() const { return peek().kind == Tok::End; }

  void expect_end() {
    if (!at_end()) fail("unexpected '" + peek().text + "'");
  }

  Program program() {
    std::vector<Program> stmts;
    stmts.push_back(statement());
    while (accept(";")) {
      if (is("}") || at_end()) break;  // trailing separator
      stmts.push_back(statement());
    }
    Program acc = stmts.back();
    for (std::size_t i = stmts.size() - 1; i-- > 0;) acc = Program::seq(stmts[i], acc);
    return acc;
  }

  BExpr bexpr() {
    BExpr acc = conjunction();
    while (accept("||") || accept_kw("or")) acc = BExpr::disj(acc, conjunction());
    return acc;
  }

  Expr aexpr() {
    Expr acc = term();
    for (;;) {
      if (accept("+")) {
        acc = acc + term();
      } else if (accept("-")) {
        acc = acc - term();
      } else {
        return acc;
      }
    }
  }

  VerificationTask task() {
    VerificationTask t;
    bool seen_pre = false, seen_prog = false, seen_post = false;
    while (!at_end()) {
      const Token& k = peek();
      if (accept_kw("pre")) {
        if (seen_pre) fail_at(k, "duplicate 'pre' section");
        t.pre = bexpr();
        expect(";");
        seen_pre = true;
      } else if (accept_kw("prog")) {
        if (seen_prog) fail_at(k, "duplicate 'prog' section");
        expect("{");
        t.program = program();
        expect("}");
        seen_prog = true;
      } else if (accept_kw("post")) {
        if (seen_post) fail_at(k, "duplicate 'post' section");
        t.post = bexpr();
        expect(";");
        seen_post = true;
      } else if (accept_kw("bound")) {
        if (t.has_bound) fail_at(k, "duplicate 'bound' section");
        t.beta = bound_value();
        t.has_bound = true;
        expect(";");
      } else {
        fail("expected 'pre', 'prog', 'post' or 'bound'");
      }
    }
    if (!seen_pre) fail("missing 'pre' section");
    if (!seen_prog) fail("missing 'prog' section");
    if (!seen_post) fail("missing 'post' section");
    return t;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }

  bool is(const char* p) const { return peek().kind == Tok::Punct && peek().text == p; }
  bool is_kw(const char* w) const { return peek().kind == Tok::Ident && peek().text == w; }

  bool accept(const char* p) {
    if (!is(p)) return false;
    ++pos_;
    return true;
  }

  bool accept_kw(const char* w) {
    if (!is_kw(w)) return false;
    ++pos_;
    return true;
  }

  void expect(const char* p) {
    if (!accept(p)) fail(std::string("expected '") + p + "'");
  }

  void expect_kw(const char* w) {
    if (!accept_kw(w)) fail(std::string("expected '") + w + "'");
  }

  [[noreturn]] void fail(const std::string& msg) const { fail_at(peek(), msg); }

  [[noreturn]] static void fail_at(const Token& t, const std::string& msg) {
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(msg + " (found " + found + ")", t.line, t.column);
  }

  std::string identifier() {
    const Token& t = peek();
    if (t.kind != Tok::Ident || kKeywords.count(t.text)) fail("expected identifier");
    ++pos_;
    return t.text;
  }

  Program block() {
    expect("{");
    Program p = program();
    expect("}");
    return p;
  }

  Program statement() {
    if (accept_kw("skip")) return Program::skip();
    if (accept_kw("if")) {
      BExpr c = bexpr();
      expect_kw("then");
      Program a = block();
      Program b = Program::skip();
      if (accept_kw("else")) b = block();
      return Program::ite(c, a, b);
    }
    if (accept_kw("while")) {
      BExpr c = bexpr();
      expect_kw("do");
      return Program::loop(c, block());
    }
    if (is("{")) {
      Program a = block();
      if (accept("<+>")) return Program::prob(a, block());
      if (accept("[]")) return Program::nondet(a, block());
      fail("expected '<+>' or '[]' after block");
    }
    std::string v = identifier();
    expect(":=");
    return Program::assign(v, aexpr());
  }

  BExpr conjunction() {
    BExpr acc = negation();
    while (accept("&&") || accept_kw("and")) acc = BExpr::conj(acc, negation());
    return acc;
  }

  BExpr negation() {
    if (accept("!") || accept_kw("not")) return BExpr::negate(negation());
    return batom();
  }

  static bool is_cmp_or_arith(const Token& t) {
    static const std::set<std::string> ops = {"==", "=", "!=", "<", "<=", ">", ">=", "+", "-", "*"};
    return t.kind == Tok::Punct && ops.count(t.text);
  }

  BExpr batom() {
    if (accept_kw("true") || accept_kw("True")) return BExpr::top();
    if (accept_kw("false") || accept_kw("False")) return BExpr::bottom();
    if (is("(")) {
      std::size_t save = pos_;
      try {
        ++pos_;
        BExpr inner = bexpr();
        expect(")");
        if (!is_cmp_or_arith(peek())) return inner;
      } catch (const ParseError&) {
      }
      pos_ = save;
    }
    return comparison();
  }

  BExpr comparison() {
    Expr l = aexpr();
    const Token& t = peek();
    CmpOp op;
    if (accept("==") || accept("=")) {
      op = CmpOp::Eq;
    } else if (accept("!=")) {
      op = CmpOp::Ne;
    } else if (accept("<=")) {
      op = CmpOp::Le;
    } else if (accept(">=")) {
      op = CmpOp::Ge;
    } else if (accept("<")) {
      op = CmpOp::Lt;
    } else if (accept(">")) {
      op = CmpOp::Gt;
    } else {
      fail_at(t, "expected comparison operator");
    }
    Expr r = aexpr();
    static const std::set<std::string> cmps = {"==", "=", "!=", "<", "<=", ">", ">="};
    if (peek().kind == Tok::Punct && cmps.count(peek().text)) fail("comparisons do not associate");
    return BExpr::cmp(op, l, r);
  }

  Expr term() {
    Expr acc = factor();
    while (is("*")) {
      const Token& t = peek();
      ++pos_;
      Expr rhs = factor();
      std::set<std::string> a, b;
      collect_vars(acc, a);
      collect_vars(rhs, b);
      if (!a.empty() && !b.empty()) fail_at(t, "nonlinear product of variables is not supported");
      acc = acc * rhs;
    }
    return acc;
  }

  Expr factor() {
    if (accept("-")) {
      if (peek().kind == Tok::Number) return literal(true);
      Expr inner = factor();
      if (inner.kind() == Expr::Kind::Lit && inner.value() != INT64_MIN) return Expr::lit(-inner.value());
      return Expr::lit(0) - inner;
    }
    if (peek().kind == Tok::Number) return literal(false);
    if (accept("(")) {
      Expr e = aexpr();
      expect(")");
      return e;
    }
    return Expr::var(identifier());
  }

  Expr literal(bool negative) {
    const Token& t = peek();
    if (t.text.find('.') != std::string::npos) fail("expected integer literal");
    ++pos_;
    // Magnitude may be 2^63 when negated.
    unsigned long long mag = 0;
    for (char c : t.text) {
      unsigned long long next = mag * 10 + static_cast<unsigned>(c - '0');
      if (next / 10 != mag) fail_at(t, "integer literal out of range");
      mag = next;
    }
    const unsigned long long limit = negative ? (1ULL << 63) : (1ULL << 63) - 1;
    if (mag > limit) fail_at(t, "integer literal out of range");
    if (negative) return Expr::lit(static_cast<Int>(0ULL - mag));
    return Expr::lit(static_cast<Int>(mag));
  }

  Rational bound_value() {
    const Token& start = peek();
    std::string text;
    if (accept("-")) text += "-";
    if (peek().kind != Tok::Number) fail("expected decimal bound");
    text += peek().text;
    ++pos_;
    if (accept("/")) {
      if (peek().kind != Tok::Number) fail("expected denominator");
      text += "/" + peek().text;
      ++pos_;
    }
    Rational r;
    try {
      r = parse_rational(text);
    } catch (const std::invalid_argument& e) {
      fail_at(start, e.what());
    }
    if (r < 0 || r > 1) fail_at(start, "bound " + text + " outside [0, 1]");
    return r;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Program parse_program(std::string_view text) {
  Parser p(text);
  Program prog = p.program();
  p.expect_end();
  return prog;
}

BExpr parse_bexpr(std::string_view text) {
  Parser p(text);
  BExpr b = p.bexpr();
  p.expect_end();
  return b;
}

Expr parse_expr(std::string_view text) {
  Parser p(text);
  Expr e = p.aexpr();
  p.expect_end();
  return e;
}

VerificationTask parse_task(std::string_view text) {
  Parser p(text);
  return p.task();
}

VerificationTask load_task(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open task file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_task(ss.str());
}

}  // namespace tb
