#include "motzeta/expr.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "motzeta/error.hpp"

namespace motzeta {

namespace {

[[noreturn]] void fail_at(size_t pos, const std::string& msg) {
  std::ostringstream os;
  os << "col " << pos + 1 << ": " << msg;
  raise(ErrorCode::ParseError, os.str());
}

struct Token {
  enum class Kind { Integer, Ident, Punct, End } kind;
  std::string text;
  Int value; // for Integer
  size_t pos = 0;
};

class Lexer {
public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }
  bool at_punct(const char* p) const {
    return tok_.kind == Token::Kind::Punct && tok_.text == p;
  }
  Token expect_punct(const char* p) {
    if (!at_punct(p)) fail_at(tok_.pos, std::string("expected '") + p + "'");
    return take();
  }

private:
  void advance() {
    while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) ++i_;
    tok_.pos = i_;
    if (i_ >= text_.size()) {
      tok_ = {Token::Kind::End, "", Int(0), i_};
      return;
    }
    char c = text_[i_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i_;
      while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
      tok_ = {Token::Kind::Integer, text_.substr(i_, j - i_), Int(0), i_};
      tok_.value = Int(tok_.text);
      i_ = j;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i_;
      while (j < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_'))
        ++j;
      tok_ = {Token::Kind::Ident, text_.substr(i_, j - i_), Int(0), i_};
      i_ = j;
      return;
    }
    static const std::string puncts = "+-*/^(),";
    if (puncts.find(c) == std::string::npos) fail_at(i_, "unexpected character");
    tok_ = {Token::Kind::Punct, std::string(1, c), Int(0), i_};
    ++i_;
  }

  const std::string& text_;
  Token tok_;
  size_t i_ = 0;
};

/** Shared AST; evaluation differs per grammar. */
struct Node {
  enum class Tag { Integer, Name, Call, Neg, Add, Sub, Mul, Div, Pow } tag;
  Int ival;
  std::string name;       // Name/Call
  std::vector<Node> args; // operands
  long expo = 0;          // Pow exponent
  size_t pos = 0;
};

long checked_long(const Int& v, size_t pos) {
  if (!v.fits_slong_p()) fail_at(pos, "integer literal out of range");
  return v.get_si();
}

class Parser {
public:
  explicit Parser(const std::string& text) : lex_(text) {}

  Node parse_full() {
    Node n = parse_expr();
    if (lex_.peek().kind != Token::Kind::End)
      fail_at(lex_.peek().pos, "unexpected trailing input");
    return n;
  }

private:
  Node parse_expr() {
    Node lhs = parse_term();
    while (lex_.at_punct("+") || lex_.at_punct("-")) {
      Token op = lex_.take();
      Node rhs = parse_term();
      Node n;
      n.tag = op.text == "+" ? Node::Tag::Add : Node::Tag::Sub;
      n.pos = op.pos;
      n.args.push_back(std::move(lhs));
      n.args.push_back(std::move(rhs));
      lhs = std::move(n);
    }
    return lhs;
  }

  Node parse_term() {
    Node lhs = parse_factor();
    while (lex_.at_punct("*") || lex_.at_punct("/")) {
      Token op = lex_.take();
      Node rhs = parse_factor();
      Node n;
      n.tag = op.text == "*" ? Node::Tag::Mul : Node::Tag::Div;
      n.pos = op.pos;
      n.args.push_back(std::move(lhs));
      n.args.push_back(std::move(rhs));
      lhs = std::move(n);
    }
    return lhs;
  }

  Node parse_factor() {
    if (lex_.at_punct("-")) {
      Token op = lex_.take();
      Node n;
      n.tag = Node::Tag::Neg;
      n.pos = op.pos;
      n.args.push_back(parse_factor());
      return n;
    }
    Node base = parse_atom();
    if (lex_.at_punct("^")) {
      Token op = lex_.take();
      Node n;
      n.tag = Node::Tag::Pow;
      n.pos = op.pos;
      n.expo = parse_signed_int();
      n.args.push_back(std::move(base));
      return n;
    }
    return base;
  }

  long parse_signed_int() {
    bool paren = false;
    if (lex_.at_punct("(")) {
      paren = true;
      lex_.take();
    }
    bool neg = false;
    if (lex_.at_punct("-")) {
      neg = true;
      lex_.take();
    }
    if (lex_.peek().kind != Token::Kind::Integer)
      fail_at(lex_.peek().pos, "expected integer exponent");
    Token t = lex_.take();
    if (paren) lex_.expect_punct(")");
    long v = checked_long(t.value, t.pos);
    return neg ? -v : v;
  }

  Node parse_atom() {
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::Integer) {
      Token tok = lex_.take();
      Node n;
      n.tag = Node::Tag::Integer;
      n.ival = tok.value;
      n.pos = tok.pos;
      return n;
    }
    if (t.kind == Token::Kind::Ident) {
      Token tok = lex_.take();
      Node n;
      n.pos = tok.pos;
      if (lex_.at_punct("(")) {
        lex_.take();
        n.tag = Node::Tag::Call;
        n.name = tok.text;
        if (!lex_.at_punct(")")) {
          n.args.push_back(parse_expr());
          while (lex_.at_punct(",")) {
            lex_.take();
            n.args.push_back(parse_expr());
          }
        }
        lex_.expect_punct(")");
        return n;
      }
      n.tag = Node::Tag::Name;
      n.name = tok.text;
      return n;
    }
    if (lex_.at_punct("(")) {
      lex_.take();
      Node n = parse_expr();
      lex_.expect_punct(")");
      return n;
    }
    fail_at(t.pos, "expected a value");
  }

  Lexer lex_;
};

long call_int_arg(const Node& n, size_t k) {
  const Node* a = &n.args.at(k);
  bool neg = false;
  if (a->tag == Node::Tag::Neg) {
    neg = true;
    a = &a->args[0];
  }
  if (a->tag != Node::Tag::Integer) fail_at(a->pos, "expected integer argument");
  long v = checked_long(a->ival, a->pos);
  return neg ? -v : v;
}

Motive eval_motive(const Node& n);

Motive motive_div(const Motive& a, const Motive& b, size_t pos) {
  auto inv = b.inverse();
  if (!inv) fail_at(pos, "division by a value with no inverse in the ring");
  return a * *inv;
}

Motive eval_motive(const Node& n) {
  switch (n.tag) {
    case Node::Tag::Integer:
      return Motive(n.ival);
    case Node::Tag::Name:
      if (n.name == "L") return Motive::lefschetz();
      fail_at(n.pos, "unknown name '" + n.name + "' in a ring expression");
    case Node::Tag::Call:
      fail_at(n.pos, "function '" + n.name + "' not allowed in a ring expression");
    case Node::Tag::Neg:
      return -eval_motive(n.args[0]);
    case Node::Tag::Add:
      return eval_motive(n.args[0]) + eval_motive(n.args[1]);
    case Node::Tag::Sub:
      return eval_motive(n.args[0]) - eval_motive(n.args[1]);
    case Node::Tag::Mul:
      return eval_motive(n.args[0]) * eval_motive(n.args[1]);
    case Node::Tag::Div:
      return motive_div(eval_motive(n.args[0]), eval_motive(n.args[1]), n.pos);
    case Node::Tag::Pow:
      return eval_motive(n.args[0]).pow(n.expo);
  }
  fail_at(n.pos, "malformed expression");
}

SeriesExprValue sv_motive(const Motive& m) {
  SeriesExprValue v;
  v.is_series = false;
  v.motive = m;
  return v;
}

SeriesExprValue sv_series(const RationalSeries& s) {
  SeriesExprValue v;
  v.is_series = true;
  v.series = s;
  return v;
}

SeriesExprValue eval_series(const Node& n) {
  switch (n.tag) {
    case Node::Tag::Integer:
      return sv_motive(Motive(n.ival));
    case Node::Tag::Name:
      if (n.name == "L") return sv_motive(Motive::lefschetz());
      if (n.name == "T") return sv_series(RationalSeries::monomial(Motive(1), 1));
      fail_at(n.pos, "unknown name '" + n.name + "' in a series expression");
    case Node::Tag::Call: {
      if (n.name == "gen") {
        if (n.args.size() != 2) fail_at(n.pos, "gen takes two integer arguments");
        Generator g{call_int_arg(n, 0), call_int_arg(n, 1)};
        if (g.i < 1) fail_at(n.pos, "generator step must be >= 1");
        return sv_series(RationalSeries::generator(g));
      }
      if (n.name == "had") {
        if (n.args.size() != 2) fail_at(n.pos, "had takes two arguments");
        RationalSeries a = eval_series(n.args[0]).as_series();
        RationalSeries b = eval_series(n.args[1]).as_series();
        return sv_series(RationalSeries::hadamard(a, b));
      }
      if (n.name == "lim") {
        if (n.args.size() != 1) fail_at(n.pos, "lim takes one argument");
        return sv_motive(eval_series(n.args[0]).as_series().limit());
      }
      fail_at(n.pos, "unknown function '" + n.name + "'");
    }
    case Node::Tag::Neg: {
      SeriesExprValue a = eval_series(n.args[0]);
      if (a.is_series) return sv_series(-a.series);
      return sv_motive(-a.motive);
    }
    case Node::Tag::Add:
    case Node::Tag::Sub: {
      SeriesExprValue a = eval_series(n.args[0]);
      SeriesExprValue b = eval_series(n.args[1]);
      bool sub = n.tag == Node::Tag::Sub;
      if (!a.is_series && !b.is_series)
        return sv_motive(sub ? a.motive - b.motive : a.motive + b.motive);
      RationalSeries s = a.as_series();
      RationalSeries t = b.as_series();
      return sv_series(sub ? s - t : s + t);
    }
    case Node::Tag::Mul: {
      SeriesExprValue a = eval_series(n.args[0]);
      SeriesExprValue b = eval_series(n.args[1]);
      if (!a.is_series && !b.is_series) return sv_motive(a.motive * b.motive);
      if (!a.is_series) return sv_series(b.series.scale(a.motive));
      if (!b.is_series) return sv_series(a.series.scale(b.motive));
      return sv_series(a.series * b.series);
    }
    case Node::Tag::Div: {
      SeriesExprValue a = eval_series(n.args[0]);
      SeriesExprValue b = eval_series(n.args[1]);
      if (b.is_series) fail_at(n.pos, "division by a series is not supported");
      if (!a.is_series) return sv_motive(motive_div(a.motive, b.motive, n.pos));
      auto inv = b.motive.inverse();
      if (!inv) fail_at(n.pos, "division by a value with no inverse in the ring");
      return sv_series(a.series.scale(*inv));
    }
    case Node::Tag::Pow: {
      SeriesExprValue a = eval_series(n.args[0]);
      if (!a.is_series) return sv_motive(a.motive.pow(n.expo));
      if (n.expo < 0) fail_at(n.pos, "negative power of a series");
      RationalSeries acc = RationalSeries::from_motive(Motive(1));
      for (long j = 0; j < n.expo; ++j) acc = acc * a.series;
      return sv_series(acc);
    }
  }
  fail_at(n.pos, "malformed expression");
}

IntPolynomial eval_poly(const Node& n, const std::vector<std::string>& vars) {
  int nv = static_cast<int>(vars.size());
  switch (n.tag) {
    case Node::Tag::Integer:
      return IntPolynomial::constant(nv, n.ival);
    case Node::Tag::Name: {
      for (int v = 0; v < nv; ++v)
        if (vars[v] == n.name) return IntPolynomial::variable(nv, v);
      fail_at(n.pos, "unknown variable '" + n.name + "'");
    }
    case Node::Tag::Call:
      fail_at(n.pos, "functions are not allowed in polynomials");
    case Node::Tag::Neg:
      return -eval_poly(n.args[0], vars);
    case Node::Tag::Add:
      return eval_poly(n.args[0], vars) + eval_poly(n.args[1], vars);
    case Node::Tag::Sub:
      return eval_poly(n.args[0], vars) - eval_poly(n.args[1], vars);
    case Node::Tag::Mul:
      return eval_poly(n.args[0], vars) * eval_poly(n.args[1], vars);
    case Node::Tag::Div:
      fail_at(n.pos, "division is not allowed in polynomials");
    case Node::Tag::Pow: {
      if (n.expo < 0) fail_at(n.pos, "negative power in a polynomial");
      return eval_poly(n.args[0], vars).pow(n.expo);
    }
  }
  fail_at(n.pos, "malformed expression");
}

} // namespace

Motive parse_motive_expr(const std::string& text) {
  Parser p(text);
  return eval_motive(p.parse_full());
}

SeriesExprValue parse_series_expr(const std::string& text) {
  Parser p(text);
  return eval_series(p.parse_full());
}

RationalSeries parse_series(const std::string& text) {
  return parse_series_expr(text).as_series();
}

IntPolynomial parse_polynomial_expr(const std::string& text,
                                    const std::vector<std::string>& vars) {
  Parser p(text);
  return eval_poly(p.parse_full(), vars);
}

std::vector<Generator> parse_generator_product(const std::string& text) {
  Parser p(text);
  Node n = p.parse_full();
  std::vector<Generator> out;
  // Flatten a left-leaning product of gen(...) calls.
  std::vector<const Node*> stack{&n};
  while (!stack.empty()) {
    const Node* cur = stack.back();
    stack.pop_back();
    if (cur->tag == Node::Tag::Mul) {
      stack.push_back(&cur->args[0]);
      stack.push_back(&cur->args[1]);
      continue;
    }
    if (cur->tag == Node::Tag::Call && cur->name == "gen" && cur->args.size() == 2) {
      Generator g{call_int_arg(*cur, 0), call_int_arg(*cur, 1)};
      if (g.i < 1) fail_at(cur->pos, "generator step must be >= 1");
      out.push_back(g);
      continue;
    }
    fail_at(cur->pos, "expected a product of gen(e,i) factors");
  }
  std::sort(out.begin(), out.end());
  return out;
}

Rat parse_rational(const std::string& text) {
  size_t slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      Int v = parse_integer(text);
      return Rat(v);
    }
    Int num = parse_integer(text.substr(0, slash));
    Int den = parse_integer(text.substr(slash + 1));
    if (den == 0) raise(ErrorCode::ValidationError, "zero denominator in rational literal");
    Rat r(num, den);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    raise(ErrorCode::ParseError, "malformed rational literal '" + text + "'");
  }
}

Int parse_integer(const std::string& text) {
  std::string t = text;
  size_t a = t.find_first_not_of(" \t");
  size_t b = t.find_last_not_of(" \t");
  if (a == std::string::npos)
    raise(ErrorCode::ParseError, "empty integer literal");
  t = t.substr(a, b - a + 1);
  bool ok = !t.empty();
  for (size_t j = 0; j < t.size() && ok; ++j) {
    char c = t[j];
    if (j == 0 && (c == '-' || c == '+')) {
      ok = t.size() > 1;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) ok = false;
  }
  if (!ok) raise(ErrorCode::ParseError, "malformed integer literal '" + text + "'");
  return Int(t);
}

} // namespace motzeta
