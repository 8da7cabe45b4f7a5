#include "cfp/parser.hpp"

#include "cfp/range_set.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace cfp {

namespace {

enum class Tok { Ident, Number, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    const std::size_t l = line, cl = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Tok::Ident, std::string(s.substr(i, j - i)), l, cl});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      if (j < s.size() && s[j] == '.') {
        ++j;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      }
      if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
        if (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) {
          j = k;
          while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        }
      }
      out.push_back({Tok::Number, std::string(s.substr(i, j - i)), l, cl});
      advance(j - i);
      continue;
    }
    if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') {
      out.push_back({Tok::Punct, "->", l, cl});
      advance(2);
      continue;
    }
    if (std::string_view("[](){},;=+-*/^").find(c) != std::string_view::npos) {
      out.push_back({Tok::Punct, std::string(1, c), l, cl});
      advance(1);
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", l, cl);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

  const Token& peek() const { return toks_[pos_]; }
  bool at_end() const { return peek().kind == Tok::End; }

  [[noreturn]] void fail(const std::string& msg, const Token& at) const { throw ParseError(msg, at.line, at.column); }
  [[noreturn]] void fail(const std::string& msg) const { fail(msg, peek()); }

  bool is_punct(std::string_view p) const { return peek().kind == Tok::Punct && peek().text == p; }
  bool is_ident(std::string_view w) const { return peek().kind == Tok::Ident && peek().text == w; }

  Token take() { return toks_[pos_++]; }

  void expect(std::string_view p) {
    if (!is_punct(p)) fail("expected '" + std::string(p) + "'" + found());
    ++pos_;
  }
  void expect_word(std::string_view w) {
    if (!is_ident(w)) fail("expected '" + std::string(w) + "'" + found());
    ++pos_;
  }
  std::string ident() {
    if (peek().kind != Tok::Ident) fail("expected identifier" + found());
    return take().text;
  }
  std::string found() const {
    if (at_end()) return ", found end of input";
    return ", found '" + peek().text + "'";
  }

  // Expressions. `var` empty means constants only (interval endpoints).
  Expr expr(const std::string& var) {
    Expr e = term(var);
    while (is_punct("+") || is_punct("-")) {
      auto k = take().text == "+" ? Expr::Kind::Add : Expr::Kind::Sub;
      e = Expr::binary(k, e, term(var));
    }
    return e;
  }

  Expr term(const std::string& var) {
    Expr e = unary(var);
    while (is_punct("*") || is_punct("/")) {
      auto k = take().text == "*" ? Expr::Kind::Mul : Expr::Kind::Div;
      e = Expr::binary(k, e, unary(var));
    }
    return e;
  }

  Expr unary(const std::string& var) {
    if (is_punct("-")) {
      take();
      return Expr::negate(unary(var));
    }
    return factor(var);
  }

  Expr factor(const std::string& var) {
    Expr base = atom(var);
    if (!is_punct("^")) return base;
    take();
    bool neg = false;
    if (is_punct("-")) {
      take();
      neg = true;
    }
    if (peek().kind != Tok::Number) fail("expected integer exponent" + found());
    Token t = take();
    if (t.text.find_first_not_of("0123456789") != std::string::npos) fail("exponent must be an integer", t);
    long n = 0;
    try {
      n = std::stol(t.text);
    } catch (const std::exception&) {
      fail("exponent out of range", t);
    }
    if (n > 1000) fail("exponent out of range", t);
    return Expr::power(base, static_cast<int>(neg ? -n : n));
  }

  Expr atom(const std::string& var) {
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      take();
      try {
        return Expr::constant(parse_rational(t.text));
      } catch (const std::exception&) {
        fail("malformed number '" + t.text + "'", t);
      }
    }
    if (t.kind == Tok::Ident) {
      if (!var.empty() && t.text == var) {
        take();
        return Expr::variable();
      }
      fail(var.empty() ? "endpoint must be a constant, found '" + t.text + "'"
                       : "unknown identifier '" + t.text + "' (variable is '" + var + "')",
           t);
    }
    if (is_punct("(")) {
      take();
      Expr e = expr(var);
      expect(")");
      return e;
    }
    fail("expected expression" + found());
  }

  Rational constant(const Token& at) {
    Expr e = expr("");
    try {
      return e.eval(Rational(0));
    } catch (const DomainError& err) {
      fail(err.what(), at);
    }
  }

  // ['['|'('] lo ',' hi [']'|')'] with 'inf' allowed as the upper end and
  // '-inf' as the lower end.
  IntervalDomain interval() {
    const Token start = peek();
    bool lo_closed;
    if (is_punct("[")) {
      lo_closed = true;
    } else if (is_punct("(")) {
      lo_closed = false;
    } else {
      fail("expected '[' or '('" + found());
    }
    take();
    std::optional<Rational> lo;
    if (is_punct("-") && toks_[pos_ + 1].kind == Tok::Ident && toks_[pos_ + 1].text == "inf") {
      pos_ += 2;
    } else {
      lo = constant(peek());
    }
    expect(",");
    std::optional<Rational> hi;
    if (is_ident("inf")) {
      take();
    } else {
      hi = constant(peek());
    }
    bool hi_closed;
    if (is_punct("]")) {
      hi_closed = true;
    } else if (is_punct(")")) {
      hi_closed = false;
    } else {
      fail("expected ']' or ')'" + found());
    }
    const Token close = take();
    if (!lo && lo_closed) fail("-inf cannot be a closed end", start);
    if (!hi && hi_closed) fail("inf cannot be a closed end", close);
    IntervalDomain d{lo, hi, lo_closed, hi_closed};
    if (lo && hi && *lo > *hi) fail("interval lower end exceeds upper end", start);
    if (d.empty()) fail("empty interval " + to_string(d), start);
    return d;
  }

  PiecewiseMap piecewise() {
    const Token kw = peek();
    expect_word("piecewise");
    std::string var = ident();
    expect("{");
    std::vector<Piece> pieces;
    std::vector<Token> starts;
    while (!is_punct("}")) {
      if (at_end()) fail("unterminated piecewise block", kw);
      starts.push_back(peek());
      IntervalDomain d = interval();
      expect("->");
      Expr body = expr(var);
      expect(";");
      for (const auto& prev : pieces)
        if (!intersect(prev.domain, d).empty())
          fail("overlapping pieces " + to_string(prev.domain) + " and " + to_string(d), starts.back());
      pieces.push_back({d, body});
    }
    expect("}");
    if (pieces.empty()) fail("piecewise map has no pieces", kw);
    try {
      return PiecewiseMap(var, std::move(pieces));
    } catch (const DomainError& e) {
      fail(e.what(), kw);
    }
  }

  PiecewiseMap map_value(const MetricSpace* space) {
    if (is_ident("identity")) {
      const Token t = take();
      if (!space) fail("identity needs a preceding space declaration", t);
      return PiecewiseMap::identity(*space);
    }
    return piecewise();
  }

  MetricSpace space_value() {
    const Token t = peek();
    if (is_ident("interval")) {
      take();
      IntervalDomain d = interval();
      return build([&] { return MetricSpace::interval(d); }, t);
    }
    if (is_ident("union")) {
      take();
      expect("(");
      std::vector<IntervalDomain> parts;
      do {
        expect_word("interval");
        parts.push_back(interval());
      } while (is_punct(",") && (take(), true));
      expect(")");
      return build([&] { return MetricSpace::interval_union(parts); }, t);
    }
    if (is_ident("seq")) {
      take();
      expect("(");
      expect_word("dim");
      expect("=");
      if (peek().kind != Tok::Number) fail("expected dimension" + found());
      Token n = take();
      if (n.text.find_first_not_of("0123456789") != std::string::npos || n.text.size() > 6)
        fail("dimension must be a positive integer", n);
      std::size_t dim = std::stoul(n.text);
      expect(",");
      expect_word("interval");
      IntervalDomain d = interval();
      expect(")");
      return build([&] { return MetricSpace::seq(dim, d); }, t);
    }
    fail("expected interval, union or seq" + found());
  }

  template <class F>
  MetricSpace build(F&& f, const Token& at) {
    try {
      return f();
    } catch (const DomainError& e) {
      fail(e.what(), at);
    } catch (const std::invalid_argument& e) {
      fail(e.what(), at);
    }
  }

  MapFile file() {
    MapFile out;
    bool have_space = false;
    struct Pending {
      std::string name;
      Token at;
    };
    std::vector<Pending> declared;
    while (!at_end()) {
      const Token kw = peek();
      if (is_ident("space")) {
        take();
        if (have_space) fail("space declared twice", kw);
        out.space_name = ident();
        expect("=");
        out.space = space_value();
        have_space = true;
      } else if (is_ident("map")) {
        take();
        std::string name = ident();
        expect("=");
        if (out.maps.count(name)) fail("map '" + name + "' defined twice", kw);
        PiecewiseMap m = map_value(have_space ? &out.space : nullptr);
        if (!have_space) fail("map declared before the space", kw);
        try {
          check_coverage(m, out.space);
        } catch (const DomainError& e) {
          fail("map '" + name + "': coverage gap: " + e.what(), kw);
        }
        out.maps.emplace(name, m.with_coordinatewise(out.space.is_seq()));
        declared.push_back({name, kw});
      } else if (is_ident("phi") || is_ident("psi")) {
        const std::string which = take().text;
        expect("=");
        auto& slot = which == "phi" ? out.phi : out.psi;
        if (slot) fail(which + " defined twice", kw);
        slot = piecewise();
      } else {
        fail("expected 'space', 'map', 'phi' or 'psi'" + found());
      }
      while (is_punct(";")) take();
    }
    if (!have_space) fail("missing space declaration", peek());
    return out;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

const PiecewiseMap& MapFile::map(const std::string& name) const {
  auto it = maps.find(name);
  if (it == maps.end()) throw std::invalid_argument("map file defines no map '" + name + "'");
  return it->second;
}

PiecewiseMap parse_map(std::string_view text) {
  Parser p(text);
  PiecewiseMap m = p.piecewise();
  while (p.is_punct(";")) p.take();
  if (!p.at_end()) p.fail("trailing input" + p.found());
  return m;
}

MapFile parse_map_file(std::string_view text) { return Parser(text).file(); }

MapFile load_map_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_map_file(ss.str());
}

namespace {

std::string space_syntax(const MetricSpace& s) {
  if (s.is_seq())
    return "seq(dim=" + std::to_string(s.dimension()) + ", interval" + domain_syntax(s.seq_space().coordinate_domain) +
           ")";
  const auto& c = s.scalar_components();
  if (c.size() == 1) return "interval" + domain_syntax(c.front());
  std::string out = "union(";
  for (std::size_t i = 0; i < c.size(); ++i) out += (i ? ", interval" : "interval") + domain_syntax(c[i]);
  return out + ")";
}

}  // namespace

std::string to_string(const MapFile& file) {
  std::string out = "space " + (file.space_name.empty() ? std::string("X") : file.space_name) + " = " +
                    space_syntax(file.space) + "\n";
  for (const auto& [name, m] : file.maps) out += "map " + name + " = " + to_string(m) + "\n";
  if (file.phi) out += "phi = " + to_string(*file.phi) + "\n";
  if (file.psi) out += "psi = " + to_string(*file.psi) + "\n";
  return out;
}

}  // namespace cfp
