#include "qmorse/expr.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>

#include "qmorse/algebra.hpp"
#include "qmorse/errors.hpp"

namespace qmorse {

namespace {

constexpr unsigned kMaxExponent = 4096;
constexpr int kMaxDepth = 200;

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };

struct Token {
  Tok kind = Tok::end;
  std::size_t offset = 0;
  std::string text;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return c >= '0' && c <= '9'; }

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t k = 0;
  while (k < s.size()) {
    char c = s[k];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++k;
      continue;
    }
    std::size_t start = k;
    if (digit(c) || (c == '.' && k + 1 < s.size() && digit(s[k + 1]))) {
      while (k < s.size() && digit(s[k])) ++k;
      if (k < s.size() && s[k] == '.') {
        ++k;
        while (k < s.size() && digit(s[k])) ++k;
      }
      out.push_back({Tok::number, start, std::string(s.substr(start, k - start))});
      continue;
    }
    if (ident_start(c)) {
      while (k < s.size() && ident_char(s[k])) ++k;
      out.push_back({Tok::ident, start, std::string(s.substr(start, k - start))});
      continue;
    }
    Tok kind;
    switch (c) {
      case '+': kind = Tok::plus; break;
      case '-': kind = Tok::minus; break;
      case '*': kind = Tok::star; break;
      case '/': kind = Tok::slash; break;
      case '^': kind = Tok::caret; break;
      case '(': kind = Tok::lparen; break;
      case ')': kind = Tok::rparen; break;
      default:
        throw ParseError(start, "unexpected character",
                         {"number", "symbol", "'('", "'-'", "'+'", "'*'", "'/'", "'^'", "')'"});
    }
    out.push_back({kind, start, std::string(1, c)});
    ++k;
  }
  out.push_back({Tok::end, s.size(), ""});
  return out;
}

Rational decimal_value(const std::string& text) {
  auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(mpz_class(text, 10));
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  if (digits.empty()) digits = "0";
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, text.size() - dot - 1);
  Rational r(mpz_class(digits, 10), den);
  r.canonicalize();
  return r;
}

const std::vector<std::string> kAtomStart = {"number", "symbol", "'('", "'-'"};

class Parser {
 public:
  Parser(std::string_view text, const std::vector<std::string>& symbols)
      : tokens_(lex(text)), symbols_(symbols) {}

  Expr parse() {
    Expr e = expr(0);
    if (peek().kind != Tok::end) {
      if (peek().kind == Tok::rparen) throw ParseError(peek().offset, "unbalanced ')'", {"end of input"});
      throw ParseError(peek().offset, "unexpected token '" + peek().text + "'",
                       {"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"});
    }
    return e;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& take() { return tokens_[pos_++]; }

  static bool starts_atom(Tok k) { return k == Tok::number || k == Tok::ident || k == Tok::lparen; }

  Expr expr(int depth) {
    guard(depth);
    Expr lhs = term(depth);
    while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
      const Token& op = take();
      Expr rhs = term(depth);
      lhs = binary(op.kind == Tok::plus ? Expr::Kind::add : Expr::Kind::subtract, op.offset,
                   std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Expr term(int depth) {
    Expr lhs = factor(depth);
    for (;;) {
      if (peek().kind == Tok::star || peek().kind == Tok::slash) {
        const Token& op = take();
        Expr rhs = factor(depth);
        lhs = binary(op.kind == Tok::star ? Expr::Kind::multiply : Expr::Kind::divide, op.offset,
                     std::move(lhs), std::move(rhs));
      } else if (starts_atom(peek().kind)) {
        throw ParseError(peek().offset, "implicit multiplication not allowed",
                         {"'*'", "'/'", "'+'", "'-'", "'^'", "')'", "end of input"});
      } else {
        return lhs;
      }
    }
  }

  Expr factor(int depth) {
    Expr base = atom(depth + 1);
    if (peek().kind != Tok::caret) return base;
    const Token& op = take();
    const Token& n = peek();
    if (n.kind != Tok::number || n.text.find('.') != std::string::npos) {
      throw ParseError(n.offset, "exponent must be a non-negative integer literal", {"integer"});
    }
    take();
    if (n.text.size() > 6 || std::stoul(n.text) > kMaxExponent) {
      throw ParseError(n.offset, "exponent too large (limit " + std::to_string(kMaxExponent) + ")");
    }
    Expr out;
    out.kind = Expr::Kind::power;
    out.offset = op.offset;
    out.exponent = static_cast<unsigned>(std::stoul(n.text));
    out.args.push_back(std::move(base));
    if (peek().kind == Tok::caret) {
      throw ParseError(peek().offset, "chained '^' is ambiguous; use parentheses", {"'*'", "'+'", "end of input"});
    }
    return out;
  }

  Expr atom(int depth) {
    guard(depth);
    const Token& tok = peek();
    switch (tok.kind) {
      case Tok::number: {
        take();
        Expr e;
        e.kind = Expr::Kind::number;
        e.offset = tok.offset;
        e.value = decimal_value(tok.text);
        return e;
      }
      case Tok::ident: {
        if (std::find(symbols_.begin(), symbols_.end(), tok.text) == symbols_.end()) {
          throw ParseError(tok.offset, "unknown symbol '" + tok.text + "'", symbols_);
        }
        take();
        Expr e;
        e.kind = Expr::Kind::symbol;
        e.offset = tok.offset;
        e.name = tok.text;
        return e;
      }
      case Tok::lparen: {
        take();
        Expr inner = expr(depth + 1);
        if (peek().kind != Tok::rparen) {
          if (starts_atom(peek().kind)) {
            throw ParseError(peek().offset, "implicit multiplication not allowed",
                             {"'*'", "'/'", "'+'", "'-'", "')'"});
          }
          throw ParseError(peek().offset, "missing ')'", {"')'", "'+'", "'-'", "'*'", "'/'"});
        }
        take();
        return inner;
      }
      case Tok::minus: {
        take();
        Expr e;
        e.kind = Expr::Kind::negate;
        e.offset = tok.offset;
        e.args.push_back(factor(depth + 1));
        return e;
      }
      case Tok::end:
        throw ParseError(tok.offset, "unexpected end of input", kAtomStart);
      default:
        throw ParseError(tok.offset, "unexpected token '" + tok.text + "'", kAtomStart);
    }
  }

  static Expr binary(Expr::Kind kind, std::size_t offset, Expr lhs, Expr rhs) {
    Expr out;
    out.kind = kind;
    out.offset = offset;
    out.args.push_back(std::move(lhs));
    out.args.push_back(std::move(rhs));
    return out;
  }

  void guard(int depth) const {
    if (depth > kMaxDepth) throw ParseError(peek().offset, "expression nested too deeply");
  }

  std::vector<Token> tokens_;
  const std::vector<std::string>& symbols_;
  std::size_t pos_ = 0;
};

// Divisors are restricted to nonzero numbers.
template <typename Value, typename AsScalar>
Coefficient divisor(const Expr& rhs, const Value& v, AsScalar as_scalar) {
  std::optional<Coefficient> c = as_scalar(v);
  if (!c) throw ParseError(rhs.offset, "divisor must be a number");
  if (c->is_zero()) throw ParseError(rhs.offset, "division by zero");
  return *c;
}

std::optional<Coefficient> scalar_of(const QSeries& f) {
  if (f.is_zero()) return Coefficient();
  if (f.size() != 1 || !(f.terms()[0].first == QMonomial{})) return std::nullopt;
  return f.terms()[0].second;
}

QSeries elaborate_q(const Expr& e, const Truncation& tr) {
  switch (e.kind) {
    case Expr::Kind::number:
      return QSeries::constant(Coefficient(e.value), tr);
    case Expr::Kind::symbol:
      if (e.name == "q") return QSeries::q(tr);
      if (e.name == "p") return QSeries::p(tr);
      if (e.name == "a") return QSeries::a(tr);
      if (e.name == "ad") return QSeries::adag(tr);
      if (e.name == "hbar") return QSeries::hbar(tr);
      if (e.name == "t") return QSeries::t(tr);
      if (e.name == "i") return QSeries::constant(Coefficient::i(), tr);
      if (e.name == "sqrt2") return QSeries::constant(Coefficient::sqrt2(), tr);
      throw ParseError(e.offset, "unknown symbol '" + e.name + "'", operator_symbols());
    case Expr::Kind::negate:
      return -elaborate_q(e.args[0], tr);
    case Expr::Kind::add:
      return elaborate_q(e.args[0], tr) + elaborate_q(e.args[1], tr);
    case Expr::Kind::subtract:
      return elaborate_q(e.args[0], tr) - elaborate_q(e.args[1], tr);
    case Expr::Kind::multiply:
      return mul(elaborate_q(e.args[0], tr), elaborate_q(e.args[1], tr));
    case Expr::Kind::divide: {
      QSeries num = elaborate_q(e.args[0], tr);
      Coefficient d = divisor(e.args[1], elaborate_q(e.args[1], tr), scalar_of);
      return num.scaled(d.inverse());
    }
    case Expr::Kind::power:
      return power(elaborate_q(e.args[0], tr), e.exponent);
  }
  throw InternalError("unhandled expression kind");
}

// Commutative polynomial in (x, y, lambda_1, ...).
using Exps = std::vector<std::uint32_t>;
using Poly = std::map<Exps, Coefficient>;

void poly_add(Poly& acc, const Exps& e, const Coefficient& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = acc.try_emplace(e, c);
  if (inserted) return;
  it->second += c;
  if (it->second.is_zero()) acc.erase(it);
}

Poly poly_mul(const Poly& a, const Poly& b, std::size_t n) {
  Poly out;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      Exps e(n);
      for (std::size_t k = 0; k < n; ++k) e[k] = ea[k] + eb[k];
      poly_add(out, e, ca * cb);
    }
  }
  if (out.size() > default_term_guard()) throw ResourceError("symbol expansion exceeds the term guard");
  return out;
}

std::optional<Coefficient> scalar_of_poly(const Poly& p) {
  if (p.empty()) return Coefficient();
  if (p.size() != 1) return std::nullopt;
  const auto& [e, c] = *p.begin();
  if (std::any_of(e.begin(), e.end(), [](std::uint32_t x) { return x != 0; })) return std::nullopt;
  return c;
}

class SymbolElaborator {
 public:
  explicit SymbolElaborator(const std::vector<std::string>& params) : params_(params), n_(2 + params.size()) {}

  Poly run(const Expr& e) const {
    switch (e.kind) {
      case Expr::Kind::number:
        return constant(Coefficient(e.value));
      case Expr::Kind::symbol:
        return symbol(e);
      case Expr::Kind::negate: {
        Poly out = run(e.args[0]);
        for (auto& [k, c] : out) c = -c;
        return out;
      }
      case Expr::Kind::add:
      case Expr::Kind::subtract: {
        Poly out = run(e.args[0]);
        const bool minus = e.kind == Expr::Kind::subtract;
        for (const auto& [k, c] : run(e.args[1])) poly_add(out, k, minus ? -c : c);
        return out;
      }
      case Expr::Kind::multiply:
        return poly_mul(run(e.args[0]), run(e.args[1]), n_);
      case Expr::Kind::divide: {
        Poly out = run(e.args[0]);
        Coefficient inv = divisor(e.args[1], run(e.args[1]), scalar_of_poly).inverse();
        for (auto& [k, c] : out) c *= inv;
        return out;
      }
      case Expr::Kind::power: {
        Poly base = run(e.args[0]);
        Poly out = constant(1);
        for (unsigned k = 0; k < e.exponent; ++k) out = poly_mul(out, base, n_);
        return out;
      }
    }
    throw InternalError("unhandled expression kind");
  }

 private:
  Poly constant(const Coefficient& c) const {
    Poly out;
    poly_add(out, Exps(n_), c);
    return out;
  }

  Poly symbol(const Expr& e) const {
    if (e.name == "i") return constant(Coefficient::i());
    if (e.name == "sqrt2") return constant(Coefficient::sqrt2());
    std::size_t slot;
    if (e.name == "x" || e.name == "q") {
      slot = 0;
    } else if (e.name == "y" || e.name == "p") {
      slot = 1;
    } else {
      auto it = std::find(params_.begin(), params_.end(), e.name);
      if (it == params_.end()) throw ParseError(e.offset, "unknown symbol '" + e.name + "'");
      slot = 2 + static_cast<std::size_t>(it - params_.begin());
    }
    Exps ex(n_);
    ex[slot] = 1;
    Poly out;
    out.emplace(ex, Coefficient(1));
    return out;
  }

  const std::vector<std::string>& params_;
  std::size_t n_;
};

void print(const Expr& e, std::string& out) {
  auto wrap = [&out](const Expr& sub) {
    out += '(';
    print(sub, out);
    out += ')';
  };
  switch (e.kind) {
    case Expr::Kind::number:
      out += rational_to_string(e.value);
      return;
    case Expr::Kind::symbol:
      out += e.name;
      return;
    case Expr::Kind::negate:
      out += '-';
      wrap(e.args[0]);
      return;
    case Expr::Kind::power:
      wrap(e.args[0]);
      out += '^' + std::to_string(e.exponent);
      return;
    default: {
      static const std::map<Expr::Kind, char> ops = {{Expr::Kind::add, '+'},
                                                     {Expr::Kind::subtract, '-'},
                                                     {Expr::Kind::multiply, '*'},
                                                     {Expr::Kind::divide, '/'}};
      wrap(e.args[0]);
      out += ops.at(e.kind);
      wrap(e.args[1]);
    }
  }
}

}  // namespace

const std::vector<std::string>& operator_symbols() {
  static const std::vector<std::string> symbols = {"q", "p", "a", "ad", "hbar", "t", "i", "sqrt2"};
  return symbols;
}

Expr parse_expr(std::string_view text, const std::vector<std::string>& symbols) {
  return Parser(text, symbols).parse();
}

QSeries elaborate(const Expr& ast, const Truncation& truncation) { return elaborate_q(ast, truncation); }

QSeries parse_qseries(std::string_view text, const Truncation& truncation) {
  return elaborate(parse_expr(text), truncation);
}

PlaneFamily parse_plane_family(std::string_view text, const std::vector<std::string>& params) {
  std::vector<std::string> symbols = {"x", "y", "q", "p", "i", "sqrt2"};
  for (const auto& name : params) {
    if (name.empty() || !ident_start(name[0]) ||
        !std::all_of(name.begin(), name.end(), ident_char)) {
      throw DomainError("invalid parameter name '" + name + "'");
    }
    if (std::find(symbols.begin(), symbols.end(), name) != symbols.end()) {
      throw DomainError("parameter name '" + name + "' is reserved or repeated");
    }
    symbols.push_back(name);
  }
  Expr ast = parse_expr(text, symbols);
  Poly poly = SymbolElaborator(params).run(ast);

  PlaneFamily out;
  out.params = params;
  out.derivatives.resize(params.size());
  for (const auto& [e, c] : poly) {
    std::size_t lambda_degree = 0;
    std::size_t which = 0;
    for (std::size_t k = 2; k < e.size(); ++k) {
      lambda_degree += e[k];
      if (e[k] != 0) which = k - 2;
    }
    if (lambda_degree == 0) {
      out.base.add({e[0], e[1]}, c);
    } else if (lambda_degree == 1) {
      out.derivatives[which].add({e[0], e[1]}, c);
    }
  }
  return out;
}

std::string to_string(const Expr& ast) {
  std::string out;
  print(ast, out);
  return out;
}

}  // namespace qmorse
