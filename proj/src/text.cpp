#include "diffalg/text.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <regex>

#include <json.hpp>

namespace diffalg {

namespace {

struct Token {
  enum class Kind { number, ident, symbol, end };
  Kind kind = Kind::end;
  std::string text;
  int line = 1;
  int column = 1;
  bool spaced = false;  // whitespace before the token
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      bool spaced = false;
      while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
        advance();
        spaced = true;
      }
      Token t;
      t.line = line_;
      t.column = col_;
      t.spaced = spaced;
      if (pos_ == s_.size()) {
        out.push_back(t);
        return out;
      }
      const char c = s_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        t.kind = Token::Kind::number;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) t.text += advance();
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Token::Kind::ident;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
          t.text += advance();
      } else if (std::string("+-*^/()[],").find(c) != std::string::npos) {
        t.kind = Token::Kind::symbol;
        t.text = advance();
      } else {
        throw SyntaxError(std::string("unexpected character '") + c + "'", line_, col_);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  char advance() {
    const char c = s_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  std::unique_ptr<Expr> parse() {
    if (peek().kind == Token::Kind::end) throw SyntaxError("empty expression", peek().line, peek().column);
    auto e = expr();
    if (peek().kind != Token::Kind::end) fail("unexpected '" + peek().text + "'");
    return e;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(i_ + ahead, toks_.size() - 1)]; }
  bool is(const char* s, std::size_t ahead = 0) const {
    return peek(ahead).kind == Token::Kind::symbol && peek(ahead).text == s;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    throw SyntaxError(t.kind == Token::Kind::end ? msg + " at end of input" : msg, t.line, t.column);
  }
  void expect(const char* s) {
    if (!is(s)) fail(std::string("expected '") + s + "'");
    ++i_;
  }
  int integer() {
    if (is("-")) fail("exponent must be a nonnegative integer");
    if (peek().kind != Token::Kind::number) fail("expected an integer");
    const Token& t = peek();
    if (t.text.size() > 6) fail("integer too large");
    ++i_;
    return std::stoi(t.text);
  }
  static std::unique_ptr<Expr> node(Expr::Kind k, const Token& at) {
    auto e = std::make_unique<Expr>();
    e->kind = k;
    e->line = at.line;
    e->column = at.column;
    return e;
  }

  std::unique_ptr<Expr> expr() {
    auto lhs = term();
    while (is("+") || is("-")) {
      auto e = node(is("+") ? Expr::Kind::add : Expr::Kind::sub, peek());
      ++i_;
      e->args.push_back(std::move(lhs));
      e->args.push_back(term());
      lhs = std::move(e);
    }
    return lhs;
  }

  std::unique_ptr<Expr> term() {
    auto lhs = unary();
    while (is("*")) {
      auto e = node(Expr::Kind::mul, peek());
      ++i_;
      e->args.push_back(std::move(lhs));
      e->args.push_back(unary());
      lhs = std::move(e);
    }
    return lhs;
  }

  std::unique_ptr<Expr> unary() {
    if (is("-")) {
      auto e = node(Expr::Kind::neg, peek());
      ++i_;
      e->args.push_back(unary());
      return e;
    }
    return power();
  }

  std::unique_ptr<Expr> power() {
    auto base = primary();
    while (is("^")) {
      auto e = node(Expr::Kind::pow, peek());
      ++i_;
      e->exponent = integer();
      e->args.push_back(std::move(base));
      base = std::move(e);
    }
    return base;
  }

  std::unique_ptr<Expr> primary() {
    const Token& t = peek();
    if (t.kind == Token::Kind::number) {
      auto e = node(Expr::Kind::number, t);
      ++i_;
      mpz_class num(t.text), den(1);
      if (is("/")) {
        ++i_;
        if (peek().kind != Token::Kind::number) fail("expected a denominator");
        den = mpz_class(peek().text);
        ++i_;
        if (den == 0) throw SyntaxError("zero denominator", t.line, t.column);
      }
      e->value = mpq_class(num, den);
      e->value.canonicalize();
      return e;
    }
    if (t.kind == Token::Kind::ident) {
      auto e = node(Expr::Kind::symbol, t);
      e->name = t.text;
      ++i_;
      if (t.text == "d" && is("[")) {
        ++i_;
        if (peek().kind != Token::Kind::ident) fail("expected a variable name");
        e->var = peek().text;
        ++i_;
        expect("]");
        if (is("^") && is("[", 1)) {
          i_ += 2;
          e->order = integer();
          expect("]");
        }
      } else if (is("[") && !peek().spaced && peek(1).kind == Token::Kind::number && is("]", 2)) {
        ++i_;
        e->order = integer();
        expect("]");
      }
      return e;
    }
    if (is("(")) {
      ++i_;
      auto e = expr();
      expect(")");
      return e;
    }
    if (is("[")) {
      auto e = node(Expr::Kind::bracket, t);
      ++i_;
      e->args.push_back(expr());
      expect(",");
      e->args.push_back(expr());
      expect("]");
      return e;
    }
    if (t.kind == Token::Kind::end) fail("unexpected end of input");
    fail("unexpected '" + t.text + "'");
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

Scalar literal(const Expr& e, Field f) {
  if (!f.is_zero_characteristic() && e.value.get_den() % f.characteristic() == 0)
    throw SyntaxError("denominator vanishes in characteristic " + std::to_string(f.characteristic()), e.line,
                      e.column);
  return Scalar(f, e.value.get_num(), e.value.get_den());
}

[[noreturn]] void symbol_error(const Expr& e, ErrorKind kind, const std::string& msg) {
  throw Error(kind, std::to_string(e.line) + ":" + std::to_string(e.column) + ": " + msg);
}

/// Generic evaluation over an operator algebra with + - compose.
template <class Value, class Ops>
Value evaluate(const Expr& e, const Ops& ops) {
  switch (e.kind) {
    case Expr::Kind::number: return ops.scalar(e);
    case Expr::Kind::symbol: return ops.symbol(e);
    case Expr::Kind::add: return evaluate<Value>(*e.args[0], ops) + evaluate<Value>(*e.args[1], ops);
    case Expr::Kind::sub: return evaluate<Value>(*e.args[0], ops) - evaluate<Value>(*e.args[1], ops);
    case Expr::Kind::neg: return -evaluate<Value>(*e.args[0], ops);
    case Expr::Kind::mul: return ops.compose(evaluate<Value>(*e.args[0], ops), evaluate<Value>(*e.args[1], ops));
    case Expr::Kind::pow: {
      const Value base = evaluate<Value>(*e.args[0], ops);
      Value r = ops.one();
      for (int i = 0; i < e.exponent; ++i) r = ops.compose(r, base);
      return r;
    }
    case Expr::Kind::bracket: {
      const Value a = evaluate<Value>(*e.args[0], ops), b = evaluate<Value>(*e.args[1], ops);
      return ops.compose(a, b) - ops.compose(b, a);
    }
  }
  return ops.one();
}

struct HOps {
  const HContext& ctx;

  DOperator one() const { return DOperator::identity(ctx); }
  DOperator scalar(const Expr& e) const { return DOperator::scalar(ctx, literal(e, ctx.field)); }
  DOperator compose(const DOperator& a, const DOperator& b) const { return diffalg::compose(a, b); }

  DOperator symbol(const Expr& e) const {
    static const std::regex indexed("(x|y|dx|dy)([0-9]+)");
    if (!e.var.empty()) symbol_error(e, ErrorKind::syntax, "d[...] applies to polynomial variables only");
    const bool partial = e.name == "dh" || e.name.rfind("dx", 0) == 0 || e.name.rfind("dy", 0) == 0;
    if (e.order >= 0 && !partial) symbol_error(e, ErrorKind::syntax, "divided-power suffix on '" + e.name + "'");
    const int k = e.order >= 0 ? e.order : 1;
    if (e.name == "h") return lambda_of(HElement::generator(ctx, Generator::h()));
    if (e.name == "Dh") {
      if (ctx.is_weyl()) symbol_error(e, ErrorKind::unsupported_mode, "Dh needs Heisenberg mode");
      return bar_dh(ctx);
    }
    if (e.name == "dh") {
      if (ctx.is_weyl()) symbol_error(e, ErrorKind::unsupported_mode, "dh needs Heisenberg mode");
      return DOperator::partial(ctx, Generator::h(), k);
    }
    std::smatch m;
    if (!std::regex_match(e.name, m, indexed)) symbol_error(e, ErrorKind::syntax, "unknown symbol '" + e.name + "'");
    const std::string head = m[1];
    if (m[2].length() > 6) symbol_error(e, ErrorKind::out_of_range, "index of '" + e.name + "' out of range");
    const int l = std::stoi(m[2]);
    if (l < 1 || l > ctx.n)
      symbol_error(e, ErrorKind::out_of_range,
                   "index " + std::to_string(l) + " of '" + e.name + "' out of range for n = " + std::to_string(ctx.n));
    const Generator g = (head == "x" || head == "dx") ? Generator::x(l) : Generator::y(l);
    if (head.size() == 2) return DOperator::partial(ctx, g, k);
    return lambda_of(HElement::generator(ctx, g));
  }
};

struct POps {
  const PolyRing& ring;

  PDOp one() const { return PDOp::identity(ring); }
  PDOp scalar(const Expr& e) const { return PDOp::multiplication(Poly::constant(ring, literal(e, ring.field()))); }
  PDOp compose(const PDOp& a, const PDOp& b) const { return p_compose(a, b); }

  PDOp symbol(const Expr& e) const {
    if (e.name == "d" && !e.var.empty()) {
      const auto idx = ring.index_of(e.var);
      if (!idx) symbol_error(e, ErrorKind::syntax, "unknown variable '" + e.var + "'");
      return PDOp::partial(ring, *idx, e.order >= 0 ? e.order : 1);
    }
    if (e.order >= 0) symbol_error(e, ErrorKind::syntax, "divided-power suffix on '" + e.name + "'");
    const auto idx = ring.index_of(e.name);
    if (!idx) symbol_error(e, ErrorKind::syntax, "unknown symbol '" + e.name + "'");
    return PDOp::multiplication(Poly::variable(ring, *idx));
  }
};

/// Coefficient and monomial text joined into a signed term; `first` controls the leading separator.
void append_term(std::string& out, const Scalar& c, const std::string& mono, bool first) {
  const bool negative = c.is_negative();
  const Scalar mag = negative ? -c : c;
  std::string body;
  if (mono.empty()) body = mag.to_string();
  else if (mag.is_one()) body = mono;
  else body = mag.to_string() + "*" + mono;
  if (first) out += negative ? "-" + body : body;
  else out += (negative ? " - " : " + ") + body;
}

void append_power(std::string& s, const std::string& name, int e) {
  if (e == 0) return;
  if (!s.empty()) s += "*";
  s += name;
  if (e > 1) s += "^" + std::to_string(e);
}

std::string pbw_text(const Exponents& key, int n) {
  std::string s;
  append_power(s, "h", key[0]);
  for (int l = 1; l <= n; ++l) append_power(s, "x" + std::to_string(l), key[l]);
  for (int l = 1; l <= n; ++l) append_power(s, "y" + std::to_string(l), key[n + l]);
  return s;
}

void append_partial(std::string& s, const std::string& name, int k) {
  if (k == 0) return;
  if (!s.empty()) s += "*";
  s += name;
  if (k > 1) s += "[" + std::to_string(k) + "]";
}

/// (I, J, m) as a comparison key.
Exponents pbw_order_key(const Exponents& key) {
  Exponents r(key.begin() + 1, key.end());
  r.push_back(key[0]);
  return r;
}

template <class Terms, class Weight, class Reorder>
std::vector<typename Terms::const_iterator> sorted_terms(const Terms& terms, Weight weight, Reorder reorder) {
  std::vector<typename Terms::const_iterator> its;
  for (auto it = terms.begin(); it != terms.end(); ++it) its.push_back(it);
  std::sort(its.begin(), its.end(), [&](auto a, auto b) {
    const int wa = weight(a->first), wb = weight(b->first);
    if (wa != wb) return wa > wb;
    return reorder(a->first) > reorder(b->first);
  });
  return its;
}

int sum(const Exponents& e) { return std::accumulate(e.begin(), e.end(), 0); }

nlohmann::json context_header(const char* type, const HContext& ctx, std::size_t terms) {
  return {{"type", type},
          {"n", ctx.n},
          {"char", ctx.field.characteristic()},
          {"mode", ctx.is_weyl() ? "weyl" : "heisenberg"},
          {"terms", terms}};
}

std::string lines(const std::vector<nlohmann::json>& records) {
  std::string out;
  for (const auto& r : records) out += r.dump() + "\n";
  return out;
}

}  // namespace

std::unique_ptr<Expr> parse_expr(const std::string& text) { return Parser(Lexer(text).run()).parse(); }

DOperator parse_operator(const std::string& text, const HContext& ctx) {
  return evaluate<DOperator>(*parse_expr(text), HOps{ctx});
}

HElement parse_element(const std::string& text, const HContext& ctx) {
  auto e = as_element(parse_operator(text, ctx));
  if (!e) throw Error(ErrorKind::validation, "expected an element of the algebra, got an operator with partials");
  return *e;
}

PDOp parse_pdop(const std::string& text, const PolyRing& ring) { return evaluate<PDOp>(*parse_expr(text), POps{ring}); }

Poly parse_poly(const std::string& text, const PolyRing& ring) {
  auto p = as_poly(parse_pdop(text, ring));
  if (!p) throw Error(ErrorKind::validation, "expected a polynomial, got an operator with partials");
  return *p;
}

Scalar parse_scalar(const std::string& text, Field f) {
  const PolyRing none({}, f);
  const Poly p = parse_poly(text, none);
  return p.coefficient({});
}

std::optional<HElement> as_element(const DOperator& d) {
  HElement a(d.context());
  for (const auto& [key, c] : d.terms()) {
    const Exponents alpha = partial_part(key);
    if (std::any_of(alpha.begin(), alpha.end(), [](int v) { return v != 0; })) return std::nullopt;
    a.add_term(lambda_part(key), c);
  }
  return a;
}

std::optional<Poly> as_poly(const PDOp& d) {
  Poly p(d.ring());
  const std::size_t k = d.ring().size();
  for (const auto& [key, c] : d.terms()) {
    if (std::any_of(key.begin() + static_cast<std::ptrdiff_t>(k), key.end(), [](int v) { return v != 0; }))
      return std::nullopt;
    p.add_term(Exponents(key.begin(), key.begin() + static_cast<std::ptrdiff_t>(k)), c);
  }
  return p;
}

std::string to_text(const Scalar& c) { return c.to_string(); }

std::string to_text(const HElement& a) {
  if (a.is_zero()) return "0";
  const int n = a.context().n;
  std::string out;
  bool first = true;
  for (auto it : sorted_terms(a.terms(), deg2_of_key, pbw_order_key)) {
    append_term(out, it->second, pbw_text(it->first, n), first);
    first = false;
  }
  return out;
}

std::string to_text(const DOperator& d) {
  if (d.is_zero()) return "0";
  const int n = d.context().n;
  auto weight = [](const Exponents& key) {
    const Exponents alpha = partial_part(key);
    return deg2_of_key(lambda_part(key)) + alpha[0] + sum(alpha);
  };
  auto reorder = [](const Exponents& key) {
    Exponents r = pbw_order_key(lambda_part(key));
    const Exponents p = pbw_order_key(partial_part(key));
    r.insert(r.end(), p.begin(), p.end());
    return r;
  };
  std::string out;
  bool first = true;
  for (auto it : sorted_terms(d.terms(), weight, reorder)) {
    const Exponents alpha = partial_part(it->first);
    std::string mono = pbw_text(lambda_part(it->first), n);
    append_partial(mono, "dh", alpha[0]);
    for (int l = 1; l <= n; ++l) append_partial(mono, "dx" + std::to_string(l), alpha[l]);
    for (int l = 1; l <= n; ++l) append_partial(mono, "dy" + std::to_string(l), alpha[n + l]);
    append_term(out, it->second, mono, first);
    first = false;
  }
  return out;
}

std::string to_text(const Poly& p) {
  if (p.is_zero()) return "0";
  const auto& vars = p.ring().vars();
  std::string out;
  bool first = true;
  for (auto it : sorted_terms(p.terms(), sum, [](const Exponents& e) { return e; })) {
    std::string mono;
    for (std::size_t i = 0; i < vars.size(); ++i) append_power(mono, vars[i], it->first[i]);
    append_term(out, it->second, mono, first);
    first = false;
  }
  return out;
}

std::string to_text(const PDOp& d) {
  if (d.is_zero()) return "0";
  const auto& vars = d.ring().vars();
  const std::size_t k = vars.size();
  auto reorder = [k](const Exponents& key) {
    Exponents r(key.begin() + static_cast<std::ptrdiff_t>(k), key.end());
    r.insert(r.end(), key.begin(), key.begin() + static_cast<std::ptrdiff_t>(k));
    return r;
  };
  std::string out;
  bool first = true;
  for (auto it : sorted_terms(d.terms(), sum, reorder)) {
    std::string mono;
    for (std::size_t i = 0; i < k; ++i) append_power(mono, vars[i], it->first[i]);
    for (std::size_t i = 0; i < k; ++i) {
      const int a = it->first[k + i];
      if (a == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += "d[" + vars[i] + "]";
      if (a > 1) mono += "^[" + std::to_string(a) + "]";
    }
    append_term(out, it->second, mono, first);
    first = false;
  }
  return out;
}

std::string matrix_to_text(const std::vector<std::vector<PDOp>>& m) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& row : m) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& e : row) r.push_back(to_text(e));
    j.push_back(std::move(r));
  }
  return j.dump();
}

std::vector<std::vector<PDOp>> parse_pdop_matrix(const std::string& text, const PolyRing& ring) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::syntax, std::string("matrix: ") + e.what());
  }
  if (!j.is_array() || j.empty()) throw Error(ErrorKind::validation, "matrix must be a nonempty array of rows");
  std::vector<std::vector<PDOp>> out;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != j.size()) throw Error(ErrorKind::validation, "matrix must be square");
    std::vector<PDOp> r;
    for (const auto& e : row) {
      if (!e.is_string() && !e.is_number()) throw Error(ErrorKind::validation, "matrix entries must be strings");
      r.push_back(parse_pdop(e.is_string() ? e.get<std::string>() : e.dump(), ring));
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string to_structured(const HElement& a) {
  const int n = a.context().n;
  std::vector<nlohmann::json> recs{context_header("HElement", a.context(), a.terms().size())};
  for (auto it : sorted_terms(a.terms(), deg2_of_key, pbw_order_key)) {
    const Exponents& k = it->first;
    recs.push_back({{"m", k[0]},
                    {"I", Exponents(k.begin() + 1, k.begin() + 1 + n)},
                    {"J", Exponents(k.begin() + 1 + n, k.end())},
                    {"coeff", it->second.to_string()}});
  }
  return lines(recs);
}

std::string to_structured(const DOperator& d) {
  const int n = d.context().n;
  std::vector<nlohmann::json> recs{context_header("DOperator", d.context(), d.terms().size())};
  for (const auto& [key, c] : d.terms()) {
    const Exponents lam = lambda_part(key), alpha = partial_part(key);
    recs.push_back({{"m", lam[0]},
                    {"I", Exponents(lam.begin() + 1, lam.begin() + 1 + n)},
                    {"J", Exponents(lam.begin() + 1 + n, lam.end())},
                    {"s", alpha[0]},
                    {"K", Exponents(alpha.begin() + 1, alpha.begin() + 1 + n)},
                    {"L", Exponents(alpha.begin() + 1 + n, alpha.end())},
                    {"coeff", c.to_string()}});
  }
  return lines(recs);
}

std::string to_structured(const Poly& p) {
  std::vector<nlohmann::json> recs{{{"type", "Poly"},
                                    {"vars", p.ring().vars()},
                                    {"char", p.field().characteristic()},
                                    {"terms", p.terms().size()}}};
  for (const auto& [e, c] : p.terms()) recs.push_back({{"exp", e}, {"coeff", c.to_string()}});
  return lines(recs);
}

std::string to_structured(const PDOp& d) {
  const std::size_t k = d.ring().size();
  std::vector<nlohmann::json> recs{{{"type", "PDOp"},
                                    {"vars", d.ring().vars()},
                                    {"char", d.field().characteristic()},
                                    {"terms", d.terms().size()}}};
  for (const auto& [key, c] : d.terms())
    recs.push_back({{"beta", Exponents(key.begin(), key.begin() + static_cast<std::ptrdiff_t>(k))},
                    {"alpha", Exponents(key.begin() + static_cast<std::ptrdiff_t>(k), key.end())},
                    {"coeff", c.to_string()}});
  return lines(recs);
}

std::string degree_text(int d) { return d == kDegreeOfZero ? "-inf" : std::to_string(d); }

}  // namespace diffalg
