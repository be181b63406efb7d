#include "spc/arith.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace spc {

// ---------------------------------------------------------------------------
// ATerm

struct ATerm::Node {
  Kind kind;
  std::string name;        // Var
  long long value = 0;     // Num, or Mod modulus
  std::shared_ptr<const Node> arg;
};

ATerm ATerm::var(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->name = std::move(name);
  return ATerm(std::move(n));
}

ATerm ATerm::num(long long v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Num;
  n->value = v;
  return ATerm(std::move(n));
}

ATerm ATerm::mod(const ATerm& t, long long modulus) {
  if (modulus < 1) throw ArithError("mod: modulus must be >= 1");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Mod;
  n->value = modulus;
  n->arg = t.node_;
  return ATerm(std::move(n));
}

ATerm ATerm::proj0(const ATerm& t) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Proj0;
  n->arg = t.node_;
  return ATerm(std::move(n));
}

ATerm ATerm::proj1(const ATerm& t) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Proj1;
  n->arg = t.node_;
  return ATerm(std::move(n));
}

ATerm::Kind ATerm::kind() const { return node_->kind; }
const std::string& ATerm::name() const { return node_->name; }
long long ATerm::value() const { return node_->value; }
long long ATerm::modulus() const { return node_->value; }
ATerm ATerm::arg() const { return ATerm(node_->arg); }

bool ATerm::operator==(const ATerm& o) const {
  if (node_ == o.node_) return true;
  if (node_->kind != o.node_->kind) return false;
  switch (node_->kind) {
    case Kind::Var: return node_->name == o.node_->name;
    case Kind::Num: return node_->value == o.node_->value;
    case Kind::Mod:
      return node_->value == o.node_->value && arg() == o.arg();
    case Kind::Proj0:
    case Kind::Proj1:
      return arg() == o.arg();
  }
  return false;
}

std::string ATerm::str() const {
  switch (node_->kind) {
    case Kind::Var: return node_->name;
    case Kind::Num: return "(num " + std::to_string(node_->value) + ")";
    case Kind::Mod:
      return "(mod " + arg().str() + " " + std::to_string(node_->value) + ")";
    case Kind::Proj0: return "(p0 " + arg().str() + ")";
    case Kind::Proj1: return "(p1 " + arg().str() + ")";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// AxExpr / AFormula nodes

struct AxExpr::Node {
  Kind kind;
  std::string name;  // Named tag / PredAx symbol / ExistsAx var
  int level = 1;     // Named declared Sigma level
  std::vector<ATerm> args;
  std::shared_ptr<const Node> a, b;
  std::shared_ptr<const AFormula> quoted;
};

struct AFormula::Node {
  Kind kind;
  std::string name;  // Pred symbol / quantified variable
  std::vector<ATerm> args;
  ATerm t, s;  // Eq/Leq operands; t doubles as the bound of BForall/BExists
  std::shared_ptr<const Node> a, b;
  AxExpr ax;
};

AxExpr AxExpr::named(std::string tag) { return named(std::move(tag), 1); }

AxExpr AxExpr::named(std::string tag, int declared_sigma_level) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Named;
  n->name = std::move(tag);
  n->level = declared_sigma_level;
  return AxExpr(std::move(n));
}

AxExpr AxExpr::or_ax(const AxExpr& a, const AxExpr& b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::OrAx;
  n->a = a.node_;
  n->b = b.node_;
  return AxExpr(std::move(n));
}

AxExpr AxExpr::eq_quote(const AFormula& f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::EqQuote;
  n->quoted = std::make_shared<AFormula>(f);
  return AxExpr(std::move(n));
}

AxExpr AxExpr::pred_ax(std::string symbol, std::vector<ATerm> args) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::PredAx;
  n->name = std::move(symbol);
  n->args = std::move(args);
  return AxExpr(std::move(n));
}

AxExpr AxExpr::exists_ax(std::string var, const AxExpr& body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::ExistsAx;
  n->name = std::move(var);
  n->a = body.node_;
  return AxExpr(std::move(n));
}

AxExpr::Kind AxExpr::kind() const { return node_->kind; }
const std::string& AxExpr::tag() const { return node_->name; }
int AxExpr::declared_level() const { return node_->level; }
AxExpr AxExpr::left() const { return AxExpr(node_->a); }
AxExpr AxExpr::right() const { return AxExpr(node_->b); }
AFormula AxExpr::quoted() const { return *node_->quoted; }
const std::string& AxExpr::symbol() const { return node_->name; }
const std::vector<ATerm>& AxExpr::args() const { return node_->args; }
const std::string& AxExpr::var() const { return node_->name; }
AxExpr AxExpr::body() const { return AxExpr(node_->a); }

bool AxExpr::operator==(const AxExpr& o) const {
  if (node_ == o.node_) return true;
  if (node_->kind != o.node_->kind) return false;
  switch (node_->kind) {
    case Kind::Named:
      return node_->name == o.node_->name && node_->level == o.node_->level;
    case Kind::OrAx:
      return left() == o.left() && right() == o.right();
    case Kind::EqQuote:
      return quoted() == o.quoted();
    case Kind::PredAx:
      return node_->name == o.node_->name && node_->args == o.node_->args;
    case Kind::ExistsAx:
      return node_->name == o.node_->name && body() == o.body();
  }
  return false;
}

std::string AxExpr::str() const {
  switch (node_->kind) {
    case Kind::Named:
      return node_->level == 1
                 ? "(named " + node_->name + ")"
                 : "(named " + node_->name + " " +
                       std::to_string(node_->level) + ")";
    case Kind::OrAx:
      return "(or-ax " + left().str() + " " + right().str() + ")";
    case Kind::EqQuote:
      return "(eq-quote " + quoted().str() + ")";
    case Kind::PredAx: {
      std::string out = "(pred-ax " + node_->name;
      for (const ATerm& t : node_->args) out += " " + t.str();
      return out + ")";
    }
    case Kind::ExistsAx:
      return "(exists-ax " + node_->name + " " + body().str() + ")";
  }
  return "?";
}

namespace {

AFormula::Node* raw(AFormula::Kind k) {
  auto* n = new AFormula::Node();
  n->kind = k;
  return n;
}

}  // namespace

#define SPC_WRAP(nptr) AFormula(std::shared_ptr<const AFormula::Node>(nptr))

AFormula AFormula::falsum() {
  static const AFormula f = SPC_WRAP(raw(Kind::Falsum));
  return f;
}

AFormula AFormula::eq(const ATerm& t, const ATerm& s) {
  auto* n = raw(Kind::Eq);
  n->t = t;
  n->s = s;
  return SPC_WRAP(n);
}

AFormula AFormula::leq(const ATerm& t, const ATerm& s) {
  auto* n = raw(Kind::Leq);
  n->t = t;
  n->s = s;
  return SPC_WRAP(n);
}

AFormula AFormula::pred(std::string symbol, std::vector<ATerm> args) {
  auto* n = raw(Kind::Pred);
  n->name = std::move(symbol);
  n->args = std::move(args);
  return SPC_WRAP(n);
}

AFormula AFormula::conj(const AFormula& a, const AFormula& b) {
  auto* n = raw(Kind::And);
  n->a = a.node_;
  n->b = b.node_;
  return SPC_WRAP(n);
}

AFormula AFormula::disj(const AFormula& a, const AFormula& b) {
  auto* n = raw(Kind::Or);
  n->a = a.node_;
  n->b = b.node_;
  return SPC_WRAP(n);
}

AFormula AFormula::imp(const AFormula& a, const AFormula& b) {
  auto* n = raw(Kind::Imp);
  n->a = a.node_;
  n->b = b.node_;
  return SPC_WRAP(n);
}

AFormula AFormula::neg(const AFormula& a) {
  auto* n = raw(Kind::Not);
  n->a = a.node_;
  return SPC_WRAP(n);
}

AFormula AFormula::forall(std::string var, const AFormula& body) {
  auto* n = raw(Kind::Forall);
  n->name = std::move(var);
  n->a = body.node_;
  return SPC_WRAP(n);
}

AFormula AFormula::exists(std::string var, const AFormula& body) {
  auto* n = raw(Kind::Exists);
  n->name = std::move(var);
  n->a = body.node_;
  return SPC_WRAP(n);
}

AFormula AFormula::bforall(std::string var, const ATerm& bound,
                           const AFormula& body) {
  auto* n = raw(Kind::BForall);
  n->name = std::move(var);
  n->t = bound;
  n->a = body.node_;
  return SPC_WRAP(n);
}

AFormula AFormula::bexists(std::string var, const ATerm& bound,
                           const AFormula& body) {
  auto* n = raw(Kind::BExists);
  n->name = std::move(var);
  n->t = bound;
  n->a = body.node_;
  return SPC_WRAP(n);
}

AFormula AFormula::box(const AxExpr& ax, const AFormula& body) {
  auto* n = raw(Kind::Box);
  n->ax = ax;
  n->a = body.node_;
  return SPC_WRAP(n);
}

AFormula AFormula::dia(const AxExpr& ax, const AFormula& body) {
  auto* n = raw(Kind::Dia);
  n->ax = ax;
  n->a = body.node_;
  return SPC_WRAP(n);
}

#undef SPC_WRAP

AFormula::Kind AFormula::kind() const { return node_->kind; }
ATerm AFormula::lterm() const { return node_->t; }
ATerm AFormula::rterm() const { return node_->s; }
const std::string& AFormula::symbol() const { return node_->name; }
const std::vector<ATerm>& AFormula::args() const { return node_->args; }
AFormula AFormula::left() const { return AFormula(node_->a); }
AFormula AFormula::right() const { return AFormula(node_->b); }
const std::string& AFormula::var() const { return node_->name; }
ATerm AFormula::bound() const { return node_->t; }
AFormula AFormula::body() const { return AFormula(node_->a); }
AxExpr AFormula::ax() const { return node_->ax; }

bool AFormula::operator==(const AFormula& o) const {
  if (node_ == o.node_) return true;
  if (node_->kind != o.node_->kind) return false;
  switch (node_->kind) {
    case Kind::Falsum:
      return true;
    case Kind::Eq:
    case Kind::Leq:
      return lterm() == o.lterm() && rterm() == o.rterm();
    case Kind::Pred:
      return node_->name == o.node_->name && node_->args == o.node_->args;
    case Kind::And:
    case Kind::Or:
    case Kind::Imp:
      return left() == o.left() && right() == o.right();
    case Kind::Not:
      return body() == o.body();
    case Kind::Forall:
    case Kind::Exists:
      return node_->name == o.node_->name && body() == o.body();
    case Kind::BForall:
    case Kind::BExists:
      return node_->name == o.node_->name && bound() == o.bound() &&
             body() == o.body();
    case Kind::Box:
    case Kind::Dia:
      return ax() == o.ax() && body() == o.body();
  }
  return false;
}

std::string AFormula::str() const {
  switch (node_->kind) {
    case Kind::Falsum: return "(false)";
    case Kind::Eq: return "(eq " + lterm().str() + " " + rterm().str() + ")";
    case Kind::Leq: return "(le " + lterm().str() + " " + rterm().str() + ")";
    case Kind::Pred: {
      std::string out = "(" + node_->name;
      for (const ATerm& t : node_->args) out += " " + t.str();
      return out + ")";
    }
    case Kind::And: return "(and " + left().str() + " " + right().str() + ")";
    case Kind::Or: return "(or " + left().str() + " " + right().str() + ")";
    case Kind::Imp: return "(imp " + left().str() + " " + right().str() + ")";
    case Kind::Not: return "(not " + body().str() + ")";
    case Kind::Forall:
      return "(forall " + node_->name + " " + body().str() + ")";
    case Kind::Exists:
      return "(exists " + node_->name + " " + body().str() + ")";
    case Kind::BForall:
      return "(bforall " + node_->name + " " + bound().str() + " " +
             body().str() + ")";
    case Kind::BExists:
      return "(bexists " + node_->name + " " + bound().str() + " " +
             body().str() + ")";
    case Kind::Box:
      return "(box " + node_->ax.str() + " " + body().str() + ")";
    case Kind::Dia:
      return "(dia " + node_->ax.str() + " " + body().str() + ")";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Prefix-format parser

namespace {

struct SxParser {
  const std::string& text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(
                                    text[pos])))
      ++pos;
  }

  bool at_open() {
    skip_ws();
    return pos < text.size() && text[pos] == '(';
  }

  void expect(char c) {
    skip_ws();
    if (pos >= text.size() || text[pos] != c)
      throw ParseError(std::string("expected '") + c + "'", pos);
    ++pos;
  }

  std::string symbol() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(
                                    text[pos])) &&
           text[pos] != '(' && text[pos] != ')')
      ++pos;
    if (start == pos) throw ParseError("expected a symbol", pos);
    return text.substr(start, pos - start);
  }

  long long integer() {
    std::string s = symbol();
    try {
      return std::stoll(s);
    } catch (const std::exception&) {
      throw ParseError("expected an integer, got '" + s + "'", pos);
    }
  }

  bool more_args() {
    skip_ws();
    return pos < text.size() && text[pos] != ')';
  }

  ATerm term() {
    skip_ws();
    if (!at_open()) return ATerm::var(symbol());
    expect('(');
    std::string head = symbol();
    ATerm out;
    if (head == "num") {
      out = ATerm::num(integer());
    } else if (head == "mod") {
      ATerm t = term();
      out = ATerm::mod(t, integer());
    } else if (head == "p0") {
      out = ATerm::proj0(term());
    } else if (head == "p1") {
      out = ATerm::proj1(term());
    } else {
      throw ParseError("unknown term head '" + head + "'", pos);
    }
    expect(')');
    return out;
  }

  AxExpr ax() {
    expect('(');
    std::string head = symbol();
    AxExpr out;
    if (head == "named") {
      std::string tag = symbol();
      if (more_args())
        out = AxExpr::named(tag, static_cast<int>(integer()));
      else
        out = AxExpr::named(tag);
    } else if (head == "or-ax") {
      AxExpr a = ax();
      out = AxExpr::or_ax(a, ax());
    } else if (head == "eq-quote") {
      out = AxExpr::eq_quote(formula());
    } else if (head == "pred-ax") {
      std::string sym = symbol();
      std::vector<ATerm> args;
      while (more_args()) args.push_back(term());
      out = AxExpr::pred_ax(sym, std::move(args));
    } else if (head == "exists-ax") {
      std::string v = symbol();
      out = AxExpr::exists_ax(v, ax());
    } else {
      throw ParseError("unknown axiomatization head '" + head + "'", pos);
    }
    expect(')');
    return out;
  }

  AFormula formula() {
    expect('(');
    std::string head = symbol();
    AFormula out;
    if (head == "false") {
      out = AFormula::falsum();
    } else if (head == "eq" || head == "le") {
      ATerm t = term(), s = term();
      out = head == "eq" ? AFormula::eq(t, s) : AFormula::leq(t, s);
    } else if (head == "and" || head == "or" || head == "imp") {
      AFormula a = formula(), b = formula();
      out = head == "and"  ? AFormula::conj(a, b)
            : head == "or" ? AFormula::disj(a, b)
                           : AFormula::imp(a, b);
    } else if (head == "not") {
      out = AFormula::neg(formula());
    } else if (head == "forall" || head == "exists") {
      std::string v = symbol();
      AFormula b = formula();
      out = head == "forall" ? AFormula::forall(v, b) : AFormula::exists(v, b);
    } else if (head == "bforall" || head == "bexists") {
      std::string v = symbol();
      ATerm bd = term();
      AFormula b = formula();
      out = head == "bforall" ? AFormula::bforall(v, bd, b)
                              : AFormula::bexists(v, bd, b);
    } else if (head == "box" || head == "dia") {
      AxExpr a = ax();
      AFormula b = formula();
      out = head == "box" ? AFormula::box(a, b) : AFormula::dia(a, b);
    } else {
      // predicate application
      std::vector<ATerm> args;
      while (more_args()) args.push_back(term());
      out = AFormula::pred(head, std::move(args));
    }
    expect(')');
    return out;
  }

  void done() {
    skip_ws();
    if (pos != text.size()) throw ParseError("trailing input", pos);
  }
};

}  // namespace

AFormula parse_arith(const std::string& text) {
  SxParser p{text};
  AFormula f = p.formula();
  p.done();
  return f;
}

ATerm parse_arith_term(const std::string& text) {
  SxParser p{text};
  ATerm t = p.term();
  p.done();
  return t;
}

AxExpr parse_ax(const std::string& text) {
  SxParser p{text};
  AxExpr a = p.ax();
  p.done();
  return a;
}

// ---------------------------------------------------------------------------
// Complexity lattice

std::string ComplexityClass::str() const {
  switch (kind) {
    case Kind::Delta0: return "Delta0";
    case Kind::Sigma: return "Sigma" + std::to_string(level);
    case Kind::Pi: return "Pi" + std::to_string(level);
    case Kind::DC: return "DC(Pi1,Sigma1)";
  }
  return "?";
}

bool leq(ComplexityClass a, ComplexityClass b) {
  using K = ComplexityClass::Kind;
  if (a == b) return true;
  if (a.kind == K::Delta0) return true;
  if (b.kind == K::Delta0) return false;
  if (a.kind == K::DC)
    return b.kind == K::DC || b.level >= 2;
  if (b.kind == K::DC) return a.level <= 1;
  if (a.kind == b.kind) return a.level <= b.level;
  return a.level < b.level;
}

ComplexityClass join(ComplexityClass a, ComplexityClass b) {
  if (leq(a, b)) return b;
  if (leq(b, a)) return a;
  // the only incomparable pairs are {Sigma_n, Pi_n}
  if (a.level == 1) return ComplexityClass::dc();
  return ComplexityClass::sigma(a.level + 1);
}

ComplexityClass flip(ComplexityClass c) {
  using K = ComplexityClass::Kind;
  switch (c.kind) {
    case K::Delta0: return c;
    case K::Sigma: return ComplexityClass::pi(c.level);
    case K::Pi: return ComplexityClass::sigma(c.level);
    case K::DC: return c;  // closed under negation
  }
  return c;
}

ComplexityClass widen_dc(ComplexityClass c) {
  if (c.kind == ComplexityClass::Kind::DC) return ComplexityClass::sigma(2);
  return c;
}

namespace {

ComplexityClass exists_lift(ComplexityClass c) {
  using K = ComplexityClass::Kind;
  switch (c.kind) {
    case K::Delta0: return ComplexityClass::sigma(1);
    case K::Sigma: return c;
    case K::Pi: return ComplexityClass::sigma(c.level + 1);
    case K::DC: return ComplexityClass::sigma(2);
  }
  return c;
}

ComplexityClass forall_lift(ComplexityClass c) {
  using K = ComplexityClass::Kind;
  switch (c.kind) {
    case K::Delta0: return ComplexityClass::pi(1);
    case K::Pi: return c;
    case K::Sigma: return ComplexityClass::pi(c.level + 1);
    case K::DC: return ComplexityClass::pi(2);
  }
  return c;
}

}  // namespace

ComplexityClass classify(const AFormula& f) {
  using K = AFormula::Kind;
  switch (f.kind()) {
    case K::Falsum:
    case K::Eq:
    case K::Leq:
    case K::Pred:
      return ComplexityClass::delta0();
    case K::BForall:
    case K::BExists:
      return classify(f.body());
    case K::Box:
      return ComplexityClass::sigma(1);
    case K::Dia:
      return ComplexityClass::pi(1);
    case K::Not:
      return flip(classify(f.body()));
    case K::And:
    case K::Or:
      return join(classify(f.left()), classify(f.right()));
    case K::Imp:
      return join(flip(classify(f.left())), classify(f.right()));
    case K::Forall:
      return forall_lift(classify(f.body()));
    case K::Exists:
      return exists_lift(classify(f.body()));
  }
  return ComplexityClass::delta0();
}

ComplexityClass classify_ax(const AxExpr& ax) {
  using K = AxExpr::Kind;
  switch (ax.kind()) {
    case K::Named:
      return ComplexityClass::sigma(ax.declared_level());
    case K::OrAx:
      return join(classify_ax(ax.left()), classify_ax(ax.right()));
    case K::EqQuote:
      return ComplexityClass::delta0();
    case K::PredAx:
      return ComplexityClass::sigma(1);
    case K::ExistsAx:
      return exists_lift(classify_ax(ax.body()));
  }
  return ComplexityClass::sigma(1);
}

// ---------------------------------------------------------------------------
// Structural operations

std::set<std::string> free_vars_arith(const ATerm& t) {
  switch (t.kind()) {
    case ATerm::Kind::Var: return {t.name()};
    case ATerm::Kind::Num: return {};
    default: return free_vars_arith(t.arg());
  }
}

namespace {

void fv_ax(const AxExpr& ax, std::set<std::string>& out);

void fv_formula(const AFormula& f, std::set<std::string>& out) {
  using K = AFormula::Kind;
  switch (f.kind()) {
    case K::Falsum:
      break;
    case K::Eq:
    case K::Leq: {
      auto a = free_vars_arith(f.lterm()), b = free_vars_arith(f.rterm());
      out.insert(a.begin(), a.end());
      out.insert(b.begin(), b.end());
      break;
    }
    case K::Pred:
      for (const ATerm& t : f.args()) {
        auto v = free_vars_arith(t);
        out.insert(v.begin(), v.end());
      }
      break;
    case K::And:
    case K::Or:
    case K::Imp:
      fv_formula(f.left(), out);
      fv_formula(f.right(), out);
      break;
    case K::Not:
      fv_formula(f.body(), out);
      break;
    case K::Forall:
    case K::Exists: {
      std::set<std::string> inner;
      fv_formula(f.body(), inner);
      inner.erase(f.var());
      out.insert(inner.begin(), inner.end());
      break;
    }
    case K::BForall:
    case K::BExists: {
      auto bv = free_vars_arith(f.bound());
      out.insert(bv.begin(), bv.end());
      std::set<std::string> inner;
      fv_formula(f.body(), inner);
      inner.erase(f.var());
      out.insert(inner.begin(), inner.end());
      break;
    }
    case K::Box:
    case K::Dia:
      fv_ax(f.ax(), out);
      fv_formula(f.body(), out);
      break;
  }
}

void fv_ax(const AxExpr& ax, std::set<std::string>& out) {
  using K = AxExpr::Kind;
  switch (ax.kind()) {
    case K::Named:
      break;
    case K::OrAx:
      fv_ax(ax.left(), out);
      fv_ax(ax.right(), out);
      break;
    case K::EqQuote:
      fv_formula(ax.quoted(), out);
      break;
    case K::PredAx:
      for (const ATerm& t : ax.args()) {
        auto v = free_vars_arith(t);
        out.insert(v.begin(), v.end());
      }
      break;
    case K::ExistsAx: {
      std::set<std::string> inner;
      fv_ax(ax.body(), inner);
      inner.erase(ax.var());
      out.insert(inner.begin(), inner.end());
      break;
    }
  }
}

AxExpr subst_ax(const AxExpr& ax, const std::string& var, const ATerm& t);

}  // namespace

std::set<std::string> free_vars_arith(const AFormula& f) {
  std::set<std::string> out;
  fv_formula(f, out);
  return out;
}

ATerm subst_arith(const ATerm& s, const std::string& var, const ATerm& t) {
  switch (s.kind()) {
    case ATerm::Kind::Var:
      return s.name() == var ? t : s;
    case ATerm::Kind::Num:
      return s;
    case ATerm::Kind::Mod:
      return ATerm::mod(subst_arith(s.arg(), var, t), s.modulus());
    case ATerm::Kind::Proj0:
      return ATerm::proj0(subst_arith(s.arg(), var, t));
    case ATerm::Kind::Proj1:
      return ATerm::proj1(subst_arith(s.arg(), var, t));
  }
  return s;
}

AFormula subst_arith(const AFormula& f, const std::string& var,
                     const ATerm& t) {
  using K = AFormula::Kind;
  auto st = [&](const ATerm& s) { return subst_arith(s, var, t); };
  switch (f.kind()) {
    case K::Falsum:
      return f;
    case K::Eq:
      return AFormula::eq(st(f.lterm()), st(f.rterm()));
    case K::Leq:
      return AFormula::leq(st(f.lterm()), st(f.rterm()));
    case K::Pred: {
      std::vector<ATerm> args;
      for (const ATerm& a : f.args()) args.push_back(st(a));
      return AFormula::pred(f.symbol(), std::move(args));
    }
    case K::And:
      return AFormula::conj(subst_arith(f.left(), var, t),
                            subst_arith(f.right(), var, t));
    case K::Or:
      return AFormula::disj(subst_arith(f.left(), var, t),
                            subst_arith(f.right(), var, t));
    case K::Imp:
      return AFormula::imp(subst_arith(f.left(), var, t),
                           subst_arith(f.right(), var, t));
    case K::Not:
      return AFormula::neg(subst_arith(f.body(), var, t));
    case K::Forall:
      if (f.var() == var) return f;
      return AFormula::forall(f.var(), subst_arith(f.body(), var, t));
    case K::Exists:
      if (f.var() == var) return f;
      return AFormula::exists(f.var(), subst_arith(f.body(), var, t));
    case K::BForall:
      return AFormula::bforall(
          f.var(), st(f.bound()),
          f.var() == var ? f.body() : subst_arith(f.body(), var, t));
    case K::BExists:
      return AFormula::bexists(
          f.var(), st(f.bound()),
          f.var() == var ? f.body() : subst_arith(f.body(), var, t));
    case K::Box:
      return AFormula::box(subst_ax(f.ax(), var, t),
                           subst_arith(f.body(), var, t));
    case K::Dia:
      return AFormula::dia(subst_ax(f.ax(), var, t),
                           subst_arith(f.body(), var, t));
  }
  return f;
}

namespace {

AxExpr subst_ax(const AxExpr& ax, const std::string& var, const ATerm& t) {
  using K = AxExpr::Kind;
  switch (ax.kind()) {
    case K::Named:
      return ax;
    case K::OrAx:
      return AxExpr::or_ax(subst_ax(ax.left(), var, t),
                           subst_ax(ax.right(), var, t));
    case K::EqQuote:
      return AxExpr::eq_quote(subst_arith(ax.quoted(), var, t));
    case K::PredAx: {
      std::vector<ATerm> args;
      for (const ATerm& a : ax.args())
        args.push_back(subst_arith(a, var, t));
      return AxExpr::pred_ax(ax.symbol(), std::move(args));
    }
    case K::ExistsAx:
      if (ax.var() == var) return ax;
      return AxExpr::exists_ax(ax.var(), subst_ax(ax.body(), var, t));
  }
  return ax;
}

}  // namespace

long long cantor_pair(long long a, long long b) {
  return (a + b) * (a + b + 1) / 2 + b;
}

long long cantor_proj0(long long z) {
  long long w = static_cast<long long>(
      (std::sqrt(8.0 * static_cast<double>(z) + 1.0) - 1.0) / 2.0);
  while ((w + 1) * (w + 2) / 2 <= z) ++w;
  while (w * (w + 1) / 2 > z) --w;
  long long b = z - w * (w + 1) / 2;
  return w - b;
}

long long cantor_proj1(long long z) {
  long long w = static_cast<long long>(
      (std::sqrt(8.0 * static_cast<double>(z) + 1.0) - 1.0) / 2.0);
  while ((w + 1) * (w + 2) / 2 <= z) ++w;
  while (w * (w + 1) / 2 > z) --w;
  return z - w * (w + 1) / 2;
}

ATerm fold_ground(const ATerm& t) {
  switch (t.kind()) {
    case ATerm::Kind::Var:
    case ATerm::Kind::Num:
      return t;
    case ATerm::Kind::Mod: {
      ATerm a = fold_ground(t.arg());
      if (a.kind() == ATerm::Kind::Num)
        return ATerm::num(a.value() % t.modulus());
      return ATerm::mod(a, t.modulus());
    }
    case ATerm::Kind::Proj0: {
      ATerm a = fold_ground(t.arg());
      if (a.kind() == ATerm::Kind::Num)
        return ATerm::num(cantor_proj0(a.value()));
      return ATerm::proj0(a);
    }
    case ATerm::Kind::Proj1: {
      ATerm a = fold_ground(t.arg());
      if (a.kind() == ATerm::Kind::Num)
        return ATerm::num(cantor_proj1(a.value()));
      return ATerm::proj1(a);
    }
  }
  return t;
}

AFormula fold_ground(const AFormula& f) {
  using K = AFormula::Kind;
  switch (f.kind()) {
    case K::Falsum:
      return f;
    case K::Eq:
      return AFormula::eq(fold_ground(f.lterm()), fold_ground(f.rterm()));
    case K::Leq:
      return AFormula::leq(fold_ground(f.lterm()), fold_ground(f.rterm()));
    case K::Pred: {
      std::vector<ATerm> args;
      for (const ATerm& a : f.args()) args.push_back(fold_ground(a));
      return AFormula::pred(f.symbol(), std::move(args));
    }
    case K::And:
      return AFormula::conj(fold_ground(f.left()), fold_ground(f.right()));
    case K::Or:
      return AFormula::disj(fold_ground(f.left()), fold_ground(f.right()));
    case K::Imp:
      return AFormula::imp(fold_ground(f.left()), fold_ground(f.right()));
    case K::Not:
      return AFormula::neg(fold_ground(f.body()));
    case K::Forall:
      return AFormula::forall(f.var(), fold_ground(f.body()));
    case K::Exists:
      return AFormula::exists(f.var(), fold_ground(f.body()));
    case K::BForall:
      return AFormula::bforall(f.var(), fold_ground(f.bound()),
                               fold_ground(f.body()));
    case K::BExists:
      return AFormula::bexists(f.var(), fold_ground(f.bound()),
                               fold_ground(f.body()));
    case K::Box:
      return AFormula::box(f.ax(), fold_ground(f.body()));
    case K::Dia:
      return AFormula::dia(f.ax(), fold_ground(f.body()));
  }
  return f;
}

namespace {

bool quantifier_free(const AFormula& f) {
  using K = AFormula::Kind;
  switch (f.kind()) {
    case K::Forall:
    case K::Exists:
      return false;
    case K::And:
    case K::Or:
    case K::Imp:
      return quantifier_free(f.left()) && quantifier_free(f.right());
    case K::Not:
      return quantifier_free(f.body());
    case K::BForall:
    case K::BExists:
      return quantifier_free(f.body());
    default:
      return true;  // atoms; Box/Dia count as atoms
  }
}

}  // namespace

bool is_prenex(const AFormula& f) {
  AFormula g = f;
  while (g.kind() == AFormula::Kind::Forall ||
         g.kind() == AFormula::Kind::Exists)
    g = g.body();
  return quantifier_free(g);
}

namespace {

std::string fresh_name(const std::string& base,
                       const std::set<std::string>& used) {
  if (!used.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string cand = base + std::to_string(i);
    if (!used.count(cand)) return cand;
  }
}

}  // namespace

AFormula merge_sigma2_disjunction(const AFormula& f0, const AFormula& f1) {
  auto split = [](const AFormula& f, const char* which) {
    if (f.kind() != AFormula::Kind::Exists ||
        f.body().kind() != AFormula::Kind::Forall)
      throw ArithError(std::string("merge_sigma2_disjunction: ") + which +
                       " input is not in exists-forall prenex form");
    AFormula matrix = f.body().body();
    if (!leq(classify(matrix), ComplexityClass::delta0()))
      throw ArithError(std::string("merge_sigma2_disjunction: ") + which +
                       " matrix is not Delta0 (got " +
                       classify(matrix).str() + ")");
    return std::tuple<std::string, std::string, AFormula>{
        f.var(), f.body().var(), matrix};
  };
  auto [s0, t0, d0] = split(f0, "first");
  auto [s1, t1, d1] = split(f1, "second");
  std::set<std::string> used = free_vars_arith(d0);
  std::set<std::string> u1 = free_vars_arith(d1);
  used.insert(u1.begin(), u1.end());
  std::string x = fresh_name("x", used);
  used.insert(x);
  std::string y = fresh_name("y", used);
  ATerm xv = ATerm::var(x), yv = ATerm::var(y);
  AFormula b0 = subst_arith(subst_arith(d0, s0, ATerm::proj1(xv)), t0, yv);
  AFormula b1 = subst_arith(subst_arith(d1, s1, ATerm::proj1(xv)), t1, yv);
  AFormula body = AFormula::disj(
      AFormula::conj(AFormula::eq(ATerm::proj0(xv), ATerm::num(0)), b0),
      AFormula::conj(AFormula::eq(ATerm::proj0(xv), ATerm::num(1)), b1));
  return AFormula::exists(x, AFormula::forall(y, body));
}

AFormula pi1_to_neg_neg_sigma1(const AFormula& pi) {
  std::vector<std::string> vars;
  AFormula g = pi;
  while (g.kind() == AFormula::Kind::Forall) {
    vars.push_back(g.var());
    g = g.body();
  }
  if (vars.empty())
    throw ArithError("pi1_to_neg_neg_sigma1: input has no universal prefix");
  if (!leq(classify(g), ComplexityClass::delta0()))
    throw ArithError("pi1_to_neg_neg_sigma1: matrix is not Delta0 (got " +
                     classify(g).str() + ")");
  AFormula out = AFormula::neg(g);
  for (auto it = vars.rbegin(); it != vars.rend(); ++it)
    out = AFormula::exists(*it, out);
  return out;
}

namespace {

AFormula kuroda_rec(const AFormula& f) {
  using K = AFormula::Kind;
  if (f.kind() == K::Exists)
    return AFormula::exists(f.var(), kuroda_rec(f.body()));
  if (f.kind() == K::Forall) {
    std::vector<std::string> block;
    AFormula g = f;
    while (g.kind() == K::Forall) {
      block.push_back(g.var());
      g = g.body();
    }
    AFormula out = AFormula::neg(AFormula::neg(kuroda_rec(g)));
    for (auto it = block.rbegin(); it != block.rend(); ++it)
      out = AFormula::forall(*it, out);
    return out;
  }
  return f;
}

}  // namespace

AFormula kuroda_body(const AFormula& f) {
  if (!is_prenex(f))
    throw ArithError("kuroda_body: input is not prenex");
  return kuroda_rec(f);
}

// ---------------------------------------------------------------------------
// Bounded evaluation

long long eval_term(const ATerm& t,
                    const std::map<std::string, long long>& env) {
  switch (t.kind()) {
    case ATerm::Kind::Var: {
      auto it = env.find(t.name());
      if (it == env.end())
        throw ArithError("eval: unbound variable " + t.name());
      return it->second;
    }
    case ATerm::Kind::Num:
      return t.value();
    case ATerm::Kind::Mod:
      return eval_term(t.arg(), env) % t.modulus();
    case ATerm::Kind::Proj0:
      return cantor_proj0(eval_term(t.arg(), env));
    case ATerm::Kind::Proj1:
      return cantor_proj1(eval_term(t.arg(), env));
  }
  return 0;
}

namespace {

AFormula close_under(const AFormula& f,
                     const std::map<std::string, long long>& env) {
  AFormula out = f;
  for (const std::string& v : free_vars_arith(f)) {
    auto it = env.find(v);
    if (it != env.end()) out = subst_arith(out, v, ATerm::num(it->second));
  }
  return fold_ground(out);
}

}  // namespace

bool eval_bounded(const AFormula& f, long long B, const BoundedOracle& oracle,
                  std::map<std::string, long long> env) {
  using K = AFormula::Kind;
  switch (f.kind()) {
    case K::Falsum:
      return false;
    case K::Eq:
      return eval_term(f.lterm(), env) == eval_term(f.rterm(), env);
    case K::Leq:
      return eval_term(f.lterm(), env) <= eval_term(f.rterm(), env);
    case K::Pred: {
      if (!oracle.pred)
        throw OracleError("eval: no oracle for predicate " + f.symbol());
      std::vector<long long> args;
      for (const ATerm& t : f.args()) args.push_back(eval_term(t, env));
      return oracle.pred(f.symbol(), args);
    }
    case K::And:
      return eval_bounded(f.left(), B, oracle, env) &&
             eval_bounded(f.right(), B, oracle, env);
    case K::Or:
      return eval_bounded(f.left(), B, oracle, env) ||
             eval_bounded(f.right(), B, oracle, env);
    case K::Imp:
      return !eval_bounded(f.left(), B, oracle, env) ||
             eval_bounded(f.right(), B, oracle, env);
    case K::Not:
      return !eval_bounded(f.body(), B, oracle, env);
    case K::Forall:
      for (long long v = 0; v <= B; ++v) {
        env[f.var()] = v;
        if (!eval_bounded(f.body(), B, oracle, env)) return false;
      }
      return true;
    case K::Exists:
      for (long long v = 0; v <= B; ++v) {
        env[f.var()] = v;
        if (eval_bounded(f.body(), B, oracle, env)) return true;
      }
      return false;
    case K::BForall: {
      long long hi = std::min(eval_term(f.bound(), env), B);
      for (long long v = 0; v <= hi; ++v) {
        env[f.var()] = v;
        if (!eval_bounded(f.body(), B, oracle, env)) return false;
      }
      return true;
    }
    case K::BExists: {
      long long hi = std::min(eval_term(f.bound(), env), B);
      for (long long v = 0; v <= hi; ++v) {
        env[f.var()] = v;
        if (eval_bounded(f.body(), B, oracle, env)) return true;
      }
      return false;
    }
    case K::Box:
    case K::Dia: {
      if (!oracle.modal)
        throw OracleError("eval: no oracle for box/dia atoms");
      return oracle.modal(f.kind() == K::Box, f.ax(), close_under(f.body(), env));
    }
  }
  return false;
}

}  // namespace spc
