#include "spc/formula.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace spc {

ParseError::ParseError(const std::string& what, std::size_t p)
    : Error(what + " (at position " + std::to_string(p) + ")"), pos(p) {}

std::string to_string(Mode m) {
  switch (m) {
    case Mode::Propositional: return "propositional";
    case Mode::Polymodal: return "polymodal";
    case Mode::Quantified: return "quantified";
  }
  return "?";
}

std::string Term::str() const {
  return (kind == Kind::Var ? "x" : "c") + std::to_string(index);
}

struct Formula::Node {
  Kind kind;
  std::string pred;        // Atom
  std::vector<Term> args;  // Atom
  std::shared_ptr<const Node> a, b;
  int index = 0;  // Diamond index or Forall variable
  int size = 1;
  std::size_t hash = 0;
};

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h * 0x100000001b3ULL ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t node_hash(const Formula::Node&);

}  // namespace

namespace {
std::size_t node_hash(const Formula::Node& n) {
  std::size_t h = static_cast<std::size_t>(n.kind) + 1;
  h = mix(h, std::hash<std::string>{}(n.pred));
  for (const Term& t : n.args)
    h = mix(h, (static_cast<std::size_t>(t.kind) << 20) + t.index);
  if (n.a) h = mix(h, n.a->hash);
  if (n.b) h = mix(h, n.b->hash);
  h = mix(h, static_cast<std::size_t>(n.index));
  return h;
}
}  // namespace

Formula::Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

Formula::Formula() : Formula(top()) {}

Formula Formula::top() {
  static const std::shared_ptr<const Node> t = [] {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Top;
    n->hash = node_hash(*n);
    return n;
  }();
  return Formula(t);
}

Formula Formula::atom(std::string pred, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Atom;
  n->pred = std::move(pred);
  n->args = std::move(args);
  n->hash = node_hash(*n);
  return Formula(std::move(n));
}

Formula Formula::conj(const Formula& a, const Formula& b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Conj;
  n->a = a.node_;
  n->b = b.node_;
  n->size = 1 + a.size() + b.size();
  n->hash = node_hash(*n);
  return Formula(std::move(n));
}

Formula Formula::dia(int index, const Formula& body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Diamond;
  n->a = body.node_;
  n->index = index;
  n->size = 1 + body.size();
  n->hash = node_hash(*n);
  return Formula(std::move(n));
}

Formula Formula::forall(int var, const Formula& body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Forall;
  n->a = body.node_;
  n->index = var;
  n->size = 1 + body.size();
  n->hash = node_hash(*n);
  return Formula(std::move(n));
}

Formula::Kind Formula::kind() const { return node_->kind; }
const std::string& Formula::pred() const { return node_->pred; }
const std::vector<Term>& Formula::args() const { return node_->args; }
Formula Formula::left() const { return Formula(node_->a); }
Formula Formula::right() const { return Formula(node_->b); }
int Formula::dia_index() const { return node_->index; }
int Formula::var() const { return node_->index; }
Formula Formula::body() const { return Formula(node_->a); }
int Formula::size() const { return node_->size; }
std::size_t Formula::hash() const { return node_->hash; }

namespace {
bool node_eq(const Formula::Node* x, const Formula::Node* y) {
  if (x == y) return true;
  if (x->hash != y->hash || x->kind != y->kind || x->index != y->index)
    return false;
  if (x->pred != y->pred || x->args != y->args) return false;
  if (!!x->a != !!y->a || !!x->b != !!y->b) return false;
  if (x->a && !node_eq(x->a.get(), y->a.get())) return false;
  if (x->b && !node_eq(x->b.get(), y->b.get())) return false;
  return true;
}
}  // namespace

bool Formula::operator==(const Formula& other) const {
  return node_eq(node_.get(), other.node_.get());
}

namespace {

void print_formula(const Formula& f, std::ostream& out) {
  switch (f.kind()) {
    case Formula::Kind::Top:
      out << "T";
      break;
    case Formula::Kind::Atom: {
      out << f.pred();
      if (!f.args().empty()) {
        out << "(";
        for (std::size_t i = 0; i < f.args().size(); ++i) {
          if (i) out << ",";
          out << f.args()[i].str();
        }
        out << ")";
      }
      break;
    }
    case Formula::Kind::Conj: {
      // Left-associative: a nested conjunction on the right needs parens.
      print_formula(f.left(), out);
      out << " & ";
      if (f.right().kind() == Formula::Kind::Conj) {
        out << "(";
        print_formula(f.right(), out);
        out << ")";
      } else {
        print_formula(f.right(), out);
      }
      break;
    }
    case Formula::Kind::Diamond: {
      if (f.dia_index() == 0)
        out << "<>";
      else
        out << "<" << f.dia_index() << ">";
      if (f.body().kind() == Formula::Kind::Conj) {
        out << "(";
        print_formula(f.body(), out);
        out << ")";
      } else {
        print_formula(f.body(), out);
      }
      break;
    }
    case Formula::Kind::Forall: {
      out << "A x" << f.var() << ". ";
      if (f.body().kind() == Formula::Kind::Conj) {
        out << "(";
        print_formula(f.body(), out);
        out << ")";
      } else {
        print_formula(f.body(), out);
      }
      break;
    }
  }
}

}  // namespace

std::string Formula::str() const {
  std::ostringstream out;
  print_formula(*this, out);
  return out.str();
}

std::string Sequent::str() const { return lhs.str() + " |- " + rhs.str(); }

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Token {
  enum class Type { Ident, Nat, LParen, RParen, Lt, Gt, Amp, Dot, Comma, Turnstile, End };
  Type type;
  std::string text;
  std::size_t pos;
};

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
        ++j;
      out.push_back({Token::Type::Ident, s.substr(i, j - i), i});
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Token::Type::Nat, s.substr(i, j - i), i});
      i = j;
      continue;
    }
    switch (c) {
      case '(': out.push_back({Token::Type::LParen, "(", i}); break;
      case ')': out.push_back({Token::Type::RParen, ")", i}); break;
      case '<': out.push_back({Token::Type::Lt, "<", i}); break;
      case '>': out.push_back({Token::Type::Gt, ">", i}); break;
      case '&': out.push_back({Token::Type::Amp, "&", i}); break;
      case '.': out.push_back({Token::Type::Dot, ".", i}); break;
      case ',': out.push_back({Token::Type::Comma, ",", i}); break;
      case '|':
        if (i + 1 < s.size() && s[i + 1] == '-') {
          out.push_back({Token::Type::Turnstile, "|-", i});
          ++i;
          break;
        }
        throw ParseError("unexpected character '|'", i);
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", i);
    }
    ++i;
  }
  out.push_back({Token::Type::End, "", s.size()});
  return out;
}

// IDENT shapes reserved for terms.
bool is_var_ident(const std::string& s) {
  if (s.size() < 2 || s[0] != 'x') return false;
  return std::all_of(s.begin() + 1, s.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

bool is_const_ident(const std::string& s) {
  if (s.size() < 2 || s[0] != 'c') return false;
  return std::all_of(s.begin() + 1, s.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

class Parser {
 public:
  Parser(const std::string& text, const Signature& sig, Mode mode)
      : toks_(tokenize(text)), sig_(sig), mode_(mode) {}

  Formula formula() {
    Formula f = unary();
    while (peek().type == Token::Type::Amp) {
      next();
      f = Formula::conj(f, unary());
    }
    return f;
  }

  Sequent sequent() {
    Formula lhs = formula();
    expect(Token::Type::Turnstile, "'|-'");
    Formula rhs = formula();
    end();
    return Sequent{lhs, rhs};
  }

  void end() {
    if (peek().type != Token::Type::End)
      throw ParseError("trailing input after formula", peek().pos);
  }

 private:
  const Token& peek() const { return toks_[idx_]; }
  Token next() { return toks_[idx_++]; }

  Token expect(Token::Type t, const char* what) {
    if (peek().type != t)
      throw ParseError(std::string("expected ") + what, peek().pos);
    return next();
  }

  Formula unary() {
    const Token& t = peek();
    switch (t.type) {
      case Token::Type::LParen: {
        next();
        Formula f = formula();
        expect(Token::Type::RParen, "')'");
        return f;
      }
      case Token::Type::Lt: {
        next();
        int index = 0;
        if (peek().type == Token::Type::Nat) index = std::stoi(next().text);
        expect(Token::Type::Gt, "'>'");
        if (index != 0 && mode_ != Mode::Polymodal)
          throw ParseError("modality index " + std::to_string(index) +
                               " not allowed in " + to_string(mode_) + " mode",
                           t.pos);
        return Formula::dia(index, unary());
      }
      case Token::Type::Ident: {
        if (t.text == "T") {
          next();
          return Formula::top();
        }
        if (t.text == "A") {
          if (mode_ != Mode::Quantified)
            throw ParseError("quantifier not allowed in " + to_string(mode_) +
                                 " mode",
                             t.pos);
          next();
          Token v = expect(Token::Type::Ident, "variable");
          if (!is_var_ident(v.text))
            throw ParseError("expected variable of the form x<k>", v.pos);
          int var = std::stoi(v.text.substr(1));
          expect(Token::Type::Dot, "'.'");
          return Formula::forall(var, unary());
        }
        return atom();
      }
      default:
        throw ParseError("expected formula", t.pos);
    }
  }

  Formula atom() {
    Token name = next();
    if (is_var_ident(name.text) || is_const_ident(name.text))
      throw ParseError("term '" + name.text + "' used as a formula", name.pos);
    if (!sig_.has_predicate(name.text))
      throw ParseError("unknown symbol '" + name.text + "'", name.pos);
    int arity = sig_.arity(name.text);
    std::vector<Term> args;
    if (peek().type == Token::Type::LParen) {
      next();
      args.push_back(term());
      while (peek().type == Token::Type::Comma) {
        next();
        args.push_back(term());
      }
      expect(Token::Type::RParen, "')'");
    }
    if (static_cast<int>(args.size()) != arity)
      throw ParseError("arity mismatch for '" + name.text + "': expected " +
                           std::to_string(arity) + ", got " +
                           std::to_string(args.size()),
                       name.pos);
    if (!args.empty() && mode_ != Mode::Quantified)
      throw ParseError("terms not allowed in " + to_string(mode_) + " mode",
                       name.pos);
    return Formula::atom(name.text, std::move(args));
  }

  Term term() {
    Token t = expect(Token::Type::Ident, "term");
    if (is_var_ident(t.text)) return Term::var(std::stoi(t.text.substr(1)));
    if (is_const_ident(t.text)) {
      int idx = std::stoi(t.text.substr(1));
      if (!sig_.constants.count(idx))
        throw ParseError("unknown symbol '" + t.text + "'", t.pos);
      return Term::constant(idx);
    }
    throw ParseError("expected term (x<k> or c<k>)", t.pos);
  }

  std::vector<Token> toks_;
  std::size_t idx_ = 0;
  const Signature& sig_;
  Mode mode_;
};

}  // namespace

Formula parse_formula(const std::string& text, const Signature& sig, Mode mode) {
  Parser p(text, sig, mode);
  Formula f = p.formula();
  p.end();
  return f;
}

Sequent parse_sequent(const std::string& text, const Signature& sig, Mode mode) {
  Parser p(text, sig, mode);
  return p.sequent();
}

Signature infer_signature(const std::string& text) {
  Signature sig;
  auto toks = tokenize(text);
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const Token& t = toks[i];
    if (t.type != Token::Type::Ident) continue;
    if (t.text == "T" || t.text == "A") continue;
    if (is_var_ident(t.text)) continue;
    if (is_const_ident(t.text)) {
      sig.constants.insert(std::stoi(t.text.substr(1)));
      continue;
    }
    int arity = 0;
    if (toks[i + 1].type == Token::Type::LParen) {
      arity = 1;
      int depth = 0;
      for (std::size_t j = i + 1; j < toks.size(); ++j) {
        if (toks[j].type == Token::Type::LParen) ++depth;
        else if (toks[j].type == Token::Type::RParen) {
          if (--depth == 0) break;
        } else if (toks[j].type == Token::Type::Comma && depth == 1)
          ++arity;
      }
    }
    auto it = sig.predicates.find(t.text);
    if (it == sig.predicates.end())
      sig.predicates[t.text] = arity;
    else if (it->second != arity)
      throw ParseError("inconsistent arity for '" + t.text + "'", t.pos);
  }
  return sig;
}

// ---------------------------------------------------------------------------
// Structural operations

std::set<int> free_vars(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Top:
      return {};
    case Formula::Kind::Atom: {
      std::set<int> out;
      for (const Term& t : f.args())
        if (t.kind == Term::Kind::Var) out.insert(t.index);
      return out;
    }
    case Formula::Kind::Conj: {
      std::set<int> out = free_vars(f.left());
      std::set<int> r = free_vars(f.right());
      out.insert(r.begin(), r.end());
      return out;
    }
    case Formula::Kind::Diamond:
      return free_vars(f.body());
    case Formula::Kind::Forall: {
      std::set<int> out = free_vars(f.body());
      out.erase(f.var());
      return out;
    }
  }
  return {};
}

bool is_free_for(Term t, int x, const Formula& f) {
  if (t.kind == Term::Kind::Const) return true;
  switch (f.kind()) {
    case Formula::Kind::Top:
    case Formula::Kind::Atom:
      return true;
    case Formula::Kind::Conj:
      return is_free_for(t, x, f.left()) && is_free_for(t, x, f.right());
    case Formula::Kind::Diamond:
      return is_free_for(t, x, f.body());
    case Formula::Kind::Forall: {
      if (f.var() == x) return true;  // no free x below
      if (f.var() == t.index && free_vars(f.body()).count(x)) return false;
      return is_free_for(t, x, f.body());
    }
  }
  return true;
}

namespace {
Formula subst_unchecked(const Formula& f, int x, Term t) {
  switch (f.kind()) {
    case Formula::Kind::Top:
      return f;
    case Formula::Kind::Atom: {
      std::vector<Term> args = f.args();
      bool changed = false;
      for (Term& a : args)
        if (a.kind == Term::Kind::Var && a.index == x) {
          a = t;
          changed = true;
        }
      return changed ? Formula::atom(f.pred(), std::move(args)) : f;
    }
    case Formula::Kind::Conj:
      return Formula::conj(subst_unchecked(f.left(), x, t),
                           subst_unchecked(f.right(), x, t));
    case Formula::Kind::Diamond:
      return Formula::dia(f.dia_index(), subst_unchecked(f.body(), x, t));
    case Formula::Kind::Forall:
      if (f.var() == x) return f;
      return Formula::forall(f.var(), subst_unchecked(f.body(), x, t));
  }
  return f;
}
}  // namespace

Formula substitute(const Formula& f, int x, Term t) {
  if (!is_free_for(t, x, f))
    throw CaptureError("term " + t.str() + " is not free for x" +
                       std::to_string(x) + " in " + f.str());
  return subst_unchecked(f, x, t);
}

int modal_depth(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Top:
    case Formula::Kind::Atom:
      return 0;
    case Formula::Kind::Conj:
      return std::max(modal_depth(f.left()), modal_depth(f.right()));
    case Formula::Kind::Diamond:
      return 1 + modal_depth(f.body());
    case Formula::Kind::Forall:
      return modal_depth(f.body());
  }
  return 0;
}

std::set<std::string> symbols_of(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Top:
      return {};
    case Formula::Kind::Atom: {
      std::set<std::string> out{f.pred()};
      for (const Term& t : f.args())
        if (t.kind == Term::Kind::Const) out.insert(t.str());
      return out;
    }
    case Formula::Kind::Conj: {
      std::set<std::string> out = symbols_of(f.left());
      std::set<std::string> r = symbols_of(f.right());
      out.insert(r.begin(), r.end());
      return out;
    }
    case Formula::Kind::Diamond:
    case Formula::Kind::Forall:
      return symbols_of(f.body());
  }
  return {};
}

std::vector<Formula> flatten_conj(const Formula& f) {
  std::vector<Formula> out;
  std::vector<Formula> stack{f};
  while (!stack.empty()) {
    Formula g = stack.back();
    stack.pop_back();
    if (g.kind() == Formula::Kind::Conj) {
      stack.push_back(g.right());
      stack.push_back(g.left());
    } else {
      out.push_back(g);
    }
  }
  return out;
}

Mode mode_of(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Top:
      return Mode::Propositional;
    case Formula::Kind::Atom:
      return f.args().empty() ? Mode::Propositional : Mode::Quantified;
    case Formula::Kind::Conj: {
      Mode a = mode_of(f.left()), b = mode_of(f.right());
      return a > b ? a : b;
    }
    case Formula::Kind::Diamond: {
      Mode m = mode_of(f.body());
      if (f.dia_index() != 0) {
        if (m == Mode::Quantified)
          throw ModeError("formula mixes quantifiers and polymodal indices");
        return Mode::Polymodal;
      }
      return m;
    }
    case Formula::Kind::Forall: {
      Mode m = mode_of(f.body());
      if (m == Mode::Polymodal)
        throw ModeError("formula mixes quantifiers and polymodal indices");
      return Mode::Quantified;
    }
  }
  return Mode::Propositional;
}

Mode mode_of(const Sequent& s) {
  Mode a = mode_of(s.lhs), b = mode_of(s.rhs);
  if ((a == Mode::Polymodal && b == Mode::Quantified) ||
      (a == Mode::Quantified && b == Mode::Polymodal))
    throw ModeError("sequent sides have incompatible modes");
  return a > b ? a : b;
}

std::set<int> constants_of(const Formula& f) {
  std::set<int> out;
  switch (f.kind()) {
    case Formula::Kind::Top:
      break;
    case Formula::Kind::Atom:
      for (const Term& t : f.args())
        if (t.kind == Term::Kind::Const) out.insert(t.index);
      break;
    case Formula::Kind::Conj: {
      out = constants_of(f.left());
      std::set<int> r = constants_of(f.right());
      out.insert(r.begin(), r.end());
      break;
    }
    case Formula::Kind::Diamond:
    case Formula::Kind::Forall:
      out = constants_of(f.body());
      break;
  }
  return out;
}

std::set<int> dia_indices_of(const Formula& f) {
  std::set<int> out;
  switch (f.kind()) {
    case Formula::Kind::Conj: {
      out = dia_indices_of(f.left());
      std::set<int> r = dia_indices_of(f.right());
      out.insert(r.begin(), r.end());
      break;
    }
    case Formula::Kind::Diamond:
      out = dia_indices_of(f.body());
      out.insert(f.dia_index());
      break;
    case Formula::Kind::Forall:
      out = dia_indices_of(f.body());
      break;
    default:
      break;
  }
  return out;
}

}  // namespace spc
