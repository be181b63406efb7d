#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace spc {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Syntax error with a character offset into the input.
struct ParseError : Error {
  ParseError(const std::string& what, std::size_t pos);
  std::size_t pos;
};

struct CaptureError : Error {
  explicit CaptureError(const std::string& what) : Error(what) {}
};

struct ModeError : Error {
  explicit ModeError(const std::string& what) : Error(what) {}
};

/// Language mode: propositional (one modality, 0-ary atoms), polymodal
/// (indexed diamonds, 0-ary atoms), or quantified (one modality, terms
/// and universal quantifiers).
enum class Mode { Propositional, Polymodal, Quantified };

std::string to_string(Mode m);

/// A term is a variable x_k or a constant c_k.
struct Term {
  enum class Kind { Var, Const };
  Kind kind{Kind::Var};
  int index{0};

  static Term var(int i) { return Term{Kind::Var, i}; }
  static Term constant(int i) { return Term{Kind::Const, i}; }

  bool operator==(const Term&) const = default;
  bool operator<(const Term& o) const {
    return kind != o.kind ? kind < o.kind : index < o.index;
  }
  std::string str() const;
};

/// Predicate symbols with arities (arity 0 = propositional atom) and the
/// finite set of constant indices available in the language.
struct Signature {
  std::map<std::string, int> predicates;
  std::set<int> constants;

  bool has_predicate(const std::string& name) const {
    return predicates.count(name) != 0;
  }
  int arity(const std::string& name) const { return predicates.at(name); }
};

/// Immutable strictly positive modal formula:
///   T | S(t,...) | (a & b) | <i> a | A x_k. a
class Formula {
 public:
  enum class Kind { Top, Atom, Conj, Diamond, Forall };

  Formula();  // Top
  static Formula top();
  static Formula atom(std::string pred, std::vector<Term> args = {});
  static Formula conj(const Formula& a, const Formula& b);
  static Formula dia(int index, const Formula& body);
  static Formula forall(int var, const Formula& body);

  Kind kind() const;
  const std::string& pred() const;       // Atom
  const std::vector<Term>& args() const; // Atom
  Formula left() const;                  // Conj
  Formula right() const;                 // Conj
  int dia_index() const;                 // Diamond
  int var() const;                       // Forall
  Formula body() const;                  // Diamond / Forall

  int size() const;  // number of syntax nodes (terms not counted)
  std::size_t hash() const;
  bool operator==(const Formula& other) const;
  bool operator!=(const Formula& other) const { return !(*this == other); }
  std::string str() const;

  struct Hash {
    std::size_t operator()(const Formula& f) const { return f.hash(); }
  };

  struct Node;

 private:
  explicit Formula(std::shared_ptr<const Node> n);
  std::shared_ptr<const Node> node_;
};

struct Sequent {
  Formula lhs;
  Formula rhs;

  bool operator==(const Sequent& o) const {
    return lhs == o.lhs && rhs == o.rhs;
  }
  std::string str() const;

  struct Hash {
    std::size_t operator()(const Sequent& s) const {
      return s.lhs.hash() * 0x9e3779b97f4a7c15ULL + s.rhs.hash();
    }
  };
};

Formula parse_formula(const std::string& text, const Signature& sig, Mode mode);
Sequent parse_sequent(const std::string& text, const Signature& sig, Mode mode);

/// Scans the text and builds a signature from the predicate and constant
/// symbols it mentions. Throws ParseError on inconsistent arities.
Signature infer_signature(const std::string& text);

std::set<int> free_vars(const Formula& f);
bool is_free_for(Term t, int x, const Formula& f);

/// Replaces all free occurrences of x_x by t. Throws CaptureError when t
/// is not free for x in f.
Formula substitute(const Formula& f, int x, Term t);

int modal_depth(const Formula& f);

/// Predicate and constant names occurring in f (constants as "c<k>").
std::set<std::string> symbols_of(const Formula& f);

/// Top-level conjuncts of f, in left-to-right order.
std::vector<Formula> flatten_conj(const Formula& f);

/// The least mode a formula fits in (quantifiers force Quantified,
/// nonzero diamond indices force Polymodal).
Mode mode_of(const Formula& f);
Mode mode_of(const Sequent& s);

/// All constant indices occurring in f.
std::set<int> constants_of(const Formula& f);
/// All diamond indices occurring in f.
std::set<int> dia_indices_of(const Formula& f);

}  // namespace spc
