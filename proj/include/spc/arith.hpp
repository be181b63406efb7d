#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "spc/formula.hpp"

namespace spc {

struct ArithError : Error {
  explicit ArithError(const std::string& what) : Error(what) {}
};
struct OracleError : Error {
  explicit OracleError(const std::string& what) : Error(what) {}
};

/// Arithmetic term: variable, numeral, t mod m, or Cantor projection.
class ATerm {
 public:
  enum class Kind { Var, Num, Mod, Proj0, Proj1 };

  static ATerm var(std::string name);
  static ATerm num(long long n);
  static ATerm mod(const ATerm& t, long long modulus);  // modulus >= 1
  static ATerm proj0(const ATerm& t);
  static ATerm proj1(const ATerm& t);

  Kind kind() const;
  const std::string& name() const;  // Var
  long long value() const;          // Num
  long long modulus() const;        // Mod
  ATerm arg() const;                // Mod / Proj

  bool operator==(const ATerm& o) const;
  bool operator!=(const ATerm& o) const { return !(*this == o); }
  std::string str() const;

  ATerm() : ATerm(num(0)) {}

  struct Node;

 private:
  explicit ATerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

class AFormula;

/// Axiomatization expression: a formula scheme in the implicit variable u
/// describing a (possibly infinite) recursively enumerable axiom set.
class AxExpr {
 public:
  enum class Kind { Named, OrAx, EqQuote, PredAx, ExistsAx };

  static AxExpr named(std::string tag);  // declared Sigma1
  static AxExpr named(std::string tag, int declared_sigma_level);
  static AxExpr or_ax(const AxExpr& a, const AxExpr& b);
  static AxExpr eq_quote(const AFormula& f);
  static AxExpr pred_ax(std::string symbol, std::vector<ATerm> args);
  static AxExpr exists_ax(std::string var, const AxExpr& body);

  Kind kind() const;
  const std::string& tag() const;      // Named
  int declared_level() const;          // Named: Sigma level
  AxExpr left() const;                 // OrAx
  AxExpr right() const;                // OrAx
  AFormula quoted() const;             // EqQuote
  const std::string& symbol() const;   // PredAx
  const std::vector<ATerm>& args() const;  // PredAx
  const std::string& var() const;      // ExistsAx
  AxExpr body() const;                 // ExistsAx

  bool operator==(const AxExpr& o) const;
  bool operator!=(const AxExpr& o) const { return !(*this == o); }
  std::string str() const;

  AxExpr() : AxExpr(named("HA")) {}

  struct Node;

 private:
  explicit AxExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// First-order arithmetic formula with abstract provability operators.
class AFormula {
 public:
  enum class Kind {
    Falsum, Eq, Leq, Pred, And, Or, Imp, Not,
    Forall, Exists, BForall, BExists, Box, Dia
  };

  static AFormula falsum();
  static AFormula eq(const ATerm& t, const ATerm& s);
  static AFormula leq(const ATerm& t, const ATerm& s);
  static AFormula pred(std::string symbol, std::vector<ATerm> args);
  static AFormula conj(const AFormula& a, const AFormula& b);
  static AFormula disj(const AFormula& a, const AFormula& b);
  static AFormula imp(const AFormula& a, const AFormula& b);
  static AFormula neg(const AFormula& a);
  static AFormula forall(std::string var, const AFormula& body);
  static AFormula exists(std::string var, const AFormula& body);
  static AFormula bforall(std::string var, const ATerm& bound,
                          const AFormula& body);
  static AFormula bexists(std::string var, const ATerm& bound,
                          const AFormula& body);
  static AFormula box(const AxExpr& ax, const AFormula& body);
  static AFormula dia(const AxExpr& ax, const AFormula& body);

  Kind kind() const;
  ATerm lterm() const;                     // Eq / Leq
  ATerm rterm() const;                     // Eq / Leq
  const std::string& symbol() const;       // Pred
  const std::vector<ATerm>& args() const;  // Pred
  AFormula left() const;                   // And / Or / Imp
  AFormula right() const;                  // And / Or / Imp
  const std::string& var() const;          // quantifiers
  ATerm bound() const;                     // BForall / BExists
  AFormula body() const;  // Not / quantifiers / Box / Dia
  AxExpr ax() const;      // Box / Dia

  bool operator==(const AFormula& o) const;
  bool operator!=(const AFormula& o) const { return !(*this == o); }
  std::string str() const;

  AFormula() : AFormula(falsum()) {}

  struct Node;

 private:
  explicit AFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
  friend class AxExpr;
};

/// Parsers for the prefix print format (inverse of str()).
AFormula parse_arith(const std::string& text);
ATerm parse_arith_term(const std::string& text);
AxExpr parse_ax(const std::string& text);

// ---------------------------------------------------------------------------
// Complexity classification

struct ComplexityClass {
  enum class Kind { Delta0, Sigma, Pi, DC };
  Kind kind = Kind::Delta0;
  int level = 0;  // Sigma / Pi only, >= 1

  static ComplexityClass delta0() { return {Kind::Delta0, 0}; }
  static ComplexityClass sigma(int n) { return {Kind::Sigma, n}; }
  static ComplexityClass pi(int n) { return {Kind::Pi, n}; }
  static ComplexityClass dc() { return {Kind::DC, 0}; }

  bool operator==(const ComplexityClass&) const = default;
  std::string str() const;
};

/// Lattice order: Delta0 below everything; Sigma_n <= Sigma_m iff n <= m,
/// Sigma_n <= Pi_m iff n < m (and dually); Sigma1, Pi1 <= DC <= Sigma2, Pi2.
bool leq(ComplexityClass a, ComplexityClass b);
ComplexityClass join(ComplexityClass a, ComplexityClass b);
/// Class of the negation.
ComplexityClass flip(ComplexityClass c);

ComplexityClass classify(const AFormula& f);
ComplexityClass classify_ax(const AxExpr& ax);

/// Identity modulo the DC widening: returns Sigma2 on DC input.
ComplexityClass widen_dc(ComplexityClass c);

// ---------------------------------------------------------------------------
// Structural operations

std::set<std::string> free_vars_arith(const AFormula& f);
std::set<std::string> free_vars_arith(const ATerm& t);

/// Capture-avoiding for our use cases: substituting closed terms. Bound
/// occurrences shadow as usual.
AFormula subst_arith(const AFormula& f, const std::string& var,
                     const ATerm& t);
ATerm subst_arith(const ATerm& s, const std::string& var, const ATerm& t);

/// Folds ground Mod / Proj applications of numerals into numerals.
ATerm fold_ground(const ATerm& t);
AFormula fold_ground(const AFormula& f);

/// Quantifier prefix followed by a quantifier-free matrix (Box/Dia count
/// as atoms; bounded quantifiers are allowed in the matrix).
bool is_prenex(const AFormula& f);

/// Lemma-4.1 shape merge: both inputs exists-forall-prenex with Delta0
/// matrices; output is the paired Sigma2 disjunction.
AFormula merge_sigma2_disjunction(const AFormula& f0, const AFormula& f1);

/// From a Pi1 formula (forall x delta) to the Sigma1 (exists x (not delta)).
AFormula pi1_to_neg_neg_sigma1(const AFormula& pi);

/// Inserts a double negation after every maximal universal quantifier
/// block of a prenex formula.
AFormula kuroda_body(const AFormula& f);

// ---------------------------------------------------------------------------
// Bounded evaluation

/// Truth tables for uninterpreted predicates and verdicts for Box/Dia
/// atoms; a Box/Dia is keyed by its axiomatization and its body closed
/// under the environment (with ground terms folded).
struct BoundedOracle {
  std::function<bool(const std::string& symbol,
                     const std::vector<long long>& args)> pred;
  std::function<bool(bool is_box, const AxExpr& ax,
                     const AFormula& closed_body)> modal;
};

long long eval_term(const ATerm& t,
                    const std::map<std::string, long long>& env);

bool eval_bounded(const AFormula& f, long long B, const BoundedOracle& oracle,
                  std::map<std::string, long long> env = {});

/// Cantor pairing helpers (total inverse on naturals).
long long cantor_pair(long long a, long long b);
long long cantor_proj0(long long z);
long long cantor_proj1(long long z);

}  // namespace spc
