#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "spc/formula.hpp"
#include "spc/kripke.hpp"

namespace spc {

enum class Logic { RC1, RCw, QRC1 };
std::string to_string(Logic l);

struct NotDerivable : Error {
  explicit NotDerivable(const std::string& what) : Error(what) {}
};
/// Raised when a derivable sequent breaks the interpolation signature
/// property; indicates a prover bug.
struct SignatureViolation : Error {
  explicit SignatureViolation(const std::string& what) : Error(what) {}
};

/// A rule label with its parameters. Arity and schema are fixed per kind.
struct Rule {
  enum class Kind {
    AxId,        // phi |- phi
    AxTop,       // phi |- T
    ConjElimL,   // a & b |- a
    ConjElimR,   // a & b |- b
    ConjIntro,   // phi|-a, phi|-b  =>  phi |- a&b
    Cut,         // phi|-a, a|-b    =>  phi |- b
    Nec,         // a|-b            =>  <i>a |- <i>b
    Trans,       // <i><i>a |- <i>a
    Mono,        // <a>phi |- <b>phi, a > b
    NegIntro,    // <a>phi & <b>psi |- <a>(phi & <b>psi), a > b
    AllIntroR,   // phi|-psi        =>  phi |- A x. psi   (x not free in phi)
    AllIntroL,   // phi[x<-t]|-psi  =>  A x. phi |- psi   (t free for x)
    TermInst,    // phi|-psi        =>  phi[x<-t] |- psi[x<-t]
    ConstElim,   // phi[x<-c]|-psi[x<-c] => phi|-psi  (c not in phi, psi)
  };

  Kind kind;
  int alpha = 0;        // modality index (Nec/Trans), or the larger index
  int beta = 0;         // the smaller index (Mono/NegIntro)
  int var = -1;         // quantifier rules: the variable x_k
  Term term{};          // AllIntroL/TermInst: t; ConstElim: the constant

  static Rule ax_id() { return {Kind::AxId}; }
  static Rule ax_top() { return {Kind::AxTop}; }
  static Rule conj_elim_l() { return {Kind::ConjElimL}; }
  static Rule conj_elim_r() { return {Kind::ConjElimR}; }
  static Rule conj_intro() { return {Kind::ConjIntro}; }
  static Rule cut() { return {Kind::Cut}; }
  static Rule nec(int i) { return {Kind::Nec, i}; }
  static Rule trans(int i) { return {Kind::Trans, i}; }
  static Rule mono(int a, int b) { return {Kind::Mono, a, b}; }
  static Rule neg_intro(int a, int b) { return {Kind::NegIntro, a, b}; }
  static Rule all_intro_r(int x) { return {Kind::AllIntroR, 0, 0, x}; }
  static Rule all_intro_l(int x, Term t) { return {Kind::AllIntroL, 0, 0, x, t}; }
  static Rule term_inst(int x, Term t) { return {Kind::TermInst, 0, 0, x, t}; }
  static Rule const_elim(int x, int c) {
    return {Kind::ConstElim, 0, 0, x, Term::constant(c)};
  }

  int arity() const;
  std::string label() const;
  std::string params() const;  // "" when the rule takes none
};

struct Derivation {
  Sequent conclusion;
  Rule rule;
  std::vector<Derivation> premises;

  /// Total symbol size: sum of both formula sizes over all nodes.
  int total_size() const;
};

struct CheckResult {
  bool ok = true;
  std::string message;
  std::vector<int> path;  // child indices to the first offending node
};

CheckResult check_derivation(const Derivation& d, Logic logic);

/// Indented text serialization, one node per line:
/// "rule-label [params] :: sequent", children indented two spaces.
std::string serialize(const Derivation& d);

/// RC1 decision procedure: flat-conjunct recursion, memoized.
/// Throws ModeError on quantified or polymodal input.
bool decide_rc1(const Sequent& s);

/// Same procedure with a memo table shared across calls.
class Rc1Decider {
 public:
  bool decide(const Sequent& s);

 private:
  std::unordered_map<Sequent, bool, Sequent::Hash> memo_;
};

/// Forward closure of the RC rules over the universe of all formulas of
/// size <= max_size built from the given 0-ary atoms and diamond indices.
/// Independent derivability oracle: every derivable pair carries a
/// reconstructible derivation.
class RcClosure {
 public:
  RcClosure(const std::vector<std::string>& atoms, int max_size, Logic logic,
            const std::vector<int>& indices = {0});

  const std::vector<Formula>& universe() const { return universe_; }
  std::optional<int> id_of(const Formula& f) const;

  /// Throws Error when a side of s lies outside the universe.
  bool derivable(const Sequent& s) const;
  bool derivable_ids(int a, int b) const;
  std::optional<Derivation> derivation(const Sequent& s) const;

 private:
  struct Just {
    Rule rule;
    std::int64_t prem1 = -1, prem2 = -1;  // edge keys
  };

  bool has(int a, int b) const;
  void add_edge(int a, int b, Just j);
  Derivation extract(std::int64_t edge) const;

  std::vector<Formula> universe_;
  std::unordered_map<Formula, int, Formula::Hash> ids_;
  std::vector<int> lid_, rid_;  // conjunction children, -1 otherwise
  std::vector<std::vector<int>> conj_left_, conj_right_;
  std::vector<std::vector<int>> dia_id_;  // [index pos][id] -> id of <i>f
  std::vector<int> indices_;
  std::size_t words_ = 0;
  std::vector<std::vector<std::uint64_t>> fwd_, bwd_;
  std::unordered_map<std::int64_t, Just> just_;
  std::vector<std::pair<int, int>> worklist_;
};

/// Proof search: goal-directed backward search (all logics) with a
/// forward-closure fallback for propositional sequents. The budget bounds
/// the backward search depth and the closure's formula-size cap. Returns
/// nullopt when the budget is exhausted (not a refutation).
std::optional<Derivation> prove(const Sequent& s, Logic logic, int budget);

struct QrcConfig {
  int max_rounds = 6;
  double wall_clock_cap_s = 0;  // 0 = none
};

struct QrcResult {
  enum class Verdict { Derivable, Underivable, Timeout };
  Verdict verdict;
  std::optional<Derivation> derivation;  // set when Derivable
  std::optional<SheafWitness> witness;   // set when Underivable
};

/// Dual search: deterministic round-robin between prove and
/// countermodel_search over increasing budgets.
QrcResult decide_qrc1(const Sequent& s, const QrcConfig& config = {});

/// Signature read off the sequent's own symbols.
Signature signature_of(const Sequent& s);

/// Returns rhs after confirming derivability and the symbol inclusion
/// symbols_of(rhs) <= symbols_of(lhs).
Formula interpolate(const Sequent& s, Logic logic);

}  // namespace spc
