#pragma once

#include <map>
#include <string>
#include <vector>

#include "spc/arith.hpp"
#include "spc/formula.hpp"
#include "spc/kripke.hpp"

namespace spc {

struct RealizeError : Error {
  explicit RealizeError(const std::string& what) : Error(what) {}
};

/// Entry formulas are written over placeholder variables a0..a{n-1}, one
/// per predicate argument position. Extension substitutes them
/// positionally: a modal argument x_k becomes y_k, a constant c_k becomes
/// z_k.
struct FinitaryEntry {
  AFormula formula;
  ComplexityClass declared = ComplexityClass::delta0();
};

struct FinitaryRealization {
  std::map<std::string, FinitaryEntry> entries;
};

/// Infinitary entries are axiomatization expressions over the same
/// placeholders (plus the implicit u); they must classify as Sigma1.
struct InfinitaryRealization {
  std::map<std::string, AxExpr> entries;
};

/// Checks each declared class against classify. Throws RealizeError.
void validate(const FinitaryRealization& r);
void validate(const InfinitaryRealization& r);

/// The finitary translation: T becomes (0=0), conjunction stays, diamond
/// becomes Dia over the named theory, a modal quantifier over x_k becomes
/// a quantifier over y_k.
AFormula extend_finitary(const FinitaryRealization& r,
                         const std::string& theory, const Formula& phi);

/// The infinitary translation into axiomatizations: T becomes tau,
/// conjunction becomes a union (or-ax) of axiom sets, diamond quotes the
/// consistency statement, a modal quantifier flips to exists-ax.
AxExpr extend_infinitary(const InfinitaryRealization& r, const AxExpr& tau,
                         const Formula& phi);

/// Each finitary entry becomes the axiomatization u = (quote of entry).
InfinitaryRealization lift_finitary_to_infinitary(
    const FinitaryRealization& r);

/// A finite constant-domain model with an added root world 0, plus the
/// naming conventions of the Solovay-style embedding. Elements 0..m-1 are
/// their own numerals.
struct SolovayContext {
  SheafModel model;  // worlds 0..N, world 0 sees all others
  Signature sig;
  std::string fun_symbol = "F";  // graph of the Solovay function

  int N() const { return model.worlds - 1; }
  int m() const { return model.domain_size.at(0); }
};

/// Adds the fresh root. The base model must be constant-domain,
/// irreflexive and transitive, with world-independent constants.
SolovayContext make_solovay_context(const SheafModel& base,
                                    const Signature& sig);

/// (exists x F(x,i)) and (forall x forall y (x<=y -> (F(x,i) -> F(y,i)))).
AFormula lambda_sentence(const SolovayContext& ctx, int i);

/// S(t)~ as the disjunction over worlds of lambda_i and the tuple
/// disjunction Phi_i, with every variable guarded by mod m.
AFormula solovay_realize(const SolovayContext& ctx, const std::string& S,
                         const std::vector<Term>& args);

/// extend_finitary over the solovay_realize atom entries.
AFormula extend_solovay(const SolovayContext& ctx, const std::string& theory,
                        const Formula& phi);

/// True when every free occurrence of u in f sits directly under
/// (mod . m).
bool var_mod_guarded(const AFormula& f, const std::string& u, long long m);

/// Conjunction of f[u <- 0] .. f[u <- m-1] with ground mods folded.
/// Throws RealizeError when some free occurrence of u is unguarded.
AFormula expand_mod_quantifier(const AFormula& f, const std::string& u,
                               long long m);

/// Expands every universal quantifier whose variable is mod-m guarded in
/// its (already expanded) body, everywhere in the formula.
AFormula full_mod_expansion(const AFormula& f, long long m);

/// Universal closure of lhs* -> rhs* over its free variables, y's before
/// z's, ascending indices.
AFormula emit_qpl_statement(const FinitaryRealization& r,
                            const std::string& theory, const Sequent& s);

/// forall theta (and y, z): Box_{rhs} theta -> Box_{lhs} theta.
AFormula emit_rl_statement(const InfinitaryRealization& r, const AxExpr& tau,
                           const Sequent& s);

/// JSON realization files: map from predicate name to
/// {"formula": <prefix text>, "class": <class name>}.
FinitaryRealization load_finitary(const std::string& json_text);
std::string save_finitary(const FinitaryRealization& r);

ComplexityClass parse_class(const std::string& name);

}  // namespace spc
