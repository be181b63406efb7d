#include "spc/realize.hpp"

#include <algorithm>

#include "json.hpp"

namespace spc {

using nlohmann::json;

namespace {

std::string placeholder(int l) { return "a" + std::to_string(l); }

ATerm yz_term(const Term& t) {
  return ATerm::var((t.kind == Term::Kind::Var ? "y" : "z") +
                    std::to_string(t.index));
}

AFormula arith_truth() { return AFormula::eq(ATerm::num(0), ATerm::num(0)); }

}  // namespace

void validate(const FinitaryRealization& r) {
  for (const auto& [name, entry] : r.entries) {
    ComplexityClass actual = classify(entry.formula);
    if (!leq(actual, entry.declared))
      throw RealizeError("realization entry " + name + " declares " +
                         entry.declared.str() + " but classifies as " +
                         actual.str());
  }
}

void validate(const InfinitaryRealization& r) {
  for (const auto& [name, ax] : r.entries) {
    ComplexityClass actual = classify_ax(ax);
    if (!leq(actual, ComplexityClass::sigma(1)))
      throw RealizeError("infinitary entry " + name +
                         " is not Sigma1 (got " + actual.str() + ")");
  }
}

AFormula extend_finitary(const FinitaryRealization& r,
                         const std::string& theory, const Formula& phi) {
  using K = Formula::Kind;
  switch (phi.kind()) {
    case K::Top:
      return arith_truth();
    case K::Atom: {
      auto it = r.entries.find(phi.pred());
      if (it == r.entries.end())
        throw RealizeError("no realization entry for predicate " +
                           phi.pred());
      AFormula f = it->second.formula;
      for (std::size_t l = 0; l < phi.args().size(); ++l)
        f = subst_arith(f, placeholder(static_cast<int>(l)),
                        yz_term(phi.args()[l]));
      return f;
    }
    case K::Conj:
      return AFormula::conj(extend_finitary(r, theory, phi.left()),
                            extend_finitary(r, theory, phi.right()));
    case K::Diamond:
      if (phi.dia_index() != 0)
        throw RealizeError("finitary realization is monomodal");
      return AFormula::dia(AxExpr::named(theory),
                           extend_finitary(r, theory, phi.body()));
    case K::Forall:
      return AFormula::forall("y" + std::to_string(phi.var()),
                              extend_finitary(r, theory, phi.body()));
  }
  throw RealizeError("unreachable");
}

namespace {

AxExpr subst_placeholders(AxExpr ax, const std::vector<Term>& args) {
  for (std::size_t l = 0; l < args.size(); ++l) {
    // reuse formula-level substitution through a box wrapper
    AFormula wrapped = AFormula::box(ax, arith_truth());
    wrapped = subst_arith(wrapped, placeholder(static_cast<int>(l)),
                          yz_term(args[l]));
    ax = wrapped.ax();
  }
  return ax;
}

}  // namespace

AxExpr extend_infinitary(const InfinitaryRealization& r, const AxExpr& tau,
                         const Formula& phi) {
  if (!leq(classify_ax(tau), ComplexityClass::sigma(1)))
    throw RealizeError("infinitary base axiomatization is not Sigma1 (got " +
                       classify_ax(tau).str() + ")");
  using K = Formula::Kind;
  switch (phi.kind()) {
    case K::Top:
      return tau;
    case K::Atom: {
      auto it = r.entries.find(phi.pred());
      if (it == r.entries.end())
        throw RealizeError("no realization entry for predicate " +
                           phi.pred());
      return AxExpr::or_ax(subst_placeholders(it->second, phi.args()), tau);
    }
    case K::Conj:
      return AxExpr::or_ax(extend_infinitary(r, tau, phi.left()),
                           extend_infinitary(r, tau, phi.right()));
    case K::Diamond: {
      if (phi.dia_index() != 0)
        throw RealizeError("infinitary realization is monomodal");
      AxExpr inner = extend_infinitary(r, tau, phi.body());
      return AxExpr::or_ax(
          tau, AxExpr::eq_quote(AFormula::dia(inner, arith_truth())));
    }
    case K::Forall:
      return AxExpr::exists_ax("y" + std::to_string(phi.var()),
                               extend_infinitary(r, tau, phi.body()));
  }
  throw RealizeError("unreachable");
}

InfinitaryRealization lift_finitary_to_infinitary(
    const FinitaryRealization& r) {
  InfinitaryRealization out;
  for (const auto& [name, entry] : r.entries)
    out.entries.emplace(name, AxExpr::eq_quote(entry.formula));
  return out;
}

// ---------------------------------------------------------------------------
// Solovay-style embedding

SolovayContext make_solovay_context(const SheafModel& base,
                                    const Signature& sig) {
  if (!base.constant_domain())
    throw RealizeError("solovay context requires a constant-domain model");
  base.validate(sig);
  int n = base.worlds, m = base.domain_size[0];
  for (int w = 0; w < n; ++w)
    if (base.rel[w][w])
      throw RealizeError("solovay context requires an irreflexive model");
  for (int w = 0; w < n; ++w)
    for (int u = 0; u < n; ++u)
      if (base.rel[w][u])
        for (int v = 0; v < n; ++v)
          if (base.rel[u][v] && !base.rel[w][v])
            throw RealizeError("solovay context requires a transitive model");
  SolovayContext ctx;
  ctx.sig = sig;
  SheafModel& mm = ctx.model;
  mm.worlds = n + 1;
  mm.rel.assign(n + 1, std::vector<bool>(n + 1, false));
  for (int u = 1; u <= n; ++u) mm.rel[0][u] = true;
  for (int w = 0; w < n; ++w)
    for (int u = 0; u < n; ++u) mm.rel[w + 1][u + 1] = base.rel[w][u];
  mm.domain_size.assign(n + 1, m);
  for (const auto& [name, per_world] : base.interp) {
    auto& out = mm.interp[name];
    out.assign(n + 1, {});
    for (int w = 0; w < n; ++w) out[w + 1] = per_world[w];
  }
  for (const auto& [c, vals] : base.const_interp) {
    for (int w = 1; w < n; ++w)
      if (vals[w] != vals[0])
        throw RealizeError("constant c" + std::to_string(c) +
                           " must have one world-independent value");
    mm.const_interp[c] = std::vector<int>(n + 1, vals.empty() ? 0 : vals[0]);
  }
  return ctx;
}

AFormula lambda_sentence(const SolovayContext& ctx, int i) {
  if (i < 0 || i > ctx.N())
    throw RealizeError("lambda index " + std::to_string(i) +
                       " out of range 0.." + std::to_string(ctx.N()));
  ATerm x = ATerm::var("x"), y = ATerm::var("y"), idx = ATerm::num(i);
  const std::string& F = ctx.fun_symbol;
  AFormula reached = AFormula::exists("x", AFormula::pred(F, {x, idx}));
  AFormula stable = AFormula::forall(
      "x",
      AFormula::forall(
          "y", AFormula::imp(AFormula::leq(x, y),
                             AFormula::imp(AFormula::pred(F, {x, idx}),
                                           AFormula::pred(F, {y, idx})))));
  return AFormula::conj(reached, stable);
}

AFormula solovay_realize(const SolovayContext& ctx, const std::string& S,
                         const std::vector<Term>& args) {
  if (!ctx.sig.has_predicate(S))
    throw RealizeError("unknown predicate " + S);
  if (ctx.sig.arity(S) != static_cast<int>(args.size()))
    throw RealizeError("predicate " + S + " expects " +
                       std::to_string(ctx.sig.arity(S)) + " arguments");
  long long m = ctx.m();
  auto it = ctx.model.interp.find(S);
  AFormula out;
  bool first_i = true;
  for (int i = 0; i <= ctx.N(); ++i) {
    AFormula phi_i = AFormula::falsum();
    if (it != ctx.model.interp.end()) {
      bool first_t = true;
      for (const std::vector<int>& tuple : it->second[i]) {
        AFormula conj;
        bool first_l = true;
        for (std::size_t l = 0; l < args.size(); ++l) {
          AFormula eq = AFormula::eq(ATerm::num(tuple[l]),
                                     ATerm::mod(yz_term(args[l]), m));
          conj = first_l ? eq : AFormula::conj(conj, eq);
          first_l = false;
        }
        if (first_l) conj = arith_truth();  // 0-ary predicate
        phi_i = first_t ? conj : AFormula::disj(phi_i, conj);
        first_t = false;
      }
    }
    AFormula disjunct = AFormula::conj(lambda_sentence(ctx, i), phi_i);
    out = first_i ? disjunct : AFormula::disj(out, disjunct);
    first_i = false;
  }
  return out;
}

AFormula extend_solovay(const SolovayContext& ctx, const std::string& theory,
                        const Formula& phi) {
  using K = Formula::Kind;
  switch (phi.kind()) {
    case K::Top:
      return arith_truth();
    case K::Atom:
      return solovay_realize(ctx, phi.pred(), phi.args());
    case K::Conj:
      return AFormula::conj(extend_solovay(ctx, theory, phi.left()),
                            extend_solovay(ctx, theory, phi.right()));
    case K::Diamond:
      if (phi.dia_index() != 0)
        throw RealizeError("solovay realization is monomodal");
      return AFormula::dia(AxExpr::named(theory),
                           extend_solovay(ctx, theory, phi.body()));
    case K::Forall:
      return AFormula::forall("y" + std::to_string(phi.var()),
                              extend_solovay(ctx, theory, phi.body()));
  }
  throw RealizeError("unreachable");
}

// ---------------------------------------------------------------------------
// mod-m guardedness and expansion

namespace {

bool term_guarded(const ATerm& t, const std::string& u, long long m) {
  switch (t.kind()) {
    case ATerm::Kind::Var:
      return t.name() != u;
    case ATerm::Kind::Num:
      return true;
    case ATerm::Kind::Mod:
      if (t.arg().kind() == ATerm::Kind::Var && t.arg().name() == u)
        return t.modulus() == m;
      return term_guarded(t.arg(), u, m);
    case ATerm::Kind::Proj0:
    case ATerm::Kind::Proj1:
      return term_guarded(t.arg(), u, m);
  }
  return true;
}

bool ax_guarded(const AxExpr& ax, const std::string& u, long long m);

bool formula_guarded(const AFormula& f, const std::string& u, long long m) {
  using K = AFormula::Kind;
  switch (f.kind()) {
    case K::Falsum:
      return true;
    case K::Eq:
    case K::Leq:
      return term_guarded(f.lterm(), u, m) && term_guarded(f.rterm(), u, m);
    case K::Pred:
      for (const ATerm& t : f.args())
        if (!term_guarded(t, u, m)) return false;
      return true;
    case K::And:
    case K::Or:
    case K::Imp:
      return formula_guarded(f.left(), u, m) &&
             formula_guarded(f.right(), u, m);
    case K::Not:
      return formula_guarded(f.body(), u, m);
    case K::Forall:
    case K::Exists:
      if (f.var() == u) return true;  // occurrences below are bound
      return formula_guarded(f.body(), u, m);
    case K::BForall:
    case K::BExists:
      if (!term_guarded(f.bound(), u, m)) return false;
      if (f.var() == u) return true;
      return formula_guarded(f.body(), u, m);
    case K::Box:
    case K::Dia:
      return ax_guarded(f.ax(), u, m) && formula_guarded(f.body(), u, m);
  }
  return true;
}

bool ax_guarded(const AxExpr& ax, const std::string& u, long long m) {
  using K = AxExpr::Kind;
  switch (ax.kind()) {
    case K::Named:
      return true;
    case K::OrAx:
      return ax_guarded(ax.left(), u, m) && ax_guarded(ax.right(), u, m);
    case K::EqQuote:
      return formula_guarded(ax.quoted(), u, m);
    case K::PredAx:
      for (const ATerm& t : ax.args())
        if (!term_guarded(t, u, m)) return false;
      return true;
    case K::ExistsAx:
      if (ax.var() == u) return true;
      return ax_guarded(ax.body(), u, m);
  }
  return true;
}

}  // namespace

bool var_mod_guarded(const AFormula& f, const std::string& u, long long m) {
  return formula_guarded(f, u, m);
}

AFormula expand_mod_quantifier(const AFormula& f, const std::string& u,
                               long long m) {
  if (m < 1) throw RealizeError("expand_mod_quantifier: modulus must be >= 1");
  if (!var_mod_guarded(f, u, m))
    throw RealizeError("expand_mod_quantifier: an occurrence of " + u +
                       " is not guarded by mod " + std::to_string(m));
  AFormula out;
  for (long long k = 0; k < m; ++k) {
    AFormula inst = fold_ground(subst_arith(f, u, ATerm::num(k)));
    out = k == 0 ? inst : AFormula::conj(out, inst);
  }
  return out;
}

AFormula full_mod_expansion(const AFormula& f, long long m) {
  using K = AFormula::Kind;
  switch (f.kind()) {
    case K::Falsum:
    case K::Eq:
    case K::Leq:
    case K::Pred:
      return f;
    case K::And:
      return AFormula::conj(full_mod_expansion(f.left(), m),
                            full_mod_expansion(f.right(), m));
    case K::Or:
      return AFormula::disj(full_mod_expansion(f.left(), m),
                            full_mod_expansion(f.right(), m));
    case K::Imp:
      return AFormula::imp(full_mod_expansion(f.left(), m),
                           full_mod_expansion(f.right(), m));
    case K::Not:
      return AFormula::neg(full_mod_expansion(f.body(), m));
    case K::Forall: {
      AFormula b = full_mod_expansion(f.body(), m);
      if (var_mod_guarded(b, f.var(), m) &&
          free_vars_arith(b).count(f.var()))
        return expand_mod_quantifier(b, f.var(), m);
      if (!free_vars_arith(b).count(f.var())) return b;
      return AFormula::forall(f.var(), b);
    }
    case K::Exists:
      return AFormula::exists(f.var(), full_mod_expansion(f.body(), m));
    case K::BForall:
      return AFormula::bforall(f.var(), f.bound(),
                               full_mod_expansion(f.body(), m));
    case K::BExists:
      return AFormula::bexists(f.var(), f.bound(),
                               full_mod_expansion(f.body(), m));
    case K::Box:
      return AFormula::box(f.ax(), full_mod_expansion(f.body(), m));
    case K::Dia:
      return AFormula::dia(f.ax(), full_mod_expansion(f.body(), m));
  }
  return f;
}

// ---------------------------------------------------------------------------
// Statement emission

namespace {

std::vector<std::string> closure_order(const std::set<std::string>& vars) {
  // y's before z's, ascending indices; anything else alphabetical last
  std::vector<std::pair<std::pair<int, long long>, std::string>> keyed;
  for (const std::string& v : vars) {
    int group = 2;
    long long idx = 0;
    if (v.size() > 1 && (v[0] == 'y' || v[0] == 'z') &&
        v.find_first_not_of("0123456789", 1) == std::string::npos) {
      group = v[0] == 'y' ? 0 : 1;
      idx = std::stoll(v.substr(1));
    }
    keyed.push_back({{group, idx}, v});
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<std::string> out;
  for (auto& [k, v] : keyed) out.push_back(v);
  return out;
}

AFormula close_universally(AFormula f, const std::set<std::string>& vars) {
  std::vector<std::string> order = closure_order(vars);
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    f = AFormula::forall(*it, f);
  return f;
}

}  // namespace

AFormula emit_qpl_statement(const FinitaryRealization& r,
                            const std::string& theory, const Sequent& s) {
  AFormula body = AFormula::imp(extend_finitary(r, theory, s.lhs),
                                extend_finitary(r, theory, s.rhs));
  return close_universally(body, free_vars_arith(body));
}

AFormula emit_rl_statement(const InfinitaryRealization& r, const AxExpr& tau,
                           const Sequent& s) {
  AxExpr lhs_ax = extend_infinitary(r, tau, s.lhs);
  AxExpr rhs_ax = extend_infinitary(r, tau, s.rhs);
  AFormula theta = AFormula::pred("theta", {});
  AFormula body = AFormula::imp(AFormula::box(rhs_ax, theta),
                                AFormula::box(lhs_ax, theta));
  std::set<std::string> vars = free_vars_arith(body);
  vars.erase("theta");
  return AFormula::forall("theta", close_universally(body, vars));
}

// ---------------------------------------------------------------------------
// Realization files

ComplexityClass parse_class(const std::string& name) {
  if (name == "Delta0") return ComplexityClass::delta0();
  if (name == "DC" || name == "DC(Pi1,Sigma1)") return ComplexityClass::dc();
  auto tail = [&](std::size_t n) {
    try {
      return std::stoi(name.substr(n));
    } catch (const std::exception&) {
      throw RealizeError("unknown complexity class '" + name + "'");
    }
  };
  if (name.rfind("Sigma", 0) == 0)
    return ComplexityClass::sigma(tail(5));
  if (name.rfind("Pi", 0) == 0) return ComplexityClass::pi(tail(2));
  throw RealizeError("unknown complexity class '" + name + "'");
}

FinitaryRealization load_finitary(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw RealizeError(std::string("realization file is not valid JSON: ") +
                       e.what());
  }
  FinitaryRealization r;
  for (const auto& [name, entry] : j.items()) {
    FinitaryEntry fe;
    fe.formula = parse_arith(entry.at("formula").get<std::string>());
    if (entry.contains("class"))
      fe.declared = parse_class(entry.at("class").get<std::string>());
    else
      fe.declared = classify(fe.formula);
    r.entries.emplace(name, std::move(fe));
  }
  validate(r);
  return r;
}

std::string save_finitary(const FinitaryRealization& r) {
  json j = json::object();
  for (const auto& [name, entry] : r.entries) {
    j[name] = {{"formula", entry.formula.str()},
               {"class", entry.declared.str()}};
  }
  return j.dump(2);
}

}  // namespace spc
