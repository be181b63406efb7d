#include "doctest.h"
#include "gen.hpp"
#include "spc/realize.hpp"

using namespace spc;
using AF = AFormula;
using CC = ComplexityClass;

namespace {

FinitaryRealization simple_realization() {
  FinitaryRealization r;
  r.entries["p"] = {parse_arith("(exists w (eq w (num 0)))"), CC::sigma(1)};
  r.entries["q"] = {parse_arith("(eq (num 1) (num 1))"), CC::delta0()};
  r.entries["P"] = {parse_arith("(exists w (eq a0 w))"), CC::sigma(1)};
  return r;
}

// One-world base model, domain {0}, unary S interpreted as {<0>}.
SolovayContext small_context() {
  SheafModel base;
  base.worlds = 1;
  base.rel = {{false}};
  base.domain_size = {1};
  base.interp["S"] = {{{0}}};
  Signature sig;
  sig.predicates = {{"S", 1}};
  return make_solovay_context(base, sig);
}

Formula modal(const std::string& text) {
  return parse_formula(text, infer_signature(text), Mode::Quantified);
}

}  // namespace

TEST_CASE("finitary extension") {
  FinitaryRealization r = simple_realization();
  validate(r);
  CHECK(extend_finitary(r, "HA", modal("<>p")).str() ==
        "(dia (named HA) (exists w (eq w (num 0))))");
  CHECK(extend_finitary(r, "T", modal("A x0. P(x0)")).str() ==
        "(forall y0 (exists w (eq y0 w)))");
  CHECK(extend_finitary(r, "T", modal("T")).str() == "(eq (num 0) (num 0))");
  CHECK(extend_finitary(r, "T", modal("P(c2)")).str() ==
        "(exists w (eq z2 w))");
  CHECK(extend_finitary(r, "T", modal("p & q")).str() ==
        "(and (exists w (eq w (num 0))) (eq (num 1) (num 1)))");
  FinitaryRealization missing;
  CHECK_THROWS_AS(extend_finitary(missing, "T", modal("p")), RealizeError);
}

TEST_CASE("declared classes are validated") {
  FinitaryRealization bad;
  bad.entries["p"] = {parse_arith("(exists w (eq w w))"), CC::delta0()};
  CHECK_THROWS_AS(validate(bad), RealizeError);
}

TEST_CASE("infinitary extension") {
  InfinitaryRealization r = lift_finitary_to_infinitary(simple_realization());
  AxExpr tau = AxExpr::named("T");
  CHECK(extend_infinitary(r, tau, modal("T")) == tau);
  AxExpr pq = extend_infinitary(r, tau, modal("p & q"));
  REQUIRE(pq.kind() == AxExpr::Kind::OrAx);
  // Atom entries are quotes of the finitary entries, joined with tau.
  CHECK(pq.left().str() ==
        "(or-ax (eq-quote (exists w (eq w (num 0)))) (named T))");
  AxExpr all = extend_infinitary(r, tau, modal("A x0. P(x0)"));
  REQUIRE(all.kind() == AxExpr::Kind::ExistsAx);
  CHECK(all.var() == "y0");
  AxExpr dia = extend_infinitary(r, tau, modal("<>q"));
  REQUIRE(dia.kind() == AxExpr::Kind::OrAx);
  CHECK(dia.left() == tau);
  CHECK(dia.right().kind() == AxExpr::Kind::EqQuote);
  CHECK(dia.right().quoted().kind() == AF::Kind::Dia);
  // Every extension stays Sigma1.
  for (const Formula& f : {modal("T"), modal("p & q"), modal("<> A x0. P(x0)")})
    CHECK(leq(classify_ax(extend_infinitary(r, tau, f)), CC::sigma(1)));
}

TEST_CASE("lambda sentences") {
  SolovayContext ctx = small_context();
  CHECK(ctx.N() == 1);
  CHECK(ctx.m() == 1);
  AF lam = lambda_sentence(ctx, 0);
  CHECK(lam.str() ==
        "(and (exists x (F x (num 0)))"
        " (forall x (forall y (imp (le x y) (imp (F x (num 0)) (F y (num 0)))))))");
  CHECK(classify(lam) == CC::dc());
  CHECK_THROWS_AS(lambda_sentence(ctx, 2), RealizeError);
}

TEST_CASE("solovay realization matches the reference shape") {
  SolovayContext ctx = small_context();
  AF s = solovay_realize(ctx, "S", {Term::var(0)});
  std::string lam0 = lambda_sentence(ctx, 0).str();
  std::string lam1 = lambda_sentence(ctx, 1).str();
  CHECK(s.str() == "(or (and " + lam0 + " (false)) (and " + lam1 +
                       " (eq (num 0) (mod y0 1))))");
  CHECK(classify(s) == CC::dc());
  AF c = solovay_realize(ctx, "S", {Term::constant(0)});
  CHECK(c.str().find("(mod z0 1)") != std::string::npos);
  CHECK(c.str().find("y0") == std::string::npos);
}

TEST_CASE("solovay extension") {
  SolovayContext ctx = small_context();
  AF dia = extend_solovay(ctx, "T", modal("<>S(x0)"));
  REQUIRE(dia.kind() == AF::Kind::Dia);
  CHECK(dia.body() == solovay_realize(ctx, "S", {Term::var(0)}));
  AF all = extend_solovay(ctx, "T", modal("A x0. S(x0)"));
  REQUIRE(all.kind() == AF::Kind::Forall);
  CHECK(all.var() == "y0");
  CHECK(extend_solovay(ctx, "T", modal("T")).str() == "(eq (num 0) (num 0))");
}

TEST_CASE("guardedness") {
  SolovayContext ctx = small_context();
  AF s = solovay_realize(ctx, "S", {Term::var(0)});
  CHECK(var_mod_guarded(s, "y0", 1));
  CHECK_FALSE(var_mod_guarded(parse_arith("(eq y0 (num 0))"), "y0", 1));
  CHECK_FALSE(var_mod_guarded(parse_arith("(eq (mod y0 2) (num 0))"), "y0", 1));
  // Bound occurrences do not count.
  CHECK(var_mod_guarded(parse_arith("(forall y0 (eq y0 y0))"), "y0", 1));
}

TEST_CASE("mod quantifier expansion") {
  AF f = parse_arith("(G (mod u 2) (num 0))");
  AF e = expand_mod_quantifier(f, "u", 2);
  CHECK(e.str() == "(and (G (num 0) (num 0)) (G (num 1) (num 0)))");
  AF one = expand_mod_quantifier(parse_arith("(G (mod u 1) (num 0))"), "u", 1);
  CHECK(one.str() == "(G (num 0) (num 0))");
  CHECK_THROWS_AS(expand_mod_quantifier(parse_arith("(eq u u)"), "u", 2),
                  RealizeError);

  // Agreement with the cut universal quantifier.
  gen::Rng rng(29);
  for (int i = 0; i < 40; ++i) {
    long long m = 1 + rng.below(3);
    AF body = gen::random_delta0(rng, 2, {"s", "t"});
    AF guarded = subst_arith(body, "s", ATerm::mod(ATerm::var("u"), m));
    BoundedOracle o = gen::random_oracle(rng.next());
    bool all = true;
    for (long long v = 0; v <= 3 * m; ++v)
      all = all && eval_bounded(guarded, 6, o, {{"u", v}, {"t", 1}});
    AF ex = expand_mod_quantifier(guarded, "u", m);
    CHECK(all == eval_bounded(ex, 6, o, {{"t", 1}}));
  }
}

TEST_CASE("full mod expansion keeps solovay outputs in DC") {
  SolovayContext ctx = small_context();
  for (const char* text : {"A x0. S(x0)", "A x0. <>S(x0)", "<> A x0. S(x0)",
                           "S(x0) & A x1. S(x1)"}) {
    AF t = extend_solovay(ctx, "T", modal(text));
    AF e = full_mod_expansion(t, ctx.m());
    CHECK(leq(classify(e), CC::dc()));
    for (const std::string& v : free_vars_arith(e))
      CHECK(var_mod_guarded(e, v, ctx.m()));
  }
}

TEST_CASE("QPL statement golden") {
  FinitaryRealization r;
  r.entries["P"] = {parse_arith("(dia (named T) (Pstar a0))"), CC::pi(1)};
  Sequent s{modal("A x0. <>P(x0)"), modal("<>P(c0)")};
  CHECK(emit_qpl_statement(r, "T", s).str() ==
        "(forall z0 (imp (forall y0 (dia (named T) (dia (named T) (Pstar y0))))"
        " (dia (named T) (dia (named T) (Pstar z0)))))");
}

TEST_CASE("RL statement shape") {
  InfinitaryRealization r = lift_finitary_to_infinitary(simple_realization());
  AxExpr tau = AxExpr::named("T");
  AF rl = emit_rl_statement(r, tau, Sequent{modal("p"), modal("T")});
  REQUIRE(rl.kind() == AF::Kind::Forall);
  CHECK(rl.var() == "theta");
  AF body = rl.body();
  REQUIRE(body.kind() == AF::Kind::Imp);
  CHECK(body.left().kind() == AF::Kind::Box);
  CHECK(body.left().ax() == tau);  // rhs is T, axiomatized by tau itself
  CHECK(body.right().kind() == AF::Kind::Box);
}

TEST_CASE("realization files round-trip") {
  FinitaryRealization r = simple_realization();
  FinitaryRealization back = load_finitary(save_finitary(r));
  CHECK(back.entries.size() == r.entries.size());
  for (const auto& [name, e] : r.entries) {
    CHECK(back.entries.at(name).formula == e.formula);
    CHECK(back.entries.at(name).declared == e.declared);
  }
  CHECK(parse_class("Delta0") == CC::delta0());
  CHECK(parse_class("Sigma2") == CC::sigma(2));
  CHECK(parse_class("Pi1") == CC::pi(1));
  CHECK(parse_class("DC") == CC::dc());
  CHECK_THROWS_AS(parse_class("Sigma"), RealizeError);
}

TEST_CASE("solovay context validation") {
  SheafModel bad;
  bad.worlds = 2;
  bad.rel = {{false, true}, {false, false}};
  bad.domain_size = {1, 2};  // not constant-domain
  Signature sig;
  sig.predicates = {{"S", 1}};
  CHECK_THROWS_AS(make_solovay_context(bad, sig), RealizeError);
}
