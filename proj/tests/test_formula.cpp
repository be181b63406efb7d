#include <set>

#include "doctest.h"
#include "gen.hpp"
#include "spc/formula.hpp"

using namespace spc;

namespace {

Signature sig_pq() {
  Signature s;
  s.predicates = {{"p", 0}, {"q", 0}};
  return s;
}

Signature sig_q() {
  Signature s;
  s.predicates = {{"P", 1}, {"S", 2}};
  s.constants = {0};
  return s;
}

}  // namespace

TEST_CASE("parse builds the expected ASTs") {
  Sequent s = parse_sequent("<><>p |- <>p", sig_pq(), Mode::Propositional);
  CHECK(s.lhs == Formula::dia(0, Formula::dia(0, Formula::atom("p"))));
  CHECK(s.rhs == Formula::dia(0, Formula::atom("p")));

  Formula f = parse_formula("A x0. <>P(x0)", sig_q(), Mode::Quantified);
  CHECK(f == Formula::forall(
                 0, Formula::dia(0, Formula::atom("P", {Term::var(0)}))));

  Formula g = parse_formula("<1>p & <0>q", sig_pq(), Mode::Polymodal);
  CHECK(g == Formula::conj(Formula::dia(1, Formula::atom("p")),
                           Formula::dia(0, Formula::atom("q"))));
}

TEST_CASE("precedence and associativity") {
  Signature s = sig_pq();
  // Diamond binds tighter than conjunction.
  CHECK(parse_formula("<>p & q", s, Mode::Propositional) ==
        Formula::conj(Formula::dia(0, Formula::atom("p")), Formula::atom("q")));
  // Conjunction is left-associative.
  Formula pq = Formula::conj(Formula::atom("p"), Formula::atom("q"));
  CHECK(parse_formula("p & q & p", s, Mode::Propositional) ==
        Formula::conj(pq, Formula::atom("p")));
  // Quantifier scope extends as far right as the parenthesization allows.
  Formula h = parse_formula("A x0. P(x0) & p", infer_signature("A x0. P(x0) & p"),
                            Mode::Quantified);
  CHECK(h.kind() == Formula::Kind::Conj);
  CHECK(h.left().kind() == Formula::Kind::Forall);
}

TEST_CASE("parse errors carry positions and modes are enforced") {
  Signature s = sig_pq();
  CHECK_THROWS_AS(parse_formula("p &", s, Mode::Propositional), ParseError);
  try {
    parse_formula("p & & q", s, Mode::Propositional);
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.pos >= 3);
    CHECK(e.pos <= 5);
  }
  // Quantifiers and indexed diamonds are rejected outside their mode.
  CHECK_THROWS(parse_formula("A x0. p", s, Mode::Propositional));
  CHECK_THROWS(parse_formula("<1>p", s, Mode::Propositional));
  CHECK_THROWS(parse_formula("A x0. p", s, Mode::Polymodal));
  // Arity mismatch.
  CHECK_THROWS(parse_formula("P(x0, x1)", sig_q(), Mode::Quantified));
}

TEST_CASE("free variables") {
  Formula px0 = Formula::atom("P", {Term::var(0)});
  CHECK(free_vars(Formula::forall(0, px0)).empty());
  CHECK(free_vars(Formula::dia(0, px0)) == std::set<int>{0});
  Formula s01 = Formula::atom("S", {Term::var(0), Term::var(1)});
  CHECK(free_vars(Formula::forall(0, s01)) == std::set<int>{1});
}

TEST_CASE("substitution and freeness") {
  Formula px0 = Formula::atom("P", {Term::var(0)});
  CHECK(substitute(Formula::dia(0, px0), 0, Term::constant(0)) ==
        Formula::dia(0, Formula::atom("P", {Term::constant(0)})));
  CHECK(substitute(Formula::forall(0, px0), 0, Term::constant(0)) ==
        Formula::forall(0, px0));

  Formula s01 = Formula::forall(1, Formula::atom("S", {Term::var(0), Term::var(1)}));
  CHECK_THROWS_AS(substitute(s01, 0, Term::var(1)), CaptureError);
  CHECK(is_free_for(Term::constant(0), 0, s01));
  CHECK_FALSE(is_free_for(Term::var(1), 0, s01));
  CHECK(is_free_for(Term::var(2), 0, s01));
}

TEST_CASE("modal depth") {
  CHECK(modal_depth(Formula::top()) == 0);
  Formula p = Formula::atom("p");
  CHECK(modal_depth(Formula::dia(0, Formula::dia(0, p))) == 2);
  Formula px0 = Formula::atom("P", {Term::var(0)});
  Formula f = Formula::conj(
      Formula::dia(0, p),
      Formula::forall(0, Formula::dia(0, Formula::dia(0, px0))));
  CHECK(modal_depth(f) == 2);
}

TEST_CASE("symbols") {
  CHECK(symbols_of(Formula::dia(0, Formula::atom("P", {Term::constant(0)}))) ==
        std::set<std::string>{"P", "c0"});
  CHECK(symbols_of(Formula::top()).empty());
  CHECK(symbols_of(Formula::conj(Formula::atom("p"), Formula::atom("q"))) ==
        std::set<std::string>{"p", "q"});
}

TEST_CASE("print round-trips for random formulas in every mode") {
  for (Mode mode : {Mode::Propositional, Mode::Polymodal, Mode::Quantified}) {
    gen::Rng rng(7 + static_cast<int>(mode));
    for (int i = 0; i < 150; ++i) {
      Formula f = gen::random_modal(rng, mode, 1 + rng.below(4));
      Signature sig = infer_signature(f.str());
      CHECK(parse_formula(f.str(), sig, mode) == f);
    }
  }
}

TEST_CASE("substitute identity and free-variable bookkeeping") {
  gen::Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    Formula f = gen::random_modal(rng, Mode::Quantified, 1 + rng.below(3));
    CHECK(substitute(f, 0, Term::var(0)) == f);
    Term t = Term::constant(0);
    Formula g = substitute(f, 0, t);
    std::set<int> expect = free_vars(f);
    expect.erase(0);
    CHECK(free_vars(g) == expect);
  }
}

TEST_CASE("infer_signature and helpers") {
  Signature s = infer_signature("A x0. S(x0, c1) |- <>p");
  CHECK(s.arity("S") == 2);
  CHECK(s.arity("p") == 0);
  CHECK(s.constants == std::set<int>{1});
  // Inconsistent arity across occurrences.
  CHECK_THROWS(infer_signature("P(x0) & P(x0, x1)"));

  Sequent q = parse_sequent("<1><2>p |- <0>p", infer_signature("<1><2>p |- <0>p"),
                            Mode::Polymodal);
  CHECK(mode_of(q) == Mode::Polymodal);
  CHECK(dia_indices_of(q.lhs) == std::set<int>{1, 2});
  Formula f = parse_formula("p & q & <>p", sig_pq(), Mode::Propositional);
  CHECK(flatten_conj(f).size() == 3);
}
