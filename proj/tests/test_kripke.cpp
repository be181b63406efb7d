#include "doctest.h"
#include "gen.hpp"
#include "spc/kripke.hpp"

using namespace spc;

namespace {

// Two worlds, w=0 sees u=1, p holds only at u.
PropModel two_world() {
  PropModel m;
  m.worlds = 2;
  m.rel = {{false, true}, {false, false}};
  m.valuation["p"] = {1};
  return m;
}

// Constant domain {0,1}, worlds {0,1,2}, 0 R 1, 0 R 2, P = {0} at world 1
// and {1} at world 2.
SheafModel barcan_model() {
  SheafModel m;
  m.worlds = 3;
  m.rel = {{false, true, true},
           {false, false, false},
           {false, false, false}};
  m.domain_size = {2, 2, 2};
  m.interp["P"] = {{}, {{0}}, {{1}}};
  return m;
}

Signature sig_p1() {
  Signature s;
  s.predicates = {{"P", 1}};
  return s;
}

}  // namespace

TEST_CASE("propositional forcing") {
  PropModel m = two_world();
  Formula p = Formula::atom("p");
  CHECK(check_prop(m, 0, Formula::top()));
  CHECK(check_prop(m, 0, Formula::dia(0, p)));
  CHECK_FALSE(check_prop(m, 0, Formula::dia(0, Formula::dia(0, p))));
  CHECK_FALSE(check_prop(m, 0, p));
  CHECK(check_prop(m, 1, p));
}

TEST_CASE("sheaf forcing on the Barcan countermodel") {
  SheafModel m = barcan_model();
  m.validate(sig_p1());
  Formula px0 = Formula::atom("P", {Term::var(0)});
  Formula all_dia = Formula::forall(0, Formula::dia(0, px0));
  Formula dia_all = Formula::dia(0, Formula::forall(0, px0));
  Assignment g{0, {}};
  CHECK(check_sheaf(m, 0, g, all_dia));
  CHECK_FALSE(check_sheaf(m, 0, g, dia_all));
  CHECK(check_sheaf(m, 0, g, Formula::top()));
}

TEST_CASE("satisfied and valid") {
  SheafModel m = barcan_model();
  CHECK(valid(m, Formula::top()));
  Formula px0 = Formula::atom("P", {Term::var(0)});
  CHECK_FALSE(valid(m, px0));
  SheafModel full = m;
  full.interp["P"] = {{{0}, {1}}, {{0}, {1}}, {{0}, {1}}};
  CHECK(valid(full, px0));
  // A maximal world falsifies <>T.
  CHECK_FALSE(valid(m, Formula::dia(0, Formula::top())));
  CHECK(satisfied(m, 0, Formula::dia(0, Formula::top())));
}

TEST_CASE("countermodel search") {
  Signature sig = sig_p1();
  Formula px0 = Formula::atom("P", {Term::var(0)});
  Sequent barcan{Formula::forall(0, Formula::dia(0, px0)),
                 Formula::dia(0, Formula::forall(0, px0))};
  auto w = countermodel_search(barcan, sig, 3);
  REQUIRE(w.has_value());
  CHECK(w->model.worlds <= 3);
  CHECK(check_sheaf(w->model, w->world, w->assignment, barcan.lhs));
  CHECK_FALSE(check_sheaf(w->model, w->world, w->assignment, barcan.rhs));

  Signature spq;
  spq.predicates = {{"p", 0}, {"q", 0}};
  Formula p = Formula::atom("p"), q = Formula::atom("q");
  Sequent derivable{Formula::dia(0, Formula::dia(0, p)), Formula::dia(0, p)};
  CHECK_FALSE(countermodel_search(derivable, spq, 3).has_value());
  auto pw = countermodel_search(Sequent{p, q}, spq, 1);
  REQUIRE(pw.has_value());
  CHECK(pw->model.worlds == 1);
}

TEST_CASE("tree frame enumeration") {
  // Rooted unordered trees: 1, 1, 2, 4 with 1..4 nodes.
  CHECK(tree_frames(1).size() == 1);
  CHECK(tree_frames(2).size() == 2);
  CHECK(tree_frames(3).size() == 4);
  CHECK(tree_frames(4).size() == 8);
  for (const PropModel& f : tree_frames(4)) {
    CHECK(f.irreflexive());
    CHECK(f.transitive());
    CHECK(f.tree_like());
  }
}

TEST_CASE("propositional countermodel search") {
  Formula p = Formula::atom("p");
  Sequent s{Formula::dia(0, p), Formula::dia(0, Formula::dia(0, p))};
  auto w = prop_countermodel_search(s, 4);
  REQUIRE(w.has_value());
  CHECK(check_prop(w->model, w->world, s.lhs));
  CHECK_FALSE(check_prop(w->model, w->world, s.rhs));
  Sequent t{Formula::dia(0, Formula::dia(0, p)), Formula::dia(0, p)};
  CHECK_FALSE(prop_countermodel_search(t, 4).has_value());
}

TEST_CASE("random sheaves satisfy the invariants deterministically") {
  Signature sig;
  sig.predicates = {{"P", 1}, {"S", 2}};
  sig.constants = {0};
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SheafModel m = random_sheaf(sig, seed, {});
    m.validate(sig);
    CHECK(save_model(m) == save_model(random_sheaf(sig, seed, {})));
    SheafModel c = random_sheaf(sig, seed, {4, 3, true});
    c.validate(sig);
    CHECK(c.constant_domain());
    SheafModel k = random_constant_model(sig, seed, 4, 3);
    k.validate(sig);
    CHECK(k.constant_domain());
  }
}

TEST_CASE("model files round-trip") {
  Signature sig;
  sig.predicates = {{"P", 1}};
  sig.constants = {0};
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SheafModel m = random_sheaf(sig, seed, {});
    SheafModel back = load_model(save_model(m), sig);
    CHECK(save_model(back) == save_model(m));
  }
}

TEST_CASE("eta composition violations are rejected naming clause (v)") {
  // 0 R 1 R 2 with 0 R 2; eta_{0,2} disagrees with the composite.
  std::string text = R"({
    "worlds": 3,
    "R": [[0,1],[1,2],[0,2]],
    "domains": [2,2,2],
    "eta": {"0,1": [0,1], "1,2": [1,0], "0,2": [0,1]},
    "interp": {}
  })";
  Signature sig;
  sig.predicates = {{"P", 1}};
  try {
    SheafModel m = load_model(text, sig);
    m.validate(sig);
    CHECK(false);
  } catch (const ModelError& e) {
    CHECK(std::string(e.what()).find("(v)") != std::string::npos);
  }
}

TEST_CASE("prop_to_sheaf preserves forcing") {
  gen::Rng rng(23);
  for (int i = 0; i < 50; ++i) {
    PropModel m = two_world();
    m.valuation["P"] = rng.coin() ? std::set<int>{1} : std::set<int>{0, 1};
    m.valuation["Q"] = rng.coin() ? std::set<int>{} : std::set<int>{0};
    SheafModel s = prop_to_sheaf(m);
    Formula f = gen::random_modal(rng, Mode::Propositional, 3);
    for (int w = 0; w < m.worlds; ++w)
      CHECK(check_prop(m, w, f) == check_sheaf(s, w, Assignment{w, {}}, f));
  }
}
