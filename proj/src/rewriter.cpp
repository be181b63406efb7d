#include "spc/rewriter.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <sstream>

namespace spc {

namespace {

using AF = AFormula;
using K = AFormula::Kind;

int child_count(const AF& f) {
  switch (f.kind()) {
    case K::And:
    case K::Or:
    case K::Imp:
      return 2;
    case K::Not:
    case K::Forall:
    case K::Exists:
    case K::BForall:
    case K::BExists:
    case K::Box:
    case K::Dia:
      return 1;
    default:
      return 0;
  }
}

AF child_of(const AF& f, int i) {
  switch (f.kind()) {
    case K::And:
    case K::Or:
    case K::Imp:
      return i == 0 ? f.left() : f.right();
    default:
      return f.body();
  }
}

AF with_child(const AF& f, int i, const AF& g) {
  switch (f.kind()) {
    case K::And:
      return i == 0 ? AF::conj(g, f.right()) : AF::conj(f.left(), g);
    case K::Or:
      return i == 0 ? AF::disj(g, f.right()) : AF::disj(f.left(), g);
    case K::Imp:
      return i == 0 ? AF::imp(g, f.right()) : AF::imp(f.left(), g);
    case K::Not:
      return AF::neg(g);
    case K::Forall:
      return AF::forall(f.var(), g);
    case K::Exists:
      return AF::exists(f.var(), g);
    case K::BForall:
      return AF::bforall(f.var(), f.bound(), g);
    case K::BExists:
      return AF::bexists(f.var(), f.bound(), g);
    case K::Box:
      return AF::box(f.ax(), g);
    case K::Dia:
      return AF::dia(f.ax(), g);
    default:
      throw RewriteError("position descends into an atom");
  }
}

std::string path_str(const std::vector<int>& path) {
  if (path.empty()) return "[]";
  std::string out;
  for (size_t i = 0; i < path.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(path[i]);
  }
  return out;
}

bool is_theory(const AF& f, const std::string& tag) {
  return f.ax().kind() == AxExpr::Kind::Named && f.ax().tag() == tag &&
         f.ax().declared_level() == 1;
}

bool is_ha_or_pa(const AF& f) { return is_theory(f, "HA") || is_theory(f, "PA"); }

[[noreturn]] void no_match(const std::string& rule, const std::string& what) {
  throw RewriteError(rule + ": " + what);
}

void require_class(const std::string& rule, const AF& f, ComplexityClass cap,
                   const std::string& role) {
  ComplexityClass c = classify(f);
  if (!leq(c, cap))
    no_match(rule, "side condition failed: " + role + " classifies as " +
                       c.str() + ", needs at most " + cap.str());
}

// Splits f into a maximal leading universal block and the remainder.
std::pair<std::vector<std::string>, AF> strip_foralls(const AF& f) {
  std::vector<std::string> vars;
  AF cur = f;
  while (cur.kind() == K::Forall) {
    vars.push_back(cur.var());
    cur = cur.body();
  }
  return {vars, cur};
}

std::pair<std::vector<std::string>, AF> strip_existss(const AF& f) {
  std::vector<std::string> vars;
  AF cur = f;
  while (cur.kind() == K::Exists) {
    vars.push_back(cur.var());
    cur = cur.body();
  }
  return {vars, cur};
}

AF wrap_foralls(const std::vector<std::string>& vars, AF body) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it)
    body = AF::forall(*it, body);
  return body;
}

AF wrap_existss(const std::vector<std::string>& vars, AF body) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it)
    body = AF::exists(*it, body);
  return body;
}

AF apply_forall_neg(const AF& f, bool fwd) {
  if (fwd) {
    if (f.kind() != K::Forall || f.body().kind() != K::Not)
      no_match("R-FORALL-NEG", "expected (forall x (not p))");
    return AF::neg(AF::exists(f.var(), f.body().body()));
  }
  if (f.kind() != K::Not || f.body().kind() != K::Exists)
    no_match("R-FORALL-NEG", "expected (not (exists x p))");
  return AF::forall(f.body().var(), AF::neg(f.body().body()));
}

AF apply_dn(const std::string& rule, ComplexityClass cap, const AF& f,
            bool fwd) {
  if (fwd) {
    if (f.kind() != K::Not || f.body().kind() != K::Not)
      no_match(rule, "expected (not (not p))");
    AF inner = f.body().body();
    require_class(rule, inner, cap, "the body");
    return inner;
  }
  require_class(rule, f, cap, "the formula");
  return AF::neg(AF::neg(f));
}

AF apply_ha_to_pa(const AF& f, bool fwd) {
  if (!fwd)
    no_match("R-HA-TO-PA", "implication-only rule cannot be reversed");
  if (f.kind() != K::Box || !is_theory(f, "HA"))
    no_match("R-HA-TO-PA", "expected (box (named HA) p)");
  return AF::box(AxExpr::named("PA"), f.body());
}

AF apply_pi2_cons(const AF& f, bool fwd) {
  const std::string from = fwd ? "PA" : "HA";
  const std::string to = fwd ? "HA" : "PA";
  if (f.kind() != K::Box || !is_theory(f, from))
    no_match("R-PI2-CONS", "expected (box (named " + from + ") p)");
  if (!is_prenex(f.body()))
    no_match("R-PI2-CONS", "side condition failed: the body is not prenex");
  require_class("R-PI2-CONS", f.body(), ComplexityClass::pi(2), "the body");
  return AF::box(AxExpr::named(to), f.body());
}

AF apply_box_dn_sigma1(const AF& f, bool fwd) {
  if (f.kind() != K::Box || !is_ha_or_pa(f))
    no_match("R-BOX-DN-SIGMA1", "expected a box over HA or PA");
  auto [vars, rest] = strip_foralls(f.body());
  if (fwd) {
    if (rest.kind() != K::Not || rest.body().kind() != K::Not)
      no_match("R-BOX-DN-SIGMA1",
               "expected (not (not s)) under the universal block");
    AF s = rest.body().body();
    require_class("R-BOX-DN-SIGMA1", s, ComplexityClass::sigma(1), "s");
    return AF::box(f.ax(), wrap_foralls(vars, s));
  }
  require_class("R-BOX-DN-SIGMA1", rest, ComplexityClass::sigma(1), "s");
  return AF::box(f.ax(), wrap_foralls(vars, AF::neg(AF::neg(rest))));
}

AF apply_negpi_to_dnsigma(const AF& f, bool fwd) {
  if (fwd) {
    if (f.kind() != K::Not)
      no_match("R-NEGPI-TO-DNSIGMA", "expected (not (forall* d))");
    auto [vars, d] = strip_foralls(f.body());
    if (vars.empty())
      no_match("R-NEGPI-TO-DNSIGMA", "expected at least one forall");
    require_class("R-NEGPI-TO-DNSIGMA", d, ComplexityClass::delta0(), "d");
    return AF::neg(AF::neg(wrap_existss(vars, AF::neg(d))));
  }
  if (f.kind() != K::Not || f.body().kind() != K::Not)
    no_match("R-NEGPI-TO-DNSIGMA", "expected (not (not (exists* (not d))))");
  auto [vars, nd] = strip_existss(f.body().body());
  if (vars.empty() || nd.kind() != K::Not)
    no_match("R-NEGPI-TO-DNSIGMA", "expected (exists* (not d)) inside");
  AF d = nd.body();
  require_class("R-NEGPI-TO-DNSIGMA", d, ComplexityClass::delta0(), "d");
  return AF::neg(wrap_foralls(vars, d));
}

AF apply_dia_sigma2(const AF& f, bool fwd) {
  const std::string from = fwd ? "HA" : "PA";
  const std::string to = fwd ? "PA" : "HA";
  if (f.kind() != K::Dia || !is_theory(f, from))
    no_match("R-DIA-SIGMA2", "expected (dia (named " + from + ") p)");
  ComplexityClass c = widen_dc(classify(f.body()));
  if (!leq(c, ComplexityClass::sigma(2)))
    no_match("R-DIA-SIGMA2", "side condition failed: the body classifies as " +
                                 classify(f.body()).str() +
                                 ", needs at most Sigma2");
  return AF::dia(AxExpr::named(to), f.body());
}

AF apply_dc_widen(const AF& f, bool) {
  if (classify(f) != ComplexityClass::dc())
    no_match("R-DC-WIDEN", "side condition failed: the formula classifies as " +
                               classify(f).str() + ", needs exactly DC");
  return f;
}

AF apply_dia_prenex(const AF& f, bool fwd) {
  const std::string from = fwd ? "PA" : "HA";
  const std::string to = fwd ? "HA" : "PA";
  if (f.kind() != K::Dia || !is_theory(f, from))
    no_match("R-DIA-PRENEX", "expected (dia (named " + from + ") p)");
  if (!is_prenex(f.body()))
    no_match("R-DIA-PRENEX", "side condition failed: the body is not prenex");
  return AF::dia(AxExpr::named(to), f.body());
}

AF apply_local(const std::string& rule, const AF& f, bool fwd) {
  if (rule == "R-FORALL-NEG") return apply_forall_neg(f, fwd);
  if (rule == "R-DN-DELTA")
    return apply_dn(rule, ComplexityClass::delta0(), f, fwd);
  if (rule == "R-DN-PI1") return apply_dn(rule, ComplexityClass::pi(1), f, fwd);
  if (rule == "R-HA-TO-PA") return apply_ha_to_pa(f, fwd);
  if (rule == "R-PI2-CONS") return apply_pi2_cons(f, fwd);
  if (rule == "R-BOX-DN-SIGMA1") return apply_box_dn_sigma1(f, fwd);
  if (rule == "R-NEGPI-TO-DNSIGMA") return apply_negpi_to_dnsigma(f, fwd);
  if (rule == "R-DIA-SIGMA2") return apply_dia_sigma2(f, fwd);
  if (rule == "R-DC-WIDEN") return apply_dc_widen(f, fwd);
  if (rule == "R-DIA-PRENEX") return apply_dia_prenex(f, fwd);
  throw RewriteError("unknown rule " + rule);
}

}  // namespace

const std::vector<RuleDef>& rule_catalog() {
  static const std::vector<RuleDef> defs = {
      {"R-FORALL-NEG", "Eq (4.1)", true},
      {"R-DN-DELTA", "Eq (4.2)", true},
      {"R-DN-PI1", "Eq (4.2), Pi1 extension", true},
      {"R-HA-TO-PA", "Eq (4.3)", false},
      {"R-PI2-CONS", "Eq (4.4)", true},
      {"R-BOX-DN-SIGMA1", "Lemma 4.2", true},
      {"R-NEGPI-TO-DNSIGMA", "Lemma 4.3", true},
      {"R-DIA-SIGMA2", "Lemma 4.4", true},
      {"R-DC-WIDEN", "Lemma 4.1", true},
      {"R-DIA-PRENEX", "Cor 4.6", true},
  };
  return defs;
}

const RuleDef& rule_def(const std::string& name) {
  for (const auto& d : rule_catalog())
    if (d.name == name) return d;
  throw RewriteError("unknown rule " + name);
}

AFormula subformula_at(const AFormula& f, const std::vector<int>& path) {
  AF cur = f;
  for (int i : path) {
    if (i < 0 || i >= child_count(cur))
      throw RewriteError("position " + path_str(path) + " is out of range");
    cur = child_of(cur, i);
  }
  return cur;
}

AFormula replace_at(const AFormula& f, const std::vector<int>& path,
                    const AFormula& g) {
  if (path.empty()) return g;
  int i = path.front();
  if (i < 0 || i >= child_count(f))
    throw RewriteError("position " + path_str(path) + " is out of range");
  std::vector<int> rest(path.begin() + 1, path.end());
  return with_child(f, i, replace_at(child_of(f, i), rest, g));
}

std::vector<std::vector<int>> all_paths(const AFormula& f) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(const AF&)> walk = [&](const AF& g) {
    out.push_back(cur);
    for (int i = 0; i < child_count(g); ++i) {
      cur.push_back(i);
      walk(child_of(g, i));
      cur.pop_back();
    }
  };
  walk(f);
  return out;
}

AFormula apply(const std::string& rule, const AFormula& f,
               const std::vector<int>& path, bool forward) {
  rule_def(rule);  // validate the name
  AF sub = subformula_at(f, path);
  return replace_at(f, path, apply_local(rule, sub, forward));
}

void trace_apply(RewriteTrace& t, const std::string& rule,
                 const std::vector<int>& path, bool forward) {
  AF cur = t.steps.empty() ? t.start : t.end;
  if (rule == "R-DIA-SIGMA2") {
    AF sub = subformula_at(cur, path);
    if (sub.kind() == K::Dia &&
        classify(sub.body()) == ComplexityClass::dc()) {
      std::vector<int> body_path = path;
      body_path.push_back(0);
      t.steps.push_back({"R-DC-WIDEN", true, body_path, cur, cur,
                         rule_def("R-DC-WIDEN").justification});
      t.end = cur;
    }
  }
  AF next = apply(rule, cur, path, forward);
  t.steps.push_back(
      {rule, forward, path, cur, next, rule_def(rule).justification});
  t.end = next;
}

std::optional<RewriteTrace> derive_chain(const AFormula& start,
                                         const AFormula& goal, int depth_bound,
                                         const std::vector<std::string>& rules) {
  std::vector<std::string> use = rules;
  if (use.empty())
    for (const auto& d : rule_catalog())
      if (d.bidirectional && d.name != "R-DC-WIDEN") use.push_back(d.name);

  struct State {
    AF formula;
    std::vector<RewriteStep> steps;  // from the respective endpoint
  };
  // Side 0 explores from start, side 1 from goal; traces meet in the middle.
  std::map<std::string, State> seen[2] = {
      {{start.str(), {start, {}}}}, {{goal.str(), {goal, {}}}}};
  std::deque<State> frontier[2] = {{{start, {}}}, {{goal, {}}}};
  int depth[2] = {0, 0};
  const size_t kFrontierCap = 20000;

  auto assemble = [&](const State& from_start, const State& from_goal) {
    RewriteTrace t;
    t.start = start;
    t.steps = from_start.steps;
    for (auto it = from_goal.steps.rbegin(); it != from_goal.steps.rend();
         ++it) {
      RewriteStep s = *it;
      std::swap(s.before, s.after);
      s.forward = !s.forward;
      t.steps.push_back(s);
    }
    t.end = goal;
    return t;
  };

  if (auto hit = seen[1].find(start.str()); hit != seen[1].end())
    return assemble({start, {}}, hit->second);

  while (depth[0] + depth[1] < depth_bound &&
         (!frontier[0].empty() || !frontier[1].empty())) {
    int side = (frontier[0].size() <= frontier[1].size() &&
                !frontier[0].empty()) || frontier[1].empty()
                   ? 0
                   : 1;
    ++depth[side];
    std::deque<State> next;
    for (const State& st : frontier[side]) {
      auto paths = all_paths(st.formula);
      for (const std::string& rule : use) {
        const RuleDef& def = rule_def(rule);
        for (int fwd = 1; fwd >= 0; --fwd) {
          if (!fwd && !def.bidirectional) continue;
          for (const auto& p : paths) {
            AF out;
            try {
              out = apply(rule, st.formula, p, fwd != 0);
            } catch (const RewriteError&) {
              continue;
            }
            std::string key = out.str();
            if (seen[side].count(key)) continue;
            State ns{out, st.steps};
            ns.steps.push_back({rule, fwd != 0, p, st.formula, out,
                                def.justification});
            seen[side].emplace(key, ns);
            if (auto hit = seen[1 - side].find(key);
                hit != seen[1 - side].end()) {
              return side == 0 ? assemble(ns, hit->second)
                               : assemble(hit->second, ns);
            }
            if (next.size() < kFrontierCap) next.push_back(std::move(ns));
          }
        }
      }
    }
    frontier[side] = std::move(next);
  }
  return std::nullopt;
}

bool replay(const RewriteTrace& t, std::string* error) {
  auto fail = [&](const std::string& msg) {
    if (error) *error = msg;
    return false;
  };
  AF cur = t.start;
  for (size_t k = 0; k < t.steps.size(); ++k) {
    const RewriteStep& s = t.steps[k];
    if (s.before != cur)
      return fail("step " + std::to_string(k + 1) +
                  ": recorded input does not match the running formula");
    AF out;
    try {
      out = apply(s.rule, cur, s.path, s.forward);
    } catch (const RewriteError& e) {
      return fail("step " + std::to_string(k + 1) + ": " + e.what());
    }
    if (out != s.after)
      return fail("step " + std::to_string(k + 1) +
                  ": recorded output does not match the rule application");
    cur = out;
  }
  if (cur != t.end) return fail("trace end does not match the final formula");
  if (error) error->clear();
  return true;
}

std::string serialize(const RewriteTrace& t) {
  std::ostringstream out;
  out << "START: " << t.start.str() << "\n";
  for (size_t k = 0; k < t.steps.size(); ++k) {
    const RewriteStep& s = t.steps[k];
    out << "STEP " << (k + 1) << ": RULE " << s.rule
        << (s.forward ? "" : " (reverse)") << " @ " << path_str(s.path)
        << " -- justification: " << s.justification << "\n";
  }
  out << "END: " << t.end.str() << "\n";
  return out.str();
}

}  // namespace spc
