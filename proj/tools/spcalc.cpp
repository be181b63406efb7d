// spcalc: command-line front end for the strictly positive workbench.
//
// Exit codes: 0 positive verdict, 1 negative verdict, 2 inconclusive,
// 64 usage or parse error, 65 model/rewrite invariant violation,
// 66 missing realization entries, 70 internal invariant failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spc/calculus.hpp"
#include "spc/formula.hpp"
#include "spc/kripke.hpp"
#include "spc/realize.hpp"
#include "spc/rewriter.hpp"

using nlohmann::json;
using namespace spc;

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitInvariant = 65;
constexpr int kExitMissingEntries = 66;
constexpr int kExitInternal = 70;

[[noreturn]] void die(int code, const std::string& msg) {
  std::cerr << "spcalc: " << msg << "\n";
  std::exit(code);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) die(kExitUsage, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_out(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) die(kExitUsage, "cannot write " + path);
  out << text;
}

// The machine-readable envelope. In text mode the verdict line comes
// first, then the trace, then the witness.
struct Envelope {
  std::string verdict;
  json witness;  // null when absent
  std::string trace;
};

void emit(const Envelope& e, bool json_format) {
  if (json_format) {
    json out;
    out["verdict"] = e.verdict;
    out["witness"] = e.witness;
    out["trace"] = e.trace.empty() ? json() : json(e.trace);
    std::cout << out.dump(2) << "\n";
    return;
  }
  std::cout << e.verdict << "\n";
  if (!e.trace.empty()) std::cout << e.trace;
  if (!e.witness.is_null()) std::cout << e.witness.dump(2) << "\n";
}

Logic parse_logic(const std::string& name) {
  if (name == "rc1") return Logic::RC1;
  if (name == "rcw") return Logic::RCw;
  if (name == "qrc1") return Logic::QRC1;
  die(kExitUsage, "unknown logic " + name);
}

Mode mode_for(Logic l) {
  switch (l) {
    case Logic::RC1: return Mode::Propositional;
    case Logic::RCw: return Mode::Polymodal;
    default: return Mode::Quantified;
  }
}

Sequent parse_sequent_or_die(const std::string& text, Mode mode) {
  try {
    return parse_sequent(text, infer_signature(text), mode);
  } catch (const ParseError& e) {
    die(kExitUsage, std::string("parse error: ") + e.what());
  } catch (const ModeError& e) {
    die(kExitUsage, std::string("mode error: ") + e.what());
  }
}

json witness_json(const SheafWitness& w) {
  json out = json::parse(save_model(w.model));
  out["world"] = w.world;
  json assign = json::object();
  for (const auto& [v, d] : w.assignment.map)
    assign["x" + std::to_string(v)] = d;
  out["assign"] = assign;
  return out;
}

std::vector<int> parse_path(const std::string& text) {
  if (text.empty() || text == "[]") return {};
  std::vector<int> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, '.')) {
    try {
      out.push_back(std::stoi(part));
    } catch (...) {
      die(kExitUsage, "bad path " + text);
    }
  }
  return out;
}

void collect_subformulas(const Formula& f, std::vector<Formula>& out) {
  for (const Formula& g : out)
    if (g == f) return;
  out.push_back(f);
  switch (f.kind()) {
    case Formula::Kind::Conj:
      collect_subformulas(f.left(), out);
      collect_subformulas(f.right(), out);
      break;
    case Formula::Kind::Diamond:
    case Formula::Kind::Forall:
      collect_subformulas(f.body(), out);
      break;
    default:
      break;
  }
}

int cmd_prove(const std::string& logic_name, const std::string& seq_text,
              int budget, const std::string& out_path, bool json_format) {
  Logic logic = parse_logic(logic_name);
  Sequent s = parse_sequent_or_die(seq_text, mode_for(logic));
  Envelope env;

  if (logic == Logic::RC1) {
    if (decide_rc1(s)) {
      auto d = prove(s, Logic::RC1, std::max(budget, 40));
      if (!d) die(kExitInternal, "decision and search disagree");
      emit({"DERIVABLE", json(), serialize(*d)}, json_format);
      return 0;
    }
    auto cm = prop_countermodel_search(s, 8);
    if (!cm) {
      emit({"BUDGET-EXHAUSTED", json(), ""}, json_format);
      return 2;
    }
    SheafWitness w{prop_to_sheaf(cm->model), cm->world, {cm->world, {}}};
    if (!out_path.empty()) write_out(out_path, save_model(w.model));
    emit({"UNDERIVABLE", witness_json(w), ""}, json_format);
    return 1;
  }

  if (logic == Logic::RCw) {
    if (auto d = prove(s, Logic::RCw, budget)) {
      emit({"DERIVABLE", json(), serialize(*d)}, json_format);
      return 0;
    }
    emit({"BUDGET-EXHAUSTED", json(), ""}, json_format);
    return 2;
  }

  QrcResult r = decide_qrc1(s);
  switch (r.verdict) {
    case QrcResult::Verdict::Derivable:
      emit({"DERIVABLE", json(), serialize(*r.derivation)}, json_format);
      return 0;
    case QrcResult::Verdict::Underivable:
      if (!out_path.empty()) write_out(out_path, save_model(r.witness->model));
      emit({"UNDERIVABLE", witness_json(*r.witness), ""}, json_format);
      return 1;
    default:
      emit({"BUDGET-EXHAUSTED", json(), ""}, json_format);
      return 2;
  }
}

int cmd_check(const std::string& model_path, int world,
              const std::vector<std::string>& assigns,
              const std::string& formula_text, bool json_format) {
  Signature sig;
  Formula f;
  try {
    sig = infer_signature(formula_text);
    f = parse_formula(formula_text, sig, Mode::Quantified);
  } catch (const Error& e) {
    die(kExitUsage, std::string("parse error: ") + e.what());
  }
  SheafModel m;
  try {
    m = load_model(slurp(model_path), sig);
    m.validate(sig);
  } catch (const ModelError& e) {
    die(kExitInvariant, e.what());
  }
  if (world < 0 || world >= m.worlds)
    die(kExitUsage, "world out of range");
  Assignment g{world, {}};
  for (const std::string& a : assigns) {
    auto eq = a.find('=');
    if (eq == std::string::npos || a.compare(0, 1, "x") != 0)
      die(kExitUsage, "bad assignment " + a + " (want x<k>=<element>)");
    try {
      g.map[std::stoi(a.substr(1, eq - 1))] = std::stoi(a.substr(eq + 1));
    } catch (...) {
      die(kExitUsage, "bad assignment " + a);
    }
  }
  bool v = check_sheaf(m, world, g, f);
  emit({v ? "TRUE" : "FALSE", json(), ""}, json_format);
  return v ? 0 : 1;
}

int cmd_realize(const std::string& style, const std::string& model_path,
                const std::string& realization_path, const std::string& theory,
                const std::string& out_path, const std::string& seq_text,
                bool json_format) {
  Sequent s = parse_sequent_or_die(seq_text, Mode::Quantified);
  std::vector<Formula> subs;
  collect_subformulas(s.lhs, subs);
  collect_subformulas(s.rhs, subs);
  std::ostringstream body;
  json jout;

  try {
    if (style == "finitary" || style == "infinitary") {
      if (realization_path.empty())
        die(kExitUsage, "--realization is required for style " + style);
      FinitaryRealization r = load_finitary(slurp(realization_path));
      std::string missing;
      for (const auto& [name, arity] : signature_of(s).predicates)
        if (!r.entries.count(name)) missing += " " + name;
      if (!missing.empty())
        die(kExitMissingEntries, "missing realization entries:" + missing);
      validate(r);
      if (style == "finitary") {
        body << "LHS* " << extend_finitary(r, theory, s.lhs).str() << "\n";
        body << "RHS* " << extend_finitary(r, theory, s.rhs).str() << "\n";
        body << "QPL " << emit_qpl_statement(r, theory, s).str() << "\n";
        for (const Formula& g : subs)
          body << "CERT " << g.str() << " :: "
               << classify(extend_finitary(r, theory, g)).str() << "\n";
      } else {
        InfinitaryRealization ir = lift_finitary_to_infinitary(r);
        AxExpr tau = AxExpr::named(theory);
        body << "LHS° " << extend_infinitary(ir, tau, s.lhs).str() << "\n";
        body << "RHS° " << extend_infinitary(ir, tau, s.rhs).str() << "\n";
        body << "RL " << emit_rl_statement(ir, tau, s).str() << "\n";
        for (const Formula& g : subs)
          body << "CERT " << g.str() << " :: "
               << classify_ax(extend_infinitary(ir, tau, g)).str() << "\n";
      }
    } else if (style == "solovay") {
      if (model_path.empty())
        die(kExitUsage, "--model is required for style solovay");
      Signature sig = signature_of(s);
      SheafModel base;
      try {
        base = load_model(slurp(model_path), sig);
        base.validate(sig);
      } catch (const ModelError& e) {
        die(kExitInvariant, e.what());
      }
      SolovayContext ctx = make_solovay_context(base, sig);
      body << "LHS~ " << extend_solovay(ctx, theory, s.lhs).str() << "\n";
      body << "RHS~ " << extend_solovay(ctx, theory, s.rhs).str() << "\n";
      for (const Formula& g : subs)
        body << "CERT " << g.str() << " :: "
             << classify(extend_solovay(ctx, theory, g)).str() << "\n";
    } else {
      die(kExitUsage, "unknown style " + style);
    }
  } catch (const RealizeError& e) {
    die(kExitInvariant, e.what());
  } catch (const ModelError& e) {
    die(kExitInvariant, e.what());
  }
  if (!out_path.empty()) write_out(out_path, body.str());
  emit({"REALIZED", json(), body.str()}, json_format);
  return 0;
}

int cmd_classify(const std::string& text, bool json_format) {
  try {
    emit({classify(parse_arith(text)).str(), json(), ""}, json_format);
  } catch (const ArithError& e) {
    die(kExitUsage, std::string("parse error: ") + e.what());
  }
  return 0;
}

int cmd_rewrite(const std::string& text, const std::string& rule,
                const std::string& path_text, bool reverse,
                const std::string& goal_text, int depth, bool json_format) {
  AFormula f;
  try {
    f = parse_arith(text);
  } catch (const ArithError& e) {
    die(kExitUsage, std::string("parse error: ") + e.what());
  }
  if (!rule.empty()) {
    try {
      RewriteTrace t{f, {}, f};
      trace_apply(t, rule, parse_path(path_text), !reverse);
      emit({"REWRITTEN", json(), serialize(t)}, json_format);
      return 0;
    } catch (const RewriteError& e) {
      die(kExitInvariant, e.what());
    }
  }
  if (goal_text.empty())
    die(kExitUsage, "need either --rule or --goal");
  AFormula goal;
  try {
    goal = parse_arith(goal_text);
  } catch (const ArithError& e) {
    die(kExitUsage, std::string("parse error: ") + e.what());
  }
  auto chain = derive_chain(f, goal, depth);
  if (!chain) {
    emit({"NO-CHAIN", json(), ""}, json_format);
    return 2;
  }
  std::string err;
  if (!replay(*chain, &err)) die(kExitInternal, "replay failed: " + err);
  emit({"CHAIN", json(), serialize(*chain)}, json_format);
  return 0;
}

int cmd_depth(const std::string& seq_text, bool json_format) {
  Sequent s = parse_sequent_or_die(seq_text, Mode::Quantified);
  std::ostringstream body;
  body << "d(lhs) = " << modal_depth(s.lhs) << "\n"
       << "d(rhs) = " << modal_depth(s.rhs) << "\n";
  emit({"DEPTH", json(), body.str()}, json_format);
  return 0;
}

int cmd_interpolate(const std::string& logic_name, const std::string& seq_text,
                    bool json_format) {
  Logic logic = parse_logic(logic_name);
  Sequent s = parse_sequent_or_die(seq_text, mode_for(logic));
  try {
    Formula i = interpolate(s, logic);
    emit({"INTERPOLANT", json(), i.str() + "\n"}, json_format);
    return 0;
  } catch (const NotDerivable& e) {
    emit({"NOT-DERIVABLE", json(), ""}, json_format);
    return 1;
  } catch (const SignatureViolation& e) {
    die(kExitInternal, e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for strictly positive provability logics"};
  app.require_subcommand(1);
  std::string format = "text";
  app.add_option("--format", format, "output format: text or json")
      ->check(CLI::IsMember({"text", "json"}));

  std::string logic = "qrc1", seq_text, out_path;
  int budget = 30;
  auto* prove_cmd = app.add_subcommand("prove", "decide a sequent");
  prove_cmd->add_option("--logic", logic, "rc1, rcw or qrc1");
  prove_cmd->add_option("--budget", budget, "search budget")
      ->check(CLI::PositiveNumber);
  prove_cmd->add_option("--out", out_path, "countermodel output file");
  prove_cmd->add_option("sequent", seq_text, "the sequent")->required();

  std::string model_path, formula_text;
  int world = 0;
  std::vector<std::string> assigns;
  auto* check_cmd = app.add_subcommand("check", "evaluate at a world");
  check_cmd->add_option("--model", model_path, "model JSON file")->required();
  check_cmd->add_option("--world", world, "world index")->required();
  check_cmd->add_option("--assign", assigns, "assignments x<k>=<element>");
  check_cmd->add_option("formula", formula_text, "the formula")->required();

  std::string style, realization_path, theory = "HA";
  std::string r_model, r_out, r_seq;
  auto* realize_cmd = app.add_subcommand("realize", "arithmetical translation");
  realize_cmd->add_option("--style", style, "finitary, infinitary or solovay")
      ->required();
  realize_cmd->add_option("--model", r_model, "model JSON file");
  realize_cmd->add_option("--realization", realization_path,
                          "realization JSON file");
  realize_cmd->add_option("--theory", theory, "theory tag");
  realize_cmd->add_option("--out", r_out, "output file");
  realize_cmd->add_option("sequent", r_seq, "the sequent")->required();

  std::string cls_text;
  auto* classify_cmd = app.add_subcommand("classify", "complexity class");
  classify_cmd->add_option("formula", cls_text, "arithmetic formula")
      ->required();

  std::string rw_text, rw_rule, rw_path, rw_goal;
  bool rw_reverse = false;
  int rw_depth = 16;
  auto* rewrite_cmd = app.add_subcommand("rewrite", "apply or search rewrites");
  rewrite_cmd->add_option("formula", rw_text, "arithmetic formula")->required();
  rewrite_cmd->add_option("--rule", rw_rule, "rule name for one application");
  rewrite_cmd->add_option("--path", rw_path, "position, e.g. 0.1 (default root)");
  rewrite_cmd->add_flag("--reverse", rw_reverse, "apply right-to-left");
  rewrite_cmd->add_option("--goal", rw_goal, "target formula for chain search");
  rewrite_cmd->add_option("--depth", rw_depth, "chain search depth bound")
      ->check(CLI::PositiveNumber);

  std::string d_seq;
  auto* depth_cmd = app.add_subcommand("depth", "modal depths of a sequent");
  depth_cmd->add_option("sequent", d_seq, "the sequent")->required();

  std::string i_logic = "qrc1", i_seq;
  auto* interp_cmd = app.add_subcommand("interpolate", "interpolant of a sequent");
  interp_cmd->add_option("--logic", i_logic, "rc1, rcw or qrc1");
  interp_cmd->add_option("sequent", i_seq, "the sequent")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  bool json_format = format == "json";
  try {
    if (*prove_cmd)
      return cmd_prove(logic, seq_text, budget, out_path, json_format);
    if (*check_cmd)
      return cmd_check(model_path, world, assigns, formula_text, json_format);
    if (*realize_cmd)
      return cmd_realize(style, r_model, realization_path, theory, r_out,
                         r_seq, json_format);
    if (*classify_cmd) return cmd_classify(cls_text, json_format);
    if (*rewrite_cmd)
      return cmd_rewrite(rw_text, rw_rule, rw_path, rw_reverse, rw_goal,
                         rw_depth, json_format);
    if (*depth_cmd) return cmd_depth(d_seq, json_format);
    if (*interp_cmd) return cmd_interpolate(i_logic, i_seq, json_format);
  } catch (const Error& e) {
    die(kExitInternal, e.what());
  }
  return kExitUsage;
}
