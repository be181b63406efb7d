#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spc/arith.hpp"

namespace spc {

struct RewriteError : Error {
  explicit RewriteError(const std::string& what) : Error(what) {}
};

struct RuleDef {
  std::string name;
  std::string justification;
  bool bidirectional = true;
};

/// The rule catalog. Forward orientation is left-to-right as documented:
///   R-FORALL-NEG       forall x (not p)  ->  not (exists x p)
///   R-DN-DELTA         not not d  ->  d            (d at most Delta0)
///   R-DN-PI1           not not p  ->  p            (p at most Pi1)
///   R-HA-TO-PA         box HA p  ->  box PA p      (implication only)
///   R-PI2-CONS         box PA p  ->  box HA p      (p prenex, at most Pi2)
///   R-BOX-DN-SIGMA1    box T (forall* (not not s))  ->  box T (forall* s)
///                      (s at most Sigma1, T in {HA, PA})
///   R-NEGPI-TO-DNSIGMA not (forall* d)  ->  not not (exists* (not d))
///                      (d at most Delta0)
///   R-DIA-SIGMA2       dia HA p  ->  dia PA p      (p at most Sigma2,
///                      DC accepted through the widening)
///   R-DC-WIDEN         identity audit step          (p exactly DC)
///   R-DIA-PRENEX       dia PA p  ->  dia HA p      (p prenex)
const std::vector<RuleDef>& rule_catalog();
const RuleDef& rule_def(const std::string& name);

/// Child-index navigation. And/Or/Imp have children 0 and 1; Not,
/// quantifiers, Box and Dia have child 0.
AFormula subformula_at(const AFormula& f, const std::vector<int>& path);
AFormula replace_at(const AFormula& f, const std::vector<int>& path,
                    const AFormula& g);
std::vector<std::vector<int>> all_paths(const AFormula& f);

/// Applies a rule at a position. Throws RewriteError on no-match or on a
/// side-condition failure (the message includes the failing class).
AFormula apply(const std::string& rule, const AFormula& f,
               const std::vector<int>& path, bool forward = true);

struct RewriteStep {
  std::string rule;
  bool forward = true;
  std::vector<int> path;
  AFormula before, after;
  std::string justification;
};

struct RewriteTrace {
  AFormula start;
  std::vector<RewriteStep> steps;
  AFormula end;
};

/// Applies a rule to the end of a trace, inserting an explicit R-DC-WIDEN
/// audit step first when a Sigma2 side condition is met by a DC formula.
void trace_apply(RewriteTrace& t, const std::string& rule,
                 const std::vector<int>& path, bool forward = true);

/// Bounded bidirectional breadth-first search over the given rules (both
/// orientations of every bidirectional rule; implication-only rules are
/// skipped). Default rule set: all bidirectional catalog rules.
std::optional<RewriteTrace> derive_chain(
    const AFormula& start, const AFormula& goal, int depth_bound = 16,
    const std::vector<std::string>& rules = {});

/// Re-validates every step. On failure returns false and, when error is
/// non-null, stores a report naming the first failing step.
bool replay(const RewriteTrace& t, std::string* error = nullptr);

/// "STEP k: RULE name @ path -- justification: <ref>" per step, with the
/// start and end formulas in the prefix format.
std::string serialize(const RewriteTrace& t);

}  // namespace spc
