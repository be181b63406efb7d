#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "spc/formula.hpp"

namespace spc {

struct ModelError : Error {
  explicit ModelError(const std::string& what) : Error(what) {}
};

/// Finite propositional Kripke model. Worlds are 0..worlds-1.
struct PropModel {
  int worlds = 1;
  std::vector<std::vector<bool>> rel;       // rel[w][u] <=> wRu
  std::map<std::string, std::set<int>> valuation;

  bool irreflexive() const;
  bool transitive() const;
  /// Acyclic, world 0 the unique root: reaches every other world and has
  /// no predecessor.
  bool tree_like() const;
};

bool check_prop(const PropModel& m, int w, const Formula& f);

/// Finite first-order Kripke model over a sheaf: per-world domains linked
/// by compatibility maps along R.
struct SheafModel {
  int worlds = 1;
  std::vector<std::vector<bool>> rel;
  std::vector<int> domain_size;  // |M_w|, elements are 0..size-1
  /// eta[{w,u}][d] = image of d under the compatibility map; required for
  /// every wRu pair unless the model has a constant domain (identity).
  std::map<std::pair<int, int>, std::vector<int>> eta;
  /// predicate -> per-world set of tuples
  std::map<std::string, std::vector<std::set<std::vector<int>>>> interp;
  /// constant index -> per-world element
  std::map<int, std::vector<int>> const_interp;

  bool constant_domain() const;
  int eta_map(int w, int u, int d) const;  // total: identity when absent

  /// Checks the sheaf laws: (v) composition, (vi) identity on reflexive
  /// points, concordance of constants, arity and range of interpretations.
  /// Throws ModelError naming the violated clause.
  void validate(const Signature& sig) const;
};

/// Total assignment at a world, restricted to the variables of interest.
struct Assignment {
  int world = 0;
  std::map<int, int> map;  // variable index -> domain element
};

bool check_sheaf(const SheafModel& m, int w, const Assignment& g,
                 const Formula& f);

/// True at w under every w-assignment (over the formula's free variables).
bool satisfied(const SheafModel& m, int w, const Formula& f);
/// Satisfied at every world.
bool valid(const SheafModel& m, const Formula& f);

struct SheafWitness {
  SheafModel model;
  int world = 0;
  Assignment assignment;
};

/// Enumerates finite constant-domain models with <= bound worlds and
/// domain size <= bound, R irreflexive and transitive, in lexicographic
/// order (worlds, domain size, relation bits, interpretation bits), and
/// returns the first witness making lhs true and rhs false.
std::optional<SheafWitness> countermodel_search(const Sequent& s,
                                               const Signature& sig,
                                               int bound);

struct PropWitness {
  PropModel model;
  int world = 0;
};

/// Propositional countermodel search over finite transitive irreflexive
/// tree-like models with <= bound worlds, evaluated at the root.
std::optional<PropWitness> prop_countermodel_search(const Sequent& s,
                                                    int bound);

/// All tree-like transitive irreflexive frames with <= max_worlds worlds,
/// one canonical representative per isomorphism class (relation only, no
/// valuation). Root is world 0.
std::vector<PropModel> tree_frames(int max_worlds);

struct RandomSheafParams {
  int max_worlds = 4;
  int max_domain = 3;
  bool constant_dom = false;
};

/// Deterministic per seed; output satisfies all sheaf invariants.
SheafModel random_sheaf(const Signature& sig, std::uint64_t seed,
                        const RandomSheafParams& params);

/// Random finite transitive irreflexive constant-domain model.
SheafModel random_constant_model(const Signature& sig, std::uint64_t seed,
                                 int max_worlds, int max_domain);

SheafModel load_model(const std::string& json_text, const Signature& sig);
std::string save_model(const SheafModel& m);

/// Embeds a propositional model as a constant-domain sheaf with a
/// one-element domain and 0-ary predicates.
SheafModel prop_to_sheaf(const PropModel& m);

}  // namespace spc
