#include "spc/kripke.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "json.hpp"

namespace spc {

using nlohmann::json;

// ---------------------------------------------------------------------------
// PropModel

bool PropModel::irreflexive() const {
  for (int w = 0; w < worlds; ++w)
    if (rel[w][w]) return false;
  return true;
}

bool PropModel::transitive() const {
  for (int w = 0; w < worlds; ++w)
    for (int u = 0; u < worlds; ++u)
      if (rel[w][u])
        for (int v = 0; v < worlds; ++v)
          if (rel[u][v] && !rel[w][v]) return false;
  return true;
}

bool PropModel::tree_like() const {
  // Root 0: no predecessor, reaches every other world; relation acyclic.
  for (int w = 0; w < worlds; ++w)
    if (rel[w][0]) return false;
  for (int u = 1; u < worlds; ++u)
    if (!rel[0][u]) return false;
  for (int w = 0; w < worlds; ++w)
    for (int u = 0; u < worlds; ++u)
      if (rel[w][u] && rel[u][w]) return false;
  return true;
}

bool check_prop(const PropModel& m, int w, const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Top:
      return true;
    case Formula::Kind::Atom: {
      auto it = m.valuation.find(f.pred());
      if (it == m.valuation.end())
        throw ModelError("unknown atom '" + f.pred() + "'");
      return it->second.count(w) != 0;
    }
    case Formula::Kind::Conj:
      return check_prop(m, w, f.left()) && check_prop(m, w, f.right());
    case Formula::Kind::Diamond:
      for (int u = 0; u < m.worlds; ++u)
        if (m.rel[w][u] && check_prop(m, u, f.body())) return true;
      return false;
    case Formula::Kind::Forall:
      throw ModeError("quantified formula in propositional model check");
  }
  return false;
}

// ---------------------------------------------------------------------------
// Tree frame catalog

namespace {

// Canonical string for a rooted tree given by child lists.
std::string tree_canon(int node, const std::vector<std::vector<int>>& children) {
  std::vector<std::string> subs;
  for (int c : children[node]) subs.push_back(tree_canon(c, children));
  std::sort(subs.begin(), subs.end());
  std::string out = "(";
  for (const std::string& s : subs) out += s;
  out += ")";
  return out;
}

}  // namespace

std::vector<PropModel> tree_frames(int max_worlds) {
  std::vector<PropModel> out;
  std::set<std::string> seen;
  for (int n = 1; n <= max_worlds; ++n) {
    // parent[i] < i for i >= 1; root is 0. Every shape appears at least
    // once in this family; dedupe by canonical form.
    std::vector<int> parent(n, -1);
    std::vector<int> counter(n, 0);
    bool done = false;
    while (!done) {
      std::vector<std::vector<int>> children(n);
      for (int i = 1; i < n; ++i) {
        parent[i] = counter[i];
        children[parent[i]].push_back(i);
      }
      std::string key = tree_canon(0, children);
      if (!seen.count(key)) {
        seen.insert(key);
        PropModel m;
        m.worlds = n;
        m.rel.assign(n, std::vector<bool>(n, false));
        for (int i = 1; i < n; ++i) {
          // ancestor relation = transitive closure of parent edges
          int a = parent[i];
          while (true) {
            m.rel[a][i] = true;
            if (a == 0) break;
            a = parent[a];
          }
        }
        out.push_back(std::move(m));
      }
      // odometer over parent choices
      done = true;
      for (int i = n - 1; i >= 1; --i) {
        if (++counter[i] < i) {
          done = false;
          break;
        }
        counter[i] = 0;
      }
      if (n == 1) break;
    }
  }
  return out;
}

std::optional<PropWitness> prop_countermodel_search(const Sequent& s, int bound) {
  std::set<std::string> atoms;
  for (const Formula* f : {&s.lhs, &s.rhs}) {
    std::set<std::string> sy = symbols_of(*f);
    atoms.insert(sy.begin(), sy.end());
  }
  std::vector<std::string> atom_list(atoms.begin(), atoms.end());
  std::vector<PropModel> frames = tree_frames(bound);
  for (PropModel& frame : frames) {
    int bits = static_cast<int>(atom_list.size()) * frame.worlds;
    if (bits > 30) throw Error("too many valuation bits in tree search");
    for (std::uint64_t v = 0; v < (1ULL << bits); ++v) {
      PropModel m = frame;
      int b = 0;
      for (const std::string& a : atom_list) {
        m.valuation[a] = {};
        for (int w = 0; w < m.worlds; ++w, ++b)
          if (v >> b & 1) m.valuation[a].insert(w);
      }
      if (check_prop(m, 0, s.lhs) && !check_prop(m, 0, s.rhs))
        return PropWitness{std::move(m), 0};
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// SheafModel

bool SheafModel::constant_domain() const {
  for (int w = 1; w < worlds; ++w)
    if (domain_size[w] != domain_size[0]) return false;
  for (int w = 0; w < worlds; ++w)
    for (int u = 0; u < worlds; ++u)
      if (rel[w][u]) {
        auto it = eta.find({w, u});
        if (it == eta.end()) continue;  // identity by convention
        for (int d = 0; d < domain_size[w]; ++d)
          if (it->second[d] != d) return false;
      }
  return true;
}

int SheafModel::eta_map(int w, int u, int d) const {
  auto it = eta.find({w, u});
  if (it == eta.end()) return d;
  return it->second.at(d);
}

void SheafModel::validate(const Signature& sig) const {
  if (worlds < 1) throw ModelError("model must have at least one world");
  if (static_cast<int>(domain_size.size()) != worlds)
    throw ModelError("domain list does not match world count");
  for (int w = 0; w < worlds; ++w)
    if (domain_size[w] < 1)
      throw ModelError("world " + std::to_string(w) + " has an empty domain");
  for (const auto& [key, images] : eta) {
    auto [w, u] = key;
    if (w < 0 || w >= worlds || u < 0 || u >= worlds || !rel[w][u])
      throw ModelError("eta given for a pair not in R: " + std::to_string(w) +
                       "," + std::to_string(u));
    if (static_cast<int>(images.size()) != domain_size[w])
      throw ModelError("eta " + std::to_string(w) + "," + std::to_string(u) +
                       " is not total on the source domain");
    for (int img : images)
      if (img < 0 || img >= domain_size[u])
        throw ModelError("eta " + std::to_string(w) + "," + std::to_string(u) +
                         " maps outside the target domain");
  }
  // Missing eta entries default to identity; that requires matching sizes.
  for (int w = 0; w < worlds; ++w)
    for (int u = 0; u < worlds; ++u)
      if (rel[w][u] && !eta.count({w, u}) && domain_size[w] != domain_size[u])
        throw ModelError("missing eta for " + std::to_string(w) + "," +
                         std::to_string(u) + " with distinct domain sizes");
  // clause (v): composition along R-triangles
  for (int w = 0; w < worlds; ++w)
    for (int u = 0; u < worlds; ++u)
      if (rel[w][u])
        for (int v = 0; v < worlds; ++v)
          if (rel[u][v] && rel[w][v])
            for (int d = 0; d < domain_size[w]; ++d)
              if (eta_map(u, v, eta_map(w, u, d)) != eta_map(w, v, d))
                throw ModelError(
                    "sheaf law (v) violated: eta composition fails on worlds " +
                    std::to_string(w) + "->" + std::to_string(u) + "->" +
                    std::to_string(v) + " at element " + std::to_string(d));
  // clause (vi): identity on reflexive points
  for (int w = 0; w < worlds; ++w)
    if (rel[w][w])
      for (int d = 0; d < domain_size[w]; ++d)
        if (eta_map(w, w, d) != d)
          throw ModelError(
              "sheaf law (vi) violated: eta on reflexive world " +
              std::to_string(w) + " is not the identity");
  // concordance of constant interpretations
  for (const auto& [c, vals] : const_interp) {
    if (static_cast<int>(vals.size()) != worlds)
      throw ModelError("constant c" + std::to_string(c) +
                       " not interpreted at every world");
    for (int w = 0; w < worlds; ++w) {
      if (vals[w] < 0 || vals[w] >= domain_size[w])
        throw ModelError("constant c" + std::to_string(c) +
                         " interpreted outside the domain of world " +
                         std::to_string(w));
      for (int u = 0; u < worlds; ++u)
        if (rel[w][u] && eta_map(w, u, vals[w]) != vals[u])
          throw ModelError("concordance violated: c" + std::to_string(c) +
                           " at worlds " + std::to_string(w) + "," +
                           std::to_string(u));
    }
  }
  for (int c : sig.constants)
    if (!const_interp.count(c))
      throw ModelError("constant c" + std::to_string(c) +
                       " has no interpretation");
  // predicate interpretations: arity and range
  for (const auto& [name, per_world] : interp) {
    if (!sig.has_predicate(name)) continue;
    int ar = sig.arity(name);
    if (static_cast<int>(per_world.size()) != worlds)
      throw ModelError("predicate " + name + " not interpreted at every world");
    for (int w = 0; w < worlds; ++w)
      for (const std::vector<int>& tup : per_world[w]) {
        if (static_cast<int>(tup.size()) != ar)
          throw ModelError("predicate " + name + " has a tuple of wrong arity");
        for (int e : tup)
          if (e < 0 || e >= domain_size[w])
            throw ModelError("predicate " + name +
                             " has a tuple outside the domain of world " +
                             std::to_string(w));
      }
  }
}

namespace {

int eval_term(const SheafModel& m, const Assignment& g, const Term& t) {
  if (t.kind == Term::Kind::Var) {
    auto it = g.map.find(t.index);
    if (it == g.map.end())
      throw ModelError("assignment does not cover variable x" +
                       std::to_string(t.index));
    return it->second;
  }
  auto it = m.const_interp.find(t.index);
  if (it == m.const_interp.end())
    throw ModelError("constant c" + std::to_string(t.index) +
                     " has no interpretation");
  return it->second.at(g.world);
}

}  // namespace

bool check_sheaf(const SheafModel& m, int w, const Assignment& g,
                 const Formula& f) {
  if (g.world != w) throw ModelError("assignment/world mismatch");
  switch (f.kind()) {
    case Formula::Kind::Top:
      return true;
    case Formula::Kind::Atom: {
      std::vector<int> tup;
      for (const Term& t : f.args()) tup.push_back(eval_term(m, g, t));
      auto it = m.interp.find(f.pred());
      if (it == m.interp.end()) return false;
      return it->second.at(w).count(tup) != 0;
    }
    case Formula::Kind::Conj:
      return check_sheaf(m, w, g, f.left()) && check_sheaf(m, w, g, f.right());
    case Formula::Kind::Forall: {
      for (int d = 0; d < m.domain_size[w]; ++d) {
        Assignment h = g;
        h.map[f.var()] = d;
        if (!check_sheaf(m, w, h, f.body())) return false;
      }
      return true;
    }
    case Formula::Kind::Diamond: {
      for (int u = 0; u < m.worlds; ++u) {
        if (!m.rel[w][u]) continue;
        Assignment gu;
        gu.world = u;
        for (const auto& [x, d] : g.map) gu.map[x] = m.eta_map(w, u, d);
        if (check_sheaf(m, u, gu, f.body())) return true;
      }
      return false;
    }
  }
  return false;
}

bool satisfied(const SheafModel& m, int w, const Formula& f) {
  std::set<int> fv = free_vars(f);
  std::vector<int> vars(fv.begin(), fv.end());
  std::vector<int> vals(vars.size(), 0);
  while (true) {
    Assignment g;
    g.world = w;
    for (std::size_t i = 0; i < vars.size(); ++i) g.map[vars[i]] = vals[i];
    if (!check_sheaf(m, w, g, f)) return false;
    std::size_t i = 0;
    for (; i < vals.size(); ++i) {
      if (++vals[i] < m.domain_size[w]) break;
      vals[i] = 0;
    }
    if (i == vals.size()) break;
  }
  return true;
}

bool valid(const SheafModel& m, const Formula& f) {
  for (int w = 0; w < m.worlds; ++w)
    if (!satisfied(m, w, f)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Countermodel search (quantified, constant domain)

namespace {

// Odometer over a vector of digits with per-digit radix. Returns false
// when it wraps around to all zeros.
bool bump(std::vector<int>& digits, const std::vector<int>& radix) {
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (++digits[i] < radix[i]) return true;
    digits[i] = 0;
  }
  return false;
}

bool is_transitive(const std::vector<std::vector<bool>>& rel, int n) {
  for (int w = 0; w < n; ++w)
    for (int u = 0; u < n; ++u)
      if (rel[w][u])
        for (int v = 0; v < n; ++v)
          if (rel[u][v] && !rel[w][v]) return false;
  return true;
}

}  // namespace

std::optional<SheafWitness> countermodel_search(const Sequent& s,
                                               const Signature& sig,
                                               int bound) {
  std::set<std::string> preds_used;
  for (const Formula* f : {&s.lhs, &s.rhs})
    for (const std::string& sy : symbols_of(*f))
      if (sig.has_predicate(sy)) preds_used.insert(sy);
  std::set<int> consts;
  {
    std::set<int> a = constants_of(s.lhs), b = constants_of(s.rhs);
    consts.insert(a.begin(), a.end());
    consts.insert(b.begin(), b.end());
  }
  std::set<int> fv;
  {
    std::set<int> a = free_vars(s.lhs), b = free_vars(s.rhs);
    fv.insert(a.begin(), a.end());
    fv.insert(b.begin(), b.end());
  }
  std::vector<std::string> pred_list(preds_used.begin(), preds_used.end());
  std::vector<int> const_list(consts.begin(), consts.end());
  std::vector<int> var_list(fv.begin(), fv.end());

  for (int n = 1; n <= bound; ++n) {
    for (int m = 1; m <= bound; ++m) {
      // relation bits, row-major over off-diagonal pairs
      int rbits = n * (n - 1);
      std::vector<int> rdig(rbits, 0), rrad(rbits, 2);
      do {
        SheafModel model;
        model.worlds = n;
        model.rel.assign(n, std::vector<bool>(n, false));
        int b = 0;
        for (int w = 0; w < n; ++w)
          for (int u = 0; u < n; ++u)
            if (w != u) model.rel[w][u] = rdig[b++];
        if (!is_transitive(model.rel, n)) continue;
        model.domain_size.assign(n, m);

        // constant interpretations: one element each (constant domain)
        std::vector<int> cdig(const_list.size(), 0),
            crad(const_list.size(), m);
        do {
          model.const_interp.clear();
          for (std::size_t i = 0; i < const_list.size(); ++i)
            model.const_interp[const_list[i]] = std::vector<int>(n, cdig[i]);

          // predicate interpretation bits: per predicate, world, tuple
          std::vector<std::vector<std::vector<int>>> tuples(pred_list.size());
          int pbits = 0;
          for (std::size_t p = 0; p < pred_list.size(); ++p) {
            int ar = sig.arity(pred_list[p]);
            std::vector<int> tup(ar, 0), trad(ar, m);
            if (ar == 0) {
              tuples[p].push_back({});
            } else {
              do {
                tuples[p].push_back(tup);
              } while (bump(tup, trad));
            }
            pbits += static_cast<int>(tuples[p].size()) * n;
          }
          std::vector<int> pdig(pbits, 0), prad(pbits, 2);
          do {
            model.interp.clear();
            int bit = 0;
            for (std::size_t p = 0; p < pred_list.size(); ++p) {
              auto& per_world = model.interp[pred_list[p]];
              per_world.assign(n, {});
              for (int w = 0; w < n; ++w)
                for (const auto& tup : tuples[p]) {
                  if (pdig[bit]) per_world[w].insert(tup);
                  ++bit;
                }
            }
            // worlds and assignments, lexicographic
            for (int w = 0; w < n; ++w) {
              std::vector<int> adig(var_list.size(), 0),
                  arad(var_list.size(), m);
              do {
                Assignment g;
                g.world = w;
                for (std::size_t i = 0; i < var_list.size(); ++i)
                  g.map[var_list[i]] = adig[i];
                if (check_sheaf(model, w, g, s.lhs) &&
                    !check_sheaf(model, w, g, s.rhs)) {
                  // re-verify before reporting
                  if (check_sheaf(model, w, g, s.lhs) &&
                      !check_sheaf(model, w, g, s.rhs))
                    return SheafWitness{model, w, g};
                }
              } while (bump(adig, arad));
            }
          } while (bump(pdig, prad));
        } while (bump(cdig, crad));
      } while (bump(rdig, rrad));
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Random generators

SheafModel random_sheaf(const Signature& sig, std::uint64_t seed,
                        const RandomSheafParams& params) {
  std::mt19937_64 rng(seed);
  auto rnd = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  SheafModel m;
  int n = rnd(1, params.max_worlds);
  m.worlds = n;
  m.rel.assign(n, std::vector<bool>(n, false));
  // random forest; R = ancestor relation (transitive, irreflexive)
  std::vector<int> parent(n, -1);
  for (int i = 1; i < n; ++i) parent[i] = rnd(-1, i - 1);
  for (int i = 1; i < n; ++i)
    for (int a = parent[i]; a != -1; a = parent[a]) m.rel[a][i] = true;

  if (params.constant_dom) {
    int d = rnd(1, params.max_domain);
    m.domain_size.assign(n, d);
  } else {
    m.domain_size.resize(n);
    for (int w = 0; w < n; ++w) m.domain_size[w] = rnd(1, params.max_domain);
    // eta along tree edges, composed along ancestor paths
    std::map<std::pair<int, int>, std::vector<int>> edge_eta;
    for (int i = 1; i < n; ++i) {
      if (parent[i] < 0) continue;
      std::vector<int> img(m.domain_size[parent[i]]);
      for (int& e : img) e = rnd(0, m.domain_size[i] - 1);
      edge_eta[{parent[i], i}] = img;
    }
    for (int w = 0; w < n; ++w)
      for (int u = 0; u < n; ++u)
        if (m.rel[w][u]) {
          // compose edge maps along the unique tree path w -> ... -> u
          std::vector<int> path{u};
          for (int a = parent[u]; a != w; a = parent[a]) path.push_back(a);
          path.push_back(w);
          std::reverse(path.begin(), path.end());
          std::vector<int> img(m.domain_size[w]);
          for (int d = 0; d < m.domain_size[w]; ++d) {
            int v = d;
            for (std::size_t k = 0; k + 1 < path.size(); ++k)
              v = edge_eta[{path[k], path[k + 1]}][v];
            img[d] = v;
          }
          m.eta[{w, u}] = img;
        }
  }
  // constants: choose at forest roots, propagate by eta
  for (int c : sig.constants) {
    std::vector<int> vals(n, -1);
    for (int w = 0; w < n; ++w) {
      if (parent[w] == -1)
        vals[w] = rnd(0, m.domain_size[w] - 1);
      else
        vals[w] = m.eta_map(parent[w], w, vals[parent[w]]);
    }
    m.const_interp[c] = vals;
  }
  // predicates: random tuples
  for (const auto& [name, ar] : sig.predicates) {
    auto& per_world = m.interp[name];
    per_world.assign(n, {});
    for (int w = 0; w < n; ++w) {
      std::vector<int> tup(ar, 0), rad(ar, m.domain_size[w]);
      if (ar == 0) {
        if (rnd(0, 1)) per_world[w].insert({});
        continue;
      }
      do {
        if (rnd(0, 1)) per_world[w].insert(tup);
      } while (bump(tup, rad));
    }
  }
  return m;
}

SheafModel random_constant_model(const Signature& sig, std::uint64_t seed,
                                 int max_worlds, int max_domain) {
  std::mt19937_64 rng(seed);
  auto rnd = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  SheafModel m;
  int n = rnd(1, max_worlds);
  int dom = rnd(1, max_domain);
  m.worlds = n;
  m.domain_size.assign(n, dom);
  m.rel.assign(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) m.rel[i][j] = rnd(0, 9) < 4;
  // transitive closure (stays irreflexive: edges go up in index order)
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (m.rel[i][k])
        for (int j = 0; j < n; ++j)
          if (m.rel[k][j]) m.rel[i][j] = true;
  for (int c : sig.constants)
    m.const_interp[c] = std::vector<int>(n, rnd(0, dom - 1));
  for (const auto& [name, ar] : sig.predicates) {
    auto& per_world = m.interp[name];
    per_world.assign(n, {});
    for (int w = 0; w < n; ++w) {
      std::vector<int> tup(ar, 0), rad(ar, dom);
      if (ar == 0) {
        if (rnd(0, 1)) per_world[w].insert({});
        continue;
      }
      do {
        if (rnd(0, 1)) per_world[w].insert(tup);
      } while (bump(tup, rad));
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// JSON I/O

SheafModel load_model(const std::string& json_text, const Signature& sig) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ModelError(std::string("model file is not valid JSON: ") + e.what());
  }
  SheafModel m;
  try {
    m.worlds = j.at("worlds").get<int>();
    if (m.worlds < 1) throw ModelError("model must have at least one world");
    m.rel.assign(m.worlds, std::vector<bool>(m.worlds, false));
    for (const auto& pair : j.at("R")) {
      int a = pair.at(0).get<int>(), b = pair.at(1).get<int>();
      if (a < 0 || a >= m.worlds || b < 0 || b >= m.worlds)
        throw ModelError("R mentions a world out of range");
      m.rel[a][b] = true;
    }
    if (j.contains("constant")) {
      m.domain_size.assign(m.worlds, j.at("constant").get<int>());
    } else {
      m.domain_size = j.at("domains").get<std::vector<int>>();
    }
    if (j.contains("eta")) {
      for (const auto& [key, images] : j.at("eta").items()) {
        auto comma = key.find(',');
        if (comma == std::string::npos)
          throw ModelError("eta key must be of the form \"i,j\"");
        int w = std::stoi(key.substr(0, comma));
        int u = std::stoi(key.substr(comma + 1));
        m.eta[{w, u}] = images.get<std::vector<int>>();
      }
    }
    if (j.contains("interp")) {
      for (const auto& [name, worlds] : j.at("interp").items()) {
        auto& per_world = m.interp[name];
        per_world.assign(m.worlds, {});
        for (const auto& [wkey, tuples] : worlds.items()) {
          int w = std::stoi(wkey);
          if (w < 0 || w >= m.worlds)
            throw ModelError("interpretation mentions a world out of range");
          for (const auto& tup : tuples)
            per_world[w].insert(tup.get<std::vector<int>>());
        }
      }
    }
    if (j.contains("constants")) {
      for (const auto& [ckey, worlds] : j.at("constants").items()) {
        if (ckey.size() < 2 || ckey[0] != 'c')
          throw ModelError("constant key must be of the form \"c<k>\"");
        int c = std::stoi(ckey.substr(1));
        std::vector<int> vals(m.worlds, -1);
        for (const auto& [wkey, elem] : worlds.items())
          vals.at(std::stoi(wkey)) = elem.get<int>();
        for (int v : vals)
          if (v < 0)
            throw ModelError("constant c" + std::to_string(c) +
                             " not interpreted at every world");
        m.const_interp[c] = vals;
      }
    }
  } catch (const json::exception& e) {
    throw ModelError(std::string("malformed model file: ") + e.what());
  }
  m.validate(sig);
  return m;
}

std::string save_model(const SheafModel& m) {
  json j;
  j["worlds"] = m.worlds;
  json r = json::array();
  for (int w = 0; w < m.worlds; ++w)
    for (int u = 0; u < m.worlds; ++u)
      if (m.rel[w][u]) r.push_back(json::array({w, u}));
  j["R"] = r;
  bool constant = true;
  for (int w = 1; w < m.worlds; ++w)
    if (m.domain_size[w] != m.domain_size[0]) constant = false;
  if (constant && m.eta.empty())
    j["constant"] = m.domain_size[0];
  else
    j["domains"] = m.domain_size;
  if (!m.eta.empty()) {
    json e = json::object();
    for (const auto& [key, images] : m.eta)
      e[std::to_string(key.first) + "," + std::to_string(key.second)] = images;
    j["eta"] = e;
  }
  if (!m.interp.empty()) {
    json p = json::object();
    for (const auto& [name, per_world] : m.interp) {
      json worlds = json::object();
      for (int w = 0; w < m.worlds; ++w) {
        if (per_world[w].empty()) continue;
        json tuples = json::array();
        for (const auto& tup : per_world[w]) tuples.push_back(tup);
        worlds[std::to_string(w)] = tuples;
      }
      p[name] = worlds;
    }
    j["interp"] = p;
  }
  if (!m.const_interp.empty()) {
    json c = json::object();
    for (const auto& [idx, vals] : m.const_interp) {
      json worlds = json::object();
      for (int w = 0; w < m.worlds; ++w) worlds[std::to_string(w)] = vals[w];
      c["c" + std::to_string(idx)] = worlds;
    }
    j["constants"] = c;
  }
  return j.dump(2);
}

SheafModel prop_to_sheaf(const PropModel& m) {
  SheafModel s;
  s.worlds = m.worlds;
  s.rel = m.rel;
  s.domain_size.assign(m.worlds, 1);
  for (const auto& [atom, at] : m.valuation) {
    auto& per_world = s.interp[atom];
    per_world.assign(m.worlds, {});
    for (int w : at) per_world[w].insert(std::vector<int>{});
  }
  return s;
}

}  // namespace spc
