#include "spc/calculus.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <unordered_set>

namespace spc {

std::string to_string(Logic l) {
  switch (l) {
    case Logic::RC1: return "rc1";
    case Logic::RCw: return "rcw";
    case Logic::QRC1: return "qrc1";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Rule

int Rule::arity() const {
  switch (kind) {
    case Kind::AxId:
    case Kind::AxTop:
    case Kind::ConjElimL:
    case Kind::ConjElimR:
    case Kind::Trans:
    case Kind::Mono:
    case Kind::NegIntro:
      return 0;
    case Kind::Nec:
    case Kind::AllIntroR:
    case Kind::AllIntroL:
    case Kind::TermInst:
    case Kind::ConstElim:
      return 1;
    case Kind::ConjIntro:
    case Kind::Cut:
      return 2;
  }
  return 0;
}

std::string Rule::label() const {
  switch (kind) {
    case Kind::AxId: return "ax-id";
    case Kind::AxTop: return "ax-top";
    case Kind::ConjElimL: return "conj-elim-l";
    case Kind::ConjElimR: return "conj-elim-r";
    case Kind::ConjIntro: return "conj-intro";
    case Kind::Cut: return "cut";
    case Kind::Nec: return "nec";
    case Kind::Trans: return "trans";
    case Kind::Mono: return "mono";
    case Kind::NegIntro: return "neg-intro";
    case Kind::AllIntroR: return "all-intro-r";
    case Kind::AllIntroL: return "all-intro-l";
    case Kind::TermInst: return "term-inst";
    case Kind::ConstElim: return "const-elim";
  }
  return "?";
}

std::string Rule::params() const {
  switch (kind) {
    case Kind::Nec:
    case Kind::Trans:
      return "[" + std::to_string(alpha) + "]";
    case Kind::Mono:
    case Kind::NegIntro:
      return "[" + std::to_string(alpha) + "," + std::to_string(beta) + "]";
    case Kind::AllIntroR:
      return "[x" + std::to_string(var) + "]";
    case Kind::AllIntroL:
    case Kind::TermInst:
    case Kind::ConstElim:
      return "[x" + std::to_string(var) + "," + term.str() + "]";
    default:
      return "";
  }
}

int Derivation::total_size() const {
  int n = conclusion.lhs.size() + conclusion.rhs.size();
  for (const Derivation& p : premises) n += p.total_size();
  return n;
}

// ---------------------------------------------------------------------------
// Derivation checking

namespace {

CheckResult fail_at(std::vector<int> path, std::string msg) {
  return CheckResult{false, std::move(msg), std::move(path)};
}

CheckResult check_node(const Derivation& d, Logic logic,
                       std::vector<int>& path) {
  const Sequent& c = d.conclusion;
  const Rule& r = d.rule;
  if (static_cast<int>(d.premises.size()) != r.arity())
    return fail_at(path, "rule " + r.label() + " expects " +
                             std::to_string(r.arity()) + " premises");
  Mode m;
  try {
    m = mode_of(c);
  } catch (const ModeError& e) {
    return fail_at(path, e.what());
  }
  if (logic == Logic::RC1 && m != Mode::Propositional)
    return fail_at(path, "rc1 sequents must be propositional");
  if (logic == Logic::RCw && m == Mode::Quantified)
    return fail_at(path, "rcw sequents cannot be quantified");
  if (logic == Logic::QRC1 && m == Mode::Polymodal)
    return fail_at(path, "qrc1 sequents cannot use indexed diamonds");

  auto prem = [&](int i) -> const Sequent& {
    return d.premises[i].conclusion;
  };
  using K = Formula::Kind;
  switch (r.kind) {
    case Rule::Kind::AxId:
      if (c.lhs != c.rhs) return fail_at(path, "ax-id: sides differ");
      break;
    case Rule::Kind::AxTop:
      if (c.rhs.kind() != K::Top) return fail_at(path, "ax-top: rhs not T");
      break;
    case Rule::Kind::ConjElimL:
      if (c.lhs.kind() != K::Conj || c.lhs.left() != c.rhs)
        return fail_at(path, "conj-elim-l: conclusion shape mismatch");
      break;
    case Rule::Kind::ConjElimR:
      if (c.lhs.kind() != K::Conj || c.lhs.right() != c.rhs)
        return fail_at(path, "conj-elim-r: conclusion shape mismatch");
      break;
    case Rule::Kind::ConjIntro:
      if (prem(0).lhs != c.lhs || prem(1).lhs != c.lhs ||
          c.rhs != Formula::conj(prem(0).rhs, prem(1).rhs))
        return fail_at(path, "conj-intro: conclusion shape mismatch");
      break;
    case Rule::Kind::Cut:
      if (prem(0).lhs != c.lhs || prem(0).rhs != prem(1).lhs ||
          prem(1).rhs != c.rhs)
        return fail_at(path, "cut: premises do not compose");
      break;
    case Rule::Kind::Nec:
      if (logic != Logic::RCw && r.alpha != 0)
        return fail_at(path, "nec: nonzero index outside rcw");
      if (c.lhs != Formula::dia(r.alpha, prem(0).lhs) ||
          c.rhs != Formula::dia(r.alpha, prem(0).rhs))
        return fail_at(path, "nec: conclusion shape mismatch");
      break;
    case Rule::Kind::Trans:
      if (logic != Logic::RCw && r.alpha != 0)
        return fail_at(path, "trans: nonzero index outside rcw");
      if (c.lhs.kind() != K::Diamond || c.lhs.dia_index() != r.alpha ||
          c.lhs.body().kind() != K::Diamond ||
          c.lhs.body().dia_index() != r.alpha || c.rhs != c.lhs.body())
        return fail_at(path, "trans: conclusion shape mismatch");
      break;
    case Rule::Kind::Mono:
      if (logic != Logic::RCw) return fail_at(path, "mono: rcw only");
      if (r.alpha <= r.beta)
        return fail_at(path, "mono: side condition alpha > beta fails");
      if (c.lhs.kind() != K::Diamond || c.lhs.dia_index() != r.alpha ||
          c.rhs != Formula::dia(r.beta, c.lhs.body()))
        return fail_at(path, "mono: conclusion shape mismatch");
      break;
    case Rule::Kind::NegIntro: {
      if (logic != Logic::RCw) return fail_at(path, "neg-intro: rcw only");
      if (r.alpha <= r.beta)
        return fail_at(path, "neg-intro: side condition alpha > beta fails");
      if (c.lhs.kind() != K::Conj) return fail_at(path, "neg-intro: lhs shape");
      Formula a = c.lhs.left(), b = c.lhs.right();
      if (a.kind() != K::Diamond || a.dia_index() != r.alpha ||
          b.kind() != K::Diamond || b.dia_index() != r.beta ||
          c.rhs != Formula::dia(r.alpha, Formula::conj(a.body(), b)))
        return fail_at(path, "neg-intro: conclusion shape mismatch");
      break;
    }
    case Rule::Kind::AllIntroR:
      if (logic != Logic::QRC1)
        return fail_at(path, "all-intro-r: qrc1 only");
      if (c.rhs.kind() != K::Forall || c.rhs.var() != r.var ||
          c.rhs.body() != prem(0).rhs || c.lhs != prem(0).lhs)
        return fail_at(path, "all-intro-r: conclusion shape mismatch");
      if (free_vars(c.lhs).count(r.var))
        return fail_at(path, "all-intro-r: side condition x not in fv(lhs) "
                             "fails for x" + std::to_string(r.var));
      break;
    case Rule::Kind::AllIntroL: {
      if (logic != Logic::QRC1)
        return fail_at(path, "all-intro-l: qrc1 only");
      if (c.lhs.kind() != K::Forall || c.lhs.var() != r.var ||
          prem(0).rhs != c.rhs)
        return fail_at(path, "all-intro-l: conclusion shape mismatch");
      if (!is_free_for(r.term, r.var, c.lhs.body()))
        return fail_at(path, "all-intro-l: side condition t free for x fails");
      if (prem(0).lhs != substitute(c.lhs.body(), r.var, r.term))
        return fail_at(path, "all-intro-l: premise is not the instance");
      break;
    }
    case Rule::Kind::TermInst: {
      if (logic != Logic::QRC1) return fail_at(path, "term-inst: qrc1 only");
      if (!is_free_for(r.term, r.var, prem(0).lhs) ||
          !is_free_for(r.term, r.var, prem(0).rhs))
        return fail_at(path, "term-inst: side condition t free for x fails");
      if (c.lhs != substitute(prem(0).lhs, r.var, r.term) ||
          c.rhs != substitute(prem(0).rhs, r.var, r.term))
        return fail_at(path, "term-inst: conclusion is not the instance");
      break;
    }
    case Rule::Kind::ConstElim: {
      if (logic != Logic::QRC1) return fail_at(path, "const-elim: qrc1 only");
      if (r.term.kind != Term::Kind::Const)
        return fail_at(path, "const-elim: parameter is not a constant");
      int cc = r.term.index;
      if (constants_of(c.lhs).count(cc) || constants_of(c.rhs).count(cc))
        return fail_at(path, "const-elim: side condition c not in phi, psi "
                             "fails for c" + std::to_string(cc));
      if (prem(0).lhs != substitute(c.lhs, r.var, r.term) ||
          prem(0).rhs != substitute(c.rhs, r.var, r.term))
        return fail_at(path, "const-elim: premise is not the instance");
      break;
    }
  }
  for (std::size_t i = 0; i < d.premises.size(); ++i) {
    path.push_back(static_cast<int>(i));
    CheckResult r2 = check_node(d.premises[i], logic, path);
    if (!r2.ok) return r2;
    path.pop_back();
  }
  return CheckResult{};
}

}  // namespace

CheckResult check_derivation(const Derivation& d, Logic logic) {
  std::vector<int> path;
  return check_node(d, logic, path);
}

namespace {

void serialize_node(const Derivation& d, int indent, std::string& out) {
  out.append(indent, ' ');
  out += d.rule.label();
  std::string p = d.rule.params();
  if (!p.empty()) {
    out += ' ';
    out += p;
  }
  out += " :: ";
  out += d.conclusion.str();
  out += '\n';
  for (const Derivation& prem : d.premises)
    serialize_node(prem, indent + 2, out);
}

}  // namespace

std::string serialize(const Derivation& d) {
  std::string out;
  serialize_node(d, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// RC1 decision procedure

namespace {

bool decide_rec(const Formula& lhs, const Formula& rhs,
                std::unordered_map<Sequent, bool, Sequent::Hash>& memo) {
  Sequent key{lhs, rhs};
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  memo.emplace(key, false);  // guards against accidental cycles
  std::vector<Formula> flats = flatten_conj(lhs);
  bool res = false;
  switch (rhs.kind()) {
    case Formula::Kind::Top:
      res = true;
      break;
    case Formula::Kind::Atom:
      res = std::find(flats.begin(), flats.end(), rhs) != flats.end();
      break;
    case Formula::Kind::Conj:
      res = decide_rec(lhs, rhs.left(), memo) &&
            decide_rec(lhs, rhs.right(), memo);
      break;
    case Formula::Kind::Diamond:
      for (const Formula& f : flats)
        if (f.kind() == Formula::Kind::Diamond &&
            (decide_rec(f.body(), rhs.body(), memo) ||
             decide_rec(f.body(), rhs, memo))) {
          res = true;
          break;
        }
      break;
    case Formula::Kind::Forall:
      throw ModeError("decide_rc1: quantified input");
  }
  memo[key] = res;
  return res;
}

}  // namespace

bool Rc1Decider::decide(const Sequent& s) {
  if (mode_of(s) != Mode::Propositional)
    throw ModeError("decide_rc1 requires a propositional monomodal sequent");
  return decide_rec(s.lhs, s.rhs, memo_);
}

bool decide_rc1(const Sequent& s) {
  Rc1Decider d;
  return d.decide(s);
}

// ---------------------------------------------------------------------------
// Forward closure oracle

RcClosure::RcClosure(const std::vector<std::string>& atoms, int max_size,
                     Logic logic, const std::vector<int>& indices)
    : indices_(indices) {
  std::sort(indices_.begin(), indices_.end());
  indices_.erase(std::unique(indices_.begin(), indices_.end()),
                 indices_.end());
  // universe, by size
  std::vector<std::vector<Formula>> by_size(max_size + 1);
  by_size[1].push_back(Formula::top());
  for (const std::string& a : atoms) by_size[1].push_back(Formula::atom(a));
  for (int s = 2; s <= max_size; ++s) {
    for (const Formula& f : by_size[s - 1])
      for (int i : indices_) by_size[s].push_back(Formula::dia(i, f));
    for (int ls = 1; ls <= s - 2; ++ls)
      for (const Formula& a : by_size[ls])
        for (const Formula& b : by_size[s - 1 - ls])
          by_size[s].push_back(Formula::conj(a, b));
  }
  for (int s = 1; s <= max_size; ++s)
    for (const Formula& f : by_size[s]) {
      ids_.emplace(f, static_cast<int>(universe_.size()));
      universe_.push_back(f);
    }
  int n = static_cast<int>(universe_.size());
  lid_.assign(n, -1);
  rid_.assign(n, -1);
  conj_left_.assign(n, {});
  conj_right_.assign(n, {});
  dia_id_.assign(indices_.size(), std::vector<int>(n, -1));
  for (int id = 0; id < n; ++id) {
    const Formula& f = universe_[id];
    if (f.kind() == Formula::Kind::Conj) {
      lid_[id] = ids_.at(f.left());
      rid_[id] = ids_.at(f.right());
      conj_left_[lid_[id]].push_back(id);
      conj_right_[rid_[id]].push_back(id);
    } else if (f.kind() == Formula::Kind::Diamond) {
      auto pos = std::lower_bound(indices_.begin(), indices_.end(),
                                  f.dia_index()) -
                 indices_.begin();
      dia_id_[pos][ids_.at(f.body())] = id;
    }
  }
  words_ = (n + 63) / 64;
  fwd_.assign(n, std::vector<std::uint64_t>(words_, 0));
  bwd_.assign(n, std::vector<std::uint64_t>(words_, 0));

  // seed axioms
  int top_id = ids_.at(Formula::top());
  for (int id = 0; id < n; ++id) {
    const Formula& f = universe_[id];
    add_edge(id, id, {Rule::ax_id()});
    add_edge(id, top_id, {Rule::ax_top()});
    if (f.kind() == Formula::Kind::Conj) {
      add_edge(id, lid_[id], {Rule::conj_elim_l()});
      add_edge(id, rid_[id], {Rule::conj_elim_r()});
    }
    if (f.kind() == Formula::Kind::Diamond) {
      Formula body = f.body();
      if (body.kind() == Formula::Kind::Diamond &&
          body.dia_index() == f.dia_index())
        add_edge(id, ids_.at(body), {Rule::trans(f.dia_index())});
      if (logic == Logic::RCw)
        for (int b : indices_) {
          if (b >= f.dia_index()) break;
          auto it = ids_.find(Formula::dia(b, body));
          if (it != ids_.end())
            add_edge(id, it->second, {Rule::mono(f.dia_index(), b)});
        }
    }
    if (logic == Logic::RCw && f.kind() == Formula::Kind::Conj) {
      Formula a = f.left(), b = f.right();
      if (a.kind() == Formula::Kind::Diamond &&
          b.kind() == Formula::Kind::Diamond &&
          a.dia_index() > b.dia_index()) {
        auto it = ids_.find(
            Formula::dia(a.dia_index(), Formula::conj(a.body(), b)));
        if (it != ids_.end())
          add_edge(id, it->second,
                   {Rule::neg_intro(a.dia_index(), b.dia_index())});
      }
    }
  }

  // close under cut, conj-intro, nec
  auto key = [n](int a, int b) {
    return static_cast<std::int64_t>(a) * n + b;
  };
  while (!worklist_.empty()) {
    auto [a, b] = worklist_.back();
    worklist_.pop_back();
    // cut to the right: a|-b, b|-c
    for (std::size_t w = 0; w < words_; ++w) {
      std::uint64_t bits = fwd_[b][w] & ~fwd_[a][w];
      while (bits) {
        int c = static_cast<int>(w * 64 + std::countr_zero(bits));
        bits &= bits - 1;
        add_edge(a, c, {Rule::cut(), key(a, b), key(b, c)});
      }
    }
    // cut to the left: c|-a, a|-b
    for (std::size_t w = 0; w < words_; ++w) {
      std::uint64_t bits = bwd_[a][w];
      while (bits) {
        int c = static_cast<int>(w * 64 + std::countr_zero(bits));
        bits &= bits - 1;
        if (!has(c, b)) add_edge(c, b, {Rule::cut(), key(c, a), key(a, b)});
      }
    }
    // necessitation
    for (std::size_t p = 0; p < indices_.size(); ++p) {
      int da = dia_id_[p][a], db = dia_id_[p][b];
      if (da >= 0 && db >= 0 && !has(da, db))
        add_edge(da, db, {Rule::nec(indices_[p]), key(a, b)});
    }
    // conjunction introduction: b is a conjunct of some c in the universe
    for (int c : conj_left_[b])
      if (has(a, rid_[c]) && !has(a, c))
        add_edge(a, c, {Rule::conj_intro(), key(a, b), key(a, rid_[c])});
    for (int c : conj_right_[b])
      if (has(a, lid_[c]) && !has(a, c))
        add_edge(a, c, {Rule::conj_intro(), key(a, lid_[c]), key(a, b)});
  }
}

bool RcClosure::has(int a, int b) const {
  return fwd_[a][b / 64] >> (b % 64) & 1;
}

void RcClosure::add_edge(int a, int b, Just j) {
  if (has(a, b)) return;
  fwd_[a][b / 64] |= 1ULL << (b % 64);
  bwd_[b][a / 64] |= 1ULL << (a % 64);
  just_.emplace(static_cast<std::int64_t>(a) * universe_.size() + b, j);
  worklist_.push_back({a, b});
}

std::optional<int> RcClosure::id_of(const Formula& f) const {
  auto it = ids_.find(f);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

bool RcClosure::derivable(const Sequent& s) const {
  auto a = id_of(s.lhs), b = id_of(s.rhs);
  if (!a || !b) throw Error("sequent outside the closure universe");
  return has(*a, *b);
}

bool RcClosure::derivable_ids(int a, int b) const { return has(a, b); }

Derivation RcClosure::extract(std::int64_t edge) const {
  const Just& j = just_.at(edge);
  int n = static_cast<int>(universe_.size());
  int a = static_cast<int>(edge / n), b = static_cast<int>(edge % n);
  Derivation d;
  d.conclusion = Sequent{universe_[a], universe_[b]};
  d.rule = j.rule;
  if (j.prem1 >= 0) d.premises.push_back(extract(j.prem1));
  if (j.prem2 >= 0) d.premises.push_back(extract(j.prem2));
  return d;
}

std::optional<Derivation> RcClosure::derivation(const Sequent& s) const {
  auto a = id_of(s.lhs), b = id_of(s.rhs);
  if (!a || !b || !has(*a, *b)) return std::nullopt;
  return extract(static_cast<std::int64_t>(*a) * universe_.size() + *b);
}

// ---------------------------------------------------------------------------
// Goal-directed backward search

namespace {

void collect_terms(const Formula& f, std::set<Term>& out) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
      for (const Term& t : f.args()) out.insert(t);
      break;
    case Formula::Kind::Conj:
      collect_terms(f.left(), out);
      collect_terms(f.right(), out);
      break;
    case Formula::Kind::Diamond:
    case Formula::Kind::Forall:
      collect_terms(f.body(), out);
      break;
    default:
      break;
  }
}

void collect_sig(const Formula& f, Signature& sig) {
  switch (f.kind()) {
    case Formula::Kind::Atom: {
      int ar = static_cast<int>(f.args().size());
      auto [it, fresh] = sig.predicates.emplace(f.pred(), ar);
      if (!fresh && it->second != ar)
        throw Error("predicate " + f.pred() + " used with two arities");
      for (const Term& t : f.args())
        if (t.kind == Term::Kind::Const) sig.constants.insert(t.index);
      break;
    }
    case Formula::Kind::Conj:
      collect_sig(f.left(), sig);
      collect_sig(f.right(), sig);
      break;
    case Formula::Kind::Diamond:
    case Formula::Kind::Forall:
      collect_sig(f.body(), sig);
      break;
    default:
      break;
  }
}

/// Derivation of lhs |- target where target is one of lhs's flat conjuncts.
Derivation extract_conjunct(const Formula& lhs, const Formula& target) {
  if (lhs == target)
    return Derivation{Sequent{lhs, target}, Rule::ax_id(), {}};
  std::vector<Formula> lf = flatten_conj(lhs.left());
  bool in_left = std::find(lf.begin(), lf.end(), target) != lf.end();
  Formula side = in_left ? lhs.left() : lhs.right();
  Derivation elim{Sequent{lhs, side},
                  in_left ? Rule::conj_elim_l() : Rule::conj_elim_r(),
                  {}};
  if (side == target) return elim;
  Derivation rest = extract_conjunct(side, target);
  return Derivation{Sequent{lhs, target}, Rule::cut(),
                    {std::move(elim), std::move(rest)}};
}

Derivation mk_cut(Derivation a, Derivation b) {
  Sequent c{a.conclusion.lhs, b.conclusion.rhs};
  return Derivation{c, Rule::cut(), {std::move(a), std::move(b)}};
}

Derivation mk_nec(int idx, Derivation p) {
  Sequent c{Formula::dia(idx, p.conclusion.lhs),
            Formula::dia(idx, p.conclusion.rhs)};
  return Derivation{c, Rule::nec(idx), {std::move(p)}};
}

struct GoalProver {
  Logic logic;
  std::unordered_map<Sequent, int, Sequent::Hash> failed;
  std::unordered_set<Sequent, Sequent::Hash> active;

  std::optional<Derivation> search(const Sequent& s, int depth, bool& cut_hit);

  std::optional<Derivation> try_moves(const Sequent& s, int depth,
                                      bool& cut_hit);
};

std::optional<Derivation> GoalProver::search(const Sequent& s, int depth,
                                             bool& cut_hit) {
  if (depth <= 0) {
    cut_hit = true;
    return std::nullopt;
  }
  if (active.count(s)) {
    cut_hit = true;
    return std::nullopt;
  }
  auto it = failed.find(s);
  if (it != failed.end() && it->second >= depth) return std::nullopt;
  active.insert(s);
  bool local_cut = false;
  std::optional<Derivation> res = try_moves(s, depth, local_cut);
  active.erase(s);
  if (!res) {
    if (!local_cut) failed[s] = depth;
    if (local_cut) cut_hit = true;
  }
  return res;
}

std::optional<Derivation> GoalProver::try_moves(const Sequent& s, int depth,
                                                bool& cut_hit) {
  using K = Formula::Kind;
  const Formula& lhs = s.lhs;
  const Formula& rhs = s.rhs;
  if (rhs.kind() == K::Top) return Derivation{s, Rule::ax_top(), {}};
  if (lhs == rhs) return Derivation{s, Rule::ax_id(), {}};
  std::vector<Formula> flats = flatten_conj(lhs);
  if (std::find(flats.begin(), flats.end(), rhs) != flats.end())
    return extract_conjunct(lhs, rhs);
  // axiom shapes
  if (lhs.kind() == K::Diamond && rhs.kind() == K::Diamond) {
    if (lhs.body().kind() == K::Diamond &&
        lhs.body().dia_index() == lhs.dia_index() && rhs == lhs.body())
      return Derivation{s, Rule::trans(lhs.dia_index()), {}};
    if (logic == Logic::RCw && lhs.dia_index() > rhs.dia_index() &&
        lhs.body() == rhs.body())
      return Derivation{s, Rule::mono(lhs.dia_index(), rhs.dia_index()), {}};
  }
  if (logic == Logic::RCw && lhs.kind() == K::Conj &&
      lhs.left().kind() == K::Diamond && lhs.right().kind() == K::Diamond &&
      lhs.left().dia_index() > lhs.right().dia_index() &&
      rhs == Formula::dia(lhs.left().dia_index(),
                          Formula::conj(lhs.left().body(), lhs.right())))
    return Derivation{
        s, Rule::neg_intro(lhs.left().dia_index(), lhs.right().dia_index()),
        {}};
  // split conjunction on the right
  if (rhs.kind() == K::Conj) {
    auto d1 = search({lhs, rhs.left()}, depth - 1, cut_hit);
    if (d1) {
      auto d2 = search({lhs, rhs.right()}, depth - 1, cut_hit);
      if (d2)
        return Derivation{s, Rule::conj_intro(),
                          {std::move(*d1), std::move(*d2)}};
    }
    return std::nullopt;
  }
  // universal on the right
  if (rhs.kind() == K::Forall && logic == Logic::QRC1) {
    if (!free_vars(lhs).count(rhs.var())) {
      auto d = search({lhs, rhs.body()}, depth - 1, cut_hit);
      if (d)
        return Derivation{s, Rule::all_intro_r(rhs.var()), {std::move(*d)}};
    }
    return std::nullopt;
  }
  // universal on the left
  if (lhs.kind() == K::Forall && logic == Logic::QRC1) {
    std::set<Term> cands;
    cands.insert(Term::var(lhs.var()));
    collect_terms(lhs, cands);
    collect_terms(rhs, cands);
    for (const Term& t : cands) {
      if (!is_free_for(t, lhs.var(), lhs.body())) continue;
      Formula inst = substitute(lhs.body(), lhs.var(), t);
      auto d = search({inst, rhs}, depth - 1, cut_hit);
      if (d)
        return Derivation{s, Rule::all_intro_l(lhs.var(), t),
                          {std::move(*d)}};
    }
  }
  // diamond on the right, through a diamond conjunct
  if (rhs.kind() == K::Diamond) {
    int b = rhs.dia_index();
    for (const Formula& kappa : flats) {
      if (kappa.kind() != K::Diamond) continue;
      int a = kappa.dia_index();
      bool usable = a == b || (logic == Logic::RCw && a > b);
      if (!usable) continue;
      auto finish = [&](Derivation upper) -> Derivation {
        // upper : <a>delta |- rhs ; prepend extraction if needed
        if (kappa == lhs) return upper;
        return mk_cut(extract_conjunct(lhs, kappa), std::move(upper));
      };
      // route 1: delta |- chi
      if (auto d = search({kappa.body(), rhs.body()}, depth - 1, cut_hit)) {
        Derivation n = mk_nec(a, std::move(*d));  // <a>delta |- <a>chi
        if (a != b)
          n = mk_cut(std::move(n),
                     Derivation{Sequent{Formula::dia(a, rhs.body()), rhs},
                                Rule::mono(a, b),
                                {}});
        return finish(std::move(n));
      }
      // route 2: delta |- <b>chi
      if (auto d = search({kappa.body(), rhs}, depth - 1, cut_hit)) {
        Derivation n = mk_nec(a, std::move(*d));  // <a>delta |- <a><b>chi
        Formula aab = Formula::dia(a, rhs);
        if (a != b) {
          Formula bb = Formula::dia(b, rhs);
          n = mk_cut(std::move(n),
                     Derivation{Sequent{aab, bb}, Rule::mono(a, b), {}});
          n = mk_cut(std::move(n),
                     Derivation{Sequent{bb, rhs}, Rule::trans(b), {}});
        } else {
          n = mk_cut(std::move(n),
                     Derivation{Sequent{aab, rhs}, Rule::trans(b), {}});
        }
        return finish(std::move(n));
      }
    }
  }
  // descend into a single conjunct
  if (flats.size() > 1) {
    for (const Formula& kappa : flats) {
      if (kappa == lhs) continue;
      auto d = search({kappa, rhs}, depth - 1, cut_hit);
      if (d) return mk_cut(extract_conjunct(lhs, kappa), std::move(*d));
    }
  }
  return std::nullopt;
}

}  // namespace

Signature signature_of(const Sequent& s) {
  Signature sig;
  collect_sig(s.lhs, sig);
  collect_sig(s.rhs, sig);
  return sig;
}

std::optional<Derivation> prove(const Sequent& s, Logic logic, int budget) {
  Mode m = mode_of(s);
  if (logic == Logic::RC1 && m != Mode::Propositional)
    throw ModeError("rc1 requires a propositional monomodal sequent");
  if (logic == Logic::RCw && m == Mode::Quantified)
    throw ModeError("rcw does not admit quantified sequents");
  if (logic == Logic::QRC1 && m == Mode::Polymodal)
    throw ModeError("qrc1 does not admit indexed diamonds");

  GoalProver gp{logic};
  bool cut_hit = false;
  int depth = std::min(budget, 30);
  if (auto d = gp.search(s, depth, cut_hit)) return d;

  if (m != Mode::Quantified) {
    // propositional fallback: forward closure over all formulas of size
    // <= cap built from the sequent's atoms and indices
    Signature sig = signature_of(s);
    std::vector<std::string> atoms;
    for (const auto& [name, ar] : sig.predicates) atoms.push_back(name);
    std::set<int> idx = dia_indices_of(s.lhs);
    std::set<int> idx2 = dia_indices_of(s.rhs);
    idx.insert(idx2.begin(), idx2.end());
    idx.insert(0);
    int cap = std::min(budget,
                       std::max(s.lhs.size(), s.rhs.size()) + 1);
    if (cap >= std::max(s.lhs.size(), s.rhs.size())) {
      RcClosure cl(atoms, cap, logic,
                   std::vector<int>(idx.begin(), idx.end()));
      if (auto d = cl.derivation(s)) return d;
    }
  }
  return std::nullopt;
}

QrcResult decide_qrc1(const Sequent& s, const QrcConfig& config) {
  Mode m = mode_of(s);
  if (m == Mode::Polymodal)
    throw ModeError("qrc1 does not admit indexed diamonds");
  Signature sig = signature_of(s);
  auto start = std::chrono::steady_clock::now();
  auto expired = [&] {
    if (config.wall_clock_cap_s <= 0) return false;
    std::chrono::duration<double> dt =
        std::chrono::steady_clock::now() - start;
    return dt.count() > config.wall_clock_cap_s;
  };
  for (int n = 1; n <= config.max_rounds; ++n) {
    if (expired())
      return {QrcResult::Verdict::Timeout, std::nullopt, std::nullopt};
    if (auto d = prove(s, Logic::QRC1, n + 4))
      return {QrcResult::Verdict::Derivable, std::move(d), std::nullopt};
    if (expired())
      return {QrcResult::Verdict::Timeout, std::nullopt, std::nullopt};
    if (auto w = countermodel_search(s, sig, n))
      return {QrcResult::Verdict::Underivable, std::nullopt, std::move(w)};
  }
  return {QrcResult::Verdict::Timeout, std::nullopt, std::nullopt};
}

Formula interpolate(const Sequent& s, Logic logic) {
  bool derivable = false;
  switch (logic) {
    case Logic::RC1:
      derivable = decide_rc1(s);
      break;
    case Logic::RCw:
      derivable = prove(s, Logic::RCw, 40).has_value();
      break;
    case Logic::QRC1: {
      QrcResult r = decide_qrc1(s);
      derivable = r.verdict == QrcResult::Verdict::Derivable;
      break;
    }
  }
  if (!derivable)
    throw NotDerivable("interpolate: sequent not shown derivable: " + s.str());
  std::set<std::string> ls = symbols_of(s.lhs), rs = symbols_of(s.rhs);
  for (const std::string& sym : rs)
    if (!ls.count(sym))
      throw SignatureViolation("interpolate: symbol " + sym +
                               " of the rhs does not occur in the lhs");
  return s.rhs;
}

}  // namespace spc
