#include "coforce/forcing.hpp"

#include <algorithm>
#include <functional>

namespace coforce {

std::string to_string(Verdict::State s) {
  switch (s) {
    case Verdict::State::Forced: return "Forced";
    case Verdict::State::NotForced: return "NotForced";
    case Verdict::State::Unknown: return "Unknown";
  }
  return "?";
}

namespace {

Subst totalized(const Subst& s, const std::set<std::string>& over) {
  Subst out = s;
  for (const auto& v : over)
    if (!out.count(v)) out.emplace(v, Term::var(v));
  return out;
}

Formula subst_formula(const Formula& f, const Subst& s) {
  return substitute(f, totalized(s, free_vars(f)));
}

Formula subst_one(const Formula& f, const std::string& var, const Term& t) {
  Subst s{{var, t}};
  return subst_formula(f, s);
}

bool formula_uses_equality(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
      return f.atom_ref().is_equality();
    case Formula::Kind::Top:
    case Formula::Kind::Bot:
      return false;
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      for (const auto& p : f.parts())
        if (formula_uses_equality(p)) return true;
      return false;
    }
    case Formula::Kind::Implies:
      return formula_uses_equality(f.lhs()) || formula_uses_equality(f.rhs());
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      return formula_uses_equality(f.body());
  }
  return false;
}

void collect_subterms(const Term& t, std::set<Term>& pool) {
  pool.insert(t);
  for (const auto& a : t.args()) collect_subterms(a, pool);
}

// Witness candidates for existentials evaluated over a condition: the
// condition's variables and fact subterms, plus one term outside that pool
// when the signature can build one (any such term behaves generically).
std::vector<Term> exists_candidates(const Condition& c, const Signature& sig) {
  std::set<Term> pool;
  for (const auto& v : c.vars) pool.insert(Term::var(v));
  int pool_depth = 0;
  for (const auto& a : c.atoms)
    for (const auto& t : a.args) {
      collect_subterms(t, pool);
      pool_depth = std::max(pool_depth, t.depth());
    }
  std::vector<Term> out(pool.begin(), pool.end());
  for (int d = 0; d <= pool_depth + 1; ++d) {
    bool found = false;
    for (const auto& t : enumerate_terms(sig, c.vars, d))
      if (!pool.count(t)) {
        out.push_back(t);
        found = true;
        break;
      }
    if (found) break;
  }
  std::sort(out.begin(), out.end(), [](const Term& a, const Term& b) {
    if (a.depth() != b.depth()) return a.depth() < b.depth();
    return a < b;
  });
  return out;
}

CoverDerivation identity_cover(const Condition& c) {
  return CoverDerivation::iso_base(identity(c));
}

// Syntactic truth of a positive formula at a condition, with the witness
// (built on identity covers) as evidence.
std::optional<ForcingWitness> eval_positive_w(const Condition& c, const Formula& f,
                                              const Signature& sig) {
  switch (f.kind()) {
    case Formula::Kind::Top: {
      ForcingWitness w;
      w.kind = ForcingWitness::Kind::Top;
      return w;
    }
    case Formula::Kind::Bot:
      return std::nullopt;
    case Formula::Kind::Atom: {
      const Atom& a = f.atom_ref();
      if (a.is_equality()) {
        if (!(a.args[0] == a.args[1])) return std::nullopt;
        ForcingWitness w;
        w.kind = ForcingWitness::Kind::Eq;
        w.cover = identity_cover(c);
        return w;
      }
      if (!c.has_atom(a)) return std::nullopt;
      ForcingWitness w;
      w.kind = ForcingWitness::Kind::Fact;
      w.cover = identity_cover(c);
      return w;
    }
    case Formula::Kind::And: {
      ForcingWitness w;
      w.kind = ForcingWitness::Kind::And;
      for (const auto& p : f.parts()) {
        auto sub = eval_positive_w(c, p, sig);
        if (!sub) return std::nullopt;
        w.children.push_back(std::move(*sub));
      }
      return w;
    }
    case Formula::Kind::Or: {
      for (size_t i = 0; i < f.parts().size(); ++i) {
        if (auto sub = eval_positive_w(c, f.parts()[i], sig)) {
          ForcingWitness w;
          w.kind = ForcingWitness::Kind::Or;
          w.cover = identity_cover(c);
          w.or_legs.push_back({i, std::make_shared<ForcingWitness>(std::move(*sub))});
          return w;
        }
      }
      return std::nullopt;
    }
    case Formula::Kind::Exists: {
      for (const auto& t : exists_candidates(c, sig)) {
        if (auto sub = eval_positive_w(c, subst_one(f.body(), f.binder(), t), sig)) {
          ForcingWitness w;
          w.kind = ForcingWitness::Kind::Exists;
          w.cover = identity_cover(c);
          w.exists_legs.push_back({t, std::make_shared<ForcingWitness>(std::move(*sub))});
          return w;
        }
      }
      return std::nullopt;
    }
    case Formula::Kind::Implies:
    case Formula::Kind::Forall:
      throw std::invalid_argument("eval_positive: non-positive formula");
  }
  return std::nullopt;
}

// Forced-side search result for positive goals: a cover derivation together
// with the per-leg evidence, kept in the derivation's leaf order.
struct PosForced {
  CoverDerivation cover;
  std::vector<std::pair<Morphism, ForcingWitness>> leg_ev;  // (full leg, evidence)
};

std::optional<PosForced> forced_search(SiteKind kind, const Condition& c, const Formula& goal,
                                       const Theory& t, int depth, int term_depth) {
  if (auto ev = eval_positive_w(c, goal, t.sig)) {
    PosForced out{identity_cover(c), {}};
    out.leg_ev.emplace_back(identity(c), std::move(*ev));
    return out;
  }
  if (depth <= 0) return std::nullopt;
  for (const auto& inst : axiom_instances(c, t, kind, term_depth)) {
    const CoherentAxiom& ax = t.axioms[inst.axiom_index];
    std::vector<CoverDerivation> children;
    std::vector<std::pair<Morphism, ForcingWitness>> leg_ev;
    bool ok = true;
    for (size_t i = 0; i < ax.disjuncts.size() && ok; ++i) {
      Extension ext = instance_extension(t, inst, i);
      auto sub = forced_search(kind, ext.extended, goal, t, depth - 1, term_depth);
      if (!sub) {
        ok = false;
        break;
      }
      children.push_back(std::move(sub->cover));
      for (auto& [m, ev] : sub->leg_ev)
        leg_ev.emplace_back(compose(ext.incl, m), std::move(ev));
    }
    if (!ok) continue;
    return PosForced{CoverDerivation::axiom_step(t, inst, std::move(children)),
                     std::move(leg_ev)};
  }
  return std::nullopt;
}

// Assembles a clause-shaped witness for a positive goal from a cover search
// result. Legs are sorted the way Sink::legs are so checkers can pair them.
ForcingWitness witness_from_pos(const Formula& goal, PosForced res) {
  std::stable_sort(res.leg_ev.begin(), res.leg_ev.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  ForcingWitness w;
  switch (goal.kind()) {
    case Formula::Kind::Top:
      w.kind = ForcingWitness::Kind::Top;
      return w;
    case Formula::Kind::Bot:
      w.kind = ForcingWitness::Kind::ViaEmptyCover;
      w.cover = std::move(res.cover);
      return w;
    case Formula::Kind::Atom:
      w.kind = goal.atom_ref().is_equality() ? ForcingWitness::Kind::Eq
                                             : ForcingWitness::Kind::Fact;
      w.cover = std::move(res.cover);
      return w;
    case Formula::Kind::And: {
      w.kind = ForcingWitness::Kind::And;
      for (size_t i = 0; i < goal.parts().size(); ++i) {
        PosForced sub{res.cover, {}};
        for (const auto& [m, ev] : res.leg_ev) sub.leg_ev.emplace_back(m, ev.children.at(i));
        w.children.push_back(witness_from_pos(goal.parts()[i], std::move(sub)));
      }
      return w;
    }
    case Formula::Kind::Or: {
      w.kind = ForcingWitness::Kind::Or;
      for (auto& [m, ev] : res.leg_ev) w.or_legs.push_back(std::move(ev.or_legs.at(0)));
      w.cover = std::move(res.cover);
      return w;
    }
    case Formula::Kind::Exists: {
      w.kind = ForcingWitness::Kind::Exists;
      for (auto& [m, ev] : res.leg_ev) w.exists_legs.push_back(std::move(ev.exists_legs.at(0)));
      w.cover = std::move(res.cover);
      return w;
    }
    default:
      throw std::logic_error("witness_from_pos: non-positive goal");
  }
}

// Saturation (NotForced) search for positive goals.
struct SatSearch {
  SiteKind kind;
  const Theory& t;
  Formula goal;
  Bounds b;

  enum class Outcome { FoundBranch, ForcedHere, Exhausted };
  struct Result {
    Outcome outcome;
    std::optional<SaturatedBranch> branch;
    std::optional<PosForced> forced;
  };

  using RecordKey = std::pair<size_t, Subst>;

  Result run(const Condition& cond, std::vector<SaturatedBranch::Record> records,
             std::set<RecordKey> keys, int fresh_left, int atoms_left) {
    if (auto ev = eval_positive_w(cond, goal, t.sig)) {
      PosForced pf{identity_cover(cond), {}};
      pf.leg_ev.emplace_back(identity(cond), std::move(*ev));
      return {Outcome::ForcedHere, std::nullopt, std::move(pf)};
    }
    auto insts = axiom_instances(cond, t, kind, b.term_depth);

    // Instances already satisfiable in place get a record without extending.
    for (const auto& inst : insts) {
      RecordKey key{inst.axiom_index, inst.instantiation};
      if (keys.count(key)) continue;
      const CoherentAxiom& ax = t.axioms[inst.axiom_index];
      auto cands = exists_candidates(cond, t.sig);
      for (size_t i = 0; i < ax.disjuncts.size(); ++i) {
        const Disjunct& d = ax.disjuncts[i];
        bool recorded = false;
        for (auto& mu : enumerate_substs(d.fresh_vars, cands)) {
          bool holds = true;
          for (const auto& a : d.atoms) {
            Atom img = apply_subst(apply_subst(a, inst.instantiation), mu);
            if (!cond.has_atom(img)) {
              holds = false;
              break;
            }
          }
          if (holds) {
            records.push_back({inst, i, mu});
            keys.insert(key);
            recorded = true;
            break;
          }
        }
        if (recorded) break;
      }
    }

    const AxiomInstance* pending = nullptr;
    for (const auto& inst : insts) {
      if (!keys.count({inst.axiom_index, inst.instantiation})) {
        pending = &inst;
        break;
      }
    }
    if (!pending) {
      SaturatedBranch sb;
      sb.branch = cond;
      sb.closure = std::move(records);
      for (auto& r : sb.closure) r.instance.target = cond;
      return {Outcome::FoundBranch, std::move(sb), std::nullopt};
    }

    const CoherentAxiom& ax = t.axioms[pending->axiom_index];
    bool exhausted = false;
    std::vector<PosForced> forced_children;
    bool all_forced = !ax.disjuncts.empty();
    std::vector<CoverDerivation> child_covers;
    std::vector<std::pair<Morphism, ForcingWitness>> leg_ev;
    if (ax.disjuncts.empty()) {
      // A zero-disjunct instance empties the cover: the branch is
      // inconsistent, which both kills it as a countermodel and forces the
      // goal here.
      PosForced pf{CoverDerivation::axiom_step(t, *pending, {}), {}};
      return {Outcome::ForcedHere, std::nullopt, std::move(pf)};
    }
    for (size_t i = 0; i < ax.disjuncts.size(); ++i) {
      Extension ext = instance_extension(t, *pending, i);
      int new_vars = static_cast<int>(ext.extended.vars.size() - cond.vars.size());
      int new_atoms = static_cast<int>(ext.extended.atoms.size() - cond.atoms.size());
      if (new_vars > fresh_left || new_atoms > atoms_left) {
        exhausted = true;
        all_forced = false;
        continue;
      }
      auto recs = records;
      auto ks = keys;
      Subst mu;
      for (const auto& [orig, fresh] : ext.var_names) mu.emplace(orig, Term::var(fresh));
      recs.push_back({*pending, i, mu});
      ks.insert({pending->axiom_index, pending->instantiation});
      Result r = run(ext.extended, std::move(recs), std::move(ks), fresh_left - new_vars,
                     atoms_left - new_atoms);
      if (r.outcome == Outcome::FoundBranch) return r;
      if (r.outcome == Outcome::Exhausted) {
        exhausted = true;
        all_forced = false;
      } else if (all_forced) {
        child_covers.push_back(r.forced->cover);
        for (auto& [m, ev] : r.forced->leg_ev)
          leg_ev.emplace_back(compose(ext.incl, m), std::move(ev));
      }
    }
    if (all_forced) {
      PosForced pf{CoverDerivation::axiom_step(t, *pending, std::move(child_covers)),
                   std::move(leg_ev)};
      return {Outcome::ForcedHere, std::nullopt, std::move(pf)};
    }
    return {exhausted ? Outcome::Exhausted : Outcome::Exhausted, std::nullopt, std::nullopt};
  }
};

Verdict forced_verdict(ForcingWitness w) {
  Verdict v;
  v.state = Verdict::State::Forced;
  v.witness = std::move(w);
  return v;
}

Verdict notforced_verdict(Countermodel cm) {
  Verdict v;
  v.state = Verdict::State::NotForced;
  v.countermodel = std::move(cm);
  return v;
}

Verdict unknown_verdict(std::string note) {
  Verdict v;
  v.state = Verdict::State::Unknown;
  v.note = std::move(note);
  return v;
}

// Kind-restricted most general unifier extended to the whole context by the
// identity; nullopt when the equation has no unifier inside the site.
std::optional<Subst> kind_extended_mgu(SiteKind kind, const Term& s, const Term& t,
                                       const std::vector<std::string>& context) {
  UnifyResult r = mgu(UnificationProblem{{{s, t}}});
  if (std::holds_alternative<UnifyFailure>(r)) return std::nullopt;
  const Unifier& u = std::get<Unifier>(r);
  Subst ext;
  for (const auto& v : context) {
    auto it = u.subst.find(v);
    ext.emplace(v, it == u.subst.end() ? Term::var(v) : it->second);
  }
  if (kind == SiteKind::Ts) return ext;
  std::set<std::string> image;
  for (const auto& [v, tm] : ext) {
    if (!tm.is_var()) return std::nullopt;
    if (kind == SiteKind::Rn && !image.insert(tm.head()).second) return std::nullopt;
  }
  return ext;
}

Condition subst_image_condition(const Condition& c, const Subst& s) {
  std::set<std::string> vars;
  for (const auto& v : c.vars) s.at(v).collect_vars(vars);
  std::vector<Atom> atoms;
  for (const auto& a : c.atoms) atoms.push_back(apply_subst(a, s));
  return Condition::make({vars.begin(), vars.end()}, std::move(atoms));
}

}  // namespace

bool eval_positive(const Condition& c, const Formula& f, const Signature& sig) {
  return eval_positive_w(c, f, sig).has_value();
}

Verdict saturate_positive(SiteKind kind, const Condition& c, const Formula& goal,
                          const Theory& t, const Bounds& b) {
  if (!goal.is_positive())
    throw std::invalid_argument("saturate_positive: goal is not positive");

  // breadth-first: shallow covers are found before deep ones
  for (int d = 0; d <= b.cover_depth; ++d)
    if (auto res = forced_search(kind, c, goal, t, d, b.term_depth))
      return forced_verdict(witness_from_pos(goal, std::move(*res)));

  // Saturation over term instances is only complete when the instantiation
  // space at each condition is finite.
  if (kind == SiteKind::Ts && !t.sig.is_relational() && !t.axioms.empty())
    return unknown_verdict("cover search exhausted; term saturation not decidable");

  SatSearch s{kind, t, goal, b};
  auto r = s.run(c, {}, {}, b.fresh_vars, b.atom_budget);
  switch (r.outcome) {
    case SatSearch::Outcome::FoundBranch:
      return notforced_verdict(std::move(*r.branch));
    case SatSearch::Outcome::ForcedHere:
      return forced_verdict(witness_from_pos(goal, std::move(*r.forced)));
    case SatSearch::Outcome::Exhausted:
      return unknown_verdict("saturation exhausted fresh-variable or atom budget");
  }
  return unknown_verdict("unreachable");
}

std::vector<Morphism> enumerate_neighborhood(const Condition& c, SiteKind kind, const Theory& t,
                                             const Bounds& b) {
  std::vector<Morphism> out;
  std::set<Morphism> seen;

  std::set<std::string> avoid(c.vars.begin(), c.vars.end());
  std::vector<std::string> fresh;
  for (int i = 0; i < b.fresh_vars; ++i) {
    std::string n = fresh_name("y", avoid);
    avoid.insert(n);
    fresh.push_back(n);
  }

  for (int k = 0; k <= b.fresh_vars; ++k) {
    std::vector<std::string> pool = c.vars;
    pool.insert(pool.end(), fresh.begin(), fresh.begin() + k);
    std::sort(pool.begin(), pool.end());

    // base substitutions on the original variables
    std::vector<Subst> sigmas;
    if (kind == SiteKind::Rn) {
      Subst id;
      for (const auto& v : c.vars) id.emplace(v, Term::var(v));
      sigmas.push_back(std::move(id));
    } else if (kind == SiteKind::Vs) {
      std::vector<Term> imgs;
      for (const auto& v : c.vars) imgs.push_back(Term::var(v));
      sigmas = enumerate_substs(c.vars, imgs);
    } else {
      sigmas = enumerate_substs(c.vars, enumerate_terms(t.sig, pool, b.term_depth));
    }

    for (const auto& sigma : sigmas) {
      std::vector<Atom> base_atoms;
      for (const auto& a : c.atoms) base_atoms.push_back(apply_subst(a, sigma));
      Condition d0 = Condition::make(pool, base_atoms);

      // candidate extra atoms over the pool
      std::vector<Atom> cand;
      auto terms = kind == SiteKind::Ts ? enumerate_terms(t.sig, pool, b.term_depth)
                                        : [&] {
                                            std::vector<Term> vs;
                                            for (const auto& v : pool) vs.push_back(Term::var(v));
                                            return vs;
                                          }();
      for (const auto& [p, arity] : t.sig.predicates) {
        std::vector<std::string> slots;
        for (int i = 0; i < arity; ++i) slots.push_back("#" + std::to_string(i));
        for (const auto& s : enumerate_substs(slots, terms)) {
          Atom a;
          a.pred = p;
          for (int i = 0; i < arity; ++i) a.args.push_back(s.at("#" + std::to_string(i)));
          if (!d0.has_atom(a)) cand.push_back(std::move(a));
        }
      }
      std::sort(cand.begin(), cand.end());
      cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

      // subsets of extra atoms by increasing size
      std::vector<std::vector<size_t>> combos = {{}};
      std::vector<std::vector<size_t>> frontier = {{}};
      for (int sz = 1; sz <= b.atom_budget; ++sz) {
        std::vector<std::vector<size_t>> next;
        for (const auto& combo : frontier) {
          size_t start = combo.empty() ? 0 : combo.back() + 1;
          for (size_t i = start; i < cand.size(); ++i) {
            auto ext = combo;
            ext.push_back(i);
            next.push_back(ext);
          }
        }
        combos.insert(combos.end(), next.begin(), next.end());
        frontier = std::move(next);
      }

      for (const auto& combo : combos) {
        std::vector<Atom> atoms = d0.atoms;
        for (size_t i : combo) atoms.push_back(cand[i]);
        Condition d = Condition::make(pool, std::move(atoms));
        Morphism m = Morphism::make(d, c, sigma);
        if (seen.insert(m).second) out.push_back(std::move(m));
      }
    }
  }
  return out;
}

namespace {

Verdict force_rec(SiteKind kind, const Condition& c, const Formula& f, const Theory& t,
                  const Bounds& b);

Verdict refute_by_enumeration(SiteKind kind, const Condition& c, const Formula& f,
                              const Theory& t, const Bounds& b) {
  // f is Implies (compound antecedent) or Forall (no generic shortcut).
  if (auto empty = inconsistent(c, t, kind, b.cover_depth, b.term_depth)) {
    ForcingWitness w;
    w.kind = ForcingWitness::Kind::ViaEmptyCover;
    w.cover = std::move(*empty);
    return forced_verdict(std::move(w));
  }
  for (const auto& g : enumerate_neighborhood(c, kind, t, b)) {
    if (f.kind() == Formula::Kind::Implies) {
      Verdict v1 = force_rec(kind, g.dom, subst_formula(f.lhs(), g.subst), t, b);
      if (!v1.forced()) continue;
      Verdict v2 = force_rec(kind, g.dom, subst_formula(f.rhs(), g.subst), t, b);
      if (v2.not_forced()) {
        RefutingMorphism rm;
        rm.morphism = g;
        rm.antecedent = std::make_shared<Verdict>(std::move(v1));
        rm.body = std::make_shared<Verdict>(std::move(v2));
        return notforced_verdict(std::move(rm));
      }
    } else {
      Formula body = subst_formula(Formula::forall(f.binder(), f.body()), g.subst);
      // body is again a Forall after renaming; instantiate its binder
      const std::string& bv = body.binder();
      for (const auto& tm : enumerate_terms(t.sig, g.dom.vars, b.term_depth)) {
        Verdict v = force_rec(kind, g.dom, subst_one(body.body(), bv, tm), t, b);
        if (v.not_forced()) {
          RefutingMorphism rm;
          rm.morphism = g;
          rm.instance_term = tm;
          rm.body = std::make_shared<Verdict>(std::move(v));
          return notforced_verdict(std::move(rm));
        }
      }
    }
  }
  return unknown_verdict("no refuting morphism within bounds (negative clause)");
}

Verdict force_implies(SiteKind kind, const Condition& c, const Formula& f, const Theory& t,
                      const Bounds& b) {
  const Formula& lhs = f.lhs();
  const Formula& rhs = f.rhs();
  switch (lhs.kind()) {
    case Formula::Kind::Top: {
      Verdict v = force_rec(kind, c, rhs, t, b);
      if (v.forced()) {
        ForcingWitness w;
        w.kind = ForcingWitness::Kind::ImpliesTop;
        w.sub = std::make_shared<ForcingWitness>(std::move(*v.witness));
        return forced_verdict(std::move(w));
      }
      if (v.not_forced()) {
        RefutingMorphism rm;
        rm.morphism = identity(c);
        ForcingWitness tw;
        tw.kind = ForcingWitness::Kind::Top;
        rm.antecedent = std::make_shared<Verdict>(forced_verdict(std::move(tw)));
        rm.body = std::make_shared<Verdict>(std::move(v));
        return notforced_verdict(std::move(rm));
      }
      return v;
    }
    case Formula::Kind::Bot: {
      ForcingWitness w;
      w.kind = ForcingWitness::Kind::ImpliesBot;
      return forced_verdict(std::move(w));
    }
    case Formula::Kind::Atom: {
      const Atom& a = lhs.atom_ref();
      if (a.is_equality()) {
        auto m = kind_extended_mgu(kind, a.args[0], a.args[1], c.vars);
        if (!m) {
          ForcingWitness w;
          w.kind = ForcingWitness::Kind::ImpliesEqVacuous;
          return forced_verdict(std::move(w));
        }
        Condition reduced = subst_image_condition(c, *m);
        Verdict v = force_rec(kind, reduced, subst_formula(rhs, *m), t, b);
        if (v.forced()) {
          ForcingWitness w;
          w.kind = ForcingWitness::Kind::ImpliesEq;
          w.mgu_subst = *m;
          w.sub = std::make_shared<ForcingWitness>(std::move(*v.witness));
          return forced_verdict(std::move(w));
        }
        if (v.not_forced()) {
          RefutingMorphism rm;
          rm.morphism = Morphism::make(reduced, c, *m);
          ForcingWitness ew;
          ew.kind = ForcingWitness::Kind::Eq;
          ew.cover = identity_cover(reduced);
          rm.antecedent = std::make_shared<Verdict>(forced_verdict(std::move(ew)));
          rm.body = std::make_shared<Verdict>(std::move(v));
          return notforced_verdict(std::move(rm));
        }
        return v;
      }
      // fact antecedent: decided at the extension (X;A,alpha)
      std::vector<Atom> atoms = c.atoms;
      atoms.push_back(a);
      Condition ext = Condition::make(c.vars, std::move(atoms));
      Verdict v = force_rec(kind, ext, rhs, t, b);
      if (v.forced()) {
        ForcingWitness w;
        w.kind = ForcingWitness::Kind::ImpliesFact;
        w.sub = std::make_shared<ForcingWitness>(std::move(*v.witness));
        return forced_verdict(std::move(w));
      }
      if (v.not_forced()) {
        Subst id;
        for (const auto& vr : c.vars) id.emplace(vr, Term::var(vr));
        RefutingMorphism rm;
        rm.morphism = Morphism::make(ext, c, std::move(id));
        ForcingWitness fw;
        fw.kind = ForcingWitness::Kind::Fact;
        fw.cover = identity_cover(ext);
        rm.antecedent = std::make_shared<Verdict>(forced_verdict(std::move(fw)));
        rm.body = std::make_shared<Verdict>(std::move(v));
        return notforced_verdict(std::move(rm));
      }
      return v;
    }
    default:
      return refute_by_enumeration(kind, c, f, t, b);
  }
}

Verdict force_forall(SiteKind kind, const Condition& c, const Formula& f, const Theory& t,
                     const Bounds& b) {
  bool generic_ok = kind == SiteKind::Ts || (kind == SiteKind::Vs && t.sig.is_relational());
  if (!generic_ok) return refute_by_enumeration(kind, c, f, t, b);

  std::set<std::string> avoid(c.vars.begin(), c.vars.end());
  for (const auto& v : free_vars(f)) avoid.insert(v);
  std::string x = fresh_name(f.binder(), avoid);
  std::vector<std::string> vars = c.vars;
  vars.push_back(x);
  Condition ext = Condition::make(std::move(vars), c.atoms);
  Verdict v = force_rec(kind, ext, subst_one(f.body(), f.binder(), Term::var(x)), t, b);
  if (v.forced()) {
    ForcingWitness w;
    w.kind = ForcingWitness::Kind::Forall;
    w.fresh_var = x;
    w.sub = std::make_shared<ForcingWitness>(std::move(*v.witness));
    return forced_verdict(std::move(w));
  }
  if (v.not_forced()) {
    Subst id;
    for (const auto& vr : c.vars) id.emplace(vr, Term::var(vr));
    RefutingMorphism rm;
    rm.morphism = Morphism::make(ext, c, std::move(id));
    rm.instance_term = Term::var(x);
    rm.body = std::make_shared<Verdict>(std::move(v));
    return notforced_verdict(std::move(rm));
  }
  return v;
}

Verdict force_mixed_or(SiteKind kind, const Condition& c, const Formula& f, const Theory& t,
                       const Bounds& b) {
  for (const auto& d : covers(c, t, kind, b.cover_depth, b.term_depth)) {
    Sink s = d.sink();
    std::vector<ForcingWitness::OrLeg> legs;
    bool ok = true;
    for (const auto& leg : s.legs) {
      Formula fl = subst_formula(f, leg.subst);
      bool leg_ok = false;
      for (size_t i = 0; i < fl.parts().size(); ++i) {
        Verdict v = force_rec(kind, leg.dom, fl.parts()[i], t, b);
        if (v.forced()) {
          legs.push_back({i, std::make_shared<ForcingWitness>(std::move(*v.witness))});
          leg_ok = true;
          break;
        }
      }
      if (!leg_ok) {
        ok = false;
        break;
      }
    }
    if (ok) {
      ForcingWitness w;
      w.kind = ForcingWitness::Kind::Or;
      w.cover = d;
      w.or_legs = std::move(legs);
      return forced_verdict(std::move(w));
    }
  }
  return unknown_verdict("no cover decides the disjunction within bounds");
}

Verdict force_mixed_exists(SiteKind kind, const Condition& c, const Formula& f, const Theory& t,
                           const Bounds& b) {
  for (const auto& d : covers(c, t, kind, b.cover_depth, b.term_depth)) {
    Sink s = d.sink();
    std::vector<ForcingWitness::ExistsLeg> legs;
    bool ok = true;
    for (const auto& leg : s.legs) {
      Formula fl = subst_formula(f, leg.subst);
      bool leg_ok = false;
      for (const auto& tm : enumerate_terms(t.sig, leg.dom.vars, b.term_depth)) {
        Verdict v = force_rec(kind, leg.dom, subst_one(fl.body(), fl.binder(), tm), t, b);
        if (v.forced()) {
          legs.push_back({tm, std::make_shared<ForcingWitness>(std::move(*v.witness))});
          leg_ok = true;
          break;
        }
      }
      if (!leg_ok) {
        ok = false;
        break;
      }
    }
    if (ok) {
      ForcingWitness w;
      w.kind = ForcingWitness::Kind::Exists;
      w.cover = d;
      w.exists_legs = std::move(legs);
      return forced_verdict(std::move(w));
    }
  }
  return unknown_verdict("no cover provides witnesses within bounds");
}

Verdict force_rec(SiteKind kind, const Condition& c, const Formula& f, const Theory& t,
                  const Bounds& b) {
  if (f.kind() == Formula::Kind::Top) {
    ForcingWitness w;
    w.kind = ForcingWitness::Kind::Top;
    return forced_verdict(std::move(w));
  }
  if (f.is_positive()) return saturate_positive(kind, c, f, t, b);
  switch (f.kind()) {
    case Formula::Kind::And: {
      std::vector<ForcingWitness> children;
      bool any_unknown = false;
      for (size_t i = 0; i < f.parts().size(); ++i) {
        Verdict v = force_rec(kind, c, f.parts()[i], t, b);
        if (v.not_forced())
          return notforced_verdict(
              ConjunctFailure{i, std::make_shared<Verdict>(std::move(v))});
        if (v.unknown()) {
          any_unknown = true;
          continue;
        }
        children.push_back(std::move(*v.witness));
      }
      if (any_unknown) return unknown_verdict("conjunct undecided within bounds");
      ForcingWitness w;
      w.kind = ForcingWitness::Kind::And;
      w.children = std::move(children);
      return forced_verdict(std::move(w));
    }
    case Formula::Kind::Or:
      return force_mixed_or(kind, c, f, t, b);
    case Formula::Kind::Exists:
      return force_mixed_exists(kind, c, f, t, b);
    case Formula::Kind::Implies:
      return force_implies(kind, c, f, t, b);
    case Formula::Kind::Forall:
      return force_forall(kind, c, f, t, b);
    default:
      return unknown_verdict("unhandled clause");
  }
}

}  // namespace

Verdict force(SiteKind kind, const Condition& c, const Formula& f, const Theory& t,
              const Bounds& b) {
  if (b.cover_depth < 0 || b.fresh_vars < 0 || b.atom_budget < 0 || b.term_depth < 0)
    throw std::invalid_argument("bounds must be non-negative");
  for (const auto& v : free_vars(f))
    if (!c.has_var(v))
      throw std::invalid_argument("free variable " + v + " not in the condition");
  if (formula_uses_equality(f) && !t.sig.with_equality)
    throw std::invalid_argument("equality atom used but the signature has no equality");
  return force_rec(kind, c, f, t, b);
}

Verdict force_universal_by_enumeration(SiteKind kind, const Condition& c,
                                       const std::string& var, const Formula& body,
                                       const Theory& t, const Bounds& b) {
  for (const auto& g : enumerate_neighborhood(c, kind, t, b)) {
    Formula moved = subst_formula(Formula::forall(var, body), g.subst);
    for (const auto& tm : enumerate_terms(t.sig, g.dom.vars, b.term_depth)) {
      Verdict v = force(kind, g.dom, subst_one(moved.body(), moved.binder(), tm), t, b);
      if (v.not_forced()) {
        RefutingMorphism rm;
        rm.morphism = g;
        rm.instance_term = tm;
        rm.body = std::make_shared<Verdict>(std::move(v));
        return notforced_verdict(std::move(rm));
      }
    }
  }
  return unknown_verdict("no refuting instance within bounds (direct universal clause)");
}

namespace {

bool check_witness_rec(SiteKind kind, const Condition& c, const Formula& f, const Theory& t,
                       const ForcingWitness& w);

bool check_cover_at(const CoverDerivation& d, const Condition& c, const Theory& t,
                    SiteKind kind) {
  if (!(d.root() == c)) return false;
  try {
    d.validate(t, kind);
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

bool check_witness_rec(SiteKind kind, const Condition& c, const Formula& f, const Theory& t,
                       const ForcingWitness& w) {
  using K = ForcingWitness::Kind;
  try {
    switch (w.kind) {
      case K::Top:
        return f.kind() == Formula::Kind::Top;
      case K::ViaEmptyCover: {
        if (!w.cover || !check_cover_at(*w.cover, c, t, kind)) return false;
        return w.cover->sink().legs.empty();
      }
      case K::Fact: {
        if (f.kind() != Formula::Kind::Atom || f.atom_ref().is_equality()) return false;
        if (!w.cover || !check_cover_at(*w.cover, c, t, kind)) return false;
        for (const auto& leg : w.cover->sink().legs)
          if (!leg.dom.has_atom(apply_subst(f.atom_ref(), leg.subst))) return false;
        return true;
      }
      case K::Eq: {
        if (f.kind() != Formula::Kind::Atom || !f.atom_ref().is_equality()) return false;
        if (!t.sig.with_equality) return false;
        if (!w.cover || !check_cover_at(*w.cover, c, t, kind)) return false;
        for (const auto& leg : w.cover->sink().legs)
          if (!(apply_subst(f.atom_ref().args[0], leg.subst) ==
                apply_subst(f.atom_ref().args[1], leg.subst)))
            return false;
        return true;
      }
      case K::And: {
        if (f.kind() != Formula::Kind::And) return false;
        if (w.children.size() != f.parts().size()) return false;
        for (size_t i = 0; i < w.children.size(); ++i)
          if (!check_witness_rec(kind, c, f.parts()[i], t, w.children[i])) return false;
        return true;
      }
      case K::Or: {
        if (f.kind() != Formula::Kind::Or) return false;
        if (!w.cover || !check_cover_at(*w.cover, c, t, kind)) return false;
        Sink s = w.cover->sink();
        if (w.or_legs.size() != s.legs.size()) return false;
        for (size_t k = 0; k < s.legs.size(); ++k) {
          Formula fl = subst_formula(f, s.legs[k].subst);
          if (w.or_legs[k].disjunct >= fl.parts().size()) return false;
          if (!w.or_legs[k].sub) return false;
          if (!check_witness_rec(kind, s.legs[k].dom, fl.parts()[w.or_legs[k].disjunct], t,
                                 *w.or_legs[k].sub))
            return false;
        }
        return true;
      }
      case K::Exists: {
        if (f.kind() != Formula::Kind::Exists) return false;
        if (!w.cover || !check_cover_at(*w.cover, c, t, kind)) return false;
        Sink s = w.cover->sink();
        if (w.exists_legs.size() != s.legs.size()) return false;
        for (size_t k = 0; k < s.legs.size(); ++k) {
          const Term& tm = w.exists_legs[k].term;
          if (!t.sig.term_ok(tm)) return false;
          for (const auto& v : tm.vars())
            if (!s.legs[k].dom.has_var(v)) return false;
          Formula fl = subst_formula(f, s.legs[k].subst);
          if (!w.exists_legs[k].sub) return false;
          if (!check_witness_rec(kind, s.legs[k].dom, subst_one(fl.body(), fl.binder(), tm), t,
                                 *w.exists_legs[k].sub))
            return false;
        }
        return true;
      }
      case K::Forall: {
        if (f.kind() != Formula::Kind::Forall) return false;
        bool generic_ok =
            kind == SiteKind::Ts || (kind == SiteKind::Vs && t.sig.is_relational());
        if (!generic_ok) return false;
        if (c.has_var(w.fresh_var) || w.fresh_var.empty()) return false;
        std::vector<std::string> vars = c.vars;
        vars.push_back(w.fresh_var);
        Condition ext = Condition::make(std::move(vars), c.atoms);
        if (!w.sub) return false;
        return check_witness_rec(kind, ext,
                                 subst_one(f.body(), f.binder(), Term::var(w.fresh_var)), t,
                                 *w.sub);
      }
      case K::ImpliesTop:
        return f.kind() == Formula::Kind::Implies && f.lhs().kind() == Formula::Kind::Top &&
               w.sub && check_witness_rec(kind, c, f.rhs(), t, *w.sub);
      case K::ImpliesBot:
        return f.kind() == Formula::Kind::Implies && f.lhs().kind() == Formula::Kind::Bot;
      case K::ImpliesFact: {
        if (f.kind() != Formula::Kind::Implies || f.lhs().kind() != Formula::Kind::Atom ||
            f.lhs().atom_ref().is_equality())
          return false;
        std::vector<Atom> atoms = c.atoms;
        atoms.push_back(f.lhs().atom_ref());
        Condition ext = Condition::make(c.vars, std::move(atoms));
        return w.sub && check_witness_rec(kind, ext, f.rhs(), t, *w.sub);
      }
      case K::ImpliesEq: {
        if (f.kind() != Formula::Kind::Implies || f.lhs().kind() != Formula::Kind::Atom ||
            !f.lhs().atom_ref().is_equality())
          return false;
        const Atom& a = f.lhs().atom_ref();
        auto m = kind_extended_mgu(kind, a.args[0], a.args[1], c.vars);
        if (!m || !(*m == w.mgu_subst)) return false;
        Condition reduced = subst_image_condition(c, *m);
        return w.sub && check_witness_rec(kind, reduced, subst_formula(f.rhs(), *m), t, *w.sub);
      }
      case K::ImpliesEqVacuous: {
        if (f.kind() != Formula::Kind::Implies || f.lhs().kind() != Formula::Kind::Atom ||
            !f.lhs().atom_ref().is_equality())
          return false;
        const Atom& a = f.lhs().atom_ref();
        return !kind_extended_mgu(kind, a.args[0], a.args[1], c.vars).has_value();
      }
    }
  } catch (const std::exception&) {
    return false;
  }
  return false;
}

}  // namespace

bool check_witness(SiteKind kind, const Condition& c, const Formula& f, const Theory& t,
                   const ForcingWitness& w) {
  return check_witness_rec(kind, c, f, t, w);
}

bool check_saturated_branch(SiteKind kind, const Condition& c, const Formula& goal,
                            const Theory& t, const SaturatedBranch& sb, int term_depth) {
  try {
    const Condition& d = sb.branch;
    for (const auto& v : c.vars)
      if (!d.has_var(v)) return false;
    for (const auto& a : c.atoms)
      if (!d.has_atom(a)) return false;
    if (eval_positive(d, goal, t.sig)) return false;
    for (const auto& inst : axiom_instances(d, t, kind, term_depth)) {
      bool recorded = false;
      for (const auto& r : sb.closure) {
        if (r.instance.axiom_index != inst.axiom_index ||
            !(r.instance.instantiation == inst.instantiation))
          continue;
        const CoherentAxiom& ax = t.axioms[inst.axiom_index];
        if (r.disjunct >= ax.disjuncts.size()) return false;
        const Disjunct& dis = ax.disjuncts[r.disjunct];
        bool holds = true;
        for (const auto& a : dis.atoms) {
          Atom img = apply_subst(apply_subst(a, inst.instantiation), r.witness);
          if (!d.has_atom(img)) {
            holds = false;
            break;
          }
        }
        for (const auto& fv : dis.fresh_vars) {
          auto it = r.witness.find(fv);
          if (it == r.witness.end()) {
            holds = false;
            break;
          }
          for (const auto& v : it->second.vars())
            if (!d.has_var(v)) holds = false;
        }
        if (holds) {
          recorded = true;
          break;
        }
      }
      if (!recorded) return false;
    }
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

ForcingWitness transport_witness(SiteKind kind, const Theory& t, const Condition& c,
                                 const Formula& f, const ForcingWitness& w, const Morphism& g) {
  using K = ForcingWitness::Kind;
  if (!(g.cod == c)) throw std::invalid_argument("transport_witness: cod(g) != c");
  switch (w.kind) {
    case K::Top:
    case K::ImpliesBot: {
      ForcingWitness out;
      out.kind = w.kind;
      return out;
    }
    case K::ViaEmptyCover: {
      ForcingWitness out;
      out.kind = K::ViaEmptyCover;
      out.cover = pullback_cover(t, *w.cover, g);
      return out;
    }
    case K::Fact:
    case K::Eq: {
      ForcingWitness out;
      out.kind = w.kind;
      out.cover = pullback_cover(t, *w.cover, g);
      return out;
    }
    case K::And: {
      ForcingWitness out;
      out.kind = K::And;
      for (size_t i = 0; i < w.children.size(); ++i)
        out.children.push_back(transport_witness(kind, t, c, f.parts()[i], w.children[i], g));
      return out;
    }
    case K::Or:
    case K::Exists: {
      CoverDerivation pb = pullback_cover(t, *w.cover, g);
      Sink new_sink = pb.sink();
      Sink pushed{c, {}};
      for (const auto& leg : new_sink.legs) pushed.legs.push_back(compose(g, leg));
      Sink orig = w.cover->sink();
      auto table = refines(pushed, orig, kind);
      if (!table)
        throw std::logic_error("transport_witness: stability refinement failed");
      ForcingWitness out;
      out.kind = w.kind;
      out.cover = pb;
      for (size_t k = 0; k < new_sink.legs.size(); ++k) {
        size_t j = (*table)[k].through;
        const Morphism& h = (*table)[k].mediator;
        const Morphism& oleg = orig.legs[j];
        Formula at_old = subst_formula(f, oleg.subst);
        if (w.kind == K::Or) {
          const auto& ol = w.or_legs.at(j);
          Formula part = at_old.parts().at(ol.disjunct);
          out.or_legs.push_back(
              {ol.disjunct, std::make_shared<ForcingWitness>(
                                transport_witness(kind, t, oleg.dom, part, *ol.sub, h))});
        } else {
          const auto& el = w.exists_legs.at(j);
          Formula inst = subst_one(at_old.body(), at_old.binder(), el.term);
          out.exists_legs.push_back(
              {apply_subst(el.term, h.subst),
               std::make_shared<ForcingWitness>(
                   transport_witness(kind, t, oleg.dom, inst, *el.sub, h))});
        }
      }
      return out;
    }
    case K::Forall: {
      std::set<std::string> avoid(g.dom.vars.begin(), g.dom.vars.end());
      std::string y = fresh_name(w.fresh_var, avoid);
      std::vector<std::string> cvars = c.vars;
      cvars.push_back(w.fresh_var);
      Condition cext = Condition::make(std::move(cvars), c.atoms);
      std::vector<std::string> dvars = g.dom.vars;
      dvars.push_back(y);
      Condition dext = Condition::make(std::move(dvars), g.dom.atoms);
      Subst s = g.subst;
      s.emplace(w.fresh_var, Term::var(y));
      Morphism gext = Morphism::make(dext, cext, std::move(s));
      Formula body = subst_one(f.body(), f.binder(), Term::var(w.fresh_var));
      ForcingWitness out;
      out.kind = K::Forall;
      out.fresh_var = y;
      out.sub = std::make_shared<ForcingWitness>(
          transport_witness(kind, t, cext, body, *w.sub, gext));
      return out;
    }
    case K::ImpliesTop: {
      ForcingWitness out;
      out.kind = K::ImpliesTop;
      out.sub = std::make_shared<ForcingWitness>(
          transport_witness(kind, t, c, f.rhs(), *w.sub, g));
      return out;
    }
    case K::ImpliesFact: {
      const Atom& a = f.lhs().atom_ref();
      std::vector<Atom> catoms = c.atoms;
      catoms.push_back(a);
      Condition cext = Condition::make(c.vars, std::move(catoms));
      std::vector<Atom> datoms = g.dom.atoms;
      datoms.push_back(apply_subst(a, g.subst));
      Condition dext = Condition::make(g.dom.vars, std::move(datoms));
      Morphism gext = Morphism::make(dext, cext, g.subst);
      ForcingWitness out;
      out.kind = K::ImpliesFact;
      out.sub = std::make_shared<ForcingWitness>(
          transport_witness(kind, t, cext, f.rhs(), *w.sub, gext));
      return out;
    }
    case K::ImpliesEq:
    case K::ImpliesEqVacuous: {
      const Atom& a = f.lhs().atom_ref();
      Term sg = apply_subst(a.args[0], g.subst);
      Term tg = apply_subst(a.args[1], g.subst);
      auto m2 = kind_extended_mgu(kind, sg, tg, g.dom.vars);
      if (!m2) {
        ForcingWitness out;
        out.kind = K::ImpliesEqVacuous;
        return out;
      }
      if (w.kind == K::ImpliesEqVacuous)
        throw std::logic_error("transport_witness: vacuous equation became unifiable");
      Condition dred = subst_image_condition(g.dom, *m2);
      Condition cred = subst_image_condition(c, w.mgu_subst);
      // h : dred -> cred, v :-> (v.g).m2 on the reduced codomain variables.
      Subst hs;
      for (const auto& v : cred.vars)
        hs.emplace(v, apply_subst(apply_subst(Term::var(v), g.subst), *m2));
      Morphism h = Morphism::make(dred, cred, std::move(hs));
      ForcingWitness out;
      out.kind = K::ImpliesEq;
      out.mgu_subst = *m2;
      out.sub = std::make_shared<ForcingWitness>(transport_witness(
          kind, t, cred, subst_formula(f.rhs(), w.mgu_subst), *w.sub, h));
      return out;
    }
  }
  throw std::logic_error("transport_witness: unhandled witness kind");
}

}  // namespace coforce
