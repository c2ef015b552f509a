#include "coforce/proofs.hpp"

#include <algorithm>
#include <functional>

namespace coforce {

Sequent Sequent::make(std::vector<std::string> vars, std::vector<Formula> hyps, Formula concl) {
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  Sequent s;
  s.vars = std::move(vars);
  s.hyps = std::move(hyps);
  s.concl = std::move(concl);
  return s;
}

std::string to_string(Rule r) {
  switch (r) {
    case Rule::Assumption: return "assumption";
    case Rule::TopIntro: return "top-intro";
    case Rule::BotElim: return "bot-elim";
    case Rule::AndIntro: return "and-intro";
    case Rule::AndElim: return "and-elim";
    case Rule::OrIntro: return "or-intro";
    case Rule::OrElim: return "or-elim";
    case Rule::ImpliesIntro: return "implies-intro";
    case Rule::ImpliesElim: return "implies-elim";
    case Rule::ForallIntro: return "forall-intro";
    case Rule::ForallElim: return "forall-elim";
    case Rule::ExistsIntro: return "exists-intro";
    case Rule::ExistsElim: return "exists-elim";
    case Rule::TheoryAxiom: return "theory-axiom";
  }
  return "?";
}

size_t ProofTree::size() const {
  size_t n = 1;
  for (const auto& p : premises) n += p.size();
  return n;
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

bool in_vars(const std::vector<std::string>& vars, const std::string& v) {
  return std::binary_search(vars.begin(), vars.end(), v);
}

bool term_scoped(const Term& t, const std::vector<std::string>& vars, const Signature& sig) {
  if (!sig.term_ok(t)) return false;
  for (const auto& v : t.vars())
    if (!in_vars(vars, v)) return false;
  return true;
}

bool same_ctx(const Sequent& a, const Sequent& b) {
  if (a.vars != b.vars || a.hyps.size() != b.hyps.size()) return false;
  for (size_t i = 0; i < a.hyps.size(); ++i)
    if (!(a.hyps[i] == b.hyps[i])) return false;
  return true;
}

struct NodeFailure {
  const ProofTree* node;
  std::string reason;
};

void fail(const ProofTree& p, const std::string& reason) {
  throw NodeFailure{&p, reason};
}

void check_node(const ProofTree& p, const Theory& t) {
  const Sequent& s = p.conclusion;
  std::set<std::string> scope(s.vars.begin(), s.vars.end());
  for (const auto& h : s.hyps)
    for (const auto& v : free_vars(h))
      if (!scope.count(v)) fail(p, "hypothesis variable " + v + " escapes the context");
  for (const auto& v : free_vars(s.concl))
    if (!scope.count(v)) fail(p, "conclusion variable " + v + " escapes the context");

  auto need_premises = [&](size_t n) {
    if (p.premises.size() != n) fail(p, "wrong number of premises");
  };

  switch (p.rule) {
    case Rule::Assumption: {
      need_premises(0);
      if (p.index >= s.hyps.size()) fail(p, "assumption index out of range");
      if (!(s.hyps[p.index] == s.concl)) fail(p, "assumption does not match the conclusion");
      return;
    }
    case Rule::TopIntro: {
      need_premises(0);
      if (s.concl.kind() != Formula::Kind::Top) fail(p, "top-intro concludes non-top");
      return;
    }
    case Rule::BotElim: {
      need_premises(1);
      if (!same_ctx(s, p.premises[0].conclusion)) fail(p, "context mismatch");
      if (p.premises[0].conclusion.concl.kind() != Formula::Kind::Bot)
        fail(p, "premise is not falsum");
      return;
    }
    case Rule::AndIntro: {
      if (s.concl.kind() != Formula::Kind::And) fail(p, "conclusion is not a conjunction");
      need_premises(s.concl.parts().size());
      for (size_t i = 0; i < p.premises.size(); ++i) {
        if (!same_ctx(s, p.premises[i].conclusion)) fail(p, "context mismatch");
        if (!(p.premises[i].conclusion.concl == s.concl.parts()[i]))
          fail(p, "premise does not match conjunct");
      }
      return;
    }
    case Rule::AndElim: {
      need_premises(1);
      const Sequent& q = p.premises[0].conclusion;
      if (!same_ctx(s, q)) fail(p, "context mismatch");
      if (q.concl.kind() != Formula::Kind::And) fail(p, "premise is not a conjunction");
      if (p.index >= q.concl.parts().size()) fail(p, "conjunct index out of range");
      if (!(q.concl.parts()[p.index] == s.concl)) fail(p, "projected conjunct mismatch");
      return;
    }
    case Rule::OrIntro: {
      need_premises(1);
      const Sequent& q = p.premises[0].conclusion;
      if (!same_ctx(s, q)) fail(p, "context mismatch");
      if (s.concl.kind() != Formula::Kind::Or) fail(p, "conclusion is not a disjunction");
      if (p.index >= s.concl.parts().size()) fail(p, "disjunct index out of range");
      if (!(s.concl.parts()[p.index] == q.concl)) fail(p, "injected disjunct mismatch");
      return;
    }
    case Rule::OrElim: {
      if (p.premises.empty()) fail(p, "missing major premise");
      const Sequent& major = p.premises[0].conclusion;
      if (!same_ctx(s, major)) fail(p, "context mismatch");
      if (major.concl.kind() != Formula::Kind::Or) fail(p, "major premise is not a disjunction");
      const auto& parts = major.concl.parts();
      need_premises(1 + parts.size());
      for (size_t i = 0; i < parts.size(); ++i) {
        const Sequent& q = p.premises[i + 1].conclusion;
        if (q.vars != s.vars) fail(p, "context variables changed in case branch");
        if (q.hyps.size() != s.hyps.size() + 1) fail(p, "case branch hypothesis count");
        for (size_t j = 0; j < s.hyps.size(); ++j)
          if (!(q.hyps[j] == s.hyps[j])) fail(p, "case branch hypotheses changed");
        if (!(q.hyps.back() == parts[i])) fail(p, "case hypothesis is not the disjunct");
        if (!(q.concl == s.concl)) fail(p, "case conclusion mismatch");
      }
      return;
    }
    case Rule::ImpliesIntro: {
      need_premises(1);
      if (s.concl.kind() != Formula::Kind::Implies) fail(p, "conclusion is not an implication");
      const Sequent& q = p.premises[0].conclusion;
      if (q.vars != s.vars) fail(p, "context variables changed");
      if (q.hyps.size() != s.hyps.size() + 1) fail(p, "premise hypothesis count");
      if (p.index >= q.hyps.size()) fail(p, "discharge index out of range");
      if (!(q.hyps[p.index] == s.concl.lhs())) fail(p, "discharged hypothesis mismatch");
      std::vector<Formula> rest;
      for (size_t j = 0; j < q.hyps.size(); ++j)
        if (j != p.index) rest.push_back(q.hyps[j]);
      if (rest.size() != s.hyps.size()) fail(p, "hypothesis mismatch");
      for (size_t j = 0; j < rest.size(); ++j)
        if (!(rest[j] == s.hyps[j])) fail(p, "hypothesis mismatch after discharge");
      if (!(q.concl == s.concl.rhs())) fail(p, "premise conclusion mismatch");
      return;
    }
    case Rule::ImpliesElim: {
      need_premises(2);
      const Sequent& qf = p.premises[0].conclusion;
      const Sequent& qa = p.premises[1].conclusion;
      if (!same_ctx(s, qf) || !same_ctx(s, qa)) fail(p, "context mismatch");
      if (qf.concl.kind() != Formula::Kind::Implies) fail(p, "major premise not an implication");
      if (!(qf.concl.lhs() == qa.concl)) fail(p, "argument does not match the antecedent");
      if (!(qf.concl.rhs() == s.concl)) fail(p, "conclusion does not match the consequent");
      return;
    }
    case Rule::ForallIntro: {
      need_premises(1);
      if (s.concl.kind() != Formula::Kind::Forall) fail(p, "conclusion is not universal");
      if (p.eigen.empty() || in_vars(s.vars, p.eigen)) fail(p, "eigenvariable not fresh");
      const Sequent& q = p.premises[0].conclusion;
      std::vector<std::string> expect = s.vars;
      expect.push_back(p.eigen);
      std::sort(expect.begin(), expect.end());
      if (q.vars != expect) fail(p, "premise context is not the extension by the eigenvariable");
      if (q.hyps.size() != s.hyps.size()) fail(p, "hypotheses changed");
      for (size_t j = 0; j < s.hyps.size(); ++j) {
        if (!(q.hyps[j] == s.hyps[j])) fail(p, "hypotheses changed");
        if (free_vars(s.hyps[j]).count(p.eigen)) fail(p, "eigenvariable free in a hypothesis");
      }
      if (!(q.concl == subst_one(s.concl.body(), s.concl.binder(), Term::var(p.eigen))))
        fail(p, "premise is not the generic instance");
      return;
    }
    case Rule::ForallElim: {
      need_premises(1);
      const Sequent& q = p.premises[0].conclusion;
      if (!same_ctx(s, q)) fail(p, "context mismatch");
      if (q.concl.kind() != Formula::Kind::Forall) fail(p, "premise is not universal");
      if (!p.term || !term_scoped(*p.term, s.vars, t.sig)) fail(p, "instance term out of scope");
      if (!(s.concl == subst_one(q.concl.body(), q.concl.binder(), *p.term)))
        fail(p, "conclusion is not the instance");
      return;
    }
    case Rule::ExistsIntro: {
      need_premises(1);
      const Sequent& q = p.premises[0].conclusion;
      if (!same_ctx(s, q)) fail(p, "context mismatch");
      if (s.concl.kind() != Formula::Kind::Exists) fail(p, "conclusion is not existential");
      if (!p.term || !term_scoped(*p.term, s.vars, t.sig)) fail(p, "witness term out of scope");
      if (!(q.concl == subst_one(s.concl.body(), s.concl.binder(), *p.term)))
        fail(p, "premise is not the instance at the witness");
      return;
    }
    case Rule::ExistsElim: {
      need_premises(2);
      const Sequent& qe = p.premises[0].conclusion;
      const Sequent& qb = p.premises[1].conclusion;
      if (!same_ctx(s, qe)) fail(p, "context mismatch");
      if (qe.concl.kind() != Formula::Kind::Exists) fail(p, "major premise is not existential");
      if (p.eigen.empty() || in_vars(s.vars, p.eigen)) fail(p, "eigenvariable not fresh");
      std::vector<std::string> expect = s.vars;
      expect.push_back(p.eigen);
      std::sort(expect.begin(), expect.end());
      if (qb.vars != expect) fail(p, "minor premise context mismatch");
      if (qb.hyps.size() != s.hyps.size() + 1) fail(p, "minor premise hypothesis count");
      for (size_t j = 0; j < s.hyps.size(); ++j) {
        if (!(qb.hyps[j] == s.hyps[j])) fail(p, "hypotheses changed");
        if (free_vars(s.hyps[j]).count(p.eigen)) fail(p, "eigenvariable free in a hypothesis");
      }
      if (!(qb.hyps.back() ==
            subst_one(qe.concl.body(), qe.concl.binder(), Term::var(p.eigen))))
        fail(p, "case hypothesis is not the generic instance");
      if (!(qb.concl == s.concl)) fail(p, "minor conclusion mismatch");
      if (free_vars(s.concl).count(p.eigen)) fail(p, "eigenvariable free in the conclusion");
      return;
    }
    case Rule::TheoryAxiom: {
      need_premises(0);
      if (p.index >= t.axioms.size()) fail(p, "axiom index out of range");
      if (!(s.concl == axiom_to_formula(t.axioms[p.index])))
        fail(p, "conclusion is not the axiom");
      return;
    }
  }
  fail(p, "unknown rule");
}

void check_rec(const ProofTree& p, const Theory& t) {
  check_node(p, t);
  for (const auto& q : p.premises) check_rec(q, t);
}

}  // namespace

ProofCheck check_proof(const ProofTree& p, const Sequent& s, const Theory& t) {
  ProofCheck out;
  try {
    if (p.conclusion.vars != s.vars) fail(p, "root context variables differ");
    if (p.conclusion.hyps.size() != s.hyps.size()) fail(p, "root hypothesis count differs");
    for (size_t i = 0; i < s.hyps.size(); ++i)
      if (!(p.conclusion.hyps[i] == s.hyps[i])) fail(p, "root hypotheses differ");
    if (!(p.conclusion.concl == s.concl)) fail(p, "root conclusion differs");
    check_rec(p, t);
  } catch (const NodeFailure& nf) {
    out.ok = false;
    out.failing = nf.node;
    out.reason = nf.reason;
  }
  return out;
}

Sequent condition_sequent(const Condition& c, Formula concl) {
  std::vector<Formula> hyps;
  for (const auto& a : c.atoms) hyps.push_back(Formula::atom(a));
  return Sequent::make(c.vars, std::move(hyps), std::move(concl));
}

namespace {

ProofTree mk_node(Rule r, Sequent concl, std::vector<ProofTree> premises = {}) {
  ProofTree p;
  p.rule = r;
  p.conclusion = std::move(concl);
  p.premises = std::move(premises);
  return p;
}

ProofTree assumption(const Sequent& base, size_t index) {
  ProofTree p = mk_node(Rule::Assumption, base);
  p.conclusion.concl = base.hyps[index];
  p.index = index;
  return p;
}

// Injective renaming of every variable in a proof. The map must cover the
// root context; other variables (eigens) are renamed apart deterministically.
ProofTree rename_proof(const ProofTree& p, const std::map<std::string, std::string>& base_map) {
  std::set<std::string> all_vars;
  std::function<void(const ProofTree&)> collect = [&](const ProofTree& q) {
    for (const auto& v : q.conclusion.vars) all_vars.insert(v);
    for (const auto& q2 : q.premises) collect(q2);
  };
  collect(p);

  std::map<std::string, std::string> full = base_map;
  std::set<std::string> used;
  for (const auto& [k, v] : base_map) used.insert(v);
  for (const auto& v : all_vars) {
    if (full.count(v)) continue;
    std::string nv = fresh_name(v, used);
    used.insert(nv);
    full.emplace(v, nv);
  }
  Subst s;
  for (const auto& [k, v] : full) s.emplace(k, Term::var(v));

  std::function<ProofTree(const ProofTree&)> go = [&](const ProofTree& q) {
    ProofTree out = q;
    std::vector<std::string> vars;
    for (const auto& v : q.conclusion.vars) vars.push_back(full.at(v));
    std::vector<Formula> hyps;
    for (const auto& h : q.conclusion.hyps) hyps.push_back(subst_formula(h, s));
    out.conclusion = Sequent::make(std::move(vars), std::move(hyps),
                                   subst_formula(q.conclusion.concl, s));
    if (q.term) out.term = apply_subst(*q.term, s);
    if (!q.eigen.empty()) out.eigen = full.at(q.eigen);
    out.premises.clear();
    for (const auto& q2 : q.premises) out.premises.push_back(go(q2));
    return out;
  };
  return go(p);
}

}  // namespace

ProofTree reestablish(const ProofTree& p, const std::vector<Formula>& target_hyps) {
  const Sequent& s = p.conclusion;
  if (s.hyps.size() == target_hyps.size()) {
    bool same = true;
    for (size_t i = 0; i < s.hyps.size() && same; ++i) same = s.hyps[i] == target_hyps[i];
    if (same) return p;
  }
  // Discharge every hypothesis (last first). The spine then proves
  // h1 -> ... -> hn -> concl over the empty hypothesis list.
  ProofTree spine = p;
  for (size_t i = s.hyps.size(); i-- > 0;) {
    Sequent ns = spine.conclusion;
    Formula h = ns.hyps[i];
    ns.hyps.erase(ns.hyps.begin() + static_cast<long>(i));
    ns.concl = Formula::implies(h, spine.conclusion.concl);
    ProofTree intro = mk_node(Rule::ImpliesIntro, ns, {std::move(spine)});
    intro.index = i;
    spine = std::move(intro);
  }
  // Weakening is admissible with list contexts: replay the tree with the
  // target hypotheses prepended at every node, shifting the indices of
  // assumptions and discharges. Eigenvariable side conditions stay intact
  // since the target hypotheses live over the root context.
  size_t shift = target_hyps.size();
  std::function<ProofTree(const ProofTree&)> weaken = [&](const ProofTree& q) {
    ProofTree out = q;
    std::vector<Formula> hyps = target_hyps;
    hyps.insert(hyps.end(), q.conclusion.hyps.begin(), q.conclusion.hyps.end());
    out.conclusion.hyps = std::move(hyps);
    if (q.rule == Rule::Assumption || q.rule == Rule::ImpliesIntro) out.index = q.index + shift;
    out.premises.clear();
    for (const auto& q2 : q.premises) out.premises.push_back(weaken(q2));
    return out;
  };
  ProofTree cur = weaken(spine);  // hyps = target_hyps, concl = curried chain

  // Re-apply the discharged hypotheses from their positions in the target.
  Sequent base = Sequent::make(p.conclusion.vars, target_hyps, p.conclusion.concl);
  for (size_t i = 0; i < s.hyps.size(); ++i) {
    const Formula& h = s.hyps[i];
    size_t pos = target_hyps.size();
    for (size_t j = 0; j < target_hyps.size(); ++j)
      if (target_hyps[j] == h) {
        pos = j;
        break;
      }
    if (pos == target_hyps.size())
      throw std::invalid_argument("reestablish: hypothesis missing from the target: " +
                                  to_string(h));
    Sequent ns = base;
    ns.concl = cur.conclusion.concl.rhs();
    ProofTree arg = assumption(base, pos);
    ProofTree app = mk_node(Rule::ImpliesElim, std::move(ns), {std::move(cur), std::move(arg)});
    cur = std::move(app);
  }
  return cur;
}

namespace {

// Proof of the instantiated axiom consequent from a theory axiom:
// T,A |-_X (consequent)sigma via forall-elim and implies-elim.
ProofTree derive_axiom_consequent(const Theory& t, const Sequent& base,
                                  const AxiomInstance& inst) {
  const CoherentAxiom& ax = t.axioms[inst.axiom_index];
  Sequent axseq = base;
  axseq.concl = axiom_to_formula(ax);
  ProofTree cur = mk_node(Rule::TheoryAxiom, axseq);
  cur.index = inst.axiom_index;
  for (const auto& v : ax.vars) {
    const Formula& f = cur.conclusion.concl;
    Term tm = inst.instantiation.at(v);
    Sequent ns = base;
    ns.concl = subst_one(f.body(), f.binder(), tm);
    ProofTree el = mk_node(Rule::ForallElim, std::move(ns), {std::move(cur)});
    el.term = tm;
    cur = std::move(el);
  }
  // cur : antecedent.sigma -> consequent.sigma
  Formula ante = cur.conclusion.concl.lhs();
  ProofTree ante_proof = [&]() -> ProofTree {
    if (ante.kind() == Formula::Kind::Top) {
      Sequent ns = base;
      ns.concl = Formula::top();
      return mk_node(Rule::TopIntro, ns);
    }
    auto find_hyp = [&](const Formula& f) -> size_t {
      for (size_t i = 0; i < base.hyps.size(); ++i)
        if (base.hyps[i] == f) return i;
      throw std::invalid_argument("instantiated antecedent atom missing from hypotheses");
    };
    if (ante.kind() == Formula::Kind::Atom) return assumption(base, find_hyp(ante));
    std::vector<ProofTree> parts;
    for (const auto& a : ante.parts()) parts.push_back(assumption(base, find_hyp(a)));
    Sequent ns = base;
    ns.concl = ante;
    return mk_node(Rule::AndIntro, std::move(ns), std::move(parts));
  }();
  Sequent ns = base;
  ns.concl = cur.conclusion.concl.rhs();
  ProofTree out =
      mk_node(Rule::ImpliesElim, std::move(ns), {std::move(cur), std::move(ante_proof)});
  return out;
}

// From a proof of T, A u new_atoms |- psi (context = extension sequent),
// derive T, Gamma |- psi where Gamma = hyps_with_conj ends with the
// conjunction hypothesis covering new_atoms.
ProofTree eliminate_conjunct_hyp(const ProofTree& inner, const Sequent& goal_ctx,
                                 const Formula& conj_hyp, size_t conj_pos,
                                 const std::vector<Formula>& new_atoms) {
  // inner hyps: goal_ctx.hyps minus the conj hyp, plus the individual atoms.
  // Discharge the atoms, then re-apply them via and-elim on the conj hyp.
  std::vector<Formula> discharge_target;
  for (size_t i = 0; i < goal_ctx.hyps.size(); ++i)
    if (i != conj_pos) discharge_target.push_back(goal_ctx.hyps[i]);
  std::vector<Formula> inner_target = discharge_target;
  inner_target.insert(inner_target.end(), new_atoms.begin(), new_atoms.end());
  ProofTree arranged = reestablish(inner, inner_target);

  ProofTree cur = std::move(arranged);
  for (size_t i = inner_target.size(); i-- > discharge_target.size();) {
    Sequent ns = cur.conclusion;
    Formula h = ns.hyps[i];
    ns.hyps.erase(ns.hyps.begin() + static_cast<long>(i));
    ns.concl = Formula::implies(h, cur.conclusion.concl);
    ProofTree intro = mk_node(Rule::ImpliesIntro, std::move(ns), {std::move(cur)});
    intro.index = i;
    cur = std::move(intro);
  }
  // cur: discharge_target |- a1 -> ... -> am -> psi; weaken into goal_ctx.
  ProofTree weakened = reestablish(cur, goal_ctx.hyps);
  ProofTree app = std::move(weakened);
  for (size_t i = 0; i < new_atoms.size(); ++i) {
    ProofTree arg = [&]() -> ProofTree {
      if (conj_hyp.kind() == Formula::Kind::And) {
        Sequent ns = goal_ctx;
        ns.concl = new_atoms[i];
        ProofTree el =
            mk_node(Rule::AndElim, std::move(ns), {assumption(goal_ctx, conj_pos)});
        // position of this atom inside the conjunction
        size_t pos = 0;
        for (size_t j = 0; j < conj_hyp.parts().size(); ++j)
          if (conj_hyp.parts()[j] == new_atoms[i]) {
            pos = j;
            break;
          }
        el.index = pos;
        return el;
      }
      return assumption(goal_ctx, conj_pos);  // single-atom conjunction
    }();
    Sequent ns = goal_ctx;
    ns.concl = app.conclusion.concl.rhs();
    app = mk_node(Rule::ImpliesElim, std::move(ns), {std::move(app), std::move(arg)});
  }
  return app;
}

}  // namespace

ProofTree local_prov(const Theory& t, const CoverDerivation& d, const Formula& psi,
                     const std::vector<ProofTree>& leg_proofs) {
  Sink s = d.sink();
  if (leg_proofs.size() != s.legs.size())
    throw std::invalid_argument("local_prov: one proof per sink leg required");

  if (d.is_base()) {
    const Morphism& f = d.iso();
    // rename the single proof along the inverse bijection dom -> cod
    std::map<std::string, std::string> ren;
    for (const auto& [x, tm] : f.subst) ren.emplace(tm.head(), x);
    ProofTree renamed = rename_proof(leg_proofs[0], ren);
    Sequent target = condition_sequent(d.root(), renamed.conclusion.concl);
    return reestablish(renamed, target.hyps);
  }

  const AxiomInstance& inst = d.instance();
  const CoherentAxiom& ax = t.axioms[inst.axiom_index];
  Sequent base = condition_sequent(d.root(), psi);

  // Route the leg proofs to the child derivations. Composed legs are the
  // child legs with unchanged domains, so the proofs carry over unchanged.
  struct Key {
    Morphism composed;
    size_t child;
    size_t child_leg;
  };
  std::vector<Key> keys;
  for (size_t i = 0; i < d.children().size(); ++i) {
    Sink cs = d.children()[i].sink();
    for (size_t j = 0; j < cs.legs.size(); ++j)
      keys.push_back({compose(d.extensions()[i], cs.legs[j]), i, j});
  }
  std::stable_sort(keys.begin(), keys.end(),
                   [](const Key& a, const Key& b) { return a.composed < b.composed; });
  std::vector<std::vector<ProofTree>> child_proofs(d.children().size());
  for (auto& v : child_proofs) v = {};
  std::vector<std::vector<std::pair<size_t, ProofTree>>> staged(d.children().size());
  for (size_t k = 0; k < keys.size(); ++k)
    staged[keys[k].child].push_back({keys[k].child_leg, leg_proofs[k]});
  for (size_t i = 0; i < staged.size(); ++i) {
    std::sort(staged[i].begin(), staged[i].end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [_, pr] : staged[i]) child_proofs[i].push_back(std::move(pr));
  }

  // Per disjunct: T, A, phi_i.sigma |-_{X,xbar_i} psi by induction.
  std::vector<ProofTree> case_proofs;
  ProofTree major = derive_axiom_consequent(t, base, inst);
  const Formula& consequent = major.conclusion.concl;

  for (size_t i = 0; i < d.children().size(); ++i) {
    Extension ext = instance_extension(t, inst, i);
    ProofTree inner = local_prov(t, d.children()[i], psi, child_proofs[i]);
    // inner: atoms(ext) |-_{ext vars} psi

    // The case hypothesis is the i-th member of the instantiated consequent.
    Formula case_hyp;
    if (consequent.kind() == Formula::Kind::Or)
      case_hyp = consequent.parts()[i];
    else
      case_hyp = consequent;  // single disjunct

    // Peel existentials with the extension's fresh names as eigenvariables,
    // then eliminate the atom conjunction.
    const Disjunct& dis = ax.disjuncts[i];
    std::vector<std::string> eigens;
    for (const auto& v : dis.fresh_vars) eigens.push_back(ext.var_names.at(v));

    // Contexts for the nested exists-eliminations: hypotheses stay
    // base.hyps ++ [case_hyp] at the top, gaining instantiated layers below.
    std::function<ProofTree(const Sequent&, const Formula&, size_t)> elim =
        [&](const Sequent& ctx, const Formula& hyp_formula, size_t level) -> ProofTree {
      // ctx: current context whose last hypothesis is hyp_formula
      if (level < eigens.size()) {
        const std::string& y = eigens[level];
        Formula inst_body = subst_one(hyp_formula.body(), hyp_formula.binder(), Term::var(y));
        std::vector<std::string> nvars = ctx.vars;
        nvars.push_back(y);
        Sequent inner_ctx = Sequent::make(nvars, ctx.hyps, ctx.concl);
        inner_ctx.hyps.push_back(inst_body);
        ProofTree body_proof = elim(inner_ctx, inst_body, level + 1);
        ProofTree major_e = assumption(ctx, ctx.hyps.size() - 1);
        Sequent ns = ctx;
        ProofTree out =
            mk_node(Rule::ExistsElim, std::move(ns), {std::move(major_e), std::move(body_proof)});
        out.eigen = y;
        return out;
      }
      // hyp_formula is the conjunction of the instantiated atoms
      std::vector<Formula> new_atom_formulas;
      for (const auto& a : dis.atoms) {
        Atom img = apply_subst(apply_subst(a, inst.instantiation),
                               [&] {
                                 Subst mu;
                                 for (const auto& [orig, fn] : ext.var_names)
                                   mu.emplace(orig, Term::var(fn));
                                 return mu;
                               }());
        new_atom_formulas.push_back(Formula::atom(img));
      }
      return eliminate_conjunct_hyp(inner, ctx, hyp_formula, ctx.hyps.size() - 1,
                                    new_atom_formulas);
    };

    Sequent case_ctx = base;
    case_ctx.hyps.push_back(case_hyp);
    case_proofs.push_back(elim(case_ctx, case_hyp, 0));
  }

  if (d.children().empty()) {
    // empty disjunction: consequent is falsum
    Sequent ns = base;
    ProofTree out = mk_node(Rule::BotElim, std::move(ns), {std::move(major)});
    return out;
  }
  if (d.children().size() == 1) {
    // single disjunct: cut the case proof against the major premise
    ProofTree case_p = std::move(case_proofs[0]);
    // case_p: base.hyps ++ [case_hyp] |- psi; turn into case_hyp -> psi
    Sequent ns = base;
    ns.concl = Formula::implies(case_p.conclusion.hyps.back(), psi);
    ProofTree intro = mk_node(Rule::ImpliesIntro, std::move(ns), {std::move(case_p)});
    intro.index = base.hyps.size();
    Sequent fin = base;
    return mk_node(Rule::ImpliesElim, std::move(fin), {std::move(intro), std::move(major)});
  }
  std::vector<ProofTree> premises;
  premises.push_back(std::move(major));
  for (auto& cp : case_proofs) premises.push_back(std::move(cp));
  return mk_node(Rule::OrElim, base, std::move(premises));
}

namespace {

std::optional<size_t> find_reflexivity_axiom(const Theory& t) {
  for (size_t i = 0; i < t.axioms.size(); ++i) {
    const CoherentAxiom& ax = t.axioms[i];
    if (ax.vars.size() == 1 && ax.antecedent.empty() && ax.disjuncts.size() == 1 &&
        ax.disjuncts[0].fresh_vars.empty() && ax.disjuncts[0].atoms.size() == 1) {
      const Atom& a = ax.disjuncts[0].atoms[0];
      if (a.is_equality() && a.args[0] == Term::var(ax.vars[0]) && a.args[0] == a.args[1])
        return i;
    }
  }
  return std::nullopt;
}

}  // namespace

ProofTree extract_proof(SiteKind kind, const Condition& c, const Formula& goal,
                        const ForcingWitness& w, const Theory& t) {
  auto chk = is_generalized_geometric(goal);
  if (!chk.ok)
    throw std::invalid_argument("extract_proof: goal is not generalized geometric: " +
                                to_string(*chk.offender));
  if (!check_witness(kind, c, goal, t, w))
    throw std::invalid_argument("extract_proof: witness fails verification");

  using K = ForcingWitness::Kind;
  Sequent base = condition_sequent(c, goal);

  switch (w.kind) {
    case K::Top:
      return mk_node(Rule::TopIntro, base);
    case K::ViaEmptyCover: {
      // the empty cover proves falsum locally, then anything follows
      std::vector<ProofTree> none;
      ProofTree bot = local_prov(t, *w.cover, Formula::bot(), none);
      return mk_node(Rule::BotElim, base, {std::move(bot)});
    }
    case K::Fact: {
      Sink s = w.cover->sink();
      std::vector<ProofTree> legs;
      for (const auto& leg : s.legs) {
        Atom img = apply_subst(goal.atom_ref(), leg.subst);
        Sequent ls = condition_sequent(leg.dom, Formula::atom(img));
        size_t pos = 0;
        for (size_t i = 0; i < ls.hyps.size(); ++i)
          if (ls.hyps[i] == ls.concl) pos = i;
        legs.push_back(assumption(ls, pos));
      }
      return local_prov(t, *w.cover, goal, legs);
    }
    case K::Eq: {
      auto refl = find_reflexivity_axiom(t);
      if (!refl)
        throw std::invalid_argument(
            "extract_proof: equality goal needs a reflexivity axiom in the theory");
      Sink s = w.cover->sink();
      std::vector<ProofTree> legs;
      for (const auto& leg : s.legs) {
        Term lt = apply_subst(goal.atom_ref().args[0], leg.subst);
        AxiomInstance inst{*refl, leg.dom, {{t.axioms[*refl].vars[0], lt}}};
        legs.push_back(
            derive_axiom_consequent(t, condition_sequent(leg.dom, Formula::top()), inst));
      }
      return local_prov(t, *w.cover, goal, legs);
    }
    case K::And: {
      std::vector<ProofTree> parts;
      for (size_t i = 0; i < goal.parts().size(); ++i)
        parts.push_back(extract_proof(kind, c, goal.parts()[i], w.children[i], t));
      return mk_node(Rule::AndIntro, base, std::move(parts));
    }
    case K::Or: {
      Sink s = w.cover->sink();
      std::vector<ProofTree> legs;
      for (size_t k = 0; k < s.legs.size(); ++k) {
        const auto& leg = s.legs[k];
        Formula fl = subst_formula(goal, leg.subst);
        size_t i = w.or_legs[k].disjunct;
        ProofTree sub = extract_proof(kind, leg.dom, fl.parts()[i], *w.or_legs[k].sub, t);
        Sequent ns = condition_sequent(leg.dom, fl);
        ProofTree inj = mk_node(Rule::OrIntro, std::move(ns), {std::move(sub)});
        inj.index = i;
        legs.push_back(std::move(inj));
      }
      return local_prov(t, *w.cover, goal, legs);
    }
    case K::Exists: {
      Sink s = w.cover->sink();
      std::vector<ProofTree> legs;
      for (size_t k = 0; k < s.legs.size(); ++k) {
        const auto& leg = s.legs[k];
        Formula fl = subst_formula(goal, leg.subst);
        const Term& tm = w.exists_legs[k].term;
        ProofTree sub = extract_proof(kind, leg.dom, subst_one(fl.body(), fl.binder(), tm),
                                      *w.exists_legs[k].sub, t);
        Sequent ns = condition_sequent(leg.dom, fl);
        ProofTree intro = mk_node(Rule::ExistsIntro, std::move(ns), {std::move(sub)});
        intro.term = tm;
        legs.push_back(std::move(intro));
      }
      return local_prov(t, *w.cover, goal, legs);
    }
    case K::Forall: {
      std::vector<std::string> vars = c.vars;
      vars.push_back(w.fresh_var);
      Condition ext = Condition::make(std::move(vars), c.atoms);
      Formula inst = subst_one(goal.body(), goal.binder(), Term::var(w.fresh_var));
      ProofTree sub = extract_proof(kind, ext, inst, *w.sub, t);
      ProofTree out = mk_node(Rule::ForallIntro, base, {std::move(sub)});
      out.eigen = w.fresh_var;
      return out;
    }
    case K::ImpliesTop: {
      ProofTree sub = extract_proof(kind, c, goal.rhs(), *w.sub, t);
      std::vector<Formula> target = base.hyps;
      target.push_back(Formula::top());
      ProofTree arranged = reestablish(sub, target);
      ProofTree out = mk_node(Rule::ImpliesIntro, base, {std::move(arranged)});
      out.index = target.size() - 1;
      return out;
    }
    case K::ImpliesBot: {
      // from the falsum hypothesis everything follows
      std::vector<Formula> hyps = base.hyps;
      hyps.push_back(Formula::bot());
      Sequent inner_ctx = Sequent::make(base.vars, hyps, goal.rhs());
      ProofTree botp = assumption(inner_ctx, hyps.size() - 1);
      ProofTree body = mk_node(Rule::BotElim, inner_ctx, {std::move(botp)});
      ProofTree out = mk_node(Rule::ImpliesIntro, base, {std::move(body)});
      out.index = hyps.size() - 1;
      return out;
    }
    case K::ImpliesFact: {
      std::vector<Atom> atoms = c.atoms;
      atoms.push_back(goal.lhs().atom_ref());
      Condition ext = Condition::make(c.vars, std::move(atoms));
      ProofTree sub = extract_proof(kind, ext, goal.rhs(), *w.sub, t);
      std::vector<Formula> target = base.hyps;
      target.push_back(goal.lhs());
      ProofTree arranged = reestablish(sub, target);
      ProofTree out = mk_node(Rule::ImpliesIntro, base, {std::move(arranged)});
      out.index = target.size() - 1;
      return out;
    }
    case K::ImpliesEq: {
      bool identity_mgu = true;
      for (const auto& [v, tm] : w.mgu_subst)
        identity_mgu = identity_mgu && tm == Term::var(v);
      if (!identity_mgu)
        throw std::invalid_argument(
            "extract_proof: equality antecedents need the equality-elimination pipeline");
      ProofTree sub = extract_proof(kind, c, goal.rhs(), *w.sub, t);
      std::vector<Formula> target = base.hyps;
      target.push_back(goal.lhs());
      ProofTree arranged = reestablish(sub, target);
      ProofTree out = mk_node(Rule::ImpliesIntro, base, {std::move(arranged)});
      out.index = target.size() - 1;
      return out;
    }
    case K::ImpliesEqVacuous:
      throw std::invalid_argument(
          "extract_proof: refuted equality antecedents need the constructor theory");
  }
  throw std::logic_error("extract_proof: unhandled witness kind");
}

ProveResult prove(const Sequent& s, const Theory& t, const Bounds& b, SiteKind kind) {
  ProveResult out;
  auto chk = is_generalized_geometric(s.concl);
  if (!chk.ok)
    throw std::invalid_argument("prove: goal is not generalized geometric: " +
                                to_string(*chk.offender));
  std::vector<Atom> atoms;
  for (const auto& h : s.hyps) {
    if (h.kind() != Formula::Kind::Atom || h.atom_ref().is_equality())
      throw std::invalid_argument("prove: hypotheses must be non-equality atoms");
    atoms.push_back(h.atom_ref());
  }
  Condition c = Condition::make(s.vars, std::move(atoms));
  Verdict v = force(kind, c, s.concl, t, b);
  out.verdict = v;
  if (v.forced()) {
    ProofTree p = extract_proof(kind, c, s.concl, *v.witness, t);
    ProofTree arranged = reestablish(p, s.hyps);
    out.status = ProveResult::Status::Proved;
    out.proof = std::move(arranged);
    return out;
  }
  if (v.not_forced()) {
    out.status = ProveResult::Status::Refuted;
    out.note = "goal not forced at the hypothesis condition";
    return out;
  }
  out.status = ProveResult::Status::Unknown;
  out.note = v.note;
  return out;
}

std::string to_string(const Sequent& s) {
  std::string out;
  for (size_t i = 0; i < s.hyps.size(); ++i) {
    if (i) out += ", ";
    out += to_string(s.hyps[i]);
  }
  if (!s.hyps.empty()) out += " ";
  out += "|-";
  if (!s.vars.empty()) {
    out += "_{";
    for (size_t i = 0; i < s.vars.size(); ++i) {
      if (i) out += ",";
      out += s.vars[i];
    }
    out += "}";
  }
  out += " " + to_string(s.concl);
  return out;
}

namespace {
void render_proof(const ProofTree& p, int indent, std::string& out) {
  std::string pad(static_cast<size_t>(indent) * 2, ' ');
  out += pad + to_string(p.rule);
  if (p.rule == Rule::Assumption || p.rule == Rule::AndElim || p.rule == Rule::OrIntro ||
      p.rule == Rule::ImpliesIntro || p.rule == Rule::TheoryAxiom)
    out += "[" + std::to_string(p.index) + "]";
  if (p.term) out += " {" + to_string(*p.term) + "}";
  if (!p.eigen.empty()) out += " <" + p.eigen + ">";
  out += ": " + to_string(p.conclusion) + "\n";
  for (const auto& q : p.premises) render_proof(q, indent + 1, out);
}
}  // namespace

std::string to_string(const ProofTree& p) {
  std::string out;
  render_proof(p, 0, out);
  return out;
}

}  // namespace coforce
