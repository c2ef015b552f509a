#include "coforce/unify.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace coforce {

std::set<std::string> UnificationProblem::vars() const {
  std::set<std::string> out;
  for (const auto& [s, t] : equations) {
    s.collect_vars(out);
    t.collect_vars(out);
  }
  return out;
}

UnifyResult mgu(const UnificationProblem& p) {
  std::set<std::string> all_vars = p.vars();
  std::deque<std::pair<Term, Term>> work(p.equations.begin(), p.equations.end());
  Subst sol;

  auto substitute_everywhere = [&](const std::string& v, const Term& t) {
    Subst one{{v, t}};
    for (auto& [a, b] : work) {
      a = apply_subst(a, one);
      b = apply_subst(b, one);
    }
    for (auto& [w, img] : sol) img = apply_subst(img, one);
    sol[v] = t;
  };

  while (!work.empty()) {
    auto [s, t] = work.front();
    work.pop_front();
    if (s == t) continue;  // delete
    if (!s.is_var() && !t.is_var()) {
      if (s.head() != t.head() || s.args().size() != t.args().size())
        return UnifyFailure{UnifyClash{s.head(), t.head()}};
      for (size_t i = 0; i < s.args().size(); ++i)  // decompose
        work.emplace_back(s.args()[i], t.args()[i]);
      continue;
    }
    if (!s.is_var()) std::swap(s, t);  // orient
    if (t.contains_var(s.head())) return UnifyFailure{UnifyOccursCheck{s.head(), t}};
    substitute_everywhere(s.head(), t);  // eliminate
  }

  Unifier u;
  u.subst = std::move(sol);
  u.domain_vars.assign(all_vars.begin(), all_vars.end());
  std::set<std::string> cod = all_vars;
  for (const auto& [v, t] : u.subst) cod.erase(v);
  u.codomain_vars.assign(cod.begin(), cod.end());
  return u;
}

bool unifies(const Unifier& u, const UnificationProblem& p) {
  for (const auto& [s, t] : p.equations)
    if (!(u.apply_to(s) == u.apply_to(t))) return false;
  return true;
}

bool is_idempotent(const Unifier& u) {
  for (const auto& [v, t] : u.subst)
    if (!(apply_subst(t, u.subst) == t)) return false;
  return true;
}

namespace {

std::vector<std::string> numbered_vars(const std::string& base, int n) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i) out.push_back(base + std::to_string(i));
  return out;
}

}  // namespace

ConstructorTheory tplus(const Theory& t) {
  ConstructorTheory out;
  out.theory = t;
  out.theory.sig.with_equality = true;
  out.base_axiom_count = t.axioms.size();
  auto& axs = out.theory.axioms;

  auto add = [&](CoherentAxiom ax, std::vector<size_t>& bucket) {
    bucket.push_back(axs.size());
    axs.push_back(std::move(ax));
  };

  // Equality congruence: reflexivity, symmetry, transitivity.
  add(CoherentAxiom{{"x"}, {}, {Disjunct{{}, {eq_atom(Term::var("x"), Term::var("x"))}}}},
      out.congruence_axioms);
  add(CoherentAxiom{{"x", "y"},
                    {eq_atom(Term::var("x"), Term::var("y"))},
                    {Disjunct{{}, {eq_atom(Term::var("y"), Term::var("x"))}}}},
      out.congruence_axioms);
  add(CoherentAxiom{{"x", "y", "z"},
                    {eq_atom(Term::var("x"), Term::var("y")),
                     eq_atom(Term::var("y"), Term::var("z"))},
                    {Disjunct{{}, {eq_atom(Term::var("x"), Term::var("z"))}}}},
      out.congruence_axioms);

  // Congruence per function and predicate symbol.
  for (const auto& [fn, k] : t.sig.functions) {
    if (k == 0) continue;
    auto xs = numbered_vars("x", k);
    auto ys = numbered_vars("y", k);
    CoherentAxiom ax;
    ax.vars = xs;
    ax.vars.insert(ax.vars.end(), ys.begin(), ys.end());
    for (int i = 0; i < k; ++i) ax.antecedent.push_back(eq_atom(Term::var(xs[i]), Term::var(ys[i])));
    std::vector<Term> xargs, yargs;
    for (int i = 0; i < k; ++i) xargs.push_back(Term::var(xs[i]));
    for (int i = 0; i < k; ++i) yargs.push_back(Term::var(ys[i]));
    ax.disjuncts = {Disjunct{{}, {eq_atom(Term::app(fn, xargs), Term::app(fn, yargs))}}};
    add(std::move(ax), out.congruence_axioms);
  }
  for (const auto& [pr, k] : t.sig.predicates) {
    if (k == 0) continue;
    auto xs = numbered_vars("x", k);
    auto ys = numbered_vars("y", k);
    CoherentAxiom ax;
    ax.vars = xs;
    ax.vars.insert(ax.vars.end(), ys.begin(), ys.end());
    std::vector<Term> xargs, yargs;
    for (int i = 0; i < k; ++i) xargs.push_back(Term::var(xs[i]));
    for (int i = 0; i < k; ++i) yargs.push_back(Term::var(ys[i]));
    ax.antecedent.push_back(Atom{pr, xargs});
    for (int i = 0; i < k; ++i) ax.antecedent.push_back(eq_atom(Term::var(xs[i]), Term::var(ys[i])));
    ax.disjuncts = {Disjunct{{}, {Atom{pr, yargs}}}};
    add(std::move(ax), out.congruence_axioms);
  }

  // (I) distinct function symbols have disjoint values.
  for (size_t i = 0; i < t.sig.functions.size(); ++i)
    for (size_t j = i + 1; j < t.sig.functions.size(); ++j) {
      const auto& [f, kf] = t.sig.functions[i];
      const auto& [g, kg] = t.sig.functions[j];
      auto xs = numbered_vars("x", kf);
      auto ys = numbered_vars("y", kg);
      CoherentAxiom ax;
      ax.vars = xs;
      ax.vars.insert(ax.vars.end(), ys.begin(), ys.end());
      std::vector<Term> xargs, yargs;
      for (const auto& v : xs) xargs.push_back(Term::var(v));
      for (const auto& v : ys) yargs.push_back(Term::var(v));
      ax.antecedent.push_back(eq_atom(Term::app(f, xargs), Term::app(g, yargs)));
      // empty disjunct list: -> falsum
      add(std::move(ax), out.disjointness_axioms);
    }

  // (II) function symbols are injective.
  for (const auto& [fn, k] : t.sig.functions) {
    if (k == 0) continue;
    auto xs = numbered_vars("x", k);
    auto ys = numbered_vars("y", k);
    CoherentAxiom ax;
    ax.vars = xs;
    ax.vars.insert(ax.vars.end(), ys.begin(), ys.end());
    std::vector<Term> xargs, yargs;
    for (const auto& v : xs) xargs.push_back(Term::var(v));
    for (const auto& v : ys) yargs.push_back(Term::var(v));
    ax.antecedent.push_back(eq_atom(Term::app(fn, xargs), Term::app(fn, yargs)));
    Disjunct d;
    for (int i = 0; i < k; ++i) d.atoms.push_back(eq_atom(Term::var(xs[i]), Term::var(ys[i])));
    ax.disjuncts = {std::move(d)};
    add(std::move(ax), out.injectivity_axioms);
  }

  return out;
}

CoherentAxiom acyclicity_axiom(const std::string& var, const Term& t) {
  if (!t.contains_var(var) || t.is_var())
    throw std::invalid_argument("acyclicity_axiom: pattern is not a proper cycle");
  CoherentAxiom ax;
  std::set<std::string> vs = t.vars();
  vs.insert(var);
  ax.vars.assign(vs.begin(), vs.end());
  ax.antecedent.push_back(eq_atom(Term::var(var), t));
  // empty disjunct list: -> falsum
  return ax;
}

namespace {

// Peels a forall prefix, returning the bound variables in order.
Formula peel_forall(const Formula& f, std::vector<std::string>& vars) {
  Formula cur = f;
  while (cur.kind() == Formula::Kind::Forall) {
    vars.push_back(cur.binder());
    cur = cur.body();
  }
  return cur;
}

}  // namespace

std::vector<EqAntecedentGoal> split_equational_goal(const Formula& goal) {
  std::vector<std::string> vars;
  Formula core = peel_forall(goal, vars);

  // Top-level conjunctions split into independent conjuncts.
  if (core.kind() == Formula::Kind::And) {
    std::vector<EqAntecedentGoal> out;
    for (const auto& part : core.parts()) {
      Formula closed = part;
      for (auto it = vars.rbegin(); it != vars.rend(); ++it)
        closed = Formula::forall(*it, closed);
      auto sub = split_equational_goal(closed);
      out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
  }

  EqAntecedentGoal g;
  g.vars = vars;
  Formula cur = core;
  // Strip leading equality antecedents into the unification problem.
  while (cur.kind() == Formula::Kind::Implies && cur.lhs().kind() == Formula::Kind::Atom &&
         cur.lhs().atom_ref().is_equality()) {
    const Atom& a = cur.lhs().atom_ref();
    g.equations.equations.emplace_back(a.args[0], a.args[1]);
    cur = cur.rhs();
  }
  // A conjunction of equations as a single antecedent also splits.
  if (cur.kind() == Formula::Kind::Implies && cur.lhs().kind() == Formula::Kind::And) {
    bool all_eq = true;
    for (const auto& p : cur.lhs().parts())
      all_eq = all_eq && p.kind() == Formula::Kind::Atom && p.atom_ref().is_equality();
    if (all_eq) {
      for (const auto& p : cur.lhs().parts()) {
        const Atom& a = p.atom_ref();
        g.equations.equations.emplace_back(a.args[0], a.args[1]);
      }
      cur = cur.rhs();
    }
  }
  g.residual = cur;

  auto chk = is_generalized_geometric(cur);
  if (!chk.ok)
    throw CoherentNormalizeError("residual is not generalized geometric: " + to_string(cur),
                                 *chk.offender);
  // No equality antecedents may remain inside the residual.
  std::function<bool(const Formula&)> eq_ante = [&](const Formula& f) -> bool {
    switch (f.kind()) {
      case Formula::Kind::Implies:
        if (f.lhs().kind() == Formula::Kind::Atom && f.lhs().atom_ref().is_equality())
          return true;
        return eq_ante(f.rhs());
      case Formula::Kind::And:
      case Formula::Kind::Or: {
        for (const auto& p : f.parts())
          if (eq_ante(p)) return true;
        return false;
      }
      case Formula::Kind::Forall:
      case Formula::Kind::Exists:
        return eq_ante(f.body());
      default:
        return false;
    }
  };
  if (eq_ante(cur))
    throw CoherentNormalizeError(
        "equality antecedent left inside the residual: " + to_string(cur), cur);
  return {std::move(g)};
}

ReducedGoal girard_eriksson_reduce(const EqAntecedentGoal& goal, const Theory&) {
  ReducedGoal out;
  UnifyResult r = mgu(goal.equations);
  if (std::holds_alternative<UnifyFailure>(r)) {
    out.result = ReducedGoal::Discharged{std::get<UnifyFailure>(r)};
    return out;
  }
  Unifier u = std::get<Unifier>(r);

  // The context after reduction: goal variables not eliminated by the mgu.
  std::set<std::string> elim;
  for (const auto& [v, t] : u.subst) elim.insert(v);
  std::vector<std::string> context;
  for (const auto& v : goal.vars)
    if (!elim.count(v)) context.push_back(v);

  // Totalize over the residual's free variables before substituting.
  Subst total = u.subst;
  for (const auto& v : free_vars(goal.residual))
    if (!total.count(v)) total.emplace(v, Term::var(v));
  Formula reduced = substitute(goal.residual, total);

  out.result = ReducedGoal::Reduced{std::move(u), std::move(context), std::move(reduced)};
  return out;
}

std::string to_string(const UnifyFailure& f) {
  if (std::holds_alternative<UnifyClash>(f)) {
    const auto& c = std::get<UnifyClash>(f);
    return "Clash(" + c.head1 + "," + c.head2 + ")";
  }
  const auto& o = std::get<UnifyOccursCheck>(f);
  return "OccursCheck(" + o.var + " in " + to_string(o.term) + ")";
}

std::string to_string(const Unifier& u) { return to_string(u.subst); }

}  // namespace coforce
