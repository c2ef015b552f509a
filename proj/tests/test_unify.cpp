#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "coforce/proofs.hpp"
#include "coforce/unify.hpp"
#include "helpers.hpp"

using namespace coforce;
using namespace coforce::testing;

namespace {
Term v(const std::string& n) { return Term::var(n); }
Term f1(const Term& a) { return Term::app("f", {a}); }
Term g1(const Term& a) { return Term::app("g", {a}); }

// Independent most-generality oracle: enumerate all unifiers over a small
// term universe and check each factors through the reported mgu.
std::vector<Term> small_terms(const std::vector<std::string>& vars, int depth) {
  Signature sig;
  sig.functions = {{"c", 0}, {"f", 1}};
  return enumerate_terms(sig, vars, depth);
}
}  // namespace

TEST_CASE("mgu worked examples") {
  auto r1 = mgu({{{f1(v("x")), f1(v("y"))}}});
  REQUIRE(std::holds_alternative<Unifier>(r1));
  const Unifier& u1 = std::get<Unifier>(r1);
  CHECK(u1.subst.size() == 1);
  CHECK(unifies(u1, {{{f1(v("x")), f1(v("y"))}}}));

  auto r2 = mgu({{{v("x"), f1(v("x"))}}});
  REQUIRE(std::holds_alternative<UnifyFailure>(r2));
  CHECK(std::holds_alternative<UnifyOccursCheck>(std::get<UnifyFailure>(r2)));

  auto r3 = mgu({{{f1(v("x")), g1(v("y"))}}});
  REQUIRE(std::holds_alternative<UnifyFailure>(r3));
  CHECK(std::holds_alternative<UnifyClash>(std::get<UnifyFailure>(r3)));
}

TEST_CASE("mgu is idempotent and unifies, on random problems") {
  std::mt19937 rng(17);
  Signature sig;
  sig.functions = {{"c", 0}, {"f", 1}, {"g", 2}};
  std::vector<std::string> vars = {"x", "y", "z"};
  int solved = 0;
  for (int i = 0; i < 1000; ++i) {
    UnificationProblem p;
    int n = 1 + static_cast<int>(rng() % 2);
    for (int j = 0; j < n; ++j)
      p.equations.emplace_back(random_term(rng, sig, vars, 2), random_term(rng, sig, vars, 2));
    UnifyResult r = mgu(p);
    if (std::holds_alternative<UnifyFailure>(r)) continue;
    const Unifier& u = std::get<Unifier>(r);
    CHECK(unifies(u, p));
    CHECK(is_idempotent(u));
    ++solved;
  }
  CHECK(solved > 100);
}

TEST_CASE("most generality against the brute-force oracle") {
  std::mt19937 rng(19);
  Signature sig;
  sig.functions = {{"c", 0}, {"f", 1}};
  std::vector<std::string> vars = {"x", "y", "z"};
  auto universe = small_terms(vars, 2);
  int problems = 0;
  for (int i = 0; i < 200 && problems < 40; ++i) {
    UnificationProblem p;
    p.equations.emplace_back(random_term(rng, sig, vars, 1), random_term(rng, sig, vars, 1));
    UnifyResult r = mgu(p);
    if (!std::holds_alternative<Unifier>(r)) {
      // the oracle must find no unifier either
      for (const auto& s : enumerate_substs(vars, universe)) {
        bool ok = true;
        for (const auto& [a, b] : p.equations)
          if (!(apply_subst(a, s) == apply_subst(b, s))) ok = false;
        CHECK_FALSE(ok);
      }
      continue;
    }
    const Unifier& u = std::get<Unifier>(r);
    ++problems;
    // variables not eliminated by the mgu (the test quantifies over all of
    // vars, so identity-mapped variables outside the problem count too)
    std::vector<std::string> hvars;
    for (const auto& x : vars)
      if (!u.subst.count(x)) hvars.push_back(x);
    for (const auto& s : enumerate_substs(vars, universe)) {
      bool ok = true;
      for (const auto& [a, b] : p.equations)
        if (!(apply_subst(a, s) == apply_subst(b, s))) ok = false;
      if (!ok) continue;
      // s factors through u: some h over the codomain gives s = u;h
      bool found = false;
      for (const auto& h : enumerate_substs(hvars, universe)) {
        bool match = true;
        for (const auto& x : vars)
          if (!(apply_subst(u.apply_to(v(x)), h) == apply_subst(v(x), s))) match = false;
        if (match) {
          found = true;
          break;
        }
      }
      CHECK(found);
    }
  }
  CHECK(problems == 40);
}

TEST_CASE("constructor theory over a relational signature adds only congruence") {
  Theory t = split_theory();
  ConstructorTheory ct = tplus(t);
  CHECK(ct.theory.sig.with_equality);
  CHECK(ct.disjointness_axioms.empty());
  CHECK(ct.injectivity_axioms.empty());
  CHECK_FALSE(ct.congruence_axioms.empty());
  CHECK(ct.base_axiom_count == t.axioms.size());
  ct.theory.validate();
}

TEST_CASE("constructor axioms for one unary function") {
  Theory t;
  t.sig.functions = {{"f", 1}};
  ConstructorTheory ct = tplus(t);
  CHECK(ct.disjointness_axioms.empty());
  REQUIRE(ct.injectivity_axioms.size() == 1);
  const CoherentAxiom& inj = ct.theory.axioms[ct.injectivity_axioms[0]];
  CHECK(inj.antecedent.size() == 1);
  CHECK(inj.antecedent[0].is_equality());
  REQUIRE(inj.disjuncts.size() == 1);
  ct.theory.validate();
}

TEST_CASE("two constants get a disjointness axiom matching the inequality fact") {
  Theory t;
  t.sig.functions = {{"0", 0}, {"1", 0}};
  ConstructorTheory ct = tplus(t);
  REQUIRE(ct.disjointness_axioms.size() == 1);
  const CoherentAxiom& ax = ct.theory.axioms[ct.disjointness_axioms[0]];
  CHECK(ax.disjuncts.empty());
  CHECK(ax.antecedent.size() == 1);
  CHECK(ax.antecedent[0] == eq_atom(Term::app("0"), Term::app("1")));
}

TEST_CASE("acyclicity instances come from occurs-check patterns") {
  CoherentAxiom ax = acyclicity_axiom("x", f1(v("x")));
  CHECK(ax.disjuncts.empty());
  CHECK(ax.antecedent.size() == 1);
  CHECK_THROWS_AS(acyclicity_axiom("x", v("x")), std::invalid_argument);
  CHECK_THROWS_AS(acyclicity_axiom("x", f1(v("y"))), std::invalid_argument);
}

TEST_CASE("equality elimination: substitutivity reduces to a tautology") {
  auto pr = parse_theory(
      "pred P/1\nequality on\n"
      "goal g : forall x y. x = y -> P(x) -> P(y)\n");
  REQUIRE(pr.ok());
  Theory t = pr.file->theory;
  auto goals = split_equational_goal(*pr.file->find_goal("g"));
  REQUIRE(goals.size() == 1);
  CHECK(goals[0].equations.equations.size() == 1);
  ReducedGoal red = girard_eriksson_reduce(goals[0], t);
  REQUIRE_FALSE(red.discharged());
  const auto& r = std::get<ReducedGoal::Reduced>(red.result);
  CHECK(r.context.size() == 1);
  // reduced goal is P(w) -> P(w)
  CHECK(r.goal.kind() == Formula::Kind::Implies);
  CHECK(r.goal.lhs() == r.goal.rhs());
}

TEST_CASE("equality elimination: clash discharges the goal") {
  auto pr = parse_theory(
      "fun f/1\nfun g/1\nequality on\n"
      "goal g : forall x. f(x) = g(x) -> false\n");
  REQUIRE(pr.ok());
  auto goals = split_equational_goal(*pr.file->find_goal("g"));
  REQUIRE(goals.size() == 1);
  ReducedGoal red = girard_eriksson_reduce(goals[0], pr.file->theory);
  REQUIRE(red.discharged());
  const auto& d = std::get<ReducedGoal::Discharged>(red.result);
  CHECK(std::holds_alternative<UnifyClash>(d.reason));
}

TEST_CASE("equality elimination: reflexive antecedent reduces to the goal unchanged") {
  auto pr = parse_theory(
      "pred P/1\nequality on\n"
      "goal g : forall x. x = x -> (P(x) -> P(x))\n");
  REQUIRE(pr.ok());
  auto goals = split_equational_goal(*pr.file->find_goal("g"));
  REQUIRE(goals.size() == 1);
  ReducedGoal red = girard_eriksson_reduce(goals[0], pr.file->theory);
  REQUIRE_FALSE(red.discharged());
  const auto& r = std::get<ReducedGoal::Reduced>(red.result);
  CHECK(r.unifier.is_identity());
  CHECK(r.goal == goals[0].residual);
}

TEST_CASE("failure tags match the constructor axiom classification") {
  // clash <-> axiom (I), occurs <-> axiom (III)
  struct Case {
    Term lhs, rhs;
    char expect;  // 'c' clash, 'o' occurs, 'u' unifiable
  };
  std::vector<Case> table = {
      {f1(v("x")), g1(v("y")), 'c'},
      {v("x"), f1(v("x")), 'o'},
      {f1(f1(v("x"))), g1(v("x")), 'c'},
      {v("y"), f1(f1(v("y"))), 'o'},
      {f1(v("x")), f1(v("y")), 'u'},
      {Term::app("c"), Term::app("d"), 'c'},
      {v("x"), v("x"), 'u'},
      {f1(Term::app("c")), f1(v("z")), 'u'},
      {g1(v("x")), f1(v("x")), 'c'},
      {v("z"), g1(v("z")), 'o'},
  };
  for (const auto& cse : table) {
    UnifyResult r = mgu({{{cse.lhs, cse.rhs}}});
    if (cse.expect == 'u') {
      CHECK(std::holds_alternative<Unifier>(r));
    } else {
      REQUIRE(std::holds_alternative<UnifyFailure>(r));
      const auto& fl = std::get<UnifyFailure>(r);
      if (cse.expect == 'c')
        CHECK(std::holds_alternative<UnifyClash>(fl));
      else
        CHECK(std::holds_alternative<UnifyOccursCheck>(fl));
    }
  }
}

TEST_CASE("reduction soundness: proving the reduced goal matches forcing the original") {
  auto pr = parse_theory(
      "pred P/1\npred Q/2\npred R/2\nfun f/1\nequality on\n"
      "axiom forall x z. P(x) => Q(x,z) | R(x,z)\n"
      "goal provable : forall u w. u = w -> P(u) -> (Q(u,w) | R(u,w))\n"
      "goal refutable : forall u w. u = w -> Q(u,w)\n"
      "goal clashing : forall u. f(u) = u -> Q(u,u)\n");
  REQUIRE(pr.ok());
  const Theory& t = pr.file->theory;
  Bounds b{2, 2, 4, 0};
  for (const auto& [name, goal] : pr.file->goals) {
    auto parts = split_equational_goal(goal);
    REQUIRE(parts.size() == 1);
    ReducedGoal red = girard_eriksson_reduce(parts[0], t);
    Verdict orig = force(SiteKind::Ts, Condition::make({}, {}), goal, t, b);
    if (red.discharged()) {
      // occurs-check discharge: the original is vacuously forced
      CHECK(name == "clashing");
      CHECK(orig.forced());
      continue;
    }
    const auto& rr = std::get<ReducedGoal::Reduced>(red.result);
    ProveResult p = prove(Sequent::make(rr.context, {}, rr.goal), t, b);
    if (p.status == ProveResult::Status::Proved)
      CHECK(orig.forced());
    else if (p.status == ProveResult::Status::Refuted)
      CHECK_FALSE(orig.forced());
  }
}

TEST_CASE("vector equations encode as conjunctions and split correctly") {
  auto pr = parse_theory(
      "pred Q/2\nfun f/1\nequality on\n"
      "goal g : forall x y u w. x = y & u = w -> Q(x,u) -> Q(y,w)\n");
  REQUIRE(pr.ok());
  auto goals = split_equational_goal(*pr.file->find_goal("g"));
  REQUIRE(goals.size() == 1);
  CHECK(goals[0].equations.equations.size() == 2);
  ReducedGoal red = girard_eriksson_reduce(goals[0], pr.file->theory);
  REQUIRE_FALSE(red.discharged());
  const auto& r = std::get<ReducedGoal::Reduced>(red.result);
  CHECK(r.goal.lhs() == r.goal.rhs());
}
