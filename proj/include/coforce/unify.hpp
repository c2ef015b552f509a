#ifndef COFORCE_UNIFY_HPP
#define COFORCE_UNIFY_HPP

#include <variant>

#include "coforce/conditions.hpp"

namespace coforce {

struct UnificationProblem {
  std::vector<std::pair<Term, Term>> equations;

  std::set<std::string> vars() const;
};

// Idempotent most general unifier. Domain variables map to terms over the
// codomain variables (the variables left untouched by elimination).
struct Unifier {
  Subst subst;  // eliminated variable -> term; identity elsewhere
  std::vector<std::string> domain_vars;    // all variables of the problem
  std::vector<std::string> codomain_vars;  // variables of the solved form

  Term apply_to(const Term& t) const { return apply_subst(t, subst); }
  bool is_identity() const { return subst.empty(); }
};

struct UnifyClash {
  std::string head1, head2;  // distinct function symbols (constructor axiom I)
};

struct UnifyOccursCheck {
  std::string var;  // x = t with x occurring properly in t (constructor axiom III)
  Term term;
};

using UnifyFailure = std::variant<UnifyClash, UnifyOccursCheck>;
using UnifyResult = std::variant<Unifier, UnifyFailure>;

// Rule-based unification (decompose / orient / eliminate with occurs check).
UnifyResult mgu(const UnificationProblem& p);

bool unifies(const Unifier& u, const UnificationProblem& p);
bool is_idempotent(const Unifier& u);

// The constructor theory T+: the base theory over the signature with
// equality, the congruence axioms, and constructor axioms (I) disjointness
// and (II) injectivity. Axiom (III), acyclicity, is a schema instantiated on
// demand from occurs-check patterns.
struct ConstructorTheory {
  Theory theory;               // signature has with_equality = true
  size_t base_axiom_count = 0; // prefix of theory.axioms coming from the input
  std::vector<size_t> congruence_axioms;   // indices into theory.axioms
  std::vector<size_t> disjointness_axioms; // axiom (I) instances
  std::vector<size_t> injectivity_axioms;  // axiom (II) instances
};

ConstructorTheory tplus(const Theory& t);

// Axiom (III) instance for a concrete cyclic pattern x = t with x in vars(t).
CoherentAxiom acyclicity_axiom(const std::string& var, const Term& t);

// One conjunct of the equality-elimination normal form:
// forall vars. equations -> residual, residual free of equality antecedents.
struct EqAntecedentGoal {
  std::vector<std::string> vars;
  UnificationProblem equations;
  Formula residual;
};

struct ReducedGoal {
  // The equality antecedent was refuted by unification failure; nothing left
  // to prove (T+ derives the implication via constructor axioms I/III).
  struct Discharged {
    UnifyFailure reason;
  };
  // Residual goal under the most general unifier, to be settled by the
  // equality-free pipeline over the stated context.
  struct Reduced {
    Unifier unifier;
    std::vector<std::string> context;  // codomain variables
    Formula goal;                      // residual . unifier
  };
  std::variant<Discharged, Reduced> result;

  bool discharged() const { return std::holds_alternative<Discharged>(result); }
};

// Splits a geometric sentence with equational antecedents into conjuncts of
// the EqAntecedentGoal shape. Throws CoherentNormalizeError when the sentence
// is outside the supported shape.
std::vector<EqAntecedentGoal> split_equational_goal(const Formula& goal);

// The equality elimination step for one conjunct.
ReducedGoal girard_eriksson_reduce(const EqAntecedentGoal& goal, const Theory& t);

std::string to_string(const UnifyFailure& f);
std::string to_string(const Unifier& u);

}  // namespace coforce

#endif
