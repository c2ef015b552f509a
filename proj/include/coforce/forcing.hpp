#ifndef COFORCE_FORCING_HPP
#define COFORCE_FORCING_HPP

#include "coforce/coverage.hpp"
#include "coforce/unify.hpp"

namespace coforce {

// Search budgets. The forcing relation quantifies over all covers and
// morphisms; bounds make the search finite. Widening bounds can turn Unknown
// into a definitive verdict but never flips Forced or NotForced.
struct Bounds {
  int cover_depth = 2;
  int fresh_vars = 2;
  int atom_budget = 3;
  int term_depth = 1;

  Bounds doubled() const { return Bounds{cover_depth * 2, fresh_vars * 2, atom_budget * 2, term_depth * 2}; }
};

// A replayable certificate that a condition forces a formula. Leg data runs
// parallel to the derivation's sink legs (in sink order).
class ForcingWitness {
 public:
  enum class Kind {
    Top,            // truth
    ViaEmptyCover,  // any goal over an inconsistent condition
    Fact,           // cover placing the fact in every leg
    Eq,             // cover with per-leg syntactic equality
    And,            // one child per conjunct
    Or,             // cover with a chosen disjunct per leg
    Exists,         // cover with a witnessing term per leg
    Forall,         // body witness at the generic extension (X,x;A)
    ImpliesTop,     // body witness at the same condition
    ImpliesBot,     // trivial
    ImpliesFact,    // body witness at (X;A,alpha)
    ImpliesEq,      // body witness at the most-general-unifier image
    ImpliesEqVacuous  // antecedent equation has no unifier of the site kind
  };

  struct OrLeg {
    size_t disjunct;
    std::shared_ptr<ForcingWitness> sub;
  };
  struct ExistsLeg {
    Term term;
    std::shared_ptr<ForcingWitness> sub;
  };

  Kind kind;
  std::optional<CoverDerivation> cover;
  std::vector<ForcingWitness> children;  // And
  std::vector<OrLeg> or_legs;
  std::vector<ExistsLeg> exists_legs;
  std::string fresh_var;                    // Forall
  std::shared_ptr<ForcingWitness> sub;      // Forall / Implies*
  Subst mgu_subst;                          // ImpliesEq (extended over the condition)
};

// A countermodel certificate. Positive goals are refuted by a saturated
// branch; implications and universals by a single refuting morphism with the
// recursive verdict pair.
struct Verdict;

struct SaturatedBranch {
  Condition branch;  // extends the queried condition
  struct Record {
    AxiomInstance instance;
    size_t disjunct;
    Subst witness;  // disjunct fresh vars -> Tm(branch)
  };
  std::vector<Record> closure;  // one record per applicable instance
};

struct RefutingMorphism {
  Morphism morphism;                    // f : D -> C
  std::optional<Term> instance_term;    // for forall refutations
  std::shared_ptr<Verdict> antecedent;  // Forced verdict of the antecedent (implies)
  std::shared_ptr<Verdict> body;        // NotForced verdict of the body
};

struct ConjunctFailure {
  size_t index;
  std::shared_ptr<Verdict> sub;
};

using Countermodel = std::variant<SaturatedBranch, RefutingMorphism, ConjunctFailure>;

struct Verdict {
  enum class State { Forced, NotForced, Unknown };
  State state = State::Unknown;
  std::optional<ForcingWitness> witness;       // Forced
  std::optional<Countermodel> countermodel;    // NotForced
  std::string note;                            // Unknown: exhausted bound

  bool forced() const { return state == State::Forced; }
  bool not_forced() const { return state == State::NotForced; }
  bool unknown() const { return state == State::Unknown; }
};

std::string to_string(Verdict::State s);

// The clause-directed bounded forcing checker. Throws std::invalid_argument
// when free variables of f escape c or equality is used without the
// signature enabling it.
Verdict force(SiteKind kind, const Condition& c, const Formula& f, const Theory& t,
              const Bounds& b);

// Forward-chaining cover search for positive goals; Forced via a cover
// derivation whose legs all satisfy the goal syntactically, NotForced via a
// fully saturated branch, Unknown on budget exhaustion. Throws on
// non-positive goals.
Verdict saturate_positive(SiteKind kind, const Condition& c, const Formula& goal,
                          const Theory& t, const Bounds& b);

// Direct clause-7 enumeration for universals (no generic-extension shortcut):
// refutation search only, so it returns NotForced or Unknown.
Verdict force_universal_by_enumeration(SiteKind kind, const Condition& c,
                                       const std::string& var, const Formula& body,
                                       const Theory& t, const Bounds& b);

// Monotonicity at the certificate level: rebuilds w along g via the coverage
// stability transform. The result witnesses f.g at dom(g).
ForcingWitness transport_witness(SiteKind kind, const Theory& t, const Condition& c,
                                 const Formula& f, const ForcingWitness& w, const Morphism& g);

// Independent structural re-verification of a witness; never searches.
bool check_witness(SiteKind kind, const Condition& c, const Formula& f, const Theory& t,
                   const ForcingWitness& w);

// Structural re-verification of a saturated-branch countermodel.
bool check_saturated_branch(SiteKind kind, const Condition& c, const Formula& goal,
                            const Theory& t, const SaturatedBranch& b, int term_depth = 1);

// Morphisms f : D -> C where D lies within the bounds' neighborhood of C:
// variable merges (vs) or bounded term images (ts), plus fresh variables and
// additional atoms. Deterministic order; the identity comes first.
std::vector<Morphism> enumerate_neighborhood(const Condition& c, SiteKind kind, const Theory& t,
                                             const Bounds& b);

// Decides whether a positive formula holds syntactically at a condition read
// as a finite partial model (existentials range over the condition's terms
// plus one generic term when the signature provides more).
bool eval_positive(const Condition& c, const Formula& f, const Signature& sig);

}  // namespace coforce

#endif
