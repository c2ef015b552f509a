#ifndef COFORCE_SYNTAX_HPP
#define COFORCE_SYNTAX_HPP

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace coforce {

// First-order terms over string-named variables. A term is either a variable
// or an application of a function symbol (constants are 0-ary applications).
class Term {
 public:
  static Term var(std::string name);
  static Term app(std::string fn, std::vector<Term> args = {});

  bool is_var() const { return is_var_; }
  const std::string& head() const { return head_; }
  const std::vector<Term>& args() const { return args_; }

  // Variables have depth 0, applications 1 + max over arguments.
  int depth() const;
  void collect_vars(std::set<std::string>& out) const;
  std::set<std::string> vars() const;
  bool contains_var(const std::string& v) const;

  bool operator==(const Term& o) const;
  std::strong_ordering operator<=>(const Term& o) const;

 private:
  bool is_var_ = true;
  std::string head_;
  std::vector<Term> args_;
};

using Subst = std::map<std::string, Term>;

// Applies s to t; variables missing from s are left in place.
Term apply_subst(const Term& t, const Subst& s);
// Diagram-order composition: apply_subst(t, compose(f, g)) == apply_subst(apply_subst(t, f), g).
Subst compose_subst(const Subst& f, const Subst& g);

struct Atom {
  std::string pred;  // "=" is the distinguished equality predicate
  std::vector<Term> args;

  bool is_equality() const { return pred == "="; }
  void collect_vars(std::set<std::string>& out) const;
  std::set<std::string> vars() const;

  bool operator==(const Atom& o) const = default;
  auto operator<=>(const Atom& o) const = default;
};

Atom apply_subst(const Atom& a, const Subst& s);
Atom eq_atom(Term lhs, Term rhs);

struct Signature {
  std::vector<std::pair<std::string, int>> functions;
  std::vector<std::pair<std::string, int>> predicates;
  bool with_equality = false;

  bool is_relational() const { return functions.empty(); }
  std::optional<int> function_arity(const std::string& name) const;
  std::optional<int> predicate_arity(const std::string& name) const;
  // Throws std::invalid_argument on duplicate names or a user-declared "=".
  void validate() const;
  // Arity and symbol checks for terms/atoms over this signature.
  bool term_ok(const Term& t) const;
  bool atom_ok(const Atom& a) const;
};

// Formulas with finite conjunctions/disjunctions and single-variable binders.
// Handles are immutable and cheap to copy.
class Formula {
 public:
  enum class Kind { Atom, Top, Bot, And, Or, Implies, Forall, Exists };

  Formula();  // Top
  static Formula atom(Atom a);
  static Formula top();
  static Formula bot();
  // conj({}) is Top, disj({}) is Bot, singletons collapse to their element.
  static Formula conj(std::vector<Formula> fs);
  static Formula disj(std::vector<Formula> fs);
  static Formula implies(Formula lhs, Formula rhs);
  static Formula forall(std::string v, Formula body);
  static Formula exists(std::string v, Formula body);

  Kind kind() const;
  const Atom& atom_ref() const;
  const std::vector<Formula>& parts() const;  // And/Or members
  const Formula& lhs() const;                 // Implies
  const Formula& rhs() const;
  const std::string& binder() const;  // Forall/Exists
  const Formula& body() const;

  bool is_atomic() const;    // Atom, Top or Bot
  bool is_positive() const;  // built from atoms, Top, Bot, And, Or, Exists

  bool operator==(const Formula& o) const;  // alpha-equivalence
  bool identical(const Formula& o) const;   // strict structural equality

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

std::set<std::string> free_vars(const Formula& f);

// Capture-avoiding simultaneous substitution. Throws std::invalid_argument
// if s is not total on free_vars(f). Bound variables are renamed with
// deterministic numeric suffixes when they would capture range variables.
Formula substitute(const Formula& f, const Subst& s);

// One existential disjunct of a coherent axiom: exists fresh_vars. /\ atoms.
struct Disjunct {
  std::vector<std::string> fresh_vars;
  std::vector<Atom> atoms;
  bool operator==(const Disjunct& o) const = default;
};

// forall vars. (/\ antecedent -> \/_i disjuncts[i]); an empty disjunct list
// encodes -> falsum.
struct CoherentAxiom {
  std::vector<std::string> vars;
  std::vector<Atom> antecedent;
  std::vector<Disjunct> disjuncts;

  // Throws std::invalid_argument if variable scoping or the signature is
  // violated (antecedent over vars, disjunct atoms over vars + fresh).
  void validate(const Signature& sig) const;
  bool operator==(const CoherentAxiom& o) const = default;
};

Formula axiom_antecedent_formula(const CoherentAxiom& ax);
Formula axiom_consequent_formula(const CoherentAxiom& ax);
// The universal closure as a Formula value.
Formula axiom_to_formula(const CoherentAxiom& ax);
// Same content with the antecedent curried into atomic implications, which
// lands inside the generalized geometric grammar.
Formula axiom_to_generalized_geometric(const CoherentAxiom& ax);

struct Theory {
  Signature sig;
  std::vector<CoherentAxiom> axioms;

  void validate() const;
};

struct CoherentNormalizeError : std::runtime_error {
  Formula offender;
  CoherentNormalizeError(std::string msg, Formula off)
      : std::runtime_error(std::move(msg)), offender(std::move(off)) {}
};

// Normalizes a coherent implication (forall-prefix over positive -> positive;
// a bare positive sentence is read with antecedent Top) into axioms whose
// conjunction is intuitionistically equivalent to the input. Throws
// CoherentNormalizeError with the offending subformula otherwise.
std::vector<CoherentAxiom> normalize_coherent(const Formula& sentence);

struct GeneralizedGeometricCheck {
  bool ok = true;
  std::optional<Formula> offender;  // first violating subformula
};

GeneralizedGeometricCheck is_generalized_geometric(const Formula& f);

// First name of base, base1, base2, ... not present in used.
std::string fresh_name(const std::string& base, const std::set<std::string>& used);

std::string to_string(const Term& t);
std::string to_string(const Atom& a);
std::string to_string(const Formula& f);
std::string to_string(const CoherentAxiom& ax);

}  // namespace coforce

#endif
