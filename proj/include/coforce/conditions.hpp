#ifndef COFORCE_CONDITIONS_HPP
#define COFORCE_CONDITIONS_HPP

#include <optional>

#include "coforce/syntax.hpp"

namespace coforce {

enum class SiteKind { Rn, Vs, Ts };
enum class MorphKind { Renaming, VariableSubst, TermSubst };

std::string to_string(SiteKind k);
std::string to_string(MorphKind k);
std::optional<SiteKind> site_kind_from_string(const std::string& s);

// A forcing condition (X;A): finitely many variables and atomic facts over
// them. Conditions never contain equality atoms. Variables and atoms are kept
// sorted, so equal conditions compare equal structurally.
struct Condition {
  std::vector<std::string> vars;
  std::vector<Atom> atoms;

  // Validates scoping and the no-equality invariant, sorts and dedups.
  static Condition make(std::vector<std::string> vars, std::vector<Atom> atoms);

  bool has_var(const std::string& v) const;
  bool has_atom(const Atom& a) const;
  std::set<std::string> var_set() const;

  bool operator==(const Condition& o) const = default;
  auto operator<=>(const Condition& o) const = default;
};

// f : (Y;B) -> (X;A) is a substitution X -> Tm(Y) with A.f contained in B.
// The kind is computed from the substitution, never declared, so one value
// serves all three sites.
struct Morphism {
  Condition dom;  // (Y;B)
  Condition cod;  // (X;A)
  Subst subst;    // keys exactly cod.vars, values over dom.vars
  MorphKind kind = MorphKind::Renaming;

  // Throws std::invalid_argument on totality, scoping or fact-preservation
  // violations.
  static Morphism make(Condition dom, Condition cod, Subst subst);

  bool valid_in(SiteKind k) const;
  Atom apply_atom(const Atom& a) const { return apply_subst(a, subst); }
  Term apply_term(const Term& t) const { return apply_subst(t, subst); }

  bool operator==(const Morphism& o) const = default;
  auto operator<=>(const Morphism& o) const = default;
};

Morphism identity(const Condition& c);

// compose(g, f) with dom(g) == cod(f) is the usual composite g . f; the kind
// is recomputed from the composite substitution.
Morphism compose(const Morphism& g, const Morphism& f);

// True iff the substitution is a bijective renaming matching the fact sets;
// returns the inverse when so.
std::optional<Morphism> is_iso(const Morphism& m);

struct PullbackResult {
  Condition apex;
  Morphism to_f_dom;  // apex -> dom(f)
  Morphism to_g_dom;  // apex -> dom(g)
};

// Pullback of a cospan of variable substitutions, computed as the pushout of
// the underlying variable spans with fact set B.i u C.j. Apex variable names
// are left-biased with numeric suffixing. Throws if an input is not Vs.
PullbackResult pullback_vs(const Morphism& f, const Morphism& g);

struct ProductResult {
  Condition apex;
  Morphism proj1;
  Morphism proj2;
};

// Binary product in the term-substitution site: variables renamed apart,
// facts unioned.
ProductResult product_ts(const Condition& c1, const Condition& c2);

struct Extension {
  Condition extended;
  Morphism incl;  // extended -> base, identity on the base variables
  // base-requested name -> actual fresh name after renaming apart
  std::map<std::string, std::string> var_names;
};

// (X;A) extended by new variables and atoms; renaming apart is automatic and
// deterministic.
Extension fresh_extension(const Condition& c, const std::vector<std::string>& new_vars,
                          const std::vector<Atom>& new_atoms);

// Machine-checked certificates for the failure of equalizers in the term and
// renaming sites, plus the variable-substitution equalizer that does exist.
struct EqualizerCounterexamples {
  // ts side: [x:=0],[x:=1] : (;) => (x;) over constants 0,1
  Morphism ts_f, ts_g;
  bool ts_no_cone = false;          // no cone over the pair at all
  size_t ts_candidates_checked = 0; // enumerated candidate cones

  // rn side: [x:=y],[x:=z] : (y,z;) => (x;)
  Morphism rn_f, rn_g;
  Morphism vs_equalizing;            // [y:=w,z:=w] : (w;) -> (y,z;)
  bool vs_equalizes = false;
  bool vs_is_limit = false;          // universal among vs cones (enumerated)
  bool rn_no_cone = false;           // no injective cone equalizes
  size_t rn_candidates_checked = 0;

  bool validated() const { return ts_no_cone && vs_equalizes && vs_is_limit && rn_no_cone; }
};

EqualizerCounterexamples equalizer_counterexamples();

// Deterministic enumeration helpers shared by tests and the forcing search.

// All terms over the given variables with depth <= max_depth, ordered by
// depth then structurally.
std::vector<Term> enumerate_terms(const Signature& sig, const std::vector<std::string>& vars,
                                  int max_depth);

// All substitutions dom_vars -> candidates, in odometer order.
std::vector<Subst> enumerate_substs(const std::vector<std::string>& dom_vars,
                                    const std::vector<Term>& candidates);

// All conditions over the signature with vars drawn from a fixed pool
// (v_pool[0..max_vars)) and at most max_atoms predicate atoms.
std::vector<Condition> enumerate_conditions(const Signature& sig, int max_vars, int max_atoms,
                                            const std::vector<std::string>& var_pool);

// All morphisms (Y;B) -> (X;A) between two fixed conditions whose images are
// variables (Rn or Vs members according to the filter).
std::vector<Morphism> enumerate_var_morphisms(const Condition& from, const Condition& to,
                                              SiteKind kind);

std::string to_string(const Condition& c);
std::string to_string(const Morphism& m);
std::string to_string(const Subst& s);

}  // namespace coforce

#endif
