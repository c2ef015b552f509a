#ifndef COFORCE_COVERAGE_HPP
#define COFORCE_COVERAGE_HPP

#include <functional>
#include <memory>

#include "coforce/conditions.hpp"

namespace coforce {

// An instance of a theory axiom at a target condition: a substitution of the
// axiom's universal variables by terms over the target such that the
// instantiated antecedent lies in the target's facts. For the Rn and Vs sites
// the instantiation is restricted to variables.
struct AxiomInstance {
  size_t axiom_index = 0;
  Condition target;
  Subst instantiation;  // axiom vars -> Tm(target.vars)

  bool operator==(const AxiomInstance& o) const = default;
  auto operator<=>(const AxiomInstance& o) const = default;
};

// The condition extended by disjunct i of an instantiated axiom, together
// with the inclusion morphism back to the target and the fresh names chosen
// for the disjunct's bound variables.
Extension instance_extension(const Theory& t, const AxiomInstance& inst, size_t disjunct);

struct Sink {
  Condition cod;
  std::vector<Morphism> legs;  // all with this codomain

  bool operator==(const Sink& o) const = default;
  auto operator<=>(const Sink& o) const = default;
};

// A derivation tree certifying (X;A) <|_T U. Leaves are isomorphisms into the
// node's condition; inner nodes are axiom instances with one child derivation
// per disjunct. The derived sink is the union over i of e_i applied to the
// child sinks.
class CoverDerivation {
 public:
  static CoverDerivation iso_base(Morphism iso);
  // children[i] must be rooted at the i-th disjunct extension of inst.
  static CoverDerivation axiom_step(const Theory& t, AxiomInstance inst,
                                    std::vector<CoverDerivation> children);

  bool is_base() const { return static_cast<bool>(iso_); }
  const Morphism& iso() const { return *iso_; }
  const AxiomInstance& instance() const { return *inst_; }
  const std::vector<CoverDerivation>& children() const { return children_; }
  const std::vector<Morphism>& extensions() const { return extensions_; }

  const Condition& root() const { return root_; }
  Sink sink() const;
  size_t height() const;
  size_t leaf_count() const;

  // Full structural re-check: instances applicable, extensions well formed,
  // leaves isomorphisms, instantiation kind fits the site.
  // Throws std::invalid_argument naming the failure.
  void validate(const Theory& t, SiteKind kind) const;

  bool operator==(const CoverDerivation& o) const;

 private:
  Condition root_;
  std::shared_ptr<const Morphism> iso_;
  std::shared_ptr<const AxiomInstance> inst_;
  std::vector<Morphism> extensions_;
  std::vector<CoverDerivation> children_;
};

// All instances of theory axioms applicable at c, deterministically ordered.
// Instantiation terms are variables of c for Rn/Vs and terms of depth
// <= term_depth for Ts.
std::vector<AxiomInstance> axiom_instances(const Condition& c, const Theory& t, SiteKind kind,
                                           int term_depth = 0);

// All derivations of height <= depth rooted at c, starting from the identity
// iso base; deterministic order, duplicate-free up to sink equality.
std::vector<CoverDerivation> covers(const Condition& c, const Theory& t, SiteKind kind,
                                    int depth, int term_depth = 0);

struct Factorization {
  size_t through;  // index into the refined sink
  Morphism mediator;
};

// True (with one factorization per leg) iff every leg of u factors through
// some leg of v by a mediator of the site's kind.
std::optional<std::vector<Factorization>> refines(const Sink& u, const Sink& v, SiteKind kind);

// Transport of a derivation along an isomorphism f : root(d) -> target, with
// sink f . sink(d).
CoverDerivation transport_iso(const Theory& t, const CoverDerivation& d, const Morphism& f);

// Grafts one derivation onto each leaf of d (indexed left to right); graft[i]
// must be rooted at the domain of leaf i's isomorphism. This is the
// transitivity law at the derivation level.
CoverDerivation graft(const Theory& t, const CoverDerivation& d,
                      const std::vector<CoverDerivation>& grafts);

// The coverage stability transform: a derivation at dom(g) whose pushforward
// along g refines sink(d), built by structural recursion on d.
CoverDerivation pullback_cover(const Theory& t, const CoverDerivation& d, const Morphism& g);

// Common refinement: pull d1 back along every leg of d2 and
// graft.
CoverDerivation common_refinement(const Theory& t, const CoverDerivation& d1,
                                  const CoverDerivation& d2);

// An empty-sink derivation of height <= depth when one exists.
std::optional<CoverDerivation> inconsistent(const Condition& c, const Theory& t, SiteKind kind,
                                            int depth, int term_depth = 0);

std::string to_string(const Sink& s);
// Indented tree rendering, stable across runs.
std::string to_string(const CoverDerivation& d);

}  // namespace coforce

#endif
