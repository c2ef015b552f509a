#ifndef COFORCE_PROOFS_HPP
#define COFORCE_PROOFS_HPP

#include "coforce/forcing.hpp"

namespace coforce {

// A sequent Gamma |-_X phi: hypotheses and conclusion with all free
// variables inside the tracked variable context (sound over empty domains).
struct Sequent {
  std::vector<std::string> vars;  // sorted
  std::vector<Formula> hyps;
  Formula concl;

  static Sequent make(std::vector<std::string> vars, std::vector<Formula> hyps, Formula concl);
};

enum class Rule {
  Assumption,    // index: position in hyps
  TopIntro,
  BotElim,       // premise proves falsum
  AndIntro,      // one premise per conjunct
  AndElim,       // index: projected conjunct
  OrIntro,       // index: injected disjunct
  OrElim,        // premise 0 proves the disjunction, then one per disjunct
  ImpliesIntro,  // index: discharged hypothesis position in the premise
  ImpliesElim,
  ForallIntro,   // eigen: generic variable of the premise context
  ForallElim,    // term: instance
  ExistsIntro,   // term: witness
  ExistsElim,    // eigen: variable added in premise 1
  TheoryAxiom    // index: axiom in the ambient theory
};

std::string to_string(Rule r);

struct ProofTree {
  Rule rule = Rule::TopIntro;
  Sequent conclusion;
  std::vector<ProofTree> premises;
  size_t index = 0;
  std::optional<Term> term;
  std::string eigen;

  size_t size() const;
};

struct ProofCheck {
  bool ok = true;
  const ProofTree* failing = nullptr;
  std::string reason;
};

// Verifies every node locally (rule shape, side conditions, eigenvariable
// freshness, term scoping) and that the root concludes s. On failure the
// first bad node is reported.
ProofCheck check_proof(const ProofTree& p, const Sequent& s, const Theory& t);

// The sequent a condition presents: its atoms as hypotheses (sorted), over
// its variables.
Sequent condition_sequent(const Condition& c, Formula concl);

// Local provability: from per-leg proofs of T,B |-_Y psi.f (legs in sink
// order) build a proof of T,A |-_X psi by structural recursion on the
// derivation (renaming at iso leaves, case distinction and existential
// elimination at axiom steps).
ProofTree local_prov(const Theory& t, const CoverDerivation& d, const Formula& psi,
                     const std::vector<ProofTree>& leg_proofs);

// Proof extraction from a forcing certificate, by induction on the
// generalized geometric grammar. Throws std::invalid_argument on goals
// outside the supported fragment or invalid witnesses.
ProofTree extract_proof(SiteKind kind, const Condition& c, const Formula& goal,
                        const ForcingWitness& w, const Theory& t);

struct ProveResult {
  enum class Status { Proved, Refuted, Unknown };
  Status status = Status::Unknown;
  std::optional<ProofTree> proof;
  std::optional<Verdict> verdict;  // the forcing verdict backing the answer
  std::string note;
};

// Saturation-based prover: build the condition from atomic hypotheses, force
// the goal, extract on success; a NotForced verdict is returned as a
// non-provability certificate.
ProveResult prove(const Sequent& s, const Theory& t, const Bounds& b,
                  SiteKind kind = SiteKind::Ts);

// Rebuilds a proof of the same conclusion over a permuted-or-extended
// hypothesis list (discharge everything, then re-apply assumptions).
ProofTree reestablish(const ProofTree& p, const std::vector<Formula>& target_hyps);

std::string to_string(const Sequent& s);
std::string to_string(const ProofTree& p);

}  // namespace coforce

#endif
