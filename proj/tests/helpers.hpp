#ifndef COFORCE_TESTS_HELPERS_HPP
#define COFORCE_TESTS_HELPERS_HPP

#include <random>

#include "coforce/forcing.hpp"
#include "coforce/parser.hpp"

namespace coforce::testing {

inline Signature relational_sig() {
  Signature sig;
  sig.predicates = {{"P", 1}, {"Q", 2}};
  return sig;
}

inline Signature functional_sig() {
  Signature sig;
  sig.predicates = {{"P", 1}};
  sig.functions = {{"c", 0}, {"f", 1}};
  return sig;
}

inline Theory split_theory() {
  ParseResult pr = parse_theory(
      "pred P/1\npred Q/2\npred R/2\n"
      "axiom forall x z. P(x) => Q(x,z) | R(x,z)\n");
  return pr.file->theory;
}

// Random term over the given variables; depth shrinks to 0 quickly.
// Requires at least one variable or constant to exist.
inline Term random_term(std::mt19937& rng, const Signature& sig,
                        const std::vector<std::string>& vars, int depth) {
  std::uniform_int_distribution<int> coin(0, 1);
  if (depth <= 0 || sig.functions.empty() || (coin(rng) == 0 && !vars.empty())) {
    if (vars.empty()) {
      for (const auto& [f, k] : sig.functions)
        if (k == 0) return Term::app(f);
      throw std::invalid_argument("random_term: no variables and no constants");
    }
    std::uniform_int_distribution<size_t> pick(0, vars.size() - 1);
    return Term::var(vars[pick(rng)]);
  }
  std::uniform_int_distribution<size_t> pick(0, sig.functions.size() - 1);
  auto [f, k] = sig.functions[pick(rng)];
  std::vector<Term> args;
  for (int i = 0; i < k; ++i) args.push_back(random_term(rng, sig, vars, depth - 1));
  return Term::app(f, std::move(args));
}

inline Atom random_atom(std::mt19937& rng, const Signature& sig,
                        const std::vector<std::string>& vars, int term_depth = 0) {
  if (sig.predicates.empty()) throw std::invalid_argument("random_atom: no predicates");
  std::uniform_int_distribution<size_t> pick(0, sig.predicates.size() - 1);
  auto [p, k] = sig.predicates[pick(rng)];
  Atom a;
  a.pred = p;
  for (int i = 0; i < k; ++i) a.args.push_back(random_term(rng, sig, vars, term_depth));
  return a;
}

inline Condition random_condition(std::mt19937& rng, const Signature& sig, int max_vars,
                                  int max_atoms) {
  static const std::vector<std::string> pool = {"x", "y", "z", "u", "v"};
  std::uniform_int_distribution<int> nv(0, max_vars);
  int n = nv(rng);
  std::vector<std::string> vars(pool.begin(), pool.begin() + n);
  std::vector<Atom> atoms;
  if (n > 0 && !sig.predicates.empty()) {
    std::uniform_int_distribution<int> na(0, max_atoms);
    int m = na(rng);
    for (int i = 0; i < m; ++i) atoms.push_back(random_atom(rng, sig, vars));
  }
  return Condition::make(std::move(vars), std::move(atoms));
}

// Random positive formula over the variables.
inline Formula random_positive(std::mt19937& rng, const Signature& sig,
                               std::vector<std::string> vars, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 5);
  switch (pick(rng)) {
    case 0:
      if (!vars.empty() || !sig.functions.empty())
        return Formula::atom(random_atom(rng, sig, vars));
      return Formula::top();
    case 1:
      return rng() % 4 == 0 ? Formula::bot() : Formula::top();
    case 2:
      return Formula::conj({random_positive(rng, sig, vars, depth - 1),
                            random_positive(rng, sig, vars, depth - 1)});
    case 3:
      return Formula::disj({random_positive(rng, sig, vars, depth - 1),
                            random_positive(rng, sig, vars, depth - 1)});
    default: {
      std::string v = fresh_name("w", std::set<std::string>(vars.begin(), vars.end()));
      auto inner = vars;
      inner.push_back(v);
      return Formula::exists(v, random_positive(rng, sig, inner, depth - 1));
    }
  }
}

// Random morphism into `cod` (variable substitutions only), if any exists.
inline std::optional<Morphism> random_var_morphism_into(std::mt19937& rng, const Signature& sig,
                                                        const Condition& cod, SiteKind kind,
                                                        int max_vars, int max_atoms) {
  for (int attempt = 0; attempt < 20; ++attempt) {
    Condition dom = random_condition(rng, sig, max_vars, max_atoms);
    // make sure the image facts can live in dom: extend dom by the images of
    // a random substitution
    if (cod.vars.empty()) {
      std::vector<Atom> atoms = dom.atoms;
      return Morphism::make(Condition::make(dom.vars, atoms), cod, {});
    }
    if (dom.vars.empty()) continue;
    std::vector<Term> cands;
    for (const auto& v : dom.vars) cands.push_back(Term::var(v));
    auto all = enumerate_substs(cod.vars, cands);
    std::shuffle(all.begin(), all.end(), rng);
    for (auto& s : all) {
      std::vector<Atom> atoms = dom.atoms;
      for (const auto& a : cod.atoms) atoms.push_back(apply_subst(a, s));
      Condition dom2 = Condition::make(dom.vars, std::move(atoms));
      Morphism m = Morphism::make(dom2, cod, s);
      if (m.valid_in(kind)) return m;
    }
  }
  return std::nullopt;
}

}  // namespace coforce::testing

#endif
