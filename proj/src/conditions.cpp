#include "coforce/conditions.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>

namespace coforce {

std::string to_string(SiteKind k) {
  switch (k) {
    case SiteKind::Rn: return "rn";
    case SiteKind::Vs: return "vs";
    case SiteKind::Ts: return "ts";
  }
  return "?";
}

std::string to_string(MorphKind k) {
  switch (k) {
    case MorphKind::Renaming: return "renaming";
    case MorphKind::VariableSubst: return "variable";
    case MorphKind::TermSubst: return "term";
  }
  return "?";
}

std::optional<SiteKind> site_kind_from_string(const std::string& s) {
  if (s == "rn") return SiteKind::Rn;
  if (s == "vs") return SiteKind::Vs;
  if (s == "ts") return SiteKind::Ts;
  return std::nullopt;
}

Condition Condition::make(std::vector<std::string> vars, std::vector<Atom> atoms) {
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  std::set<std::string> vs(vars.begin(), vars.end());
  for (const auto& a : atoms) {
    if (a.is_equality())
      throw std::invalid_argument("conditions do not allow equality facts: " + to_string(a));
    for (const auto& v : a.vars())
      if (!vs.count(v))
        throw std::invalid_argument("atom " + to_string(a) + " uses variable " + v +
                                    " outside the condition");
  }
  Condition c;
  c.vars = std::move(vars);
  c.atoms = std::move(atoms);
  return c;
}

bool Condition::has_var(const std::string& v) const {
  return std::binary_search(vars.begin(), vars.end(), v);
}

bool Condition::has_atom(const Atom& a) const {
  return std::binary_search(atoms.begin(), atoms.end(), a);
}

std::set<std::string> Condition::var_set() const {
  return std::set<std::string>(vars.begin(), vars.end());
}

namespace {
MorphKind compute_kind(const Condition& dom, const Subst& s) {
  bool all_vars = true;
  for (const auto& [v, t] : s)
    if (!t.is_var()) {
      all_vars = false;
      break;
    }
  if (!all_vars) return MorphKind::TermSubst;
  std::set<std::string> image;
  bool injective = true;
  for (const auto& [v, t] : s)
    if (!image.insert(t.head()).second) injective = false;
  (void)dom;
  return injective ? MorphKind::Renaming : MorphKind::VariableSubst;
}
}  // namespace

Morphism Morphism::make(Condition dom, Condition cod, Subst subst) {
  for (const auto& x : cod.vars)
    if (!subst.count(x))
      throw std::invalid_argument("substitution misses codomain variable " + x);
  for (const auto& [x, t] : subst) {
    if (!cod.has_var(x))
      throw std::invalid_argument("substitution maps " + x + " outside the codomain");
    for (const auto& v : t.vars())
      if (!dom.has_var(v))
        throw std::invalid_argument("image term " + to_string(t) + " uses variable " + v +
                                    " outside the domain");
  }
  for (const auto& a : cod.atoms) {
    Atom img = apply_subst(a, subst);
    if (!dom.has_atom(img))
      throw std::invalid_argument("fact not preserved: " + to_string(a) + " maps to " +
                                  to_string(img) + " missing from the domain");
  }
  Morphism m;
  m.kind = compute_kind(dom, subst);
  m.dom = std::move(dom);
  m.cod = std::move(cod);
  m.subst = std::move(subst);
  return m;
}

bool Morphism::valid_in(SiteKind k) const {
  switch (k) {
    case SiteKind::Rn: return kind == MorphKind::Renaming;
    case SiteKind::Vs: return kind != MorphKind::TermSubst;
    case SiteKind::Ts: return true;
  }
  return false;
}

Morphism identity(const Condition& c) {
  Subst s;
  for (const auto& v : c.vars) s.emplace(v, Term::var(v));
  return Morphism::make(c, c, std::move(s));
}

Morphism compose(const Morphism& g, const Morphism& f) {
  if (f.cod != g.dom)
    throw std::invalid_argument("compose: dom(g) != cod(f)");
  Subst s;
  for (const auto& [x, t] : g.subst) s.emplace(x, apply_subst(t, f.subst));
  return Morphism::make(f.dom, g.cod, std::move(s));
}

std::optional<Morphism> is_iso(const Morphism& m) {
  // Bijective variable renaming with matching fact sets.
  if (m.kind != MorphKind::Renaming) return std::nullopt;
  if (m.dom.vars.size() != m.cod.vars.size()) return std::nullopt;
  Subst inv;
  for (const auto& [x, t] : m.subst) inv.emplace(t.head(), Term::var(x));
  if (inv.size() != m.dom.vars.size()) return std::nullopt;
  for (const auto& a : m.dom.atoms) {
    Atom back = apply_subst(a, inv);
    if (!m.cod.has_atom(back)) return std::nullopt;
  }
  return Morphism::make(m.cod, m.dom, std::move(inv));
}

PullbackResult pullback_vs(const Morphism& f, const Morphism& g) {
  if (f.kind == MorphKind::TermSubst || g.kind == MorphKind::TermSubst)
    throw std::invalid_argument("pullback_vs needs variable substitutions");
  if (f.cod != g.cod) throw std::invalid_argument("pullback_vs: cospan codomains differ");

  const Condition& Y = f.dom;
  const Condition& Z = g.dom;

  // Pushout of variable sets: tagged union of Y and Z with f(x) ~ g(x).
  // Tags: 0 = from Y, 1 = from Z.
  std::vector<std::pair<int, std::string>> elems;
  for (const auto& y : Y.vars) elems.emplace_back(0, y);
  for (const auto& z : Z.vars) elems.emplace_back(1, z);
  std::map<std::pair<int, std::string>, size_t> index;
  for (size_t i = 0; i < elems.size(); ++i) index[elems[i]] = i;

  std::vector<size_t> parent(elems.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  auto unite = [&](size_t a, size_t b) { parent[find(a)] = find(b); };
  for (const auto& x : f.cod.vars)
    unite(index.at({0, f.subst.at(x).head()}), index.at({1, g.subst.at(x).head()}));

  // Canonical class names: lexicographically least Y member when one exists,
  // else least Z member; numeric suffixing on clashes across classes.
  std::map<size_t, std::vector<std::pair<int, std::string>>> classes;
  for (size_t i = 0; i < elems.size(); ++i) classes[find(i)].push_back(elems[i]);
  std::vector<std::vector<std::pair<int, std::string>>> ordered;
  for (auto& [root, members] : classes) {
    std::sort(members.begin(), members.end());
    ordered.push_back(members);
  }
  std::sort(ordered.begin(), ordered.end());

  std::set<std::string> used;
  std::map<std::pair<int, std::string>, std::string> name_of;
  std::vector<std::string> wvars;
  for (const auto& members : ordered) {
    std::string name = fresh_name(members.front().second, used);
    used.insert(name);
    wvars.push_back(name);
    for (const auto& m : members) name_of[m] = name;
  }

  Subst i_sub, j_sub;
  for (const auto& y : Y.vars) i_sub.emplace(y, Term::var(name_of.at({0, y})));
  for (const auto& z : Z.vars) j_sub.emplace(z, Term::var(name_of.at({1, z})));

  std::vector<Atom> datoms;
  for (const auto& a : Y.atoms) datoms.push_back(apply_subst(a, i_sub));
  for (const auto& a : Z.atoms) datoms.push_back(apply_subst(a, j_sub));

  Condition apex = Condition::make(std::move(wvars), std::move(datoms));
  PullbackResult out{apex, Morphism::make(apex, Y, std::move(i_sub)),
                     Morphism::make(apex, Z, std::move(j_sub))};
  return out;
}

ProductResult product_ts(const Condition& c1, const Condition& c2) {
  std::set<std::string> used(c1.vars.begin(), c1.vars.end());
  Subst ren;
  std::vector<std::string> wvars = c1.vars;
  for (const auto& v : c2.vars) {
    std::string nv = fresh_name(v, used);
    used.insert(nv);
    ren.emplace(v, Term::var(nv));
    wvars.push_back(nv);
  }
  std::vector<Atom> atoms = c1.atoms;
  for (const auto& a : c2.atoms) atoms.push_back(apply_subst(a, ren));
  Condition apex = Condition::make(std::move(wvars), std::move(atoms));

  Subst p1;
  for (const auto& v : c1.vars) p1.emplace(v, Term::var(v));
  ProductResult out{apex, Morphism::make(apex, c1, std::move(p1)),
                    Morphism::make(apex, c2, std::move(ren))};
  return out;
}

Extension fresh_extension(const Condition& c, const std::vector<std::string>& new_vars,
                          const std::vector<Atom>& new_atoms) {
  std::set<std::string> used(c.vars.begin(), c.vars.end());
  Subst ren;
  std::map<std::string, std::string> names;
  std::vector<std::string> vars = c.vars;
  for (const auto& v : new_vars) {
    std::string nv = fresh_name(v, used);
    used.insert(nv);
    names[v] = nv;
    ren.emplace(v, Term::var(nv));
    vars.push_back(nv);
  }
  std::vector<Atom> atoms = c.atoms;
  for (const auto& a : new_atoms) atoms.push_back(apply_subst(a, ren));
  Condition ext = Condition::make(std::move(vars), std::move(atoms));

  Subst incl;
  for (const auto& v : c.vars) incl.emplace(v, Term::var(v));
  Extension out{ext, Morphism::make(ext, c, std::move(incl)), std::move(names)};
  return out;
}

EqualizerCounterexamples equalizer_counterexamples() {
  EqualizerCounterexamples out;

  // Term-substitution side, over a signature with constants 0 and 1.
  Condition pt = Condition::make({}, {});
  Condition x1 = Condition::make({"x"}, {});
  out.ts_f = Morphism::make(pt, x1, {{"x", Term::app("0")}});
  out.ts_g = Morphism::make(pt, x1, {{"x", Term::app("1")}});
  // A cone is any W with h : W -> (;) such that ts_f.h = ts_g.h. The two
  // composites send x to the constants 0 and 1 regardless of h, so no cone
  // exists; we still sweep small candidates for the record.
  out.ts_no_cone = true;
  std::vector<Condition> candidates = {pt, Condition::make({"w"}, {}),
                                       Condition::make({"w1", "w2"}, {})};
  for (const auto& W : candidates) {
    Morphism h = Morphism::make(W, pt, {});
    Morphism l = compose(out.ts_f, h);
    Morphism r = compose(out.ts_g, h);
    ++out.ts_candidates_checked;
    if (l.subst == r.subst) out.ts_no_cone = false;
  }

  // Renaming side: [x:=y],[x:=z] : (y,z;) => (x;).
  Condition yz = Condition::make({"y", "z"}, {});
  out.rn_f = Morphism::make(yz, x1, {{"x", Term::var("y")}});
  out.rn_g = Morphism::make(yz, x1, {{"x", Term::var("z")}});

  Condition w = Condition::make({"w"}, {});
  out.vs_equalizing = Morphism::make(w, yz, {{"y", Term::var("w")}, {"z", Term::var("w")}});
  out.vs_equalizes =
      compose(out.rn_f, out.vs_equalizing).subst == compose(out.rn_g, out.vs_equalizing).subst;

  // Universality among vs cones with up to three variables: any equalizing
  // h : W -> (y,z;) must identify y and z, and then factors uniquely through
  // [y:=w,z:=w] by w :-> h(y).
  out.vs_is_limit = true;
  out.rn_no_cone = true;
  std::vector<std::string> pool = {"a", "b", "c"};
  for (int nv = 0; nv <= 3; ++nv) {
    std::vector<std::string> wv(pool.begin(), pool.begin() + nv);
    Condition W = Condition::make(wv, {});
    for (const auto& hy : wv)
      for (const auto& hz : wv) {
        Morphism h = Morphism::make(W, yz, {{"y", Term::var(hy)}, {"z", Term::var(hz)}});
        bool equalizes = compose(out.rn_f, h).subst == compose(out.rn_g, h).subst;
        ++out.rn_candidates_checked;
        if (h.kind == MorphKind::Renaming && equalizes) out.rn_no_cone = false;
        if (equalizes) {
          // unique vs factorization through the equalizing cone
          Morphism k = Morphism::make(W, w, {{"w", Term::var(hy)}});
          if (!(compose(out.vs_equalizing, k).subst == h.subst)) out.vs_is_limit = false;
          size_t factorizations = 0;
          for (const auto& img : wv)
            if (compose(out.vs_equalizing, Morphism::make(W, w, {{"w", Term::var(img)}})).subst ==
                h.subst)
              ++factorizations;
          if (factorizations != 1) out.vs_is_limit = false;
        }
      }
  }
  return out;
}

std::vector<Term> enumerate_terms(const Signature& sig, const std::vector<std::string>& vars,
                                  int max_depth) {
  std::vector<Term> out;
  for (const auto& v : vars) out.push_back(Term::var(v));
  std::vector<Term> prev = out;  // terms of depth <= d
  for (int d = 1; d <= max_depth; ++d) {
    std::vector<Term> next;
    for (const auto& [fn, k] : sig.functions) {
      if (k == 0) {
        if (d == 1) next.push_back(Term::app(fn));
        continue;
      }
      // argument tuples over terms of depth < d, at least one of depth d-1
      std::vector<size_t> idx(static_cast<size_t>(k), 0);
      if (prev.empty()) continue;
      while (true) {
        int maxd = 0;
        std::vector<Term> args;
        for (size_t i = 0; i < idx.size(); ++i) {
          args.push_back(prev[idx[i]]);
          maxd = std::max(maxd, prev[idx[i]].depth());
        }
        if (maxd == d - 1) next.push_back(Term::app(fn, args));
        size_t i = 0;
        for (; i < idx.size(); ++i) {
          if (++idx[i] < prev.size()) break;
          idx[i] = 0;
        }
        if (i == idx.size()) break;
      }
    }
    std::sort(next.begin(), next.end());
    out.insert(out.end(), next.begin(), next.end());
    prev.insert(prev.end(), next.begin(), next.end());
  }
  return out;
}

std::vector<Subst> enumerate_substs(const std::vector<std::string>& dom_vars,
                                    const std::vector<Term>& candidates) {
  std::vector<Subst> out;
  if (dom_vars.empty()) {
    out.push_back({});
    return out;
  }
  if (candidates.empty()) return out;
  std::vector<size_t> idx(dom_vars.size(), 0);
  while (true) {
    Subst s;
    for (size_t i = 0; i < dom_vars.size(); ++i) s.emplace(dom_vars[i], candidates[idx[i]]);
    out.push_back(std::move(s));
    size_t i = 0;
    for (; i < idx.size(); ++i) {
      if (++idx[i] < candidates.size()) break;
      idx[i] = 0;
    }
    if (i == idx.size()) break;
  }
  return out;
}

std::vector<Condition> enumerate_conditions(const Signature& sig, int max_vars, int max_atoms,
                                            const std::vector<std::string>& var_pool) {
  std::vector<Condition> out;
  for (int nv = 0; nv <= max_vars && nv <= static_cast<int>(var_pool.size()); ++nv) {
    std::vector<std::string> vars(var_pool.begin(), var_pool.begin() + nv);
    // all predicate atoms over these variables (relational enumeration)
    std::vector<Atom> cand;
    std::vector<Term> var_terms;
    for (const auto& v : vars) var_terms.push_back(Term::var(v));
    for (const auto& pk : sig.predicates) {
      const std::string& p = pk.first;
      int k = pk.second;
      std::vector<std::string> slots;
      for (int i = 0; i < k; ++i) slots.push_back("#" + std::to_string(i));
      for (const auto& s : enumerate_substs(slots, var_terms)) {
        Atom a;
        a.pred = p;
        for (int i = 0; i < k; ++i) a.args.push_back(s.at("#" + std::to_string(i)));
        cand.push_back(std::move(a));
      }
    }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    // subsets of size <= max_atoms, in mask order
    size_t n = cand.size();
    if (n > 20) throw std::invalid_argument("condition enumeration space too large");
    for (size_t mask = 0; mask < (size_t{1} << n); ++mask) {
      if (std::popcount(mask) > max_atoms) continue;
      std::vector<Atom> atoms;
      for (size_t i = 0; i < n; ++i)
        if (mask & (size_t{1} << i)) atoms.push_back(cand[i]);
      out.push_back(Condition::make(vars, std::move(atoms)));
    }
  }
  return out;
}

std::vector<Morphism> enumerate_var_morphisms(const Condition& from, const Condition& to,
                                              SiteKind kind) {
  std::vector<Morphism> out;
  std::vector<Term> cands;
  for (const auto& v : from.vars) cands.push_back(Term::var(v));
  for (auto& s : enumerate_substs(to.vars, cands)) {
    bool ok = true;
    for (const auto& a : to.atoms)
      if (!from.has_atom(apply_subst(a, s))) {
        ok = false;
        break;
      }
    if (!ok) continue;
    Morphism m = Morphism::make(from, to, std::move(s));
    if (m.valid_in(kind)) out.push_back(std::move(m));
  }
  return out;
}

std::string to_string(const Condition& c) {
  std::string out;
  for (size_t i = 0; i < c.vars.size(); ++i) {
    if (i) out += ",";
    out += c.vars[i];
  }
  out += " : ";
  for (size_t i = 0; i < c.atoms.size(); ++i) {
    if (i) out += ", ";
    out += to_string(c.atoms[i]);
  }
  return "(" + out + ")";
}

std::string to_string(const Subst& s) {
  std::string out = "[";
  bool first = true;
  for (const auto& [v, t] : s) {
    if (!first) out += ", ";
    first = false;
    out += v + ":=" + to_string(t);
  }
  return out + "]";
}

std::string to_string(const Morphism& m) {
  return to_string(m.subst) + " : " + to_string(m.dom) + " -> " + to_string(m.cod);
}

}  // namespace coforce
