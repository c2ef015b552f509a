#include "coforce/coverage.hpp"

#include <algorithm>
#include <sstream>

namespace coforce {

Extension instance_extension(const Theory& t, const AxiomInstance& inst, size_t disjunct) {
  const CoherentAxiom& ax = t.axioms.at(inst.axiom_index);
  const Disjunct& d = ax.disjuncts.at(disjunct);
  std::vector<Atom> atoms;
  for (const auto& a : d.atoms) atoms.push_back(apply_subst(a, inst.instantiation));
  // Fresh variables of the disjunct are untouched by the instantiation (they
  // are disjoint from the axiom's universals); fresh_extension renames them
  // apart from the target.
  return fresh_extension(inst.target, d.fresh_vars, atoms);
}

CoverDerivation CoverDerivation::iso_base(Morphism iso) {
  if (!is_iso(iso)) throw std::invalid_argument("iso_base: morphism is not an isomorphism");
  CoverDerivation d;
  d.root_ = iso.cod;
  d.iso_ = std::make_shared<const Morphism>(std::move(iso));
  return d;
}

CoverDerivation CoverDerivation::axiom_step(const Theory& t, AxiomInstance inst,
                                            std::vector<CoverDerivation> children) {
  const CoherentAxiom& ax = t.axioms.at(inst.axiom_index);
  if (children.size() != ax.disjuncts.size())
    throw std::invalid_argument("axiom_step: one child derivation per disjunct required");
  CoverDerivation d;
  d.root_ = inst.target;
  for (size_t i = 0; i < children.size(); ++i) {
    Extension ext = instance_extension(t, inst, i);
    if (children[i].root() != ext.extended)
      throw std::invalid_argument("axiom_step: child " + std::to_string(i) +
                                  " not rooted at the disjunct extension");
    d.extensions_.push_back(ext.incl);
  }
  d.inst_ = std::make_shared<const AxiomInstance>(std::move(inst));
  d.children_ = std::move(children);
  return d;
}

Sink CoverDerivation::sink() const {
  Sink s;
  s.cod = root_;
  if (is_base()) {
    s.legs.push_back(*iso_);
    return s;
  }
  for (size_t i = 0; i < children_.size(); ++i) {
    Sink sub = children_[i].sink();
    for (const auto& f : sub.legs) s.legs.push_back(compose(extensions_[i], f));
  }
  std::sort(s.legs.begin(), s.legs.end());
  return s;
}

size_t CoverDerivation::height() const {
  if (is_base()) return 0;
  size_t h = 0;
  for (const auto& c : children_) h = std::max(h, c.height());
  return h + 1;
}

size_t CoverDerivation::leaf_count() const {
  if (is_base()) return 1;
  size_t n = 0;
  for (const auto& c : children_) n += c.leaf_count();
  return n;
}

void CoverDerivation::validate(const Theory& t, SiteKind kind) const {
  if (is_base()) {
    if (iso_->cod != root_) throw std::invalid_argument("iso base codomain mismatch");
    if (!is_iso(*iso_)) throw std::invalid_argument("iso base is not an isomorphism");
    return;
  }
  const AxiomInstance& inst = *inst_;
  if (inst.target != root_) throw std::invalid_argument("instance target mismatch");
  const CoherentAxiom& ax = t.axioms.at(inst.axiom_index);
  for (const auto& v : ax.vars) {
    auto it = inst.instantiation.find(v);
    if (it == inst.instantiation.end())
      throw std::invalid_argument("instantiation misses axiom variable " + v);
    if (kind != SiteKind::Ts && !it->second.is_var())
      throw std::invalid_argument("non-variable instantiation in a variable site");
    for (const auto& w : it->second.vars())
      if (!root_.has_var(w))
        throw std::invalid_argument("instantiation escapes the target condition");
  }
  for (const auto& a : ax.antecedent)
    if (!root_.has_atom(apply_subst(a, inst.instantiation)))
      throw std::invalid_argument("instantiated antecedent not contained in the facts");
  if (children_.size() != ax.disjuncts.size())
    throw std::invalid_argument("wrong number of disjunct children");
  for (size_t i = 0; i < children_.size(); ++i) {
    Extension ext = instance_extension(t, inst, i);
    if (children_[i].root() != ext.extended)
      throw std::invalid_argument("child root is not the disjunct extension");
    if (!(extensions_[i] == ext.incl))
      throw std::invalid_argument("stored extension morphism mismatch");
    children_[i].validate(t, kind);
  }
}

bool CoverDerivation::operator==(const CoverDerivation& o) const {
  if (is_base() != o.is_base()) return false;
  if (root_ != o.root_) return false;
  if (is_base()) return *iso_ == *o.iso_;
  return *inst_ == *o.inst_ && children_ == o.children_;
}

std::vector<AxiomInstance> axiom_instances(const Condition& c, const Theory& t, SiteKind kind,
                                           int term_depth) {
  std::vector<AxiomInstance> out;
  std::vector<Term> candidates;
  if (kind == SiteKind::Ts)
    candidates = enumerate_terms(t.sig, c.vars, term_depth);
  else
    for (const auto& v : c.vars) candidates.push_back(Term::var(v));

  for (size_t ai = 0; ai < t.axioms.size(); ++ai) {
    const CoherentAxiom& ax = t.axioms[ai];
    // Axioms touching equality atoms can never fire as covers: conditions
    // hold no equality facts.
    bool has_eq = false;
    for (const auto& a : ax.antecedent) has_eq = has_eq || a.is_equality();
    for (const auto& d : ax.disjuncts)
      for (const auto& a : d.atoms) has_eq = has_eq || a.is_equality();
    if (has_eq) continue;
    for (auto& s : enumerate_substs(ax.vars, candidates)) {
      bool ok = true;
      for (const auto& a : ax.antecedent)
        if (!c.has_atom(apply_subst(a, s))) {
          ok = false;
          break;
        }
      if (ok) out.push_back(AxiomInstance{ai, c, std::move(s)});
    }
  }
  return out;
}

namespace {

std::vector<CoverDerivation> covers_rec(const Condition& c, const Theory& t, SiteKind kind,
                                        int depth, int term_depth) {
  std::vector<CoverDerivation> out;
  out.push_back(CoverDerivation::iso_base(identity(c)));
  if (depth <= 0) return out;
  for (const auto& inst : axiom_instances(c, t, kind, term_depth)) {
    const CoherentAxiom& ax = t.axioms[inst.axiom_index];
    // per-disjunct derivation alternatives
    std::vector<std::vector<CoverDerivation>> alts;
    for (size_t i = 0; i < ax.disjuncts.size(); ++i) {
      Extension ext = instance_extension(t, inst, i);
      alts.push_back(covers_rec(ext.extended, t, kind, depth - 1, term_depth));
    }
    // cartesian product over the alternatives
    std::vector<size_t> idx(alts.size(), 0);
    while (true) {
      std::vector<CoverDerivation> children;
      for (size_t i = 0; i < alts.size(); ++i) children.push_back(alts[i][idx[i]]);
      out.push_back(CoverDerivation::axiom_step(t, inst, std::move(children)));
      size_t i = 0;
      for (; i < idx.size(); ++i) {
        if (++idx[i] < alts[i].size()) break;
        idx[i] = 0;
      }
      if (i == idx.size()) break;
    }
  }
  return out;
}

}  // namespace

std::vector<CoverDerivation> covers(const Condition& c, const Theory& t, SiteKind kind,
                                    int depth, int term_depth) {
  std::vector<CoverDerivation> all = covers_rec(c, t, kind, depth, term_depth);
  std::vector<CoverDerivation> out;
  std::set<Sink> seen;
  for (auto& d : all)
    if (seen.insert(d.sink()).second) out.push_back(std::move(d));
  return out;
}

namespace {

// First-order matching: extend binding so that pattern.binding == target.
bool match_term(const Term& pattern, const Term& target, Subst& binding) {
  if (pattern.is_var()) {
    auto it = binding.find(pattern.head());
    if (it != binding.end()) return it->second == target;
    binding.emplace(pattern.head(), target);
    return true;
  }
  if (target.is_var() || pattern.head() != target.head() ||
      pattern.args().size() != target.args().size())
    return false;
  for (size_t i = 0; i < pattern.args().size(); ++i)
    if (!match_term(pattern.args()[i], target.args()[i], binding)) return false;
  return true;
}

bool kind_ok_subst(const Subst& s, SiteKind kind) {
  if (kind == SiteKind::Ts) return true;
  std::set<std::string> image;
  for (const auto& [v, t] : s) {
    if (!t.is_var()) return false;
    if (kind == SiteKind::Rn && !image.insert(t.head()).second) return false;
  }
  return true;
}

void collect_subterms(const Term& t, std::set<Term>& pool) {
  pool.insert(t);
  for (const auto& a : t.args()) collect_subterms(a, pool);
}

// Mediator h : dom(f) -> dom(g) with g . h == f, found by matching g's images
// against f's and enumerating any unconstrained variables of dom(g); term
// candidates are bounded by the depths occurring in f and g.
std::optional<Morphism> factor_through(const Morphism& f, const Morphism& g, SiteKind kind) {
  Subst binding;
  for (const auto& x : f.cod.vars)
    if (!match_term(g.subst.at(x), f.subst.at(x), binding)) return std::nullopt;

  std::vector<std::string> unbound;
  for (const auto& e : g.dom.vars)
    if (!binding.count(e)) unbound.push_back(e);

  std::vector<Term> candidates;
  if (kind == SiteKind::Ts) {
    int max_depth = 0;
    for (const auto& [v, t] : f.subst) max_depth = std::max(max_depth, t.depth());
    for (const auto& [v, t] : g.subst) max_depth = std::max(max_depth, t.depth());
    std::set<Term> pool;
    for (const auto& v : f.dom.vars) pool.insert(Term::var(v));
    for (const auto& [v, t] : f.subst) collect_subterms(t, pool);
    for (const auto& a : f.dom.atoms)
      for (const auto& t : a.args) collect_subterms(t, pool);
    for (const auto& t : pool)
      if (t.depth() <= max_depth + 1) candidates.push_back(t);
  } else {
    for (const auto& v : f.dom.vars) candidates.push_back(Term::var(v));
  }

  for (auto& ext : enumerate_substs(unbound, candidates)) {
    Subst h = binding;
    for (auto& [v, t] : ext) h.emplace(v, t);
    if (!kind_ok_subst(h, kind)) continue;
    bool facts_ok = true;
    for (const auto& b : g.dom.atoms)
      if (!f.dom.has_atom(apply_subst(b, h))) {
        facts_ok = false;
        break;
      }
    if (!facts_ok) continue;
    Morphism med = Morphism::make(f.dom, g.dom, std::move(h));
    if (compose(g, med).subst == f.subst) return med;
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::vector<Factorization>> refines(const Sink& u, const Sink& v, SiteKind kind) {
  if (!u.legs.empty() && !v.legs.empty() && !(u.cod == v.cod))
    throw std::invalid_argument("refines: sinks have different codomains");
  std::vector<Factorization> out;
  for (const auto& f : u.legs) {
    bool found = false;
    for (size_t gi = 0; gi < v.legs.size(); ++gi) {
      if (auto h = factor_through(f, v.legs[gi], kind)) {
        out.push_back(Factorization{gi, std::move(*h)});
        found = true;
        break;
      }
    }
    if (!found) return std::nullopt;
  }
  return out;
}

namespace {

CoverDerivation transport_iso_rec(const Theory& t, const CoverDerivation& d, const Morphism& f) {
  if (d.is_base()) return CoverDerivation::iso_base(compose(f, d.iso()));
  auto inv = is_iso(f);
  if (!inv) throw std::invalid_argument("transport_iso: not an isomorphism");
  AxiomInstance inst;
  inst.axiom_index = d.instance().axiom_index;
  inst.target = f.cod;
  inst.instantiation = compose_subst(d.instance().instantiation, inv->subst);
  const CoherentAxiom& ax = t.axioms[inst.axiom_index];
  std::vector<CoverDerivation> children;
  for (size_t i = 0; i < ax.disjuncts.size(); ++i) {
    Extension src = instance_extension(t, d.instance(), i);
    Extension dst = instance_extension(t, inst, i);
    // f_i : src.extended -> dst.extended extends f with the fresh-name
    // correspondence on the disjunct variables.
    Subst fi = f.subst;
    for (const auto& [orig, dn] : dst.var_names)
      fi.emplace(dn, Term::var(src.var_names.at(orig)));
    Morphism iso_i = Morphism::make(src.extended, dst.extended, std::move(fi));
    children.push_back(transport_iso_rec(t, d.children()[i], iso_i));
  }
  return CoverDerivation::axiom_step(t, inst, std::move(children));
}

}  // namespace

CoverDerivation transport_iso(const Theory& t, const CoverDerivation& d, const Morphism& f) {
  if (!(f.dom == d.root()))
    throw std::invalid_argument("transport_iso: f must leave root(d)");
  return transport_iso_rec(t, d, f);
}

CoverDerivation graft(const Theory& t, const CoverDerivation& d,
                      const std::vector<CoverDerivation>& grafts) {
  size_t cursor = 0;
  std::function<CoverDerivation(const CoverDerivation&)> go =
      [&](const CoverDerivation& node) -> CoverDerivation {
    if (node.is_base()) {
      const CoverDerivation& g = grafts.at(cursor++);
      if (!(g.root() == node.iso().dom))
        throw std::invalid_argument("graft: derivation not rooted at the leaf domain");
      return transport_iso_rec(t, g, node.iso());
    }
    std::vector<CoverDerivation> children;
    for (const auto& c : node.children()) children.push_back(go(c));
    return CoverDerivation::axiom_step(t, node.instance(), std::move(children));
  };
  CoverDerivation out = go(d);
  if (cursor != grafts.size())
    throw std::invalid_argument("graft: wrong number of graft derivations");
  return out;
}

CoverDerivation pullback_cover(const Theory& t, const CoverDerivation& d, const Morphism& g) {
  if (!(g.cod == d.root()))
    throw std::invalid_argument("pullback_cover: cod(g) must be root(d)");
  if (d.is_base()) return CoverDerivation::iso_base(identity(g.dom));
  AxiomInstance inst;
  inst.axiom_index = d.instance().axiom_index;
  inst.target = g.dom;
  inst.instantiation = compose_subst(d.instance().instantiation, g.subst);
  const CoherentAxiom& ax = t.axioms[inst.axiom_index];
  std::vector<CoverDerivation> children;
  for (size_t i = 0; i < ax.disjuncts.size(); ++i) {
    Extension src = instance_extension(t, d.instance(), i);  // over root(d)
    Extension dst = instance_extension(t, inst, i);          // over dom(g)
    // g_i : dst.extended -> src.extended extends g with the fresh names.
    Subst gi = g.subst;
    for (const auto& [orig, sn] : src.var_names)
      gi.emplace(sn, Term::var(dst.var_names.at(orig)));
    Morphism g_i = Morphism::make(dst.extended, src.extended, std::move(gi));
    children.push_back(pullback_cover(t, d.children()[i], g_i));
  }
  return CoverDerivation::axiom_step(t, inst, std::move(children));
}

CoverDerivation common_refinement(const Theory& t, const CoverDerivation& d1,
                                  const CoverDerivation& d2) {
  if (!(d1.root() == d2.root()))
    throw std::invalid_argument("common_refinement: roots differ");
  // Full legs of d2 in leaf order, then pull d1 back along each and graft.
  std::vector<Morphism> legs;
  std::function<void(const CoverDerivation&, std::optional<Morphism>)> walk =
      [&](const CoverDerivation& node, std::optional<Morphism> path) {
        if (node.is_base()) {
          legs.push_back(path ? compose(*path, node.iso()) : node.iso());
          return;
        }
        for (size_t i = 0; i < node.children().size(); ++i) {
          const Morphism& e = node.extensions()[i];
          walk(node.children()[i], path ? compose(*path, e) : e);
        }
      };
  walk(d2, std::nullopt);
  std::vector<CoverDerivation> ws;
  for (const auto& leg : legs) ws.push_back(pullback_cover(t, d1, leg));
  return graft(t, d2, ws);
}

std::optional<CoverDerivation> inconsistent(const Condition& c, const Theory& t, SiteKind kind,
                                            int depth, int term_depth) {
  if (depth <= 0) return std::nullopt;
  auto insts = axiom_instances(c, t, kind, term_depth);
  // zero-disjunct instances give the empty sink immediately
  for (const auto& inst : insts)
    if (t.axioms[inst.axiom_index].disjuncts.empty())
      return CoverDerivation::axiom_step(t, inst, {});
  for (const auto& inst : insts) {
    const CoherentAxiom& ax = t.axioms[inst.axiom_index];
    if (ax.disjuncts.empty()) continue;
    std::vector<CoverDerivation> children;
    bool all = true;
    for (size_t i = 0; i < ax.disjuncts.size(); ++i) {
      Extension ext = instance_extension(t, inst, i);
      auto sub = inconsistent(ext.extended, t, kind, depth - 1, term_depth);
      if (!sub) {
        all = false;
        break;
      }
      children.push_back(std::move(*sub));
    }
    if (all) return CoverDerivation::axiom_step(t, inst, std::move(children));
  }
  return std::nullopt;
}

std::string to_string(const Sink& s) {
  std::string out = "sink at " + to_string(s.cod) + " {";
  for (size_t i = 0; i < s.legs.size(); ++i) {
    if (i) out += "; ";
    out += to_string(s.legs[i].subst) + " from " + to_string(s.legs[i].dom);
  }
  return out + "}";
}

namespace {
void render(const CoverDerivation& d, int indent, std::string& out) {
  std::string pad(static_cast<size_t>(indent) * 2, ' ');
  if (d.is_base()) {
    out += pad + "iso " + to_string(d.iso().subst) + " from " + to_string(d.iso().dom) + "\n";
    return;
  }
  out += pad + "axiom#" + std::to_string(d.instance().axiom_index) + " " +
         to_string(d.instance().instantiation) + " at " + to_string(d.root()) + "\n";
  for (const auto& c : d.children()) render(c, indent + 1, out);
  if (d.children().empty()) out += pad + "  (empty cover)\n";
}
}  // namespace

std::string to_string(const CoverDerivation& d) {
  std::string out;
  render(d, 0, out);
  return out;
}

}  // namespace coforce
