#include "coforce/syntax.hpp"

#include <algorithm>
#include <sstream>

namespace coforce {

Term Term::var(std::string name) {
  Term t;
  t.is_var_ = true;
  t.head_ = std::move(name);
  return t;
}

Term Term::app(std::string fn, std::vector<Term> args) {
  Term t;
  t.is_var_ = false;
  t.head_ = std::move(fn);
  t.args_ = std::move(args);
  return t;
}

int Term::depth() const {
  if (is_var_) return 0;
  int d = 0;
  for (const auto& a : args_) d = std::max(d, a.depth());
  return d + 1;
}

void Term::collect_vars(std::set<std::string>& out) const {
  if (is_var_) {
    out.insert(head_);
    return;
  }
  for (const auto& a : args_) a.collect_vars(out);
}

std::set<std::string> Term::vars() const {
  std::set<std::string> out;
  collect_vars(out);
  return out;
}

bool Term::contains_var(const std::string& v) const {
  if (is_var_) return head_ == v;
  for (const auto& a : args_)
    if (a.contains_var(v)) return true;
  return false;
}

bool Term::operator==(const Term& o) const {
  return is_var_ == o.is_var_ && head_ == o.head_ && args_ == o.args_;
}

std::strong_ordering Term::operator<=>(const Term& o) const {
  if (auto c = (is_var_ ? 0 : 1) <=> (o.is_var_ ? 0 : 1); c != 0) return c;
  if (auto c = head_ <=> o.head_; c != 0) return c;
  return args_ <=> o.args_;
}

Term apply_subst(const Term& t, const Subst& s) {
  if (t.is_var()) {
    auto it = s.find(t.head());
    return it == s.end() ? t : it->second;
  }
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(apply_subst(a, s));
  return Term::app(t.head(), std::move(args));
}

Subst compose_subst(const Subst& f, const Subst& g) {
  Subst out;
  for (const auto& [v, t] : f) out.emplace(v, apply_subst(t, g));
  for (const auto& [v, t] : g)
    if (!out.count(v)) out.emplace(v, t);
  return out;
}

void Atom::collect_vars(std::set<std::string>& out) const {
  for (const auto& t : args) t.collect_vars(out);
}

std::set<std::string> Atom::vars() const {
  std::set<std::string> out;
  collect_vars(out);
  return out;
}

Atom apply_subst(const Atom& a, const Subst& s) {
  Atom out;
  out.pred = a.pred;
  out.args.reserve(a.args.size());
  for (const auto& t : a.args) out.args.push_back(apply_subst(t, s));
  return out;
}

Atom eq_atom(Term lhs, Term rhs) {
  return Atom{"=", {std::move(lhs), std::move(rhs)}};
}

std::optional<int> Signature::function_arity(const std::string& name) const {
  for (const auto& [n, k] : functions)
    if (n == name) return k;
  return std::nullopt;
}

std::optional<int> Signature::predicate_arity(const std::string& name) const {
  for (const auto& [n, k] : predicates)
    if (n == name) return k;
  return std::nullopt;
}

void Signature::validate() const {
  std::set<std::string> seen;
  for (const auto& [n, k] : functions) {
    if (k < 0) throw std::invalid_argument("negative arity for function " + n);
    if (!seen.insert(n).second) throw std::invalid_argument("duplicate function " + n);
  }
  seen.clear();
  for (const auto& [n, k] : predicates) {
    if (n == "=") throw std::invalid_argument("\"=\" cannot be a declared predicate");
    if (k < 0) throw std::invalid_argument("negative arity for predicate " + n);
    if (!seen.insert(n).second) throw std::invalid_argument("duplicate predicate " + n);
  }
}

bool Signature::term_ok(const Term& t) const {
  if (t.is_var()) return true;
  auto k = function_arity(t.head());
  if (!k || static_cast<size_t>(*k) != t.args().size()) return false;
  for (const auto& a : t.args())
    if (!term_ok(a)) return false;
  return true;
}

bool Signature::atom_ok(const Atom& a) const {
  if (a.is_equality()) {
    if (!with_equality || a.args.size() != 2) return false;
  } else {
    auto k = predicate_arity(a.pred);
    if (!k || static_cast<size_t>(*k) != a.args.size()) return false;
  }
  for (const auto& t : a.args)
    if (!term_ok(t)) return false;
  return true;
}

struct Formula::Node {
  Kind kind;
  Atom atom;
  std::vector<Formula> parts;  // And/Or members, or {lhs, rhs} for Implies
  std::string binder;
  std::vector<Formula> body;  // singleton for Forall/Exists
};

Formula::Formula() : node_(nullptr) {}

Formula::Kind Formula::kind() const { return node_ ? node_->kind : Kind::Top; }
const Atom& Formula::atom_ref() const { return node_->atom; }
const std::vector<Formula>& Formula::parts() const { return node_->parts; }
const Formula& Formula::lhs() const { return node_->parts[0]; }
const Formula& Formula::rhs() const { return node_->parts[1]; }
const std::string& Formula::binder() const { return node_->binder; }
const Formula& Formula::body() const { return node_->body[0]; }

Formula Formula::atom(Atom a) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Atom;
  n->atom = std::move(a);
  return Formula(std::move(n));
}

Formula Formula::top() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Top;
  return Formula(std::move(n));
}

Formula Formula::bot() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Bot;
  return Formula(std::move(n));
}

Formula Formula::conj(std::vector<Formula> fs) {
  if (fs.empty()) return top();
  if (fs.size() == 1) return fs[0];
  auto n = std::make_shared<Node>();
  n->kind = Kind::And;
  n->parts = std::move(fs);
  return Formula(std::move(n));
}

Formula Formula::disj(std::vector<Formula> fs) {
  if (fs.empty()) return bot();
  if (fs.size() == 1) return fs[0];
  auto n = std::make_shared<Node>();
  n->kind = Kind::Or;
  n->parts = std::move(fs);
  return Formula(std::move(n));
}

Formula Formula::implies(Formula lhs, Formula rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Implies;
  n->parts = {std::move(lhs), std::move(rhs)};
  return Formula(std::move(n));
}

Formula Formula::forall(std::string v, Formula body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Forall;
  n->binder = std::move(v);
  n->body = {std::move(body)};
  return Formula(std::move(n));
}

Formula Formula::exists(std::string v, Formula body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Exists;
  n->binder = std::move(v);
  n->body = {std::move(body)};
  return Formula(std::move(n));
}

bool Formula::is_atomic() const {
  auto k = kind();
  return k == Kind::Atom || k == Kind::Top || k == Kind::Bot;
}

bool Formula::is_positive() const {
  switch (kind()) {
    case Kind::Atom:
    case Kind::Top:
    case Kind::Bot:
      return true;
    case Kind::And:
    case Kind::Or:
      for (const auto& p : parts())
        if (!p.is_positive()) return false;
      return true;
    case Kind::Exists:
      return body().is_positive();
    case Kind::Implies:
    case Kind::Forall:
      return false;
  }
  return false;
}

namespace {

void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (f.kind()) {
    case Formula::Kind::Top:
    case Formula::Kind::Bot:
      return;
    case Formula::Kind::Atom:
      for (const auto& v : f.atom_ref().vars())
        if (!bound.count(v)) out.insert(v);
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      for (const auto& p : f.parts()) collect_free(p, bound, out);
      return;
    case Formula::Kind::Implies:
      collect_free(f.lhs(), bound, out);
      collect_free(f.rhs(), bound, out);
      return;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      bool fresh = bound.insert(f.binder()).second;
      collect_free(f.body(), bound, out);
      if (fresh) bound.erase(f.binder());
      return;
    }
  }
}

// Renames every bound variable to a positional name, making structural
// equality on the result exactly alpha-equivalence. Positional names use '#'
// which the parser never produces.
Formula canon_bound(const Formula& f, Subst env, int& next) {
  switch (f.kind()) {
    case Formula::Kind::Top:
    case Formula::Kind::Bot:
      return f;
    case Formula::Kind::Atom:
      return Formula::atom(apply_subst(f.atom_ref(), env));
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<Formula> ps;
      ps.reserve(f.parts().size());
      for (const auto& p : f.parts()) ps.push_back(canon_bound(p, env, next));
      return f.kind() == Formula::Kind::And ? Formula::conj(std::move(ps))
                                            : Formula::disj(std::move(ps));
    }
    case Formula::Kind::Implies:
      return Formula::implies(canon_bound(f.lhs(), env, next), canon_bound(f.rhs(), env, next));
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      std::string nv = "#" + std::to_string(next++);
      env[f.binder()] = Term::var(nv);
      Formula b = canon_bound(f.body(), env, next);
      return f.kind() == Formula::Kind::Forall ? Formula::forall(nv, std::move(b))
                                               : Formula::exists(nv, std::move(b));
    }
  }
  return f;
}

bool structural_eq(const Formula& a, const Formula& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Formula::Kind::Top:
    case Formula::Kind::Bot:
      return true;
    case Formula::Kind::Atom:
      return a.atom_ref() == b.atom_ref();
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      if (a.parts().size() != b.parts().size()) return false;
      for (size_t i = 0; i < a.parts().size(); ++i)
        if (!structural_eq(a.parts()[i], b.parts()[i])) return false;
      return true;
    }
    case Formula::Kind::Implies:
      return structural_eq(a.lhs(), b.lhs()) && structural_eq(a.rhs(), b.rhs());
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      return a.binder() == b.binder() && structural_eq(a.body(), b.body());
  }
  return false;
}

}  // namespace

bool Formula::operator==(const Formula& o) const {
  int n1 = 0, n2 = 0;
  return structural_eq(canon_bound(*this, {}, n1), canon_bound(o, {}, n2));
}

bool Formula::identical(const Formula& o) const { return structural_eq(*this, o); }

std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

namespace {

Formula substitute_rec(const Formula& f, const Subst& s) {
  switch (f.kind()) {
    case Formula::Kind::Top:
    case Formula::Kind::Bot:
      return f;
    case Formula::Kind::Atom:
      return Formula::atom(apply_subst(f.atom_ref(), s));
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<Formula> ps;
      ps.reserve(f.parts().size());
      for (const auto& p : f.parts()) ps.push_back(substitute_rec(p, s));
      return f.kind() == Formula::Kind::And ? Formula::conj(std::move(ps))
                                            : Formula::disj(std::move(ps));
    }
    case Formula::Kind::Implies:
      return Formula::implies(substitute_rec(f.lhs(), s), substitute_rec(f.rhs(), s));
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      const std::string& x = f.binder();
      // Range variables of the substitution restricted to the body's free
      // variables; capture happens iff x is among them.
      std::set<std::string> fv = free_vars(f.body());
      fv.erase(x);
      std::set<std::string> range;
      for (const auto& v : fv) {
        auto it = s.find(v);
        if (it != s.end()) it->second.collect_vars(range);
      }
      Subst inner = s;
      std::string nx = x;
      if (range.count(x)) {
        std::set<std::string> avoid = range;
        avoid.insert(fv.begin(), fv.end());
        avoid.insert(x);
        nx = fresh_name(x, avoid);
      }
      inner[x] = Term::var(nx);
      Formula b = substitute_rec(f.body(), inner);
      return f.kind() == Formula::Kind::Forall ? Formula::forall(nx, std::move(b))
                                               : Formula::exists(nx, std::move(b));
    }
  }
  return f;
}

}  // namespace

Formula substitute(const Formula& f, const Subst& s) {
  for (const auto& v : free_vars(f))
    if (!s.count(v))
      throw std::invalid_argument("substitution not total on free variable " + v);
  return substitute_rec(f, s);
}

void CoherentAxiom::validate(const Signature& sig) const {
  std::set<std::string> uni(vars.begin(), vars.end());
  if (uni.size() != vars.size()) throw std::invalid_argument("duplicate axiom variable");
  for (const auto& a : antecedent) {
    if (!sig.atom_ok(a)) throw std::invalid_argument("bad antecedent atom " + to_string(a));
    for (const auto& v : a.vars())
      if (!uni.count(v)) throw std::invalid_argument("antecedent var " + v + " unbound");
  }
  for (const auto& d : disjuncts) {
    std::set<std::string> scope = uni;
    for (const auto& v : d.fresh_vars) {
      if (!scope.insert(v).second)
        throw std::invalid_argument("disjunct variable " + v + " not disjoint");
    }
    for (const auto& a : d.atoms) {
      if (!sig.atom_ok(a)) throw std::invalid_argument("bad disjunct atom " + to_string(a));
      for (const auto& v : a.vars())
        if (!scope.count(v)) throw std::invalid_argument("disjunct var " + v + " unbound");
    }
  }
}

Formula axiom_antecedent_formula(const CoherentAxiom& ax) {
  std::vector<Formula> fs;
  for (const auto& a : ax.antecedent) fs.push_back(Formula::atom(a));
  return Formula::conj(std::move(fs));
}

Formula axiom_consequent_formula(const CoherentAxiom& ax) {
  std::vector<Formula> ds;
  for (const auto& d : ax.disjuncts) {
    std::vector<Formula> fs;
    for (const auto& a : d.atoms) fs.push_back(Formula::atom(a));
    Formula body = Formula::conj(std::move(fs));
    for (auto it = d.fresh_vars.rbegin(); it != d.fresh_vars.rend(); ++it)
      body = Formula::exists(*it, std::move(body));
    ds.push_back(std::move(body));
  }
  return Formula::disj(std::move(ds));
}

Formula axiom_to_formula(const CoherentAxiom& ax) {
  Formula f = Formula::implies(axiom_antecedent_formula(ax), axiom_consequent_formula(ax));
  for (auto it = ax.vars.rbegin(); it != ax.vars.rend(); ++it)
    f = Formula::forall(*it, std::move(f));
  return f;
}

Formula axiom_to_generalized_geometric(const CoherentAxiom& ax) {
  Formula f = axiom_consequent_formula(ax);
  for (auto it = ax.antecedent.rbegin(); it != ax.antecedent.rend(); ++it)
    f = Formula::implies(Formula::atom(*it), std::move(f));
  for (auto it = ax.vars.rbegin(); it != ax.vars.rend(); ++it)
    f = Formula::forall(*it, std::move(f));
  return f;
}

void Theory::validate() const {
  sig.validate();
  for (const auto& ax : axioms) ax.validate(sig);
}

namespace {

// One antecedent-or-consequent disjunct in positive disjunctive normal form.
struct PosDisjunct {
  std::vector<std::string> evars;
  std::vector<Atom> atoms;
};

// Standardize bound variables apart from everything seen so far.
Formula rename_apart(const Formula& f, std::set<std::string>& used, Subst env) {
  switch (f.kind()) {
    case Formula::Kind::Top:
    case Formula::Kind::Bot:
      return f;
    case Formula::Kind::Atom:
      return Formula::atom(apply_subst(f.atom_ref(), env));
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<Formula> ps;
      for (const auto& p : f.parts()) ps.push_back(rename_apart(p, used, env));
      return f.kind() == Formula::Kind::And ? Formula::conj(std::move(ps))
                                            : Formula::disj(std::move(ps));
    }
    case Formula::Kind::Implies:
      return Formula::implies(rename_apart(f.lhs(), used, env),
                              rename_apart(f.rhs(), used, env));
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      std::string nv = used.count(f.binder()) ? fresh_name(f.binder(), used) : f.binder();
      used.insert(nv);
      env[f.binder()] = Term::var(nv);
      Formula b = rename_apart(f.body(), used, env);
      return f.kind() == Formula::Kind::Forall ? Formula::forall(nv, std::move(b))
                                               : Formula::exists(nv, std::move(b));
    }
  }
  return f;
}

// Positive formula -> finite disjunction of (exists vars. conjunction of
// atoms). Assumes bound variables are already standardized apart.
std::vector<PosDisjunct> positive_dnf(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Top:
      return {PosDisjunct{}};
    case Formula::Kind::Bot:
      return {};
    case Formula::Kind::Atom:
      return {PosDisjunct{{}, {f.atom_ref()}}};
    case Formula::Kind::Or: {
      std::vector<PosDisjunct> out;
      for (const auto& p : f.parts()) {
        auto sub = positive_dnf(p);
        out.insert(out.end(), sub.begin(), sub.end());
      }
      return out;
    }
    case Formula::Kind::And: {
      std::vector<PosDisjunct> acc = {PosDisjunct{}};
      for (const auto& p : f.parts()) {
        auto sub = positive_dnf(p);
        std::vector<PosDisjunct> next;
        for (const auto& l : acc)
          for (const auto& r : sub) {
            PosDisjunct d = l;
            d.evars.insert(d.evars.end(), r.evars.begin(), r.evars.end());
            d.atoms.insert(d.atoms.end(), r.atoms.begin(), r.atoms.end());
            next.push_back(std::move(d));
          }
        acc = std::move(next);
      }
      return acc;
    }
    case Formula::Kind::Exists: {
      auto sub = positive_dnf(f.body());
      for (auto& d : sub) d.evars.insert(d.evars.begin(), f.binder());
      return sub;
    }
    case Formula::Kind::Implies:
    case Formula::Kind::Forall:
      throw CoherentNormalizeError("subformula outside the positive fragment: " + to_string(f),
                                   f);
  }
  return {};
}

}  // namespace

std::vector<CoherentAxiom> normalize_coherent(const Formula& sentence) {
  std::set<std::string> used = free_vars(sentence);
  Formula std_apart = rename_apart(sentence, used, {});

  std::vector<std::string> uvars;
  Formula core = std_apart;
  while (core.kind() == Formula::Kind::Forall) {
    uvars.push_back(core.binder());
    core = core.body();
  }

  Formula ante = Formula::top();
  Formula cons = core;
  if (core.kind() == Formula::Kind::Implies) {
    ante = core.lhs();
    cons = core.rhs();
    if (cons.kind() == Formula::Kind::Implies || cons.kind() == Formula::Kind::Forall)
      throw CoherentNormalizeError("consequent is not positive: " + to_string(cons), cons);
  }

  auto ante_dnf = positive_dnf(ante);
  auto cons_dnf = positive_dnf(cons);

  std::vector<CoherentAxiom> out;
  for (const auto& a : ante_dnf) {
    CoherentAxiom ax;
    ax.vars = uvars;
    // Existentials in the antecedent become additional universals.
    ax.vars.insert(ax.vars.end(), a.evars.begin(), a.evars.end());
    ax.antecedent = a.atoms;
    std::sort(ax.antecedent.begin(), ax.antecedent.end());
    ax.antecedent.erase(std::unique(ax.antecedent.begin(), ax.antecedent.end()),
                        ax.antecedent.end());
    for (const auto& c : cons_dnf) {
      Disjunct d;
      d.fresh_vars = c.evars;
      d.atoms = c.atoms;
      std::sort(d.atoms.begin(), d.atoms.end());
      d.atoms.erase(std::unique(d.atoms.begin(), d.atoms.end()), d.atoms.end());
      // Drop fresh variables that ended up unused (e.g. exists x. true).
      // They still matter for inhabitation, so only prune duplicates here.
      ax.disjuncts.push_back(std::move(d));
    }
    out.push_back(std::move(ax));
  }
  return out;
}

namespace {
const Formula* ggi_check(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
    case Formula::Kind::Top:
    case Formula::Kind::Bot:
      return nullptr;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      for (const auto& p : f.parts())
        if (const Formula* bad = ggi_check(p)) return bad;
      return nullptr;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      return ggi_check(f.body());
    case Formula::Kind::Implies:
      if (!f.lhs().is_atomic()) return &f.lhs();
      return ggi_check(f.rhs());
  }
  return nullptr;
}
}  // namespace

GeneralizedGeometricCheck is_generalized_geometric(const Formula& f) {
  GeneralizedGeometricCheck out;
  if (const Formula* bad = ggi_check(f)) {
    out.ok = false;
    out.offender = *bad;
  }
  return out;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& used) {
  if (!used.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string cand = base + std::to_string(i);
    if (!used.count(cand)) return cand;
  }
}

std::string to_string(const Term& t) {
  if (t.is_var()) return t.head();
  if (t.args().empty()) return t.head();
  std::string out = t.head() + "(";
  for (size_t i = 0; i < t.args().size(); ++i) {
    if (i) out += ",";
    out += to_string(t.args()[i]);
  }
  return out + ")";
}

std::string to_string(const Atom& a) {
  if (a.is_equality()) return to_string(a.args[0]) + " = " + to_string(a.args[1]);
  if (a.args.empty()) return a.pred;
  std::string out = a.pred + "(";
  for (size_t i = 0; i < a.args.size(); ++i) {
    if (i) out += ",";
    out += to_string(a.args[i]);
  }
  return out + ")";
}

namespace {
int prec(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::Implies:
      return 1;
    case Formula::Kind::Or:
      return 2;
    case Formula::Kind::And:
      return 3;
    default:
      return 4;
  }
}

void fmt(const Formula& f, int parent_prec, std::string& out) {
  int p = prec(f.kind());
  bool paren = p < parent_prec;
  if (paren) out += "(";
  switch (f.kind()) {
    case Formula::Kind::Top:
      out += "true";
      break;
    case Formula::Kind::Bot:
      out += "false";
      break;
    case Formula::Kind::Atom:
      out += to_string(f.atom_ref());
      break;
    case Formula::Kind::And:
      for (size_t i = 0; i < f.parts().size(); ++i) {
        if (i) out += " & ";
        fmt(f.parts()[i], p + 1, out);
      }
      break;
    case Formula::Kind::Or:
      for (size_t i = 0; i < f.parts().size(); ++i) {
        if (i) out += " | ";
        fmt(f.parts()[i], p + 1, out);
      }
      break;
    case Formula::Kind::Implies:
      fmt(f.lhs(), p + 1, out);
      out += " -> ";
      fmt(f.rhs(), p, out);  // right-associative
      break;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      out += f.kind() == Formula::Kind::Forall ? "forall " : "exists ";
      out += f.binder();
      out += ". ";
      fmt(f.body(), 0, out);
      break;
  }
  if (paren) out += ")";
}
}  // namespace

std::string to_string(const Formula& f) {
  std::string out;
  fmt(f, 0, out);
  return out;
}

std::string to_string(const CoherentAxiom& ax) {
  std::ostringstream os;
  os << "axiom";
  if (!ax.vars.empty()) {
    os << " forall";
    for (const auto& v : ax.vars) os << " " << v;
    os << ".";
  }
  os << " ";
  if (ax.antecedent.empty()) {
    os << "true";
  } else {
    for (size_t i = 0; i < ax.antecedent.size(); ++i) {
      if (i) os << ", ";
      os << to_string(ax.antecedent[i]);
    }
  }
  os << " => ";
  if (ax.disjuncts.empty()) {
    os << "false";
  } else {
    for (size_t i = 0; i < ax.disjuncts.size(); ++i) {
      if (i) os << " | ";
      const auto& d = ax.disjuncts[i];
      if (!d.fresh_vars.empty()) {
        os << "exists";
        for (const auto& v : d.fresh_vars) os << " " << v;
        os << ". ";
      }
      if (d.atoms.empty()) {
        os << "true";
      } else {
        for (size_t j = 0; j < d.atoms.size(); ++j) {
          if (j) os << ", ";
          os << to_string(d.atoms[j]);
        }
      }
    }
  }
  return os.str();
}

}  // namespace coforce
