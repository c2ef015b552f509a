#include "coforce/render.hpp"

namespace coforce {

namespace {

const char* witness_kind_name(ForcingWitness::Kind k) {
  using K = ForcingWitness::Kind;
  switch (k) {
    case K::Top: return "top";
    case K::ViaEmptyCover: return "via-empty-cover";
    case K::Fact: return "fact";
    case K::Eq: return "eq";
    case K::And: return "and";
    case K::Or: return "or";
    case K::Exists: return "exists";
    case K::Forall: return "forall";
    case K::ImpliesTop: return "implies-top";
    case K::ImpliesBot: return "implies-bot";
    case K::ImpliesFact: return "implies-fact";
    case K::ImpliesEq: return "implies-eq";
    case K::ImpliesEqVacuous: return "implies-eq-vacuous";
  }
  return "?";
}

std::optional<ForcingWitness::Kind> witness_kind_from(const std::string& s) {
  using K = ForcingWitness::Kind;
  static const std::map<std::string, K> table = {
      {"top", K::Top},
      {"via-empty-cover", K::ViaEmptyCover},
      {"fact", K::Fact},
      {"eq", K::Eq},
      {"and", K::And},
      {"or", K::Or},
      {"exists", K::Exists},
      {"forall", K::Forall},
      {"implies-top", K::ImpliesTop},
      {"implies-bot", K::ImpliesBot},
      {"implies-fact", K::ImpliesFact},
      {"implies-eq", K::ImpliesEq},
      {"implies-eq-vacuous", K::ImpliesEqVacuous},
  };
  auto it = table.find(s);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

Json subst_to_json(const Subst& s) {
  Json j = Json::object();
  for (const auto& [v, t] : s) j[v] = to_string(t);
  return j;
}

Subst subst_from_json(const Json& j, const Signature& sig) {
  Subst s;
  for (auto it = j.begin(); it != j.end(); ++it)
    s.emplace(it.key(), parse_term(it.value().get<std::string>(), sig));
  return s;
}

}  // namespace

Json to_json(const Condition& c) {
  Json j;
  j["vars"] = c.vars;
  Json atoms = Json::array();
  for (const auto& a : c.atoms) atoms.push_back(to_string(a));
  j["atoms"] = atoms;
  return j;
}

Condition condition_from_json(const Json& j, const Theory& t) {
  std::vector<std::string> vars = j.at("vars").get<std::vector<std::string>>();
  std::vector<Atom> atoms;
  // Atoms re-parse through a one-line condition literal for scoping.
  std::string lit;
  for (size_t i = 0; i < vars.size(); ++i) {
    if (i) lit += ",";
    lit += vars[i];
  }
  lit += " : ";
  const auto& arr = j.at("atoms");
  for (size_t i = 0; i < arr.size(); ++i) {
    if (i) lit += ", ";
    lit += arr[i].get<std::string>();
  }
  return parse_condition(lit, t.sig);
}

Json to_json(const Morphism& m) {
  Json j;
  j["dom"] = to_json(m.dom);
  j["cod"] = to_json(m.cod);
  j["subst"] = subst_to_json(m.subst);
  j["kind"] = to_string(m.kind);
  return j;
}

Morphism morphism_from_json(const Json& j, const Theory& t) {
  return Morphism::make(condition_from_json(j.at("dom"), t),
                        condition_from_json(j.at("cod"), t),
                        subst_from_json(j.at("subst"), t.sig));
}

Json to_json(const CoverDerivation& d) {
  Json j;
  if (d.is_base()) {
    j["node"] = "iso";
    j["iso"] = to_json(d.iso());
    return j;
  }
  j["node"] = "axiom";
  j["axiom"] = d.instance().axiom_index;
  j["target"] = to_json(d.instance().target);
  j["instantiation"] = subst_to_json(d.instance().instantiation);
  Json kids = Json::array();
  for (const auto& c : d.children()) kids.push_back(to_json(c));
  j["children"] = kids;
  return j;
}

CoverDerivation derivation_from_json(const Json& j, const Theory& t) {
  if (j.at("node").get<std::string>() == "iso")
    return CoverDerivation::iso_base(morphism_from_json(j.at("iso"), t));
  AxiomInstance inst;
  inst.axiom_index = j.at("axiom").get<size_t>();
  inst.target = condition_from_json(j.at("target"), t);
  inst.instantiation = subst_from_json(j.at("instantiation"), t.sig);
  std::vector<CoverDerivation> children;
  for (const auto& k : j.at("children")) children.push_back(derivation_from_json(k, t));
  return CoverDerivation::axiom_step(t, std::move(inst), std::move(children));
}

Json to_json(const ForcingWitness& w) {
  using K = ForcingWitness::Kind;
  Json j;
  j["kind"] = witness_kind_name(w.kind);
  if (w.cover) j["cover"] = to_json(*w.cover);
  switch (w.kind) {
    case K::And: {
      Json kids = Json::array();
      for (const auto& c : w.children) kids.push_back(to_json(c));
      j["children"] = kids;
      break;
    }
    case K::Or: {
      Json legs = Json::array();
      for (const auto& l : w.or_legs) {
        Json e;
        e["disjunct"] = l.disjunct;
        e["witness"] = to_json(*l.sub);
        legs.push_back(e);
      }
      j["legs"] = legs;
      break;
    }
    case K::Exists: {
      Json legs = Json::array();
      for (const auto& l : w.exists_legs) {
        Json e;
        e["term"] = to_string(l.term);
        e["witness"] = to_json(*l.sub);
        legs.push_back(e);
      }
      j["legs"] = legs;
      break;
    }
    case K::Forall:
      j["fresh"] = w.fresh_var;
      j["witness"] = to_json(*w.sub);
      break;
    case K::ImpliesTop:
    case K::ImpliesFact:
      j["witness"] = to_json(*w.sub);
      break;
    case K::ImpliesEq:
      j["mgu"] = subst_to_json(w.mgu_subst);
      j["witness"] = to_json(*w.sub);
      break;
    default:
      break;
  }
  return j;
}

ForcingWitness witness_from_json(const Json& j, const Theory& t) {
  using K = ForcingWitness::Kind;
  auto k = witness_kind_from(j.at("kind").get<std::string>());
  if (!k) throw std::invalid_argument("unknown witness kind");
  ForcingWitness w;
  w.kind = *k;
  if (j.contains("cover")) w.cover = derivation_from_json(j.at("cover"), t);
  switch (*k) {
    case K::And:
      for (const auto& c : j.at("children")) w.children.push_back(witness_from_json(c, t));
      break;
    case K::Or:
      for (const auto& e : j.at("legs"))
        w.or_legs.push_back({e.at("disjunct").get<size_t>(),
                             std::make_shared<ForcingWitness>(
                                 witness_from_json(e.at("witness"), t))});
      break;
    case K::Exists:
      for (const auto& e : j.at("legs"))
        w.exists_legs.push_back({parse_term(e.at("term").get<std::string>(), t.sig),
                                 std::make_shared<ForcingWitness>(
                                     witness_from_json(e.at("witness"), t))});
      break;
    case K::Forall:
      w.fresh_var = j.at("fresh").get<std::string>();
      w.sub = std::make_shared<ForcingWitness>(witness_from_json(j.at("witness"), t));
      break;
    case K::ImpliesTop:
    case K::ImpliesFact:
      w.sub = std::make_shared<ForcingWitness>(witness_from_json(j.at("witness"), t));
      break;
    case K::ImpliesEq:
      w.mgu_subst = subst_from_json(j.at("mgu"), t.sig);
      w.sub = std::make_shared<ForcingWitness>(witness_from_json(j.at("witness"), t));
      break;
    default:
      break;
  }
  return w;
}

Json to_json(const Countermodel& cm) {
  Json j;
  if (std::holds_alternative<SaturatedBranch>(cm)) {
    const auto& sb = std::get<SaturatedBranch>(cm);
    j["kind"] = "saturated-branch";
    j["branch"] = to_json(sb.branch);
    Json cl = Json::array();
    for (const auto& r : sb.closure) {
      Json e;
      e["axiom"] = r.instance.axiom_index;
      e["instantiation"] = subst_to_json(r.instance.instantiation);
      e["disjunct"] = r.disjunct;
      e["witness"] = subst_to_json(r.witness);
      cl.push_back(e);
    }
    j["closure"] = cl;
    return j;
  }
  if (std::holds_alternative<RefutingMorphism>(cm)) {
    const auto& rm = std::get<RefutingMorphism>(cm);
    j["kind"] = "refuting-morphism";
    j["morphism"] = to_json(rm.morphism);
    if (rm.instance_term) j["term"] = to_string(*rm.instance_term);
    if (rm.antecedent) j["antecedent"] = to_json(*rm.antecedent);
    if (rm.body) j["body"] = to_json(*rm.body);
    return j;
  }
  const auto& cf = std::get<ConjunctFailure>(cm);
  j["kind"] = "conjunct-failure";
  j["index"] = cf.index;
  if (cf.sub) j["sub"] = to_json(*cf.sub);
  return j;
}

Json to_json(const Verdict& v) {
  Json j;
  j["verdict"] = to_string(v.state);
  if (v.witness) j["witness"] = to_json(*v.witness);
  if (v.countermodel) j["countermodel"] = to_json(*v.countermodel);
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

Json to_json(const Sequent& s) {
  Json j;
  j["vars"] = s.vars;
  Json hyps = Json::array();
  for (const auto& h : s.hyps) hyps.push_back(to_string(h));
  j["hyps"] = hyps;
  j["concl"] = to_string(s.concl);
  return j;
}

Sequent sequent_from_json(const Json& j, const Theory& t) {
  std::vector<std::string> vars = j.at("vars").get<std::vector<std::string>>();
  std::vector<Formula> hyps;
  for (const auto& h : j.at("hyps")) hyps.push_back(parse_formula(h.get<std::string>(), t.sig));
  Formula concl = parse_formula(j.at("concl").get<std::string>(), t.sig);
  return Sequent::make(std::move(vars), std::move(hyps), std::move(concl));
}

Json to_json(const ProofTree& p) {
  Json j;
  j["rule"] = to_string(p.rule);
  j["sequent"] = to_json(p.conclusion);
  switch (p.rule) {
    case Rule::Assumption:
    case Rule::AndElim:
    case Rule::OrIntro:
    case Rule::ImpliesIntro:
    case Rule::TheoryAxiom:
      j["index"] = p.index;
      break;
    default:
      break;
  }
  if (p.term) j["term"] = to_string(*p.term);
  if (!p.eigen.empty()) j["eigen"] = p.eigen;
  if (!p.premises.empty()) {
    Json prem = Json::array();
    for (const auto& q : p.premises) prem.push_back(to_json(q));
    j["premises"] = prem;
  }
  return j;
}

ProofTree proof_from_json(const Json& j, const Theory& t) {
  static const std::map<std::string, Rule> rules = {
      {"assumption", Rule::Assumption},   {"top-intro", Rule::TopIntro},
      {"bot-elim", Rule::BotElim},        {"and-intro", Rule::AndIntro},
      {"and-elim", Rule::AndElim},        {"or-intro", Rule::OrIntro},
      {"or-elim", Rule::OrElim},          {"implies-intro", Rule::ImpliesIntro},
      {"implies-elim", Rule::ImpliesElim},{"forall-intro", Rule::ForallIntro},
      {"forall-elim", Rule::ForallElim},  {"exists-intro", Rule::ExistsIntro},
      {"exists-elim", Rule::ExistsElim},  {"theory-axiom", Rule::TheoryAxiom},
  };
  ProofTree p;
  auto it = rules.find(j.at("rule").get<std::string>());
  if (it == rules.end()) throw std::invalid_argument("unknown proof rule");
  p.rule = it->second;
  p.conclusion = sequent_from_json(j.at("sequent"), t);
  if (j.contains("index")) p.index = j.at("index").get<size_t>();
  if (j.contains("term")) p.term = parse_term(j.at("term").get<std::string>(), t.sig);
  if (j.contains("eigen")) p.eigen = j.at("eigen").get<std::string>();
  if (j.contains("premises"))
    for (const auto& q : j.at("premises")) p.premises.push_back(proof_from_json(q, t));
  return p;
}

std::string render_witness_text(const ForcingWitness& w, int indent) {
  std::string pad(static_cast<size_t>(indent) * 2, ' ');
  std::string out = pad + witness_kind_name(w.kind);
  using K = ForcingWitness::Kind;
  if (w.kind == K::Forall) out += " <" + w.fresh_var + ">";
  if (w.kind == K::ImpliesEq) out += " " + to_string(w.mgu_subst);
  out += "\n";
  if (w.cover) {
    std::string cov = to_string(*w.cover);
    std::string inner;
    size_t start = 0;
    while (start < cov.size()) {
      size_t end = cov.find('\n', start);
      if (end == std::string::npos) end = cov.size();
      inner += pad + "  | " + cov.substr(start, end - start) + "\n";
      start = end + 1;
    }
    out += inner;
  }
  for (const auto& c : w.children) out += render_witness_text(c, indent + 1);
  for (const auto& l : w.or_legs) {
    out += pad + "  leg disjunct " + std::to_string(l.disjunct) + ":\n";
    out += render_witness_text(*l.sub, indent + 2);
  }
  for (const auto& l : w.exists_legs) {
    out += pad + "  leg witness term " + to_string(l.term) + ":\n";
    out += render_witness_text(*l.sub, indent + 2);
  }
  if (w.sub && w.kind != K::Or && w.kind != K::Exists)
    out += render_witness_text(*w.sub, indent + 1);
  return out;
}

std::string render_countermodel_text(const Countermodel& cm, int indent) {
  std::string pad(static_cast<size_t>(indent) * 2, ' ');
  std::string out;
  if (std::holds_alternative<SaturatedBranch>(cm)) {
    const auto& sb = std::get<SaturatedBranch>(cm);
    out += pad + "saturated branch " + to_string(sb.branch) + "\n";
    for (const auto& r : sb.closure)
      out += pad + "  instance axiom#" + std::to_string(r.instance.axiom_index) + " " +
             to_string(r.instance.instantiation) + " -> disjunct " +
             std::to_string(r.disjunct) + " via " + to_string(r.witness) + "\n";
    return out;
  }
  if (std::holds_alternative<RefutingMorphism>(cm)) {
    const auto& rm = std::get<RefutingMorphism>(cm);
    out += pad + "refuting morphism " + to_string(rm.morphism) + "\n";
    if (rm.instance_term) out += pad + "  at term " + to_string(*rm.instance_term) + "\n";
    if (rm.body && rm.body->countermodel)
      out += render_countermodel_text(*rm.body->countermodel, indent + 1);
    return out;
  }
  const auto& cf = std::get<ConjunctFailure>(cm);
  out += pad + "conjunct " + std::to_string(cf.index) + " fails\n";
  if (cf.sub && cf.sub->countermodel)
    out += render_countermodel_text(*cf.sub->countermodel, indent + 1);
  return out;
}

std::string render_verdict_text(const Verdict& v) {
  std::string out = to_string(v.state) + "\n";
  if (v.witness) out += render_witness_text(*v.witness, 1);
  if (v.countermodel) out += render_countermodel_text(*v.countermodel, 1);
  if (!v.note.empty()) out += "  note: " + v.note + "\n";
  return out;
}

}  // namespace coforce
