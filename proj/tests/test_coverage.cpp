#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"

using namespace coforce;
using namespace coforce::testing;

namespace {
Term v(const std::string& n) { return Term::var(n); }

Theory pq_theory() {
  // forall x. P(x) => Q(x) | R(x)
  auto pr = parse_theory("pred P/1\npred Q/1\npred R/1\naxiom forall x. P(x) => Q(x) | R(x)\n");
  return pr.file->theory;
}

Theory bot_theory() {
  auto pr = parse_theory("pred P/1\npred Q/1\naxiom forall x. P(x) => false\n");
  return pr.file->theory;
}

std::set<Sink> sink_set(const std::vector<CoverDerivation>& ds) {
  std::set<Sink> out;
  for (const auto& d : ds) out.insert(d.sink());
  return out;
}
}  // namespace

TEST_CASE("axiom instance enumeration") {
  Theory t = pq_theory();
  // frozen oracle values, computed by hand from the enumeration definition
  Condition cxy = Condition::make({"x", "y"}, {Atom{"P", {v("x")}}});
  auto insts = axiom_instances(cxy, t, SiteKind::Vs);
  REQUIRE(insts.size() == 1);
  CHECK(insts[0].instantiation.at("x") == v("x"));

  Condition cx = Condition::make({"x"}, {});
  CHECK(axiom_instances(cx, t, SiteKind::Vs).empty());

  Theory t2 = split_theory();
  Condition cxz = Condition::make({"x", "z"}, {Atom{"P", {v("x")}}});
  auto insts2 = axiom_instances(cxz, t2, SiteKind::Vs);
  REQUIRE(insts2.size() == 2);
  CHECK(insts2[0].instantiation.at("x") == v("x"));
  CHECK(insts2[0].instantiation.at("z") == v("x"));
  CHECK(insts2[1].instantiation.at("x") == v("x"));
  CHECK(insts2[1].instantiation.at("z") == v("z"));
}

TEST_CASE("covers at depth zero are the identity cover") {
  Theory t = pq_theory();
  Condition c = Condition::make({"x"}, {Atom{"P", {v("x")}}});
  auto ds = covers(c, t, SiteKind::Vs, 0);
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].is_base());
  CHECK(ds[0].sink().legs.size() == 1);
}

TEST_CASE("depth one gives the axiom split") {
  Theory t = pq_theory();
  Condition c = Condition::make({"x"}, {Atom{"P", {v("x")}}});
  auto ds = covers(c, t, SiteKind::Vs, 1);
  REQUIRE(ds.size() == 2);  // identity + the two-leg split
  const CoverDerivation& split = ds[1];
  REQUIRE_FALSE(split.is_base());
  Sink s = split.sink();
  REQUIRE(s.legs.size() == 2);
  bool sawQ = false, sawR = false;
  for (const auto& leg : s.legs) {
    if (leg.dom.has_atom(Atom{"Q", {v("x")}})) sawQ = true;
    if (leg.dom.has_atom(Atom{"R", {v("x")}})) sawR = true;
  }
  CHECK(sawQ);
  CHECK(sawR);
}

TEST_CASE("zero-disjunct axioms derive the empty sink") {
  Theory t = bot_theory();
  Condition c = Condition::make({"x"}, {Atom{"P", {v("x")}}});
  auto ds = covers(c, t, SiteKind::Vs, 1);
  bool found_empty = false;
  for (const auto& d : ds)
    if (d.sink().legs.empty()) found_empty = true;
  CHECK(found_empty);
}

TEST_CASE("cover enumeration is monotone in depth") {
  Theory t = split_theory();
  Condition c = Condition::make({"x", "z"}, {Atom{"P", {v("x")}}});
  auto d1 = sink_set(covers(c, t, SiteKind::Vs, 1));
  auto d2 = sink_set(covers(c, t, SiteKind::Vs, 2));
  for (const auto& s : d1) CHECK(d2.count(s));
  CHECK(d2.size() >= d1.size());
}

TEST_CASE("refinement basics") {
  Theory t = pq_theory();
  Condition c = Condition::make({"x"}, {Atom{"P", {v("x")}}});
  auto ds = covers(c, t, SiteKind::Vs, 1);
  Sink ident = ds[0].sink();
  Sink split = ds[1].sink();

  CHECK(refines(split, ident, SiteKind::Vs).has_value());  // anything refines identity
  CHECK(refines(Sink{c, {}}, split, SiteKind::Vs).has_value());  // empty refines anything
  auto self = refines(split, split, SiteKind::Vs);
  REQUIRE(self.has_value());
  CHECK(self->size() == 2);
  // identity does not refine a genuine split
  CHECK_FALSE(refines(ident, split, SiteKind::Vs).has_value());
}

TEST_CASE("derivations validate and reject mutilation") {
  Theory t = pq_theory();
  Condition c = Condition::make({"x"}, {Atom{"P", {v("x")}}});
  auto ds = covers(c, t, SiteKind::Vs, 1);
  for (const auto& d : ds) d.validate(t, SiteKind::Vs);

  // an instance whose antecedent is not satisfied must be rejected
  Condition bare = Condition::make({"x"}, {});
  AxiomInstance bad{0, bare, {{"x", v("x")}}};
  std::vector<CoverDerivation> children;
  children.push_back(
      CoverDerivation::iso_base(identity(Condition::make({"x"}, {Atom{"Q", {v("x")}}}))));
  children.push_back(
      CoverDerivation::iso_base(identity(Condition::make({"x"}, {Atom{"R", {v("x")}}}))));
  CoverDerivation forged = CoverDerivation::axiom_step(t, bad, std::move(children));
  CHECK_THROWS_AS(forged.validate(t, SiteKind::Vs), std::invalid_argument);
}

TEST_CASE("pullback of the identity cover is the identity cover") {
  Theory t = pq_theory();
  Condition c = Condition::make({"x"}, {Atom{"P", {v("x")}}});
  CoverDerivation ident = covers(c, t, SiteKind::Vs, 0)[0];
  Condition d0 = Condition::make({"x", "y"}, {Atom{"P", {v("x")}}});
  Morphism g = Morphism::make(d0, c, {{"x", v("x")}});
  CoverDerivation pb = pullback_cover(t, ident, g);
  CHECK(pb.is_base());
  CHECK(pb.root() == d0);
}

TEST_CASE("stability: the pulled-back cover refines the original") {
  // pull the P -> Q | R split along (x,y; P(x), S(y)) -> (x; P(x))
  auto pr = parse_theory(
      "pred P/1\npred Q/1\npred R/1\npred S/1\n"
      "axiom forall x. P(x) => Q(x) | R(x)\n");
  Theory t = pr.file->theory;
  Condition c = Condition::make({"x"}, {Atom{"P", {v("x")}}});
  CoverDerivation split = covers(c, t, SiteKind::Vs, 1)[1];
  Condition d0 =
      Condition::make({"x", "y"}, {Atom{"P", {v("x")}}, Atom{"S", {v("y")}}});
  Morphism g = Morphism::make(d0, c, {{"x", v("x")}});
  CoverDerivation pb = pullback_cover(t, split, g);
  pb.validate(t, SiteKind::Vs);
  CHECK(pb.root() == d0);
  // S(y) is carried along
  for (const auto& leg : pb.sink().legs) CHECK(leg.dom.has_atom(Atom{"S", {v("y")}}));

  Sink pushed{c, {}};
  for (const auto& leg : pb.sink().legs) pushed.legs.push_back(compose(g, leg));
  CHECK(refines(pushed, split.sink(), SiteKind::Vs).has_value());
}

TEST_CASE("stability on random incoming morphisms") {
  std::mt19937 rng(23);
  Theory t = split_theory();
  Condition c = Condition::make({"x", "z"}, {Atom{"P", {v("x")}}});
  auto ds = covers(c, t, SiteKind::Vs, 2);
  int done = 0;
  for (int i = 0; i < 500 && done < 60; ++i) {
    auto g = random_var_morphism_into(rng, t.sig, c, SiteKind::Vs, 3, 2);
    if (!g) continue;
    const CoverDerivation& d = ds[i % ds.size()];
    CoverDerivation pb = pullback_cover(t, d, *g);
    pb.validate(t, SiteKind::Vs);
    Sink pushed{c, {}};
    for (const auto& leg : pb.sink().legs) pushed.legs.push_back(compose(*g, leg));
    CHECK(refines(pushed, d.sink(), SiteKind::Vs).has_value());
    ++done;
  }
  CHECK(done == 60);
}

TEST_CASE("iso transport moves the sink") {
  Theory t = pq_theory();
  Condition c = Condition::make({"x"}, {Atom{"P", {v("x")}}});
  Condition c2 = Condition::make({"w"}, {Atom{"P", {v("w")}}});
  Morphism f = Morphism::make(c2, c, {{"x", v("w")}});
  auto inv = is_iso(f);
  REQUIRE(inv.has_value());
  for (const auto& d : covers(c2, t, SiteKind::Vs, 1)) {
    CoverDerivation moved = transport_iso(t, d, f);
    moved.validate(t, SiteKind::Vs);
    CHECK(moved.root() == c);
    Sink expect{c, {}};
    for (const auto& leg : d.sink().legs) expect.legs.push_back(compose(f, leg));
    std::sort(expect.legs.begin(), expect.legs.end());
    CHECK(moved.sink() == expect);
  }
}

TEST_CASE("grafting yields the union-of-composites sink") {
  Theory t = split_theory();
  Condition c = Condition::make({"x", "z"}, {Atom{"P", {v("x")}}});
  auto ds = covers(c, t, SiteKind::Vs, 1);
  REQUIRE(ds.size() >= 2);
  const CoverDerivation& parent = ds[1];
  // graft a depth-1 cover onto each leaf
  std::vector<CoverDerivation> grafts;
  std::function<void(const CoverDerivation&)> leaves = [&](const CoverDerivation& n) {
    if (n.is_base()) {
      auto sub = covers(n.iso().dom, t, SiteKind::Vs, 1);
      grafts.push_back(sub.back());
      return;
    }
    for (const auto& ch : n.children()) leaves(ch);
  };
  leaves(parent);
  CoverDerivation grafted = graft(t, parent, grafts);
  grafted.validate(t, SiteKind::Vs);
  CHECK(grafted.height() >= 2);
  // the grafted sink refines the parent sink
  CHECK(refines(grafted.sink(), parent.sink(), SiteKind::Vs).has_value());

  // and equals the union of composites leg_i . sink(graft_i) exactly
  std::vector<Morphism> legs;
  std::function<void(const CoverDerivation&, std::optional<Morphism>)> walk =
      [&](const CoverDerivation& n, std::optional<Morphism> path) {
        if (n.is_base()) {
          legs.push_back(path ? compose(*path, n.iso()) : n.iso());
          return;
        }
        for (size_t i = 0; i < n.children().size(); ++i) {
          const Morphism& e = n.extensions()[i];
          walk(n.children()[i], path ? compose(*path, e) : e);
        }
      };
  walk(parent, std::nullopt);
  REQUIRE(legs.size() == grafts.size());
  Sink expect{c, {}};
  for (size_t i = 0; i < legs.size(); ++i)
    for (const auto& sub : grafts[i].sink().legs)
      expect.legs.push_back(compose(legs[i], sub));
  std::sort(expect.legs.begin(), expect.legs.end());
  CHECK(grafted.sink() == expect);
}

TEST_CASE("common refinement refines both inputs") {
  auto pr = parse_theory(
      "pred P/1\npred Q/1\npred R/1\npred S/1\npred U/1\n"
      "axiom forall x. P(x) => Q(x) | R(x)\n"
      "axiom forall x. P(x) => S(x) | U(x)\n");
  Theory t = pr.file->theory;
  Condition c = Condition::make({"x"}, {Atom{"P", {v("x")}}});
  auto ds = covers(c, t, SiteKind::Vs, 1);
  // identity, axiom 0 split, axiom 1 split
  REQUIRE(ds.size() >= 3);
  const CoverDerivation& d1 = ds[1];
  const CoverDerivation& d2 = ds[2];
  CoverDerivation cr = common_refinement(t, d1, d2);
  cr.validate(t, SiteKind::Vs);
  CHECK(refines(cr.sink(), d1.sink(), SiteKind::Vs).has_value());
  CHECK(refines(cr.sink(), d2.sink(), SiteKind::Vs).has_value());

  // identity cases
  CoverDerivation ident = ds[0];
  CoverDerivation cr2 = common_refinement(t, ident, d1);
  CHECK(cr2.sink() == d1.sink());
  CoverDerivation cr3 = common_refinement(t, d1, d1);
  CHECK(refines(cr3.sink(), d1.sink(), SiteKind::Vs).has_value());
}

TEST_CASE("inconsistency search") {
  Theory empty;
  empty.sig = relational_sig();
  std::mt19937 rng(31);
  for (int i = 0; i < 30; ++i) {
    Condition c = random_condition(rng, empty.sig, 3, 3);
    CHECK_FALSE(inconsistent(c, empty, SiteKind::Vs, 3).has_value());
  }

  Theory t = bot_theory();
  Condition cp = Condition::make({"x"}, {Atom{"P", {v("x")}}});
  auto d = inconsistent(cp, t, SiteKind::Vs, 1);
  REQUIRE(d.has_value());
  CHECK(d->sink().legs.empty());
  d->validate(t, SiteKind::Vs);

  Condition cq = Condition::make({"x"}, {Atom{"Q", {v("x")}}});
  CHECK_FALSE(inconsistent(cq, t, SiteKind::Vs, 4).has_value());
}

TEST_CASE("inconsistency through nested case splits") {
  auto pr = parse_theory(
      "pred P/1\npred Q/1\npred R/1\n"
      "axiom forall x. P(x) => Q(x) | R(x)\n"
      "axiom forall x. Q(x) => false\n"
      "axiom forall x. R(x) => false\n");
  Theory t = pr.file->theory;
  Condition c = Condition::make({"x"}, {Atom{"P", {v("x")}}});
  CHECK_FALSE(inconsistent(c, t, SiteKind::Vs, 1).has_value());
  auto d = inconsistent(c, t, SiteKind::Vs, 2);
  REQUIRE(d.has_value());
  CHECK(d->sink().legs.empty());
  CHECK(d->height() == 2);
  d->validate(t, SiteKind::Vs);
}

TEST_CASE("term-site instances respect the depth bound") {
  auto pr = parse_theory("pred P/1\nfun c/0\nfun f/1\naxiom forall x. P(x) => P(f(x))\n");
  Theory t = pr.file->theory;
  Condition c = Condition::make({"x"}, {Atom{"P", {v("x")}}});
  auto d0 = axiom_instances(c, t, SiteKind::Ts, 0);
  CHECK(d0.size() == 1);  // only the variable instantiation satisfies P
  auto d1 = axiom_instances(c, t, SiteKind::Ts, 1);
  CHECK(d1.size() == 1);  // P(c), P(f(x)) are not facts
  // Rn/Vs instances are variables only
  auto dv = axiom_instances(c, t, SiteKind::Vs, 5);
  CHECK(dv.size() == 1);
  CHECK(dv[0].instantiation.at("x").is_var());
}
