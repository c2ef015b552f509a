#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "coforce/corpus.hpp"

using namespace coforce;

namespace {

constexpr int kExitForced = 0;
constexpr int kExitNotForced = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitUsage = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

TheoryFile load_theory(const std::string& path) {
  ParseResult pr = parse_theory(read_file(path));
  if (!pr.ok()) {
    std::string msg = path + ":";
    for (const auto& d : pr.diagnostics) msg += "\n  " + d.render();
    throw std::runtime_error(msg);
  }
  return *pr.file;
}

Formula resolve_goal(const TheoryFile& tf, const std::string& goal,
                     const std::string& formula) {
  if (!goal.empty()) {
    const Formula* f = tf.find_goal(goal);
    if (!f) throw std::runtime_error("no goal named '" + goal + "' in the theory file");
    return *f;
  }
  if (!formula.empty()) return parse_formula(formula, tf.theory.sig);
  throw std::runtime_error("provide --goal NAME or --formula TEXT");
}

int verdict_exit(const Verdict& v) {
  switch (v.state) {
    case Verdict::State::Forced: return kExitForced;
    case Verdict::State::NotForced: return kExitNotForced;
    case Verdict::State::Unknown: return kExitUnknown;
  }
  return kExitUnknown;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coforce: a coherent-logic forcing workbench"};
  app.require_subcommand(1);

  std::string theory_path, site = "vs", condition, goal, formula, format = "text";
  std::string corpus_dir = "corpus";
  std::string equations;
  Bounds bounds;

  auto add_common = [&](CLI::App* cmd, bool with_bounds) {
    cmd->add_option("--theory", theory_path, "theory file")->required();
    cmd->add_option("--condition", condition, "condition literal, e.g. \"x,y : P(x)\"");
    cmd->add_option("--goal", goal, "named goal from the theory file");
    cmd->add_option("--formula", formula, "inline goal formula");
    cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "structured"}));
    if (with_bounds) {
      cmd->add_option("--depth", bounds.cover_depth, "cover search depth");
      cmd->add_option("--fresh", bounds.fresh_vars, "fresh variable budget");
      cmd->add_option("--atoms", bounds.atom_budget, "additional atom budget");
      cmd->add_option("--term-depth", bounds.term_depth, "term depth bound");
    }
  };

  CLI::App* cmd_force = app.add_subcommand("force", "decide whether a condition forces a goal");
  add_common(cmd_force, true);
  cmd_force->add_option("--site", site, "site kind")->check(CLI::IsMember({"rn", "vs", "ts"}));

  CLI::App* cmd_prove = app.add_subcommand("prove", "prove a sequent by forcing + extraction");
  add_common(cmd_prove, true);
  cmd_prove->add_option("--site", site, "site kind")->check(CLI::IsMember({"rn", "vs", "ts"}));

  CLI::App* cmd_covers = app.add_subcommand("covers", "enumerate cover derivations");
  add_common(cmd_covers, true);
  cmd_covers->add_option("--site", site, "site kind")->check(CLI::IsMember({"rn", "vs", "ts"}));

  CLI::App* cmd_unify = app.add_subcommand("unify", "most general unifier of term equations");
  cmd_unify->add_option("equations", equations, "comma-separated equations, e.g. \"f(x) = g(y)\"")
      ->required();
  cmd_unify->add_option("--theory", theory_path, "theory file declaring the signature");
  cmd_unify->add_option("--format", format, "output format")
      ->check(CLI::IsMember({"text", "structured"}));

  CLI::App* cmd_corpus = app.add_subcommand("corpus", "run the example corpus");
  cmd_corpus->add_option("--dir", corpus_dir, "corpus fixture directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (cmd_force->parsed()) {
      TheoryFile tf = load_theory(theory_path);
      SiteKind kind = *site_kind_from_string(site);
      Condition c = parse_condition(condition, tf.theory.sig);
      Formula f = resolve_goal(tf, goal, formula);
      Verdict v = force(kind, c, f, tf.theory, bounds);
      if (format == "structured")
        std::cout << to_json(v).dump(2) << "\n";
      else
        std::cout << render_verdict_text(v);
      return verdict_exit(v);
    }

    if (cmd_prove->parsed()) {
      TheoryFile tf = load_theory(theory_path);
      SiteKind kind = *site_kind_from_string(site);
      Condition c = parse_condition(condition, tf.theory.sig);
      Formula f = resolve_goal(tf, goal, formula);
      Sequent s = condition_sequent(c, f);
      ProveResult r = prove(s, tf.theory, bounds, kind);
      switch (r.status) {
        case ProveResult::Status::Proved: {
          if (format == "structured")
            std::cout << to_json(*r.proof).dump(2) << "\n";
          else
            std::cout << "proved\n" << to_string(*r.proof);
          return kExitForced;
        }
        case ProveResult::Status::Refuted: {
          std::cout << "not provable\n";
          if (r.verdict && r.verdict->countermodel)
            std::cout << render_countermodel_text(*r.verdict->countermodel, 1);
          return kExitNotForced;
        }
        case ProveResult::Status::Unknown:
          std::cout << "unknown: " << r.note << "\n";
          return kExitUnknown;
      }
      return kExitUnknown;
    }

    if (cmd_covers->parsed()) {
      TheoryFile tf = load_theory(theory_path);
      SiteKind kind = *site_kind_from_string(site);
      Condition c = parse_condition(condition, tf.theory.sig);
      auto ds = covers(c, tf.theory, kind, bounds.cover_depth, bounds.term_depth);
      if (format == "structured") {
        Json arr = Json::array();
        for (const auto& d : ds) arr.push_back(to_json(d));
        std::cout << arr.dump(2) << "\n";
      } else {
        std::cout << ds.size() << " cover derivation(s) at depth <= " << bounds.cover_depth
                  << "\n";
        for (const auto& d : ds) std::cout << to_string(d);
      }
      return kExitForced;
    }

    if (cmd_unify->parsed()) {
      Signature sig;
      if (!theory_path.empty()) sig = load_theory(theory_path).theory.sig;
      UnificationProblem prob;
      std::istringstream ss(equations);
      std::string part;
      // split on ';' so commas stay available inside terms
      bool lenient = theory_path.empty();
      while (std::getline(ss, part, ';')) {
        size_t eq = part.find('=');
        if (eq == std::string::npos) throw std::runtime_error("equation needs '='");
        std::string l = part.substr(0, eq), r = part.substr(eq + 1);
        Term lhs = lenient ? parse_term_lenient(l) : parse_term(l, sig);
        Term rhs = lenient ? parse_term_lenient(r) : parse_term(r, sig);
        prob.equations.emplace_back(std::move(lhs), std::move(rhs));
      }
      UnifyResult r = mgu(prob);
      if (std::holds_alternative<Unifier>(r)) {
        const Unifier& u = std::get<Unifier>(r);
        if (format == "structured") {
          Json j;
          j["result"] = "unifier";
          Json s = Json::object();
          for (const auto& [v, t] : u.subst) s[v] = to_string(t);
          j["subst"] = s;
          std::cout << j.dump(2) << "\n";
        } else {
          std::cout << "unifier " << to_string(u) << "\n";
        }
        return kExitForced;
      }
      const UnifyFailure& fl = std::get<UnifyFailure>(r);
      if (format == "structured") {
        Json j;
        j["result"] = "failure";
        j["reason"] = to_string(fl);
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "failure " << to_string(fl) << "\n";
      }
      return kExitNotForced;
    }

    if (cmd_corpus->parsed()) {
      CorpusReport rep = run_corpus(corpus_dir);
      std::cout << rep.text;
      return rep.all_pass ? kExitForced : kExitNotForced;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
