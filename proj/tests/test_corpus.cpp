#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "coforce/corpus.hpp"

using namespace coforce;

namespace {
const char* corpus_dir() { return COFORCE_CORPUS_DIR; }
}  // namespace

TEST_CASE("the corpus passes") {
  CorpusReport rep = run_corpus(corpus_dir());
  if (!rep.all_pass) MESSAGE(rep.text);
  CHECK(rep.all_pass);
  CHECK(rep.failed == 0);
  CHECK(rep.passed == static_cast<int>(corpus_entries().size()));
}

TEST_CASE("two corpus runs are byte-identical") {
  CorpusReport a = run_corpus(corpus_dir());
  CorpusReport b = run_corpus(corpus_dir());
  CHECK(a.text == b.text);
}

TEST_CASE("verdicts are stable when every bound doubles") {
  for (const auto& e : corpus_entries()) {
    if (e.mode != "force") continue;
    EntryOutcome base = run_entry(e, corpus_dir(), e.bounds);
    EntryOutcome wide = run_entry(e, corpus_dir(), e.bounds.doubled());
    // definitive verdicts never flip; Unknown may only improve
    if (base.verdict_class == "Forced" || base.verdict_class == "NotForced")
      CHECK(wide.verdict_class == base.verdict_class);
  }
}

TEST_CASE("fixtures round-trip through print_theory") {
  std::set<std::string> files;
  for (const auto& e : corpus_entries()) files.insert(e.file);
  for (const auto& f : files) {
    std::ifstream in(std::string(corpus_dir()) + "/" + f);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    ParseResult pr = parse_theory(os.str());
    REQUIRE(pr.ok());
    ParseResult pr2 = parse_theory(print_theory(*pr.file));
    REQUIRE(pr2.ok());
    CHECK(pr2.file->theory.axioms == pr.file->theory.axioms);
    CHECK(pr2.file->goals.size() == pr.file->goals.size());
  }
}

TEST_CASE("every entry states how far it is machine-checkable") {
  for (const auto& e : corpus_entries()) {
    bool says = e.provenance.find("machine-checked") != std::string::npos ||
                e.provenance.find("bounded-checked") != std::string::npos;
    CHECK(says);
  }
}
