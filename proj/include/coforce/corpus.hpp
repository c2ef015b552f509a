#ifndef COFORCE_CORPUS_HPP
#define COFORCE_CORPUS_HPP

#include "coforce/render.hpp"

namespace coforce {

// One replayable fixture: a theory file, a query, an expected verdict class
// and the note tying it back to its source claim (including whether the
// original claim is fully or only partially machine-checkable).
struct CorpusEntry {
  std::string name;
  std::string file;       // theory fixture (relative to the corpus directory)
  std::string mode;       // "force" or "covers-trivial"
  std::string site;       // rn | vs | ts
  std::string condition;  // condition literal
  std::string goal;       // goal name inside the fixture (force mode)
  std::string expect;     // Forced | NotForced | trivial
  Bounds bounds;
  std::string provenance;
};

const std::vector<CorpusEntry>& corpus_entries();

struct CorpusReport {
  bool all_pass = false;
  int passed = 0;
  int failed = 0;
  std::string text;  // deterministic, byte-stable across runs
};

// Runs every entry and compares against the expected verdict class and the
// frozen golden detail next to the fixture. Set COFORCE_UPDATE_GOLDEN=1 to
// rewrite the golden files instead of comparing.
CorpusReport run_corpus(const std::string& dir);

// Re-runs an entry and returns the rendered detail (used for goldens and
// stability checks).
struct EntryOutcome {
  std::string verdict_class;
  std::string detail;
  std::optional<Verdict> verdict;
};
EntryOutcome run_entry(const CorpusEntry& e, const std::string& dir, const Bounds& bounds);

}  // namespace coforce

#endif
