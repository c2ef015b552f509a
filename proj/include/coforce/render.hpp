#ifndef COFORCE_RENDER_HPP
#define COFORCE_RENDER_HPP

#include <json.hpp>

#include "coforce/parser.hpp"
#include "coforce/proofs.hpp"

namespace coforce {

using Json = nlohmann::ordered_json;

enum class OutputFormat { Text, Structured };

// Terms, atoms and formulas serialize as grammar strings; everything above
// them as objects with stable key order.
Json to_json(const Condition& c);
Json to_json(const Morphism& m);
Json to_json(const CoverDerivation& d);
Json to_json(const ForcingWitness& w);
Json to_json(const Countermodel& cm);
Json to_json(const Verdict& v);
Json to_json(const Sequent& s);
Json to_json(const ProofTree& p);

Condition condition_from_json(const Json& j, const Theory& t);
Morphism morphism_from_json(const Json& j, const Theory& t);
CoverDerivation derivation_from_json(const Json& j, const Theory& t);
ForcingWitness witness_from_json(const Json& j, const Theory& t);
Sequent sequent_from_json(const Json& j, const Theory& t);
ProofTree proof_from_json(const Json& j, const Theory& t);

// Human-readable renderings (deterministic).
std::string render_verdict_text(const Verdict& v);
std::string render_witness_text(const ForcingWitness& w, int indent = 0);
std::string render_countermodel_text(const Countermodel& cm, int indent = 0);

}  // namespace coforce

#endif
