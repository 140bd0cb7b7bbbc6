#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "sievecalc/proofsys.hpp"
#include "sievecalc/subtopos.hpp"
#include "sievecalc/topology.hpp"

namespace sievecalc {

using Json = nlohmann::ordered_json;

// Parses JSON text, converting parser failures into ParseError with
// line:column coordinates.
Json parse_json_text(const std::string& text);

// Category files: {"objects":[...],
//                  "arrows":[{"name","dom","cod"},...],
//                  "compose":[[g,f,gf],...]}
// Identity arrows and identity compositions may be omitted.
CatSpec parse_cat_spec(const Json& doc);
FinCat load_category(const std::string& text);
Json category_doc(const FinCat& cat);

// {"on":"b","arrows":["1_b","f"]}, members in canonical order.
Sieve parse_sieve(const FinCat& cat, const Json& doc);
Json sieve_doc(const FinCat& cat, const Sieve& s);

// {"sieves":[<sieve>,...]}
SieveFamily parse_family(const Site& site, const Json& doc);
Json family_doc(const SieveFamily& family);

// {"covers":{"a":[["1_a"]],"b":[["1_b","f"],["f"]]}}
Topology parse_topology(const Site& site, const Json& doc);
Json topology_doc(const Topology& j);

// {"objects":["a"]}
Ideal parse_ideal(const FinCat& cat, const Json& doc);
Json ideal_doc(const FinCat& cat, const Ideal& u);

// Nested rule records with stable field order.
Derivation parse_derivation(const Site& site, const Json& doc);
Json derivation_doc(const FinCat& cat, const Derivation& d);

// Full-enumeration exports: nodes plus the ≤ matrix, and the covering
// relation as a DOT digraph.
Json lattice_doc(const std::vector<Topology>& lattice);
std::string lattice_dot(const std::vector<Topology>& lattice);

Json report_doc(const std::vector<Violation>& violations);
Json check_doc(const CheckResult& result);

}  // namespace sievecalc
