#include "sievecalc/json_io.hpp"

#include <sstream>

#include "sievecalc/errors.hpp"

namespace sievecalc {

namespace {

std::string offset_to_line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return std::to_string(line) + ":" + std::to_string(col);
}

const Json& expect(const Json& doc, const char* key, const char* context) {
    auto it = doc.find(key);
    if (it == doc.end())
        throw ParseError(std::string(context) + " is missing key '" + key + "'");
    return *it;
}

std::string expect_string(const Json& value, const char* context) {
    if (!value.is_string())
        throw ParseError(std::string(context) + " must be a string");
    return value.get<std::string>();
}

ObjIx resolve_object(const FinCat& cat, const std::string& name) {
    auto c = cat.object(name);
    if (!c) throw ParseError("unknown object", name);
    return *c;
}

ArrIx resolve_arrow(const FinCat& cat, const std::string& name) {
    auto f = cat.arrow(name);
    if (!f) throw ParseError("unknown arrow", name);
    return *f;
}

}  // namespace

Json parse_json_text(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("invalid JSON at " + offset_to_line_col(text, e.byte) + ": " +
                         e.what());
    }
}

CatSpec parse_cat_spec(const Json& doc) {
    if (!doc.is_object()) throw ParseError("category document must be a JSON object");
    CatSpec spec;

    for (const Json& name : expect(doc, "objects", "category document"))
        spec.objects.push_back(expect_string(name, "object name"));

    if (doc.contains("arrows"))
        for (const Json& arrow : doc["arrows"]) {
            if (!arrow.is_object()) throw ParseError("arrow entries must be objects");
            spec.arrows.push_back({expect_string(expect(arrow, "name", "arrow"), "arrow name"),
                                   expect_string(expect(arrow, "dom", "arrow"), "arrow dom"),
                                   expect_string(expect(arrow, "cod", "arrow"), "arrow cod")});
        }

    if (doc.contains("compose"))
        for (const Json& triple : doc["compose"]) {
            if (!triple.is_array() || triple.size() != 3)
                throw ParseError("compose entries must be [g, f, gf] triples");
            spec.compose.push_back({expect_string(triple[0], "compose entry"),
                                    expect_string(triple[1], "compose entry"),
                                    expect_string(triple[2], "compose entry")});
        }

    return spec;
}

FinCat load_category(const std::string& text) {
    return FinCat::checked(parse_cat_spec(parse_json_text(text)));
}

Json category_doc(const FinCat& cat) {
    Json doc;
    doc["objects"] = Json::array();
    for (ObjIx c = 0; c < cat.object_count(); ++c) doc["objects"].push_back(cat.object_name(c));
    doc["arrows"] = Json::array();
    for (ArrIx f = 0; f < cat.arrow_count(); ++f) {
        if (cat.is_identity(f)) continue;
        doc["arrows"].push_back({{"name", cat.arrow_name(f)},
                                 {"dom", cat.object_name(cat.dom(f))},
                                 {"cod", cat.object_name(cat.cod(f))}});
    }
    doc["compose"] = Json::array();
    for (ArrIx g = 0; g < cat.arrow_count(); ++g)
        for (ArrIx f = 0; f < cat.arrow_count(); ++f) {
            if (!cat.composable(g, f) || cat.is_identity(g) || cat.is_identity(f)) continue;
            doc["compose"].push_back(
                {cat.arrow_name(g), cat.arrow_name(f), cat.arrow_name(cat.compose(g, f))});
        }
    return doc;
}

Sieve parse_sieve(const FinCat& cat, const Json& doc) {
    if (!doc.is_object()) throw ParseError("sieve document must be a JSON object");
    ObjIx on = resolve_object(cat, expect_string(expect(doc, "on", "sieve"), "sieve object"));
    std::vector<ArrIx> members;
    for (const Json& name : expect(doc, "arrows", "sieve"))
        members.push_back(resolve_arrow(cat, expect_string(name, "sieve member")));
    return make_sieve(cat, on, members);
}

Json sieve_doc(const FinCat& cat, const Sieve& s) {
    Json doc;
    doc["on"] = cat.object_name(s.on);
    doc["arrows"] = Json::array();
    for (ArrIx f : sieve_members(cat, s)) doc["arrows"].push_back(cat.arrow_name(f));
    return doc;
}

SieveFamily parse_family(const Site& site, const Json& doc) {
    if (!doc.is_object()) throw ParseError("sieve family document must be a JSON object");
    std::vector<Sieve> sieves;
    for (const Json& entry : expect(doc, "sieves", "sieve family"))
        sieves.push_back(parse_sieve(site.cat(), entry));
    return SieveFamily::from_sieves(site, sieves);
}

Json family_doc(const SieveFamily& family) {
    const FinCat& cat = family.cat();
    Json doc;
    doc["sieves"] = Json::array();
    for (ObjIx c = 0; c < cat.object_count(); ++c)
        for (std::uint64_t mask : canonical_masks(family.at(c)))
            doc["sieves"].push_back(sieve_doc(cat, Sieve{c, mask}));
    return doc;
}

Topology parse_topology(const Site& site, const Json& doc) {
    if (!doc.is_object()) throw ParseError("topology document must be a JSON object");
    const FinCat& cat = site.cat();
    SieveFamily family(site);
    const Json& covers = expect(doc, "covers", "topology document");
    for (const auto& [name, sieves] : covers.items()) {
        ObjIx c = resolve_object(cat, name);
        for (const Json& members : sieves) {
            std::vector<ArrIx> arrows;
            for (const Json& arrow : members)
                arrows.push_back(resolve_arrow(cat, expect_string(arrow, "sieve member")));
            family.insert(c, make_sieve(cat, c, arrows).mask);
        }
    }
    return Topology::checked(std::move(family));
}

Json topology_doc(const Topology& j) {
    const FinCat& cat = j.cat();
    Json covers = Json::object();
    for (ObjIx c = 0; c < cat.object_count(); ++c) {
        Json list = Json::array();
        for (std::uint64_t mask : canonical_masks(j.covers(c))) {
            Json members = Json::array();
            for (ArrIx f : sieve_members(cat, Sieve{c, mask}))
                members.push_back(cat.arrow_name(f));
            list.push_back(members);
        }
        covers[cat.object_name(c)] = list;
    }
    return Json{{"covers", covers}};
}

Ideal parse_ideal(const FinCat& cat, const Json& doc) {
    if (!doc.is_object()) throw ParseError("ideal document must be a JSON object");
    std::vector<ObjIx> objects;
    for (const Json& name : expect(doc, "objects", "ideal"))
        objects.push_back(resolve_object(cat, expect_string(name, "ideal member")));
    return make_ideal(cat, std::move(objects));
}

Json ideal_doc(const FinCat& cat, const Ideal& u) {
    Json doc;
    doc["objects"] = Json::array();
    for (ObjIx c : u.objects) doc["objects"].push_back(cat.object_name(c));
    return doc;
}

Derivation parse_derivation(const Site& site, const Json& doc) {
    if (!doc.is_object()) throw ParseError("derivation document must be a JSON object");
    const FinCat& cat = site.cat();
    std::string rule = expect_string(expect(doc, "rule", "derivation"), "rule");
    Sieve conclusion = parse_sieve(cat, expect(doc, "conclusion", "derivation"));

    Derivation node;
    node.conclusion = conclusion;
    if (rule == "AxiomMaximal") {
        node.rule = Derivation::Rule::AxiomMaximal;
    } else if (rule == "AxiomGiven") {
        node.rule = Derivation::Rule::AxiomGiven;
    } else if (rule == "Stability") {
        node.rule = Derivation::Rule::Stability;
        node.arrow =
            resolve_arrow(cat, expect_string(expect(doc, "arrow", "stability node"), "arrow"));
        node.premise = std::make_unique<Derivation>(
            parse_derivation(site, expect(doc, "premise", "stability node")));
    } else if (rule == "Transitivity") {
        node.rule = Derivation::Rule::Transitivity;
        node.premise = std::make_unique<Derivation>(
            parse_derivation(site, expect(doc, "z_premise", "transitivity node")));
        for (const Json& branch : expect(doc, "branches", "transitivity node")) {
            ArrIx f = resolve_arrow(
                cat, expect_string(expect(branch, "arrow", "branch"), "branch arrow"));
            node.branches.emplace_back(
                f, parse_derivation(site, expect(branch, "derivation", "branch")));
        }
    } else {
        throw ParseError("unknown derivation rule", rule);
    }
    return node;
}

Json derivation_doc(const FinCat& cat, const Derivation& d) {
    Json doc;
    switch (d.rule) {
        case Derivation::Rule::AxiomMaximal:
            doc["rule"] = "AxiomMaximal";
            doc["conclusion"] = sieve_doc(cat, d.conclusion);
            break;
        case Derivation::Rule::AxiomGiven:
            doc["rule"] = "AxiomGiven";
            doc["conclusion"] = sieve_doc(cat, d.conclusion);
            break;
        case Derivation::Rule::Stability:
            doc["rule"] = "Stability";
            doc["conclusion"] = sieve_doc(cat, d.conclusion);
            doc["arrow"] = cat.arrow_name(d.arrow);
            doc["premise"] = derivation_doc(cat, *d.premise);
            break;
        case Derivation::Rule::Transitivity: {
            doc["rule"] = "Transitivity";
            doc["conclusion"] = sieve_doc(cat, d.conclusion);
            doc["z_premise"] = derivation_doc(cat, *d.premise);
            Json branches = Json::array();
            for (const auto& [f, sub] : d.branches)
                branches.push_back(
                    {{"arrow", cat.arrow_name(f)}, {"derivation", derivation_doc(cat, sub)}});
            doc["branches"] = branches;
            break;
        }
    }
    return doc;
}

Json lattice_doc(const std::vector<Topology>& lattice) {
    Json doc;
    doc["nodes"] = Json::array();
    for (const Topology& j : lattice) doc["nodes"].push_back(topology_doc(j));
    Json matrix = Json::array();
    for (const Topology& a : lattice) {
        Json row = Json::array();
        for (const Topology& b : lattice) row.push_back(leq(a, b));
        matrix.push_back(row);
    }
    doc["leq"] = matrix;
    return doc;
}

std::string lattice_dot(const std::vector<Topology>& lattice) {
    std::ostringstream out;
    out << "digraph lattice {\n  rankdir=BT;\n";
    for (std::size_t i = 0; i < lattice.size(); ++i) {
        out << "  J" << i << " [label=\"J" << i << " (";
        const Topology& j = lattice[i];
        for (ObjIx c = 0; c < j.cat().object_count(); ++c)
            out << (c ? "," : "") << j.covers(c).size();
        out << ")\"];\n";
    }
    for (auto [i, j] : hasse(lattice)) out << "  J" << i << " -> J" << j << ";\n";
    out << "}\n";
    return out.str();
}

Json report_doc(const std::vector<Violation>& violations) {
    Json doc;
    doc["valid"] = violations.empty();
    doc["violations"] = Json::array();
    for (const Violation& v : violations)
        doc["violations"].push_back({{"law", v.law}, {"witness", v.witness}});
    return doc;
}

Json check_doc(const CheckResult& result) {
    Json doc;
    doc["valid"] = result.ok;
    if (!result.ok) {
        doc["path"] = result.path;
        doc["reason"] = result.reason;
    }
    return doc;
}

}  // namespace sievecalc
