#include "sievecalc/cli.hpp"

#include <fstream>
#include <functional>
#include <sstream>

#include <CLI11.hpp>

#include "sievecalc/errors.hpp"
#include "sievecalc/json_io.hpp"
#include "sievecalc/localop.hpp"
#include "sievecalc/proofsys.hpp"
#include "sievecalc/selftest.hpp"
#include "sievecalc/subtopos.hpp"

namespace sievecalc::cli {

namespace {

// Document-valued arguments accept inline JSON (anything starting with '{'
// or '[') or a file path.
std::string load_text(const std::string& value) {
    std::size_t first = value.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && (value[first] == '{' || value[first] == '['))
        return value;
    std::ifstream in(value, std::ios::binary);
    if (!in) throw DomainError("cannot open file", value);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

Json load_doc(const std::string& value) { return parse_json_text(load_text(value)); }

struct CategoryArgs {
    std::string file;
    std::string fixture;

    FinCat resolve() const {
        if (!fixture.empty()) return builtin(fixture);
        if (file.empty()) throw DomainError("no category given (use --category or --builtin)");
        return load_category(load_text(file));
    }
};

void add_category_options(CLI::App* cmd, CategoryArgs& args) {
    auto* file = cmd->add_option("--category", args.file, "category file or inline JSON");
    auto* name = cmd->add_option("--builtin", args.fixture, "fixture name (C1 C2 D2 M2 SPAN)");
    file->excludes(name);
}

// "bottom" and "top" are accepted wherever a topology document is expected.
Topology load_topology(const Site& site, const std::string& value) {
    if (value == "bottom") return bottom(site);
    if (value == "top") return top(site);
    return parse_topology(site, load_doc(value));
}

void emit(std::ostream& out, const Json& doc) { out << doc.dump() << "\n"; }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"finite-site calculator: sieves, Grothendieck topologies and their "
                 "subtopos algebra"};
    app.require_subcommand(1);

    std::size_t guard_bound = Guard{}.max_total_sieves;
    app.add_option("--guard", guard_bound,
                   "largest total sieve count enumeration will attempt");

    app.fallthrough();

    CategoryArgs cat_args;
    std::string j_arg, j2_arg, jp_arg, sieve_arg, ideal_arg, family_arg, axioms_arg,
        target_arg, derivation_arg, format_arg = "json";
    std::uint64_t seed = 1;

    // Every subcommand sets `action` to run after parsing; actions that
    // report a negative result without erroring set `exit_code`.
    std::function<void(std::ostream&)> action;
    int exit_code = 0;

    auto add = [&](const char* name, const char* description) {
        CLI::App* cmd = app.add_subcommand(name, description);
        add_category_options(cmd, cat_args);
        return cmd;
    };

    {
        CLI::App* cmd = add("validate", "check the category laws and report violations");
        cmd->callback([&] {
            action = [&](std::ostream& os) {
                std::vector<Violation> report;
                if (!cat_args.fixture.empty())
                    report = builtin(cat_args.fixture).validate();
                else if (!cat_args.file.empty())
                    report = FinCat::assemble(parse_cat_spec(load_doc(cat_args.file))).validate();
                else
                    throw DomainError("no category given (use --category or --builtin)");
                emit(os, report_doc(report));
                if (!report.empty()) exit_code = 1;
            };
        });
    }
    {
        CLI::App* cmd = add("sieves", "list every sieve on every object");
        cmd->callback([&] {
            action = [&](std::ostream& os) {
                Site site(cat_args.resolve(), Guard{guard_bound});
                Json doc = Json::object();
                for (ObjIx c = 0; c < site.cat().object_count(); ++c) {
                    Json list = Json::array();
                    for (std::uint64_t mask : canonical_masks(site.sieves_on(c))) {
                        Json members = Json::array();
                        for (ArrIx f : sieve_members(site.cat(), Sieve{c, mask}))
                            members.push_back(site.cat().arrow_name(f));
                        list.push_back(members);
                    }
                    doc[site.cat().object_name(c)] = list;
                }
                emit(os, Json{{"sieves", doc}});
            };
        });
    }
    {
        CLI::App* cmd = add("topologies", "enumerate all Grothendieck topologies");
        cmd->callback([&] {
            action = [&](std::ostream& os) {
                Site site(cat_args.resolve(), Guard{guard_bound});
                Json list = Json::array();
                for (const Topology& j : enumerate_topologies(site))
                    list.push_back(topology_doc(j));
                emit(os, list);
            };
        });
    }
    {
        CLI::App* cmd = add("lattice", "export the topology lattice");
        cmd->add_option("--format", format_arg, "json or dot")->check(CLI::IsMember({"json", "dot"}));
        cmd->callback([&] {
            action = [&](std::ostream& os) {
                Site site(cat_args.resolve(), Guard{guard_bound});
                std::vector<Topology> lattice = enumerate_topologies(site);
                if (format_arg == "dot")
                    os << lattice_dot(lattice);
                else
                    emit(os, lattice_doc(lattice));
            };
        });
    }
    {
        CLI::App* cmd = add("generate", "smallest topology covering a family of sieves");
        cmd->add_option("--family", family_arg, "sieve family document")->required();
        cmd->callback([&] {
            action = [&](std::ostream& os) {
                Site site(cat_args.resolve(), Guard{guard_bound});
                emit(os, topology_doc(generate_topology(parse_family(site, load_doc(family_arg)))));
            };
        });
    }

    auto binary_op = [&](const char* name, const char* description,
                         Topology (*op)(const Topology&, const Topology&)) {
        CLI::App* cmd = add(name, description);
        cmd->add_option("--j1", j_arg, "first topology")->required();
        cmd->add_option("--j2", j2_arg, "second topology")->required();
        cmd->callback([&, op] {
            action = [&, op](std::ostream& os) {
                Site site(cat_args.resolve(), Guard{guard_bound});
                emit(os, topology_doc(
                             op(load_topology(site, j_arg), load_topology(site, j2_arg))));
            };
        });
    };
    binary_op("meet", "intersection of two topologies", meet);
    binary_op("join", "smallest topology above two topologies", join);
    binary_op("implies", "Heyting implication of two topologies", implication);

    {
        CLI::App* cmd = add("neg", "pseudocomplement of a topology");
        cmd->add_option("--j", j_arg, "topology")->required();
        cmd->callback([&] {
            action = [&](std::ostream& os) {
                Site site(cat_args.resolve(), Guard{guard_bound});
                emit(os, topology_doc(negation(load_topology(site, j_arg))));
            };
        });
    }
    {
        CLI::App* cmd = add("closure", "closure of a sieve under a topology");
        cmd->add_option("--j", j_arg, "topology")->required();
        cmd->add_option("--sieve", sieve_arg, "sieve document")->required();
        cmd->callback([&] {
            action = [&](std::ostream& os) {
                Site site(cat_args.resolve(), Guard{guard_bound});
                Topology j = load_topology(site, j_arg);
                Sieve s = parse_sieve(site.cat(), load_doc(sieve_arg));
                emit(os, sieve_doc(site.cat(), sieve_closure(s, j)));
            };
        });
    }

    auto ideal_op = [&](const char* name, const char* description,
                        Topology (*op)(const Topology&, const JIdeal&)) {
        CLI::App* cmd = add(name, description);
        cmd->add_option("--j", j_arg, "base topology")->required();
        cmd->add_option("--ideal", ideal_arg, "ideal document")->required();
        cmd->callback([&, op] {
            action = [&, op](std::ostream& os) {
                Site site(cat_args.resolve(), Guard{guard_bound});
                Topology j = load_topology(site, j_arg);
                JIdeal u = make_j_ideal(j, parse_ideal(site.cat(), load_doc(ideal_arg)));
                emit(os, topology_doc(op(j, u)));
            };
        });
    };
    ideal_op("open", "open subtopos topology of a J-ideal", open_topology);
    ideal_op("closed", "closed subtopos topology of a J-ideal", closed_topology);
    ideal_op("qc", "quasi-closed subtopos topology of a J-ideal", quasiclosed_topology);

    {
        CLI::App* cmd = add("booleanize", "quasi-closed topology at the zero ideal");
        cmd->add_option("--j", j_arg, "topology")->required();
        cmd->callback([&] {
            action = [&](std::ostream& os) {
                Site site(cat_args.resolve(), Guard{guard_bound});
                emit(os, topology_doc(booleanization(load_topology(site, j_arg))));
            };
        });
    }
    {
        CLI::App* cmd = add("factor", "middle topology of the dense-closed factorization");
        cmd->add_option("--j", j_arg, "base topology")->required();
        cmd->add_option("--jp", jp_arg, "larger topology")->required();
        cmd->callback([&] {
            action = [&](std::ostream& os) {
                Site site(cat_args.resolve(), Guard{guard_bound});
                emit(os, topology_doc(dense_closed_factorization(load_topology(site, jp_arg),
                                                                 load_topology(site, j_arg))));
            };
        });
    }

    auto predicate_op = [&](const char* name, const char* alias, const char* description,
                            bool (*op)(const Topology&, const Topology&)) {
        CLI::App* cmd = add(name, description);
        cmd->alias(alias);
        cmd->add_option("--j", j_arg, "base topology")->required();
        cmd->add_option("--jp", jp_arg, "larger topology")->required();
        cmd->callback([&, op] {
            action = [&, op](std::ostream& os) {
                Site site(cat_args.resolve(), Guard{guard_bound});
                emit(os, Json{{"result", op(load_topology(site, jp_arg),
                                            load_topology(site, j_arg))}});
            };
        });
    };
    predicate_op("dense", "dense?", "is the larger topology dense over the base", is_dense);
    predicate_op("skeletal", "skeletal?", "is the inclusion of the larger topology skeletal",
                 is_skeletal);

    {
        CLI::App* cmd = add("atoms", "atoms of the subtopos lattice above a topology");
        cmd->add_option("--j", j_arg, "base topology")->required();
        cmd->callback([&] {
            action = [&](std::ostream& os) {
                Site site(cat_args.resolve(), Guard{guard_bound});
                Json list = Json::array();
                for (const Topology& k : atoms(load_topology(site, j_arg)))
                    list.push_back(topology_doc(k));
                emit(os, list);
            };
        });
    }
    {
        CLI::App* cmd = add("ideals", "downward-closed object sets, optionally J-closed");
        cmd->add_option("--j", j_arg, "restrict to J-ideals of this topology");
        cmd->callback([&] {
            action = [&](std::ostream& os) {
                Site site(cat_args.resolve(), Guard{guard_bound});
                Json list = Json::array();
                if (j_arg.empty()) {
                    for (const Ideal& u : ideals(site.cat()))
                        list.push_back(ideal_doc(site.cat(), u));
                } else {
                    Topology j = load_topology(site, j_arg);
                    for (const JIdeal& u : j_ideals(j))
                        list.push_back(ideal_doc(site.cat(), u.ideal));
                }
                emit(os, list);
            };
        });
    }
    {
        CLI::App* cmd = add("prove", "derive a sieve from axioms, or certify failure");
        cmd->add_option("--axioms", axioms_arg, "axiom family document")->required();
        cmd->add_option("--target", target_arg, "target sieve document")->required();
        cmd->callback([&] {
            action = [&](std::ostream& os) {
                Site site(cat_args.resolve(), Guard{guard_bound});
                AxiomFamily axioms = parse_family(site, load_doc(axioms_arg));
                Sieve target = parse_sieve(site.cat(), load_doc(target_arg));
                ProveResult proof = prove(target, axioms);
                if (proof.ok())
                    emit(os, derivation_doc(site.cat(), *proof.derivation));
                else
                    emit(os, Json{{"provable", false},
                                  {"saturated", topology_doc(proof.closure)}});
            };
        });
    }
    {
        CLI::App* cmd = add("check", "verify a derivation against axioms");
        cmd->add_option("--axioms", axioms_arg, "axiom family document")->required();
        cmd->add_option("--derivation", derivation_arg, "derivation document")->required();
        cmd->callback([&] {
            action = [&](std::ostream& os) {
                Site site(cat_args.resolve(), Guard{guard_bound});
                AxiomFamily axioms = parse_family(site, load_doc(axioms_arg));
                Derivation d = parse_derivation(site, load_doc(derivation_arg));
                emit(os, check_doc(check(d, axioms)));
            };
        });
    }
    {
        CLI::App* cmd = app.add_subcommand("selftest", "run the acceptance criteria");
        cmd->add_option("--seed", seed, "seed for the randomized sweeps");
        cmd->callback([&] {
            action = [&](std::ostream& os) {
                auto results = selftest::run_criteria(seed, Guard{guard_bound});
                os << selftest::format_results(results);
                if (!selftest::all_passed(results)) exit_code = 1;
            };
        });
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        action(out);
        return exit_code;
    } catch (const Error& e) {
        Json doc;
        doc["code"] = e.code_name();
        doc["message"] = e.what();
        if (!e.witness().empty()) doc["witness"] = e.witness();
        emit(out, doc);
        return 1;
    }
}

}  // namespace sievecalc::cli
