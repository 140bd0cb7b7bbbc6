#include "sievecalc/proofsys.hpp"

#include <algorithm>

#include "sievecalc/errors.hpp"

namespace sievecalc {

namespace {

std::uint64_t pull_mask(const FinCat& cat, ArrIx f, std::uint64_t mask) {
    const auto& pos = cat.pull_pos(f);
    std::uint64_t out = 0;
    for (std::size_t j = 0; j < pos.size(); ++j)
        if (mask >> pos[j] & 1) out |= std::uint64_t{1} << j;
    return out;
}

}  // namespace

Derivation Derivation::clone() const {
    Derivation out(rule, conclusion);
    out.arrow = arrow;
    if (premise) out.premise = std::make_unique<Derivation>(premise->clone());
    out.branches.reserve(branches.size());
    for (const auto& [f, d] : branches) out.branches.emplace_back(f, d.clone());
    return out;
}

int Derivation::depth() const {
    int d = 0;
    if (premise) d = std::max(d, premise->depth());
    for (const auto& [f, sub] : branches) d = std::max(d, sub.depth());
    return d + 1;
}

namespace {

CheckResult fail(std::string path, std::string reason) {
    return CheckResult{false, std::move(path), std::move(reason)};
}

std::string extend(const std::string& path, const std::string& step) {
    return path.empty() ? step : path + "." + step;
}

CheckResult check_node(const Derivation& d, const AxiomFamily& axioms,
                       const std::string& path) {
    const FinCat& cat = axioms.cat();
    const Sieve& c = d.conclusion;
    if (c.on < 0 || c.on >= cat.object_count())
        throw DomainError("derivation concludes a sieve on an unknown object", path);
    if (!axioms.site().has_sieve(c.on, c.mask))
        throw DomainError("derivation conclusion is not a sieve", path);

    switch (d.rule) {
        case Derivation::Rule::AxiomMaximal:
            if (c.mask != cat.full_mask(c.on))
                return fail(path, "conclusion is not a maximal sieve");
            return {};

        case Derivation::Rule::AxiomGiven:
            if (!axioms.contains(c.on, c.mask))
                return fail(path, "conclusion is not one of the given axioms");
            return {};

        case Derivation::Rule::Stability: {
            if (!d.premise) return fail(path, "stability node lacks a premise");
            if (d.arrow < 0 || d.arrow >= cat.arrow_count())
                throw DomainError("dangling arrow id in stability node", path);
            const Sieve& prem = d.premise->conclusion;
            if (cat.cod(d.arrow) != prem.on)
                return fail(path, "stability arrow does not land on the premise's object");
            if (cat.dom(d.arrow) != c.on ||
                pull_mask(cat, d.arrow, prem.mask) != c.mask)
                return fail(path, "conclusion is not the pullback of the premise");
            return check_node(*d.premise, axioms, extend(path, "premise"));
        }

        case Derivation::Rule::Transitivity: {
            if (!d.premise) return fail(path, "transitivity node lacks the Z-premise");
            const Sieve& z = d.premise->conclusion;
            if (z.on != c.on)
                return fail(path, "Z-premise lives on a different object");
            CheckResult zr = check_node(*d.premise, axioms, extend(path, "premise"));
            if (!zr.ok) return zr;

            const auto& incoming = cat.arrows_into(c.on);
            std::uint64_t seen = 0;
            for (const auto& [f, sub] : d.branches) {
                if (f < 0 || f >= cat.arrow_count())
                    throw DomainError("dangling arrow id in transitivity branch", path);
                if (cat.cod(f) != c.on || !(z.mask >> cat.local_pos(f) & 1))
                    return fail(extend(path, "branch[" + cat.arrow_name(f) + "]"),
                                "branch arrow is not a member of Z");
                seen |= std::uint64_t{1} << cat.local_pos(f);
                Sieve expected{cat.dom(f), pull_mask(cat, f, c.mask)};
                if (!(sub.conclusion == expected))
                    return fail(extend(path, "branch[" + cat.arrow_name(f) + "]"),
                                "branch does not conclude the member's pullback of the "
                                "conclusion");
                CheckResult br =
                    check_node(sub, axioms, extend(path, "branch[" + cat.arrow_name(f) + "]"));
                if (!br.ok) return br;
            }
            if (seen != z.mask) {
                std::string missing;
                for_each_bit(z.mask & ~seen, [&](int pos) {
                    if (missing.empty()) missing = cat.arrow_name(incoming[pos]);
                });
                return fail(extend(path, "branch[" + missing + "]"),
                            "missing branch for a member of Z");
            }
            return {};
        }
    }
    return fail(path, "unknown rule");
}

}  // namespace

CheckResult check(const Derivation& d, const AxiomFamily& axioms) {
    return check_node(d, axioms, "");
}

Saturation::Saturation(const AxiomFamily& axioms) : site_(&axioms.site()) {
    const FinCat& cat = axioms.cat();
    const Site& site = *site_;

    // depth 0: maximal sieves, then the given axioms
    for (ObjIx c = 0; c < cat.object_count(); ++c)
        prov_.emplace(std::make_pair(c, cat.full_mask(c)),
                      Prov{Derivation::Rule::AxiomMaximal});
    for (ObjIx c = 0; c < cat.object_count(); ++c)
        for (std::uint64_t mask : axioms.at(c))
            prov_.emplace(std::make_pair(c, mask), Prov{Derivation::Rule::AxiomGiven});

    // Breadth-first rounds: every rule whose premises are already derived
    // fires before anything it produced is used again, keeping recorded
    // derivations at minimal depth.
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<std::pair<std::pair<ObjIx, std::uint64_t>, Prov>> additions;
        auto known = [&](ObjIx c, std::uint64_t mask) {
            return prov_.count(std::make_pair(c, mask)) > 0;
        };

        for (ObjIx c = 0; c < cat.object_count(); ++c) {
            const auto& incoming = cat.arrows_into(c);

            // sieves derived at c so far, in canonical order (tie-breaking)
            std::vector<std::uint64_t> derived_here;
            for (const auto& [key, prov] : prov_)
                if (key.first == c) derived_here.push_back(key.second);
            std::sort(derived_here.begin(), derived_here.end(), sieve_mask_less);

            // stability applications from sieves derived at c
            for (std::uint64_t s : derived_here)
                for (ArrIx f : incoming) {
                    std::uint64_t pulled = pull_mask(cat, f, s);
                    if (!known(cat.dom(f), pulled))
                        additions.push_back(
                            {{cat.dom(f), pulled}, Prov{Derivation::Rule::Stability, f, s}});
                }

            // transitivity: any sieve locally covered by a derived Z
            for (std::uint64_t r : site.sieves_on(c)) {
                if (known(c, r)) continue;
                for (std::uint64_t z : derived_here) {
                    bool all_premises = true;
                    for_each_bit(z, [&](int pos) {
                        ArrIx f = incoming[pos];
                        if (!known(cat.dom(f), pull_mask(cat, f, r))) all_premises = false;
                    });
                    if (all_premises) {
                        additions.push_back(
                            {{c, r}, Prov{Derivation::Rule::Transitivity, -1, z}});
                        break;
                    }
                }
            }
        }

        for (auto& [key, prov] : additions)
            if (prov_.emplace(key, prov).second) grew = true;
    }

    SieveFamily family(site);
    for (const auto& [key, prov] : prov_) family.insert(key.first, key.second);
    topology_ = Topology::checked(std::move(family));
}

bool Saturation::derived(ObjIx c, std::uint64_t mask) const {
    return prov_.count(std::make_pair(c, mask)) > 0;
}

Derivation Saturation::reconstruct(const Sieve& s) const {
    auto it = prov_.find(std::make_pair(s.on, s.mask));
    if (it == prov_.end())
        throw DomainError("sieve was not derived", std::to_string(s.on));
    const FinCat& cat = site_->cat();
    const Prov& prov = it->second;

    Derivation node(prov.rule, s);
    switch (prov.rule) {
        case Derivation::Rule::AxiomMaximal:
        case Derivation::Rule::AxiomGiven:
            break;
        case Derivation::Rule::Stability: {
            Sieve premise{cat.cod(prov.arrow), prov.premise_mask};
            node.arrow = prov.arrow;
            node.premise = std::make_unique<Derivation>(reconstruct(premise));
            break;
        }
        case Derivation::Rule::Transitivity: {
            Sieve z{s.on, prov.premise_mask};
            node.premise = std::make_unique<Derivation>(reconstruct(z));
            const auto& incoming = cat.arrows_into(s.on);
            for_each_bit(z.mask, [&](int pos) {
                ArrIx f = incoming[pos];
                Sieve pulled{cat.dom(f), pull_mask(cat, f, s.mask)};
                node.branches.emplace_back(f, reconstruct(pulled));
            });
            break;
        }
    }
    return node;
}

Saturation saturate(const AxiomFamily& axioms) { return Saturation(axioms); }

ProveResult prove(const Sieve& target, const AxiomFamily& axioms) {
    if (target.on < 0 || target.on >= axioms.cat().object_count())
        throw DomainError("target sieve on unknown object", std::to_string(target.on));
    if (!axioms.site().has_sieve(target.on, target.mask))
        throw DomainError("target is not a sieve on its object");

    Saturation sat(axioms);
    if (!sat.derived(target.on, target.mask))
        return ProveResult{std::nullopt, sat.topology()};
    return ProveResult{sat.reconstruct(target), sat.topology()};
}

Topology generate_topology_oracle(const SieveFamily& f) {
    return saturate(f).topology();
}

}  // namespace sievecalc
