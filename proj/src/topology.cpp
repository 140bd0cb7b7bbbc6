#include "sievecalc/topology.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

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

// Direct image along f : d -> c of a mask on d, as a mask on c.
std::uint64_t push_mask(const FinCat& cat, ArrIx f, std::uint64_t mask) {
    const auto& pos = cat.pull_pos(f);
    std::uint64_t out = 0;
    for_each_bit(mask, [&](int j) { out |= std::uint64_t{1} << pos[j]; });
    return out;
}

std::string fmt_sieve(const FinCat& cat, ObjIx c, std::uint64_t mask) {
    const auto& incoming = cat.arrows_into(c);
    std::string out = "{";
    bool first = true;
    for_each_bit(mask, [&](int pos) {
        if (!first) out += ",";
        out += cat.arrow_name(incoming[pos]);
        first = false;
    });
    return out + "}";
}

std::string fmt_at(const FinCat& cat, ObjIx c, std::uint64_t mask) {
    return "object " + cat.object_name(c) + ", sieve " + fmt_sieve(cat, c, mask);
}

void check_same_site(const Site& a, const Site& b) {
    if (&a != &b)
        throw DomainError("operands live on different sites (category mismatch)");
}

}  // namespace

SieveFamily::SieveFamily(const Site& site)
    : site_(&site), sel_(site.cat().object_count()) {}

SieveFamily SieveFamily::from_sieves(const Site& site, std::span<const Sieve> sieves) {
    SieveFamily family(site);
    for (const Sieve& s : sieves) {
        if (s.on < 0 || s.on >= site.cat().object_count())
            throw DomainError("sieve on unknown object", std::to_string(s.on));
        if (!site.has_sieve(s.on, s.mask))
            throw DomainError("not a sieve on its object",
                              fmt_at(site.cat(), s.on, s.mask));
        family.insert(s.on, s.mask);
    }
    return family;
}

bool SieveFamily::contains(ObjIx c, std::uint64_t mask) const {
    const auto& masks = sel_[c];
    return std::binary_search(masks.begin(), masks.end(), mask);
}

void SieveFamily::insert(ObjIx c, std::uint64_t mask) {
    auto& masks = sel_[c];
    auto it = std::lower_bound(masks.begin(), masks.end(), mask);
    if (it == masks.end() || *it != mask) masks.insert(it, mask);
}

bool SieveFamily::is_pullback_stable() const {
    const FinCat& cat = site_->cat();
    for (ObjIx c = 0; c < cat.object_count(); ++c)
        for (std::uint64_t mask : sel_[c])
            for (ArrIx f : cat.arrows_into(c))
                if (!contains(cat.dom(f), pull_mask(cat, f, mask))) return false;
    return true;
}

std::vector<std::uint64_t> canonical_masks(std::span<const std::uint64_t> masks) {
    std::vector<std::uint64_t> out(masks.begin(), masks.end());
    std::sort(out.begin(), out.end(), sieve_mask_less);
    return out;
}

TopologyCheck check_covering_axioms(const SieveFamily& family) {
    const FinCat& cat = family.cat();
    const Site& site = family.site();

    for (ObjIx c = 0; c < cat.object_count(); ++c)
        if (!family.contains(c, cat.full_mask(c)))
            return {false, "maximality", "maximal sieve missing at object " + cat.object_name(c)};

    for (ObjIx c = 0; c < cat.object_count(); ++c)
        for (std::uint64_t s : canonical_masks(family.at(c)))
            for (ArrIx f : cat.arrows_into(c))
                if (!family.contains(cat.dom(f), pull_mask(cat, f, s)))
                    return {false, "stability",
                            fmt_at(cat, c, s) + " pulled back along " + cat.arrow_name(f)};

    for (ObjIx c = 0; c < cat.object_count(); ++c) {
        const auto& incoming = cat.arrows_into(c);
        for (std::uint64_t s : canonical_masks(family.at(c)))
            for (std::uint64_t r : site.sieves_on(c)) {
                if (family.contains(c, r)) continue;
                bool locally_covering = true;
                for_each_bit(s, [&](int pos) {
                    ArrIx f = incoming[pos];
                    if (!family.contains(cat.dom(f), pull_mask(cat, f, r)))
                        locally_covering = false;
                });
                if (locally_covering)
                    return {false, "transitivity",
                            fmt_at(cat, c, r) + " locally covered by " + fmt_sieve(cat, c, s)};
            }
    }

    return {};
}

bool check_covering_axioms_alt(const SieveFamily& family) {
    const FinCat& cat = family.cat();
    const Site& site = family.site();

    // (i) maximal sieves present
    for (ObjIx c = 0; c < cat.object_count(); ++c)
        if (!family.contains(c, cat.full_mask(c))) return false;

    // (ii) upward closure per object
    for (ObjIx c = 0; c < cat.object_count(); ++c)
        for (std::uint64_t t : family.at(c))
            for (std::uint64_t s : site.sieves_on(c))
                if ((t & ~s) == 0 && !family.contains(c, s)) return false;

    // (iii) every pullback of a covering sieve refines some covering sieve
    for (ObjIx c = 0; c < cat.object_count(); ++c)
        for (std::uint64_t r : family.at(c))
            for (ArrIx g : cat.arrows_into(c)) {
                std::uint64_t pulled = pull_mask(cat, g, r);
                bool refined = false;
                for (std::uint64_t s : family.at(cat.dom(g)))
                    if ((s & ~pulled) == 0) {
                        refined = true;
                        break;
                    }
                if (!refined) return false;
            }

    // (iv) closure under composites: for covering S and any assignment of
    // covering sieves to its members, the composite covers. The composite is
    // the union of the direct images, so walk the achievable partial unions
    // instead of the exponentially many assignments.
    for (ObjIx c = 0; c < cat.object_count(); ++c) {
        const auto& incoming = cat.arrows_into(c);
        for (std::uint64_t s : family.at(c)) {
            std::unordered_set<std::uint64_t> partial{0};
            for_each_bit(s, [&](int pos) {
                ArrIx f = incoming[pos];
                std::unordered_set<std::uint64_t> images;
                for (std::uint64_t t : family.at(cat.dom(f)))
                    images.insert(push_mask(cat, f, t));
                std::unordered_set<std::uint64_t> next;
                for (std::uint64_t p : partial)
                    for (std::uint64_t img : images) next.insert(p | img);
                partial = std::move(next);
            });
            for (std::uint64_t composite : partial)
                if (!family.contains(c, composite)) return false;
        }
    }

    return true;
}

TopologyCheck is_topology(const SieveFamily& family) {
    TopologyCheck primary = check_covering_axioms(family);
    bool alt = check_covering_axioms_alt(family);
    if (primary.ok != alt)
        throw std::logic_error("axiom checkers disagree on " +
                               std::string(primary.ok ? "accepting" : "rejecting") +
                               " a family; this is a bug");
    return primary;
}

Topology Topology::checked(SieveFamily family) {
    TopologyCheck check = is_topology(family);
    if (!check.ok)
        throw DomainError("not a Grothendieck topology (" + check.axiom + ")", check.witness);
    return Topology(std::move(family));
}

Topology bottom(const Site& site) {
    SieveFamily family(site);
    for (ObjIx c = 0; c < site.cat().object_count(); ++c)
        family.insert(c, site.cat().full_mask(c));
    return Topology::checked(std::move(family));
}

Topology top(const Site& site) {
    SieveFamily family(site);
    for (ObjIx c = 0; c < site.cat().object_count(); ++c)
        for (std::uint64_t mask : site.sieves_on(c)) family.insert(c, mask);
    return Topology::checked(std::move(family));
}

bool leq(const Topology& j1, const Topology& j2) {
    check_same_site(j1.site(), j2.site());
    for (ObjIx c = 0; c < j1.cat().object_count(); ++c)
        if (!std::includes(j2.covers(c).begin(), j2.covers(c).end(), j1.covers(c).begin(),
                           j1.covers(c).end()))
            return false;
    return true;
}

Topology meet(const Topology& j1, const Topology& j2) {
    check_same_site(j1.site(), j2.site());
    SieveFamily family(j1.site());
    for (ObjIx c = 0; c < j1.cat().object_count(); ++c)
        for (std::uint64_t mask : j1.covers(c))
            if (j2.covering(c, mask)) family.insert(c, mask);
    return Topology::checked(std::move(family));
}

SieveFamily r_operator(const SieveFamily& d) {
    if (!d.is_pullback_stable())
        throw DomainError("family is not pullback-stable");
    const FinCat& cat = d.cat();
    const Site& site = d.site();

    SieveFamily out(site);
    for (ObjIx c = 0; c < cat.object_count(); ++c) {
        const auto& incoming = cat.arrows_into(c);
        for (std::uint64_t t : site.sieves_on(c)) {
            bool admitted = true;
            for (std::size_t i = 0; i < incoming.size() && admitted; ++i) {
                if (t >> i & 1) continue;  // f ∈ T satisfies the implication
                ArrIx f = incoming[i];
                std::uint64_t pulled = pull_mask(cat, f, t);
                for (std::uint64_t s : d.at(cat.dom(f)))
                    if ((s & ~pulled) == 0) {
                        admitted = false;
                        break;
                    }
            }
            if (admitted) out.insert(c, t);
        }
    }

    if (!out.is_pullback_stable())
        throw std::logic_error("r_operator produced a non-stable family; this is a bug");
    return out;
}

Topology l_operator(const SieveFamily& d) {
    if (!d.is_pullback_stable())
        throw DomainError("family is not pullback-stable");
    const FinCat& cat = d.cat();
    const Site& site = d.site();

    SieveFamily out(site);
    for (ObjIx c = 0; c < cat.object_count(); ++c) {
        const auto& incoming = cat.arrows_into(c);
        for (std::uint64_t s : site.sieves_on(c)) {
            bool admitted = true;
            for (ArrIx f : incoming) {
                ObjIx dm = cat.dom(f);
                std::uint64_t pulled = pull_mask(cat, f, s);
                std::uint64_t full = cat.full_mask(dm);
                for (std::uint64_t z : d.at(dm))
                    if ((pulled & ~z) == 0 && z != full) {
                        admitted = false;
                        break;
                    }
                if (!admitted) break;
            }
            if (admitted) out.insert(c, s);
        }
    }

    return Topology::checked(std::move(out));
}

SieveFamily pullback_stabilize(const SieveFamily& f) {
    const FinCat& cat = f.cat();
    SieveFamily out(f.site());
    for (ObjIx c = 0; c < cat.object_count(); ++c)
        for (std::uint64_t mask : f.at(c))
            for (ArrIx g : cat.arrows_into(c))
                out.insert(cat.dom(g), pull_mask(cat, g, mask));

    if (!out.is_pullback_stable())
        throw std::logic_error("pullback_stabilize output is not stable; this is a bug");
    return out;
}

Topology generate_topology(const SieveFamily& f) {
    return l_operator(r_operator(pullback_stabilize(f)));
}

Topology join(const Topology& j1, const Topology& j2) {
    check_same_site(j1.site(), j2.site());
    SieveFamily both(j1.site());
    for (ObjIx c = 0; c < j1.cat().object_count(); ++c) {
        for (std::uint64_t mask : j1.covers(c)) both.insert(c, mask);
        for (std::uint64_t mask : j2.covers(c)) both.insert(c, mask);
    }
    return generate_topology(both);
}

namespace {

// Shared shape of implication and the direct pseudocomplement formula: S is
// admitted at c unless some pullback of S lands below a non-maximal
// obstruction sieve.
Topology obstruction_topology(const Site& site,
                              const std::vector<std::vector<std::uint64_t>>& obstructions) {
    const FinCat& cat = site.cat();
    SieveFamily out(site);
    for (ObjIx c = 0; c < cat.object_count(); ++c) {
        for (std::uint64_t s : site.sieves_on(c)) {
            bool admitted = true;
            for (ArrIx f : cat.arrows_into(c)) {
                std::uint64_t pulled = pull_mask(cat, f, s);
                for (std::uint64_t z : obstructions[cat.dom(f)])
                    if ((pulled & ~z) == 0) {
                        admitted = false;
                        break;
                    }
                if (!admitted) break;
            }
            if (admitted) out.insert(c, s);
        }
    }
    return Topology::checked(std::move(out));
}

}  // namespace

Topology implication(const Topology& j1, const Topology& j2) {
    check_same_site(j1.site(), j2.site());
    const FinCat& cat = j1.cat();

    std::vector<std::vector<std::uint64_t>> obstructions(cat.object_count());
    for (ObjIx d = 0; d < cat.object_count(); ++d)
        for (std::uint64_t z : j1.covers(d))
            if (z != cat.full_mask(d) && is_closed_sieve(Sieve{d, z}, j2))
                obstructions[d].push_back(z);

    return obstruction_topology(j1.site(), obstructions);
}

Topology negation(const Topology& j) {
    Topology via_implication = implication(j, bottom(j.site()));

    // Direct pseudocomplement formula, kept as a cross-check: only covering
    // sieves obstruct, with no closedness requirement.
    const FinCat& cat = j.cat();
    std::vector<std::vector<std::uint64_t>> obstructions(cat.object_count());
    for (ObjIx d = 0; d < cat.object_count(); ++d)
        for (std::uint64_t z : j.covers(d))
            if (z != cat.full_mask(d)) obstructions[d].push_back(z);
    Topology direct = obstruction_topology(j.site(), obstructions);

    if (!(direct == via_implication))
        throw std::logic_error("pseudocomplement formulas disagree; this is a bug");
    return via_implication;
}

Sieve sieve_closure(const Sieve& r, const Topology& j) {
    const FinCat& cat = j.cat();
    if (r.on < 0 || r.on >= cat.object_count())
        throw DomainError("sieve on unknown object", std::to_string(r.on));
    const auto& incoming = cat.arrows_into(r.on);
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < incoming.size(); ++i) {
        ArrIx f = incoming[i];
        if (j.covering(cat.dom(f), pull_mask(cat, f, r.mask)))
            mask |= std::uint64_t{1} << i;
    }
    return Sieve{r.on, mask};
}

bool is_closed_sieve(const Sieve& r, const Topology& j) {
    return sieve_closure(r, j).mask == r.mask;
}

namespace {

// Nonempty upward-closed subsets of the sieve lattice on one object; every
// one of them contains the maximal sieve. Emitted as sorted mask vectors.
std::vector<std::vector<std::uint64_t>> upward_closed_families(
    const FinCat& cat, ObjIx c, const std::vector<std::uint64_t>& universe) {
    std::vector<std::uint64_t> order = universe;
    std::sort(order.begin(), order.end(),
              [](std::uint64_t a, std::uint64_t b) {
                  int pa = mask_popcount(a), pb = mask_popcount(b);
                  return pa != pb ? pa > pb : a < b;
              });

    // supersets[i] = indices j < i with order[j] ⊇ order[i]
    std::vector<std::vector<int>> supersets(order.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t jj = 0; jj < i; ++jj)
            if ((order[i] & ~order[jj]) == 0) supersets[i].push_back(static_cast<int>(jj));

    std::vector<std::vector<std::uint64_t>> out;
    std::vector<char> chosen(order.size(), 0);
    std::vector<std::uint64_t> current;

    auto rec = [&](auto&& self, std::size_t idx) -> void {
        if (idx == order.size()) {
            std::vector<std::uint64_t> family = current;
            std::sort(family.begin(), family.end());
            out.push_back(std::move(family));
            return;
        }
        bool can_include = true;
        for (int jj : supersets[idx])
            if (!chosen[jj]) {
                can_include = false;
                break;
            }
        if (can_include) {
            chosen[idx] = 1;
            current.push_back(order[idx]);
            self(self, idx + 1);
            current.pop_back();
            chosen[idx] = 0;
        }
        if (order[idx] != cat.full_mask(c))  // the maximal sieve is mandatory
            self(self, idx + 1);
    };
    rec(rec, 0);
    return out;
}

}  // namespace

std::vector<Topology> enumerate_topologies(const Site& site) {
    const FinCat& cat = site.cat();
    const int n = cat.object_count();

    std::vector<std::vector<std::vector<std::uint64_t>>> candidates(n);
    for (ObjIx c = 0; c < n; ++c)
        candidates[c] = upward_closed_families(cat, c, site.sieves_on(c));

    std::vector<Topology> out;
    std::vector<int> pick(n, -1);

    auto contains = [&](ObjIx c, std::uint64_t mask) {
        const auto& masks = candidates[c][pick[c]];
        return std::binary_search(masks.begin(), masks.end(), mask);
    };

    // Stability constraints touching the freshly assigned object and already
    // assigned ones; full transitivity is checked at the leaves.
    auto stable_so_far = [&](ObjIx fresh) {
        for (ArrIx f = 0; f < cat.arrow_count(); ++f) {
            ObjIx d = cat.dom(f), c = cat.cod(f);
            if (d > fresh || c > fresh) continue;
            if (d != fresh && c != fresh) continue;
            for (std::uint64_t s : candidates[c][pick[c]])
                if (!contains(d, pull_mask(cat, f, s))) return false;
        }
        return true;
    };

    auto transitive = [&]() {
        for (ObjIx c = 0; c < n; ++c) {
            const auto& incoming = cat.arrows_into(c);
            for (std::uint64_t s : candidates[c][pick[c]])
                for (std::uint64_t r : site.sieves_on(c)) {
                    if (contains(c, r)) continue;
                    bool locally_covering = true;
                    for_each_bit(s, [&](int pos) {
                        ArrIx f = incoming[pos];
                        if (!contains(cat.dom(f), pull_mask(cat, f, r)))
                            locally_covering = false;
                    });
                    if (locally_covering) return false;
                }
        }
        return true;
    };

    auto rec = [&](auto&& self, ObjIx c) -> void {
        if (c == n) {
            if (!transitive()) return;
            SieveFamily family(site);
            for (ObjIx o = 0; o < n; ++o)
                for (std::uint64_t mask : candidates[o][pick[o]]) family.insert(o, mask);
            out.push_back(Topology::checked(std::move(family)));
            return;
        }
        for (std::size_t i = 0; i < candidates[c].size(); ++i) {
            pick[c] = static_cast<int>(i);
            if (stable_so_far(c)) self(self, c + 1);
        }
        pick[c] = -1;
    };
    rec(rec, 0);

    std::sort(out.begin(), out.end(), topology_order_less);
    return out;
}

bool topology_order_less(const Topology& a, const Topology& b) {
    const int n = a.cat().object_count();
    for (ObjIx c = 0; c < n; ++c) {
        if (a.covers(c).size() != b.covers(c).size())
            return a.covers(c).size() < b.covers(c).size();
    }
    for (ObjIx c = 0; c < n; ++c) {
        auto ca = canonical_masks(a.covers(c));
        auto cb = canonical_masks(b.covers(c));
        if (ca != cb)
            return std::lexicographical_compare(ca.begin(), ca.end(), cb.begin(), cb.end(),
                                                sieve_mask_less);
    }
    return false;
}

std::vector<std::pair<int, int>> hasse(const std::vector<Topology>& lattice) {
    const int n = static_cast<int>(lattice.size());
    std::vector<std::vector<bool>> below(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) below[i][j] = leq(lattice[i], lattice[j]);

    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (!below[i][j]) continue;
            bool covering_edge = true;
            for (int k = 0; k < n && covering_edge; ++k)
                if (below[i][k] && below[k][j]) covering_edge = false;
            if (covering_edge) edges.emplace_back(i, j);
        }
    return edges;
}

}  // namespace sievecalc
