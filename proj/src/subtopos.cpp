#include "sievecalc/subtopos.hpp"

#include <algorithm>
#include <stdexcept>

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

void require_downward_closed(const FinCat& cat, const Ideal& u) {
    for (ArrIx f = 0; f < cat.arrow_count(); ++f)
        if (u.contains(cat.cod(f)) && !u.contains(cat.dom(f)))
            throw DomainError("ideal is not downward-closed",
                              "arrow " + cat.arrow_name(f) + " leaves it");
}

void require_j_ideal(const Topology& j, const Ideal& u) {
    const FinCat& cat = j.cat();
    require_downward_closed(cat, u);
    for (ObjIx c = 0; c < cat.object_count(); ++c)
        if (!u.contains(c) && j.covering(z_sieve(cat, u, c)))
            throw DomainError("ideal is not J-closed", "object " + cat.object_name(c));
}

bool j_closed_ideal(const Topology& j, const Ideal& u) {
    const FinCat& cat = j.cat();
    for (ObjIx c = 0; c < cat.object_count(); ++c)
        if (!u.contains(c) && j.covering(z_sieve(cat, u, c))) return false;
    return true;
}

}  // namespace

bool Ideal::contains(ObjIx c) const {
    return std::binary_search(objects.begin(), objects.end(), c);
}

Ideal make_ideal(const FinCat& cat, std::vector<ObjIx> objects) {
    std::sort(objects.begin(), objects.end());
    objects.erase(std::unique(objects.begin(), objects.end()), objects.end());
    for (ObjIx c : objects)
        if (c < 0 || c >= cat.object_count())
            throw DomainError("unknown object in ideal", std::to_string(c));
    Ideal u{std::move(objects)};
    require_downward_closed(cat, u);
    return u;
}

JIdeal make_j_ideal(const Topology& j, Ideal ideal) {
    require_j_ideal(j, ideal);
    return JIdeal{std::move(ideal), &j};
}

std::vector<Ideal> ideals(const FinCat& cat) {
    const int n = cat.object_count();
    if (n > 24)
        throw GuardError("ideal enumeration supports at most 24 objects",
                         std::to_string(n));

    // req[c] = objects with an arrow into c (c itself included)
    std::vector<std::uint32_t> req(n, 0);
    for (ArrIx f = 0; f < cat.arrow_count(); ++f)
        req[cat.cod(f)] |= std::uint32_t{1} << cat.dom(f);

    std::vector<Ideal> out;
    const std::uint32_t limit = n == 0 ? 0 : (std::uint32_t{1} << n) - 1;
    for (std::uint32_t subset = 0;; ++subset) {
        bool closed = true;
        for (ObjIx c = 0; c < n && closed; ++c)
            if ((subset >> c & 1) && (req[c] & ~subset)) closed = false;
        if (closed) {
            Ideal u;
            for (ObjIx c = 0; c < n; ++c)
                if (subset >> c & 1) u.objects.push_back(c);
            out.push_back(std::move(u));
        }
        if (subset == limit) break;
    }

    std::sort(out.begin(), out.end(), [](const Ideal& a, const Ideal& b) {
        if (a.objects.size() != b.objects.size()) return a.objects.size() < b.objects.size();
        return a.objects < b.objects;
    });
    return out;
}

std::vector<JIdeal> j_ideals(const Topology& j) {
    std::vector<JIdeal> out;
    for (Ideal& u : ideals(j.cat()))
        if (j_closed_ideal(j, u)) out.push_back(JIdeal{std::move(u), &j});
    return out;
}

Sieve z_sieve(const FinCat& cat, const Ideal& u, ObjIx c) {
    if (c < 0 || c >= cat.object_count())
        throw DomainError("unknown object", std::to_string(c));
    cat.require_mask_width(c);
    const auto& incoming = cat.arrows_into(c);
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < incoming.size(); ++i)
        if (u.contains(cat.dom(incoming[i]))) mask |= std::uint64_t{1} << i;
    return Sieve{c, mask};
}

Topology open_topology(const Topology& j, const JIdeal& u) {
    require_j_ideal(j, u.ideal);
    const FinCat& cat = j.cat();
    const Site& site = j.site();

    SieveFamily family(site);
    for (ObjIx c = 0; c < cat.object_count(); ++c) {
        std::uint64_t z = z_sieve(cat, u.ideal, c).mask;
        for (std::uint64_t r : site.sieves_on(c))
            if ((z & ~r) == 0) family.insert(c, r);
    }
    return join(j, Topology::checked(std::move(family)));
}

Topology closed_topology(const Topology& j, const JIdeal& u) {
    require_j_ideal(j, u.ideal);
    const FinCat& cat = j.cat();
    const Site& site = j.site();

    SieveFamily family(site);
    for (ObjIx c = 0; c < cat.object_count(); ++c) {
        std::uint64_t z = z_sieve(cat, u.ideal, c).mask;
        for (std::uint64_t r : site.sieves_on(c))
            if (j.covering(c, z | r)) family.insert(c, r);
    }
    Topology out = Topology::checked(std::move(family));
    if (!leq(j, out))
        throw std::logic_error("closed topology does not contain its base; this is a bug");
    return out;
}

Topology quasiclosed_topology(const Topology& j, const JIdeal& u) {
    require_j_ideal(j, u.ideal);
    const FinCat& cat = j.cat();
    const Site& site = j.site();

    std::vector<std::uint64_t> z(cat.object_count());
    for (ObjIx c = 0; c < cat.object_count(); ++c) z[c] = z_sieve(cat, u.ideal, c).mask;

    SieveFamily family(site);
    for (ObjIx c = 0; c < cat.object_count(); ++c) {
        const auto& incoming = cat.arrows_into(c);
        for (std::uint64_t r : site.sieves_on(c)) {
            bool admitted = true;
            for (std::size_t i = 0; i < incoming.size(); ++i) {
                ArrIx f = incoming[i];
                bool below_z = (pull_mask(cat, f, r) & ~z[cat.dom(f)]) == 0;
                if (below_z && !(z[c] >> i & 1)) {
                    admitted = false;
                    break;
                }
            }
            if (admitted) family.insert(c, r);
        }
    }
    return join(j, Topology::checked(std::move(family)));
}

Topology booleanization(const Topology& j) {
    return quasiclosed_topology(j, zero_ideal(j));
}

JIdeal zero_ideal(const Topology& j) {
    std::vector<ObjIx> objects;
    for (ObjIx c = 0; c < j.cat().object_count(); ++c)
        if (j.covering(c, 0)) objects.push_back(c);
    return make_j_ideal(j, Ideal{std::move(objects)});
}

JIdeal ext(const Topology& jp, const Topology& j) {
    if (!leq(j, jp))
        throw DomainError("ext requires the first topology to contain the second");
    std::vector<ObjIx> objects;
    for (ObjIx c = 0; c < j.cat().object_count(); ++c)
        if (jp.covering(c, 0)) objects.push_back(c);
    return make_j_ideal(j, Ideal{std::move(objects)});
}

Topology dense_closed_factorization(const Topology& jp, const Topology& j) {
    return closed_topology(j, ext(jp, j));
}

bool is_dense(const Topology& jp, const Topology& j) {
    return ext(jp, j).ideal == zero_ideal(j).ideal;
}

bool is_skeletal(const Topology& jp, const Topology& j) {
    if (!leq(j, jp))
        throw DomainError("skeletality requires the first topology to contain the second");
    const FinCat& cat = j.cat();

    std::vector<ObjIx> keep;
    for (ObjIx c = 0; c < cat.object_count(); ++c)
        if (!j.covering(c, 0)) keep.push_back(c);
    FinCat sub = cat.full_subcategory(keep);

    // the ext ideal, transported to the subcategory by name
    Ideal degenerate;
    for (ObjIx c = 0; c < sub.object_count(); ++c) {
        ObjIx orig = *cat.object(sub.object_name(c));
        if (jp.covering(orig, 0)) degenerate.objects.push_back(c);
    }

    for (ObjIx c = 0; c < sub.object_count(); ++c) {
        std::uint64_t z = z_sieve(sub, degenerate, c).mask;
        bool stably_nonempty = true;
        for (ArrIx g : sub.arrows_into(c))
            if (pull_mask(sub, g, z) == 0) {
                stably_nonempty = false;
                break;
            }
        if (stably_nonempty && !degenerate.contains(c)) return false;
    }
    return true;
}

bool is_boolean(const Topology& j) { return booleanization(j) == j; }

bool is_two_valued(const Topology& j) { return j_ideals(j).size() == 2; }

bool is_degenerate(const Topology& j) { return j == top(j.site()); }

std::vector<Topology> atoms(const Topology& j) {
    std::vector<Topology> lattice = enumerate_topologies(j.site());
    Topology degenerate = top(j.site());

    std::vector<Topology> interval;
    for (const Topology& k : lattice)
        if (leq(j, k)) interval.push_back(k);

    std::vector<Topology> by_order;
    for (const Topology& k : interval) {
        if (k == degenerate) continue;
        bool nothing_between = true;
        for (const Topology& above : interval)
            if (leq(k, above) && !(above == k) && !(above == degenerate)) {
                nothing_between = false;
                break;
            }
        if (nothing_between) by_order.push_back(k);
    }

    std::vector<Topology> by_filter;
    for (const Topology& k : interval)
        if (is_boolean(k) && is_two_valued(k)) by_filter.push_back(k);

    if (!(by_order == by_filter))
        throw std::logic_error(
            "atom enumeration disagrees with the Boolean-and-two-valued filter; this is a bug");
    return by_order;
}

bool complements_check(const Topology& j, const JIdeal& u) {
    Topology open = open_topology(j, u);
    Topology closed = closed_topology(j, u);
    return meet(open, closed) == j && join(open, closed) == top(j.site());
}

}  // namespace sievecalc
