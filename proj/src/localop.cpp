#include "sievecalc/localop.hpp"

#include "sievecalc/errors.hpp"

namespace sievecalc {

Sieve classify(const Topology& j, const OmegaPoint& p) {
    if (p.at != p.sieve.on)
        throw DomainError("classifier point object does not match its sieve");
    return sieve_closure(p.sieve, j);
}

namespace {

void check_on(const FinCat& cat, ObjIx c, const Sieve& s, const Sieve& t) {
    if (s.on != c || t.on != c)
        throw DomainError("sieve object mismatch", cat.object_name(c));
}

}  // namespace

Sieve internal_and(const FinCat& cat, ObjIx c, const Sieve& s, const Sieve& t) {
    check_on(cat, c, s, t);
    return Sieve{c, s.mask & t.mask};
}

Sieve internal_or(const FinCat& cat, ObjIx c, const Sieve& s, const Sieve& t) {
    check_on(cat, c, s, t);
    const auto& incoming = cat.arrows_into(c);
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < incoming.size(); ++i) {
        ArrIx f = incoming[i];
        Sieve joined = sieve_union(pullback(cat, f, s), pullback(cat, f, t));
        if (joined.mask == cat.full_mask(cat.dom(f))) mask |= std::uint64_t{1} << i;
    }
    return Sieve{c, mask};
}

Sieve internal_implies(const FinCat& cat, ObjIx c, const Sieve& s, const Sieve& t) {
    check_on(cat, c, s, t);
    const auto& incoming = cat.arrows_into(c);
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < incoming.size(); ++i) {
        ArrIx f = incoming[i];
        if (sieve_leq(pullback(cat, f, s), pullback(cat, f, t)))
            mask |= std::uint64_t{1} << i;
    }
    return Sieve{c, mask};
}

std::vector<Sieve> closed_sieves(const Topology& j, ObjIx c) {
    const FinCat& cat = j.cat();
    if (c < 0 || c >= cat.object_count())
        throw DomainError("unknown object", std::to_string(c));
    std::vector<std::uint64_t> masks;
    for (std::uint64_t mask : j.site().sieves_on(c))
        if (is_closed_sieve(Sieve{c, mask}, j)) masks.push_back(mask);
    masks = canonical_masks(masks);
    std::vector<Sieve> out;
    out.reserve(masks.size());
    for (std::uint64_t mask : masks) out.push_back(Sieve{c, mask});
    return out;
}

std::optional<OmegaPoint> relativization_obstruction(const Topology& k, const Topology& j) {
    if (&k.site() != &j.site())
        throw DomainError("operands live on different sites (category mismatch)");
    for (ObjIx c = 0; c < j.cat().object_count(); ++c)
        for (const Sieve& s : closed_sieves(j, c))
            if (!is_closed_sieve(sieve_closure(s, k), j)) return OmegaPoint{c, s};
    return std::nullopt;
}

bool relativization_exists(const Topology& k, const Topology& j) {
    return !relativization_obstruction(k, j).has_value();
}

Sieve RelativizedOperator::apply(ObjIx c, const Sieve& s) const {
    if (s.on != c) throw DomainError("sieve object mismatch");
    if (!is_closed_sieve(s, j_))
        throw DomainError("relativized operator applied to a non-closed sieve",
                          j_.cat().object_name(c));
    return sieve_closure(s, k_);
}

RelativizedOperator relativize(const Topology& k, const Topology& j) {
    if (auto obstruction = relativization_obstruction(k, j)) {
        const FinCat& cat = j.cat();
        std::string members = "{";
        bool first = true;
        for (ArrIx f : sieve_members(cat, obstruction->sieve)) {
            if (!first) members += ",";
            members += cat.arrow_name(f);
            first = false;
        }
        members += "}";
        throw DomainError("no relativization: closure of a closed sieve leaves the closed "
                          "sieves",
                          "object " + cat.object_name(obstruction->at) + ", sieve " + members);
    }
    return RelativizedOperator(k, j);
}

bool check_relativization_theorem(const Topology& k, const Topology& j) {
    RelativizedOperator op = relativize(k, j);
    Topology joined = join(k, j);
    const FinCat& cat = j.cat();

    for (ObjIx c = 0; c < cat.object_count(); ++c) {
        std::uint64_t full = cat.full_mask(c);
        for (const Sieve& s : closed_sieves(j, c)) {
            Sieve relativized = op.apply(c, s);
            if (!(relativized == classify(k, OmegaPoint{c, s}))) return false;

            // S covers for join(K, J) exactly when its relativized closure
            // covers for J.
            bool join_covers = sieve_closure(s, joined).mask == full;
            bool closure_covers = sieve_closure(relativized, j).mask == full;
            if (join_covers != closure_covers) return false;
        }
    }
    return true;
}

}  // namespace sievecalc
