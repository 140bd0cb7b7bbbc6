#include "sievecalc/sieve.hpp"

#include "sievecalc/errors.hpp"

namespace sievecalc {

namespace {

void check_object(const FinCat& cat, ObjIx c) {
    if (c < 0 || c >= cat.object_count())
        throw DomainError("unknown object", std::to_string(c));
}

// Valid member masks for c: within the width of arrows_into(c).
void check_mask(const FinCat& cat, ObjIx c, std::uint64_t mask) {
    check_object(cat, c);
    if ((mask & ~cat.full_mask(c)) != 0)
        throw DomainError("sieve mask has bits outside the object's arrows",
                          cat.object_name(c));
}

std::uint64_t mask_from_members(const FinCat& cat, ObjIx on, std::span<const ArrIx> members) {
    check_object(cat, on);
    cat.require_mask_width(on);
    std::uint64_t mask = 0;
    for (ArrIx f : members) {
        if (f < 0 || f >= cat.arrow_count())
            throw DomainError("unknown arrow", std::to_string(f));
        if (cat.cod(f) != on)
            throw DomainError("arrow codomain does not match the sieve's object",
                              cat.arrow_name(f));
        mask |= std::uint64_t{1} << cat.local_pos(f);
    }
    return mask;
}

}  // namespace

bool is_sieve_mask(const FinCat& cat, ObjIx c, std::uint64_t mask) {
    bool ok = true;
    for_each_bit(mask, [&](int pos) {
        if ((cat.closure_req(c, pos) & ~mask) != 0) ok = false;
    });
    return ok;
}

Presieve make_presieve(const FinCat& cat, ObjIx on, std::span<const ArrIx> members) {
    return Presieve{on, mask_from_members(cat, on, members)};
}

Sieve make_sieve(const FinCat& cat, ObjIx on, std::span<const ArrIx> members) {
    std::uint64_t mask = mask_from_members(cat, on, members);
    if (!is_sieve_mask(cat, on, mask))
        throw DomainError("arrow set is not closed under precomposition",
                          cat.object_name(on));
    return Sieve{on, mask};
}

Sieve maximal_sieve(const FinCat& cat, ObjIx c) {
    check_object(cat, c);
    return Sieve{c, cat.full_mask(c)};
}

Sieve empty_sieve(const FinCat& cat, ObjIx c) {
    check_object(cat, c);
    cat.require_mask_width(c);
    return Sieve{c, 0};
}

bool is_maximal(const Sieve& s) { return (s.mask & 1) != 0; }

Sieve generate_sieve(const FinCat& cat, const Presieve& p) {
    check_mask(cat, p.on, p.mask);
    std::uint64_t mask = 0;
    for_each_bit(p.mask, [&](int pos) { mask |= cat.closure_req(p.on, pos); });
    return Sieve{p.on, mask};
}

Sieve pullback(const FinCat& cat, ArrIx g, const Sieve& s) {
    if (g < 0 || g >= cat.arrow_count())
        throw DomainError("unknown arrow", std::to_string(g));
    check_mask(cat, s.on, s.mask);
    if (cat.cod(g) != s.on)
        throw DomainError("pullback arrow codomain does not match the sieve's object",
                          cat.arrow_name(g));
    const auto& pos = cat.pull_pos(g);
    std::uint64_t mask = 0;
    for (std::size_t j = 0; j < pos.size(); ++j)
        if (s.mask >> pos[j] & 1) mask |= std::uint64_t{1} << j;
    return Sieve{cat.dom(g), mask};
}

Sieve compose_sieves(const FinCat& cat, const Sieve& s,
                     const std::unordered_map<ArrIx, Sieve>& t) {
    check_mask(cat, s.on, s.mask);
    const auto& incoming = cat.arrows_into(s.on);
    std::uint64_t raw = 0;
    for_each_bit(s.mask, [&](int pos) {
        ArrIx f = incoming[pos];
        auto it = t.find(f);
        if (it == t.end())
            throw DomainError("missing sieve assignment for a member", cat.arrow_name(f));
        const Sieve& tf = it->second;
        if (tf.on != cat.dom(f))
            throw DomainError("assigned sieve is not on the member's domain",
                              cat.arrow_name(f));
        check_mask(cat, tf.on, tf.mask);
        const auto& pos_map = cat.pull_pos(f);
        for_each_bit(tf.mask, [&](int j) { raw |= std::uint64_t{1} << pos_map[j]; });
    });
    return generate_sieve(cat, Presieve{s.on, raw});
}

namespace {

void check_same_object(const Sieve& a, const Sieve& b) {
    if (a.on != b.on)
        throw DomainError("sieves on distinct objects are incomparable",
                          std::to_string(a.on) + " vs " + std::to_string(b.on));
}

}  // namespace

bool sieve_leq(const Sieve& a, const Sieve& b) {
    check_same_object(a, b);
    return (a.mask & ~b.mask) == 0;
}

Sieve sieve_union(const Sieve& a, const Sieve& b) {
    check_same_object(a, b);
    return Sieve{a.on, a.mask | b.mask};
}

Sieve sieve_intersection(const Sieve& a, const Sieve& b) {
    check_same_object(a, b);
    return Sieve{a.on, a.mask & b.mask};
}

std::vector<ArrIx> sieve_members(const FinCat& cat, const Sieve& s) {
    check_mask(cat, s.on, s.mask);
    const auto& incoming = cat.arrows_into(s.on);
    std::vector<ArrIx> members;
    for_each_bit(s.mask, [&](int pos) { members.push_back(incoming[pos]); });
    return members;
}

bool sieve_mask_less(std::uint64_t a, std::uint64_t b) {
    while (a != b) {
        if (a == 0) return true;   // a is a strict prefix of b
        if (b == 0) return false;
        int pa = std::countr_zero(a);
        int pb = std::countr_zero(b);
        if (pa != pb) return pa < pb;
        a &= a - 1;
        b &= b - 1;
    }
    return false;
}

std::vector<std::uint64_t> all_sieve_masks(const FinCat& cat, ObjIx c, std::size_t limit) {
    check_object(cat, c);
    const int k = cat.into_count(c);
    if (k > 22)
        throw GuardError("object '" + cat.object_name(c) + "' has " + std::to_string(k) +
                             " incoming arrows, above the enumeration limit of 22",
                         cat.object_name(c));

    std::vector<std::uint64_t> masks;
    const std::uint64_t full = cat.full_mask(c);
    for (std::uint64_t mask = 0; mask <= full; ++mask) {
        if (!is_sieve_mask(cat, c, mask)) continue;
        masks.push_back(mask);
        if (masks.size() > limit)
            throw GuardError("sieve enumeration exceeded the guard of " +
                                 std::to_string(limit) + " sieves",
                             cat.object_name(c));
        if (mask == full) break;  // avoid wrap-around when k = 64
    }
    return masks;
}

}  // namespace sievecalc
