#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "sievecalc/fincat.hpp"

namespace sievecalc {

// Sieves and presieves on an object are stored as bit masks over the
// positions of arrows_into(on). Bit 0 is always the identity, so a sieve is
// maximal exactly when bit 0 is set.

struct Presieve {
    ObjIx on = -1;
    std::uint64_t mask = 0;
};

struct Sieve {
    ObjIx on = -1;
    std::uint64_t mask = 0;  // closed under precomposition

    bool operator==(const Sieve&) const = default;
};

bool is_sieve_mask(const FinCat& cat, ObjIx c, std::uint64_t mask);

// Checked constructors from arrow indices; throw DomainError on a codomain
// mismatch, and (for sieves) on a set that is not precomposition-closed.
Presieve make_presieve(const FinCat& cat, ObjIx on, std::span<const ArrIx> members);
Sieve make_sieve(const FinCat& cat, ObjIx on, std::span<const ArrIx> members);

Sieve maximal_sieve(const FinCat& cat, ObjIx c);
Sieve empty_sieve(const FinCat& cat, ObjIx c);
bool is_maximal(const Sieve& s);

// Smallest sieve containing p: all arrows factoring through a member of p.
Sieve generate_sieve(const FinCat& cat, const Presieve& p);

// For g : d -> c and s on c, the sieve {h | g∘h ∈ s} on d.
Sieve pullback(const FinCat& cat, ArrIx g, const Sieve& s);

// The composite s∗{t_f}: the sieve generated by {f∘g | f ∈ s, g ∈ t(f)}.
// t must assign to every member f of s a sieve on dom(f).
Sieve compose_sieves(const FinCat& cat, const Sieve& s,
                     const std::unordered_map<ArrIx, Sieve>& t);

bool sieve_leq(const Sieve& a, const Sieve& b);
Sieve sieve_union(const Sieve& a, const Sieve& b);
Sieve sieve_intersection(const Sieve& a, const Sieve& b);

// Member arrows in canonical order.
std::vector<ArrIx> sieve_members(const FinCat& cat, const Sieve& s);

// Canonical order on sieves over one object: lexicographic in the ascending
// member-position sequence, with prefixes first. The empty sieve sorts
// before everything and the maximal sieve directly after it.
bool sieve_mask_less(std::uint64_t a, std::uint64_t b);

// Every sieve mask on c, sorted ascending by mask value. Aborts with
// GuardError once more than `limit` sieves have been found.
std::vector<std::uint64_t> all_sieve_masks(const FinCat& cat, ObjIx c, std::size_t limit);

inline int mask_popcount(std::uint64_t mask) { return std::popcount(mask); }

// Iterates set bit positions of `mask` in ascending order.
template <typename Fn>
void for_each_bit(std::uint64_t mask, Fn&& fn) {
    while (mask) {
        fn(std::countr_zero(mask));
        mask &= mask - 1;
    }
}

}  // namespace sievecalc
