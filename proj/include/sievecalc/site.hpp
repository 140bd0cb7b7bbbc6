#pragma once

#include <cstdint>
#include <vector>

#include "sievecalc/fincat.hpp"
#include "sievecalc/sieve.hpp"

namespace sievecalc {

// Operations that quantify over all sieves refuse to run when any object has
// more than 22 incoming arrows or when the total number of sieves across
// objects exceeds max_total_sieves. Refusal is an explicit GuardError, never
// silent truncation.
struct Guard {
    std::size_t max_total_sieves = 4096;
};

/// A finite category together with its full sieve universe, enumerated once
/// under a guard. Everything that quantifies over sieves (topology axioms,
/// the generation formulas, enumeration) runs against a Site.
///
/// Sites are immutable after construction and safe to share across threads.
/// Families and topologies refer to their site by address, so a Site is
/// pinned: neither copyable nor movable.
class Site {
public:
    explicit Site(FinCat cat, Guard guard = {});
    Site(const Site&) = delete;
    Site& operator=(const Site&) = delete;

    const FinCat& cat() const { return cat_; }
    const Guard& guard() const { return guard_; }

    // All sieve masks on c, sorted ascending by mask value.
    const std::vector<std::uint64_t>& sieves_on(ObjIx c) const { return sieves_[c]; }
    std::size_t total_sieves() const { return total_; }

    bool has_sieve(ObjIx c, std::uint64_t mask) const;

private:
    FinCat cat_;
    Guard guard_;
    std::vector<std::vector<std::uint64_t>> sieves_;
    std::size_t total_ = 0;
};

}  // namespace sievecalc
