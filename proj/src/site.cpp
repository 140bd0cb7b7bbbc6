#include "sievecalc/site.hpp"

#include <algorithm>

#include "sievecalc/errors.hpp"

namespace sievecalc {

Site::Site(FinCat cat, Guard guard) : cat_(std::move(cat)), guard_(guard) {
    sieves_.reserve(cat_.object_count());
    for (ObjIx c = 0; c < cat_.object_count(); ++c) {
        sieves_.push_back(all_sieve_masks(cat_, c, guard_.max_total_sieves));
        total_ += sieves_.back().size();
        if (total_ > guard_.max_total_sieves)
            throw GuardError("total sieve count exceeds the guard of " +
                                 std::to_string(guard_.max_total_sieves),
                             cat_.object_name(c));
    }
}

bool Site::has_sieve(ObjIx c, std::uint64_t mask) const {
    const auto& masks = sieves_[c];
    return std::binary_search(masks.begin(), masks.end(), mask);
}

}  // namespace sievecalc
