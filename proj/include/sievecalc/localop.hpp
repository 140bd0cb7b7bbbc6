#pragma once

#include <optional>
#include <vector>

#include "sievecalc/topology.hpp"

namespace sievecalc {

// A point of the sieve classifier: an object together with a sieve on it.
struct OmegaPoint {
    ObjIx at = -1;
    Sieve sieve;
};

// The action of J's local operator on a classifier point: the J-closure
// {f : d -> at | f*(sieve) ∈ J(d)}. Fixes maximal sieves, is monotone,
// idempotent, and preserves binary intersections.
Sieve classify(const Topology& j, const OmegaPoint& p);

// Internal Heyting operations on sieves over a fixed object:
//   and:     S ∩ T
//   or:      {f | f*(S) ∪ f*(T) maximal}
//   implies: {f | f*(S) ⊆ f*(T)}
Sieve internal_and(const FinCat& cat, ObjIx c, const Sieve& s, const Sieve& t);
Sieve internal_or(const FinCat& cat, ObjIx c, const Sieve& s, const Sieve& t);
Sieve internal_implies(const FinCat& cat, ObjIx c, const Sieve& s, const Sieve& t);

// All J-closed sieves on c, canonical order. Always contains the maximal
// sieve. These form the classifier of the subtopos J carves out.
std::vector<Sieve> closed_sieves(const Topology& j, ObjIx c);

// K relativizes at J when the K-closure of every J-closed sieve is again
// J-closed; relativization_obstruction reports the first counterexample in
// canonical order.
std::optional<OmegaPoint> relativization_obstruction(const Topology& k, const Topology& j);
bool relativization_exists(const Topology& k, const Topology& j);

/// The restriction of K's closure operator to J-closed sieves. Only exists
/// when relativization_exists(K, J); unique since the inclusion of closed
/// sieves is monic. Holds its own copies of both topologies.
class RelativizedOperator {
public:
    // Use relativize() instead of constructing directly.
    RelativizedOperator(Topology k, Topology j) : k_(std::move(k)), j_(std::move(j)) {}

    // Pre: s is J-closed on c. Lands in J-closed sieves and fixes M_c.
    Sieve apply(ObjIx c, const Sieve& s) const;

    const Topology& outer() const { return k_; }
    const Topology& base() const { return j_; }

private:
    Topology k_;
    Topology j_;
};

// Throws DomainError carrying the obstruction witness when none exists.
RelativizedOperator relativize(const Topology& k, const Topology& j);

// Verifies, over every J-closed sieve, that the relativized action agrees
// with K's closure and that covering for join(K, J) is equivalent to
// J-covering after the relativized closure.
bool check_relativization_theorem(const Topology& k, const Topology& j);

}  // namespace sievecalc
