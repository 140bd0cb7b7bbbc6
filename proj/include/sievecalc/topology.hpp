#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sievecalc/site.hpp"

namespace sievecalc {

/// A per-object collection of sieves: a candidate subobject of the sieve
/// classifier. No invariant beyond well-typedness; pullback stability is
/// checked, not assumed.
class SieveFamily {
public:
    explicit SieveFamily(const Site& site);
    static SieveFamily from_sieves(const Site& site, std::span<const Sieve> sieves);

    const Site& site() const { return *site_; }
    const FinCat& cat() const { return site_->cat(); }

    bool contains(ObjIx c, std::uint64_t mask) const;
    void insert(ObjIx c, std::uint64_t mask);

    // Masks at c, sorted ascending by value.
    const std::vector<std::uint64_t>& at(ObjIx c) const { return sel_[c]; }

    bool is_pullback_stable() const;

    bool operator==(const SieveFamily& other) const { return sel_ == other.sel_; }

private:
    const Site* site_;
    std::vector<std::vector<std::uint64_t>> sel_;
};

struct TopologyCheck {
    bool ok = true;
    std::string axiom;    // violated axiom, empty when ok
    std::string witness;  // first violation in canonical order
};

// The three covering axioms (maximality, stability, transitivity), with the
// first violation as witness. Also evaluates the alternative four-clause
// characterization (maximal sieve present, upward closure, local refinement
// of pullbacks, closure under sieve composites) and asserts the two verdicts
// agree; a disagreement would be an internal bug and throws.
TopologyCheck is_topology(const SieveFamily& family);

// The two checkers individually, for cross-validation in tests.
TopologyCheck check_covering_axioms(const SieveFamily& family);
bool check_covering_axioms_alt(const SieveFamily& family);

/// A Grothendieck topology: a sieve family that passed is_topology.
class Topology {
public:
    // Verifies the axioms; throws DomainError with the witness otherwise.
    static Topology checked(SieveFamily family);

    const Site& site() const { return fam_.site(); }
    const FinCat& cat() const { return fam_.cat(); }
    const SieveFamily& family() const { return fam_; }
    const std::vector<std::uint64_t>& covers(ObjIx c) const { return fam_.at(c); }
    bool covering(ObjIx c, std::uint64_t mask) const { return fam_.contains(c, mask); }
    bool covering(const Sieve& s) const { return fam_.contains(s.on, s.mask); }

    bool operator==(const Topology& other) const { return fam_ == other.fam_; }

private:
    explicit Topology(SieveFamily family) : fam_(std::move(family)) {}
    SieveFamily fam_;
};

// Extremes of the lattice: bottom covers only maximal sieves, top covers
// every sieve.
Topology bottom(const Site& site);
Topology top(const Site& site);

bool leq(const Topology& j1, const Topology& j2);

// Per-object intersection of covers.
Topology meet(const Topology& j1, const Topology& j2);

// Right and left parts of the Galois connection on pullback-stable families:
//   r_operator(D)(c) = {T | for all f : d -> c and sieves S on d,
//                           S ∈ D(d) and S ⊆ f*(T)  implies  f ∈ T}
//   l_operator(D)(c) = {S | for all f : d -> c and sieves Z on d,
//                           Z ∈ D(d) and f*(S) ⊆ Z  implies  Z = M_d}
// l_operator always yields a topology; both require D pullback-stable.
SieveFamily r_operator(const SieveFamily& d);
Topology l_operator(const SieveFamily& d);

// Smallest pullback-stable family containing f.
SieveFamily pullback_stabilize(const SieveFamily& f);

// The topology generated by a family, via l_operator ∘ r_operator over the
// pullback stabilization: the smallest topology making every member cover.
Topology generate_topology(const SieveFamily& f);

// Independent generation path: saturation under the inference rules of the
// covering proof system (see proofsys.hpp). Always equals generate_topology.
Topology generate_topology_oracle(const SieveFamily& f);

// Smallest topology above both arguments.
Topology join(const Topology& j1, const Topology& j2);

// Heyting implication: largest K with meet(K, j1) ≤ j2. Pointwise,
//   (j1 ⇒ j2)(c) = {S | for all f : d -> c and sieves Z on d,
//                       Z j1-covering and j2-closed and f*(S) ⊆ Z
//                       implies Z = M_d}.
Topology implication(const Topology& j1, const Topology& j2);

// Pseudocomplement implication(j, bottom); also evaluated through its own
// direct formula and cross-checked.
Topology negation(const Topology& j);

// The closure {f : d -> c | f*(r) ∈ J(d)} of a sieve r on c.
Sieve sieve_closure(const Sieve& r, const Topology& j);
bool is_closed_sieve(const Sieve& r, const Topology& j);

// All Grothendieck topologies on the site, in canonical lattice order
// (per-object cover-count vector, then lexicographic sieve encoding).
std::vector<Topology> enumerate_topologies(const Site& site);

// Covering relation of ≤ over a full enumeration, as index pairs (i, j)
// with lattice[i] covered by lattice[j].
std::vector<std::pair<int, int>> hasse(const std::vector<Topology>& lattice);

bool topology_order_less(const Topology& a, const Topology& b);

// Covers at c emitted in canonical sieve order (serialization order).
std::vector<std::uint64_t> canonical_masks(std::span<const std::uint64_t> masks);

}  // namespace sievecalc
