#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sievecalc/topology.hpp"

namespace sievecalc {

// The covering proof system over a site: axioms are the maximal sieves plus
// a chosen family, and the rules are
//   stability:    from R on c, derive f*(R) for any f : d -> c
//   transitivity: from Z on c and f*(R) for every f ∈ Z, derive R
// The derivable sieves form exactly the topology generated by the axioms.

// Axiom families carry no invariant beyond well-typedness.
using AxiomFamily = SieveFamily;

/// A finite tree witnessing that a sieve is derivable.
struct Derivation {
    enum class Rule { AxiomMaximal, AxiomGiven, Stability, Transitivity };

    Rule rule = Rule::AxiomMaximal;
    Sieve conclusion;

    // Stability: the arrow pulled back along; premise concludes the sieve on
    // its codomain. Transitivity keeps the Z-sieve derivation in `premise`
    // and one branch per member of Z, sorted by arrow, each concluding the
    // member's pullback of the conclusion.
    ArrIx arrow = -1;
    std::unique_ptr<Derivation> premise;
    std::vector<std::pair<ArrIx, Derivation>> branches;

    Derivation() = default;
    Derivation(Rule r, Sieve c) : rule(r), conclusion(c) {}
    Derivation(Derivation&&) = default;
    Derivation& operator=(Derivation&&) = default;

    Derivation clone() const;
    int depth() const;
};

struct CheckResult {
    bool ok = true;
    std::string path;    // first failing node, e.g. "premise.branch[f]"
    std::string reason;
};

// Verifies every node's side conditions against the axiom family.
CheckResult check(const Derivation& d, const AxiomFamily& axioms);

/// Least rule-closed superset of the axioms, with enough provenance to
/// rebuild a derivation for any member. Rules fire breadth-first, so the
/// recorded derivations have minimal depth; ties break by canonical sieve
/// order within a round.
class Saturation {
public:
    explicit Saturation(const AxiomFamily& axioms);

    const Topology& topology() const { return *topology_; }
    bool derived(ObjIx c, std::uint64_t mask) const;

    // Pre: derived(s.on, s.mask). Built lazily from provenance.
    Derivation reconstruct(const Sieve& s) const;

private:
    struct Prov {
        Derivation::Rule rule;
        ArrIx arrow = -1;              // stability
        std::uint64_t premise_mask = 0;  // stability premise / transitivity Z
    };

    const Site* site_;
    std::map<std::pair<ObjIx, std::uint64_t>, Prov> prov_;
    std::optional<Topology> topology_;
};

Saturation saturate(const AxiomFamily& axioms);

struct ProveResult {
    std::optional<Derivation> derivation;  // present on success
    Topology closure;                      // the saturated topology either way

    bool ok() const { return derivation.has_value(); }
};

// Searches for a derivation of the target; on failure the saturated closure
// certifies non-membership.
ProveResult prove(const Sieve& target, const AxiomFamily& axioms);

}  // namespace sievecalc
