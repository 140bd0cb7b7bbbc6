#pragma once

#include <vector>

#include "sievecalc/topology.hpp"

namespace sievecalc {

// A downward-closed set of objects: whenever some arrow d -> c exists and c
// belongs, so does d. Ideals stand in for subterminal objects; everything
// the subtopos constructions need from one is its z_sieve.
struct Ideal {
    std::vector<ObjIx> objects;  // ascending

    bool contains(ObjIx c) const;
    bool operator==(const Ideal&) const = default;
};

// An ideal that is additionally J-closed: c belongs whenever z_sieve(U, c)
// is J-covering.
struct JIdeal {
    Ideal ideal;
    const Topology* topology = nullptr;
};

// Checked constructors; throw DomainError with a witness object.
Ideal make_ideal(const FinCat& cat, std::vector<ObjIx> objects);
JIdeal make_j_ideal(const Topology& j, Ideal ideal);

// All ideals, ordered by (size, member list); j_ideals filters the J-closed
// ones. Refuses on categories with more than 24 objects.
std::vector<Ideal> ideals(const FinCat& cat);
std::vector<JIdeal> j_ideals(const Topology& j);

// The sieve {f : d -> c | d ∈ u} on c; a sieve by downward closure.
Sieve z_sieve(const FinCat& cat, const Ideal& u, ObjIx c);

// The three subtopos topologies attached to a J-ideal u:
//   open:        join of J with {R | R ⊇ Z(c)}
//   closed:      {R | Z(c) ∪ R ∈ J(c)}
//   quasiclosed: join of J with {R | ∀f: f*(R) ⊆ Z(dom f) ⇒ f ∈ Z(c)}
// Each contains J and passes the topology axioms (enforced).
Topology open_topology(const Topology& j, const JIdeal& u);
Topology closed_topology(const Topology& j, const JIdeal& u);
Topology quasiclosed_topology(const Topology& j, const JIdeal& u);

// Quasi-closed topology at the zero ideal; the double-negation subtopos.
Topology booleanization(const Topology& j);

// Objects whose empty sieve is J-covering; always a J-ideal.
JIdeal zero_ideal(const Topology& j);

// For J ≤ Jp, the objects whose empty sieve is Jp-covering, as a J-ideal:
// the closure of the least subterminal of the Jp-subtopos inside the
// J-subtopos.
JIdeal ext(const Topology& jp, const Topology& j);

// Middle topology M of the dense-closed factorization of J ≤ Jp:
// closed_topology(J, ext(Jp, J)), with J ≤ M ≤ Jp and the upper part dense.
Topology dense_closed_factorization(const Topology& jp, const Topology& j);

// Dense inclusion: Jp covers the empty sieve only where J already does.
bool is_dense(const Topology& jp, const Topology& j);

// Skeletality criterion for J ≤ Jp, evaluated on the full subcategory of
// objects not J-covered by the empty sieve: whenever the sieve of arrows
// from Jp-degenerate objects is stably non-empty there, the target object
// must itself be Jp-degenerate.
bool is_skeletal(const Topology& jp, const Topology& j);

bool is_boolean(const Topology& j);      // fixed by booleanization
bool is_two_valued(const Topology& j);   // exactly two J-ideals
bool is_degenerate(const Topology& j);   // the top topology

// Topologies K ≥ J, K ≠ top, with nothing strictly between K and top.
// Cross-checked against the Boolean-and-two-valued filter of the interval;
// a mismatch throws.
std::vector<Topology> atoms(const Topology& j);

// Open and closed topologies of u are complements over J: meet J, join top.
bool complements_check(const Topology& j, const JIdeal& u);

}  // namespace sievecalc
