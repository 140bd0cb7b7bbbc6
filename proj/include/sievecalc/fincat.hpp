#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sievecalc {

using ObjIx = int;
using ArrIx = int;

// Name-level description of a finite category as it appears in input files.
// `compose` lists triples [g, f, gf] meaning g∘f = gf; identity compositions
// may be omitted and are filled in automatically.
struct CatSpec {
    std::vector<std::string> objects;
    struct ArrowDecl {
        std::string name, dom, cod;
    };
    std::vector<ArrowDecl> arrows;
    std::vector<std::array<std::string, 3>> compose;
};

struct Violation {
    std::string law;      // "identity law" or "associativity"
    std::string witness;  // the offending arrow or triple
};

/// A finite category with a total composition table.
///
/// Canonical arrow order puts the identity arrows first (one per object, in
/// object declaration order) followed by the declared arrows in declaration
/// order, so arrow index < object_count() iff the arrow is an identity.
/// All set-valued outputs elsewhere in the library follow this order.
class FinCat {
public:
    // Resolves names, synthesizes missing identities and identity
    // compositions, and checks the table is structurally sound (entries on
    // composable pairs only, one entry per pair, no pair missing). Category
    // laws are not checked here; see validate().
    static FinCat assemble(const CatSpec& spec);

    // assemble() plus validate(), throwing ValidationError on the first
    // violated law.
    static FinCat checked(const CatSpec& spec);

    int object_count() const { return static_cast<int>(objects_.size()); }
    int arrow_count() const { return static_cast<int>(arrows_.size()); }

    const std::string& object_name(ObjIx c) const { return objects_[c]; }
    const std::string& arrow_name(ArrIx f) const { return arrows_[f].name; }
    std::optional<ObjIx> object(std::string_view name) const;
    std::optional<ArrIx> arrow(std::string_view name) const;

    ObjIx dom(ArrIx f) const { return arrows_[f].dom; }
    ObjIx cod(ArrIx f) const { return arrows_[f].cod; }
    ArrIx identity(ObjIx c) const { return c; }
    bool is_identity(ArrIx f) const { return f < object_count(); }

    // g∘f for dom(g) = cod(f).
    ArrIx compose(ArrIx g, ArrIx f) const { return table_[g * arrows_.size() + f]; }
    bool composable(ArrIx g, ArrIx f) const { return dom(g) == cod(f); }

    // All arrows with codomain c, in canonical order; the member set of the
    // maximal sieve on c. Never empty (the identity is always present).
    const std::vector<ArrIx>& arrows_into(ObjIx c) const;
    int into_count(ObjIx c) const { return static_cast<int>(arrows_into_[c].size()); }

    // Position of f within arrows_into(cod(f)).
    int local_pos(ArrIx f) const { return local_pos_[f]; }

    // For f : d -> c, pull_pos(f)[j] is the position in arrows_into(c) of
    // f∘h where h = arrows_into(d)[j]. This is the whole pullback machinery.
    const std::vector<int>& pull_pos(ArrIx f) const { return pull_pos_[f]; }

    // Sieve masks are only available on objects with at most 64 incoming
    // arrows; throws GuardError otherwise.
    void require_mask_width(ObjIx c) const;

    // Positions forced into any sieve on c containing position pos, i.e. the
    // sieve generated by the single arrow arrows_into(c)[pos].
    std::uint64_t closure_req(ObjIx c, int pos) const { return closure_req_[c][pos]; }

    std::uint64_t full_mask(ObjIx c) const;

    // Checks the identity and associativity laws over the whole table and
    // reports every violation with a witness.
    std::vector<Violation> validate() const;

    // Full subcategory on `keep` (object indices, any order, duplicates
    // ignored), with arrows and composition restricted.
    FinCat full_subcategory(const std::vector<ObjIx>& keep) const;

private:
    FinCat() = default;
    void build_index();

    struct Arrow {
        std::string name;
        ObjIx dom, cod;
    };

    std::vector<std::string> objects_;
    std::vector<Arrow> arrows_;
    std::vector<ArrIx> table_;  // arrow_count^2, -1 on non-composable pairs
    std::vector<std::vector<ArrIx>> arrows_into_;
    std::vector<int> local_pos_;
    std::vector<std::vector<int>> pull_pos_;
    std::vector<std::vector<std::uint64_t>> closure_req_;  // empty past 64 arrows
    std::unordered_map<std::string, int> obj_ix_, arr_ix_;
};

// The named fixture categories used throughout tests and documentation:
//   C1   terminal category (one object, identity only)
//   C2   single arrow f : a -> b
//   D2   two objects, identities only
//   M2   one object with an idempotent endomorphism e (e∘e = e)
//   SPAN objects {a,b,c} with p : a -> b and q : a -> c
FinCat builtin(std::string_view name);

}  // namespace sievecalc
