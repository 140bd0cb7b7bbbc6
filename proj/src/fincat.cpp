#include "sievecalc/fincat.hpp"

#include <algorithm>
#include <set>

#include "sievecalc/errors.hpp"

namespace sievecalc {

namespace {

std::string identity_name(const std::string& obj) { return "1_" + obj; }

}  // namespace

const std::vector<ArrIx>& FinCat::arrows_into(ObjIx c) const {
    if (c < 0 || c >= object_count())
        throw DomainError("unknown object", std::to_string(c));
    return arrows_into_[c];
}

std::optional<ObjIx> FinCat::object(std::string_view name) const {
    auto it = obj_ix_.find(std::string(name));
    if (it == obj_ix_.end()) return std::nullopt;
    return it->second;
}

std::optional<ArrIx> FinCat::arrow(std::string_view name) const {
    auto it = arr_ix_.find(std::string(name));
    if (it == arr_ix_.end()) return std::nullopt;
    return it->second;
}

void FinCat::require_mask_width(ObjIx c) const {
    if (into_count(c) > 64)
        throw GuardError("object '" + objects_[c] + "' has " + std::to_string(into_count(c)) +
                             " incoming arrows; sieve operations support at most 64",
                         objects_[c]);
}

std::uint64_t FinCat::full_mask(ObjIx c) const {
    require_mask_width(c);
    int k = into_count(c);
    return k == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << k) - 1);
}

FinCat FinCat::assemble(const CatSpec& spec) {
    FinCat cat;

    for (const auto& name : spec.objects) {
        if (name.empty()) throw ValidationError("empty object name");
        if (!cat.obj_ix_.emplace(name, cat.object_count()).second)
            throw ValidationError("duplicate object name", name);
        cat.objects_.push_back(name);
    }

    // Identities occupy the first object_count() arrow slots. A declared
    // arrow named "1_<obj>" with dom = cod = obj is accepted as that
    // object's identity; the name is reserved for this purpose.
    for (ObjIx c = 0; c < cat.object_count(); ++c)
        cat.arrows_.push_back({identity_name(cat.objects_[c]), c, c});

    // "1_<obj>" for an existing object is the reserved identity name.
    auto identity_of = [&](const std::string& name) -> std::optional<ObjIx> {
        if (name.size() <= 2 || name.rfind("1_", 0) != 0) return std::nullopt;
        return cat.object(name.substr(2));
    };

    std::vector<bool> identity_declared(cat.object_count(), false);
    for (const auto& decl : spec.arrows) {
        if (decl.name.empty()) throw ValidationError("empty arrow name");
        auto d = cat.object(decl.dom);
        auto c = cat.object(decl.cod);
        if (!d) throw ValidationError("arrow '" + decl.name + "' has unknown domain", decl.dom);
        if (!c) throw ValidationError("arrow '" + decl.name + "' has unknown codomain", decl.cod);
        if (auto obj = identity_of(decl.name)) {
            if (*d != *obj || *c != *obj)
                throw ValidationError("arrow '" + decl.name + "' uses the reserved identity name "
                                      "but is not an endomorphism of '" +
                                          cat.objects_[*obj] + "'",
                                      decl.name);
            if (identity_declared[*obj])
                throw ValidationError("duplicate arrow name", decl.name);
            identity_declared[*obj] = true;
            continue;
        }
        Arrow arrow{decl.name, *d, *c};
        if (!cat.arr_ix_.emplace(decl.name, cat.arrow_count()).second)
            throw ValidationError("duplicate arrow name", decl.name);
        cat.arrows_.push_back(arrow);
    }
    for (ObjIx c = 0; c < cat.object_count(); ++c) {
        auto [it, fresh] = cat.arr_ix_.emplace(cat.arrows_[c].name, c);
        if (!fresh) throw ValidationError("duplicate arrow name", cat.arrows_[c].name);
    }

    const int m = cat.arrow_count();
    cat.table_.assign(static_cast<std::size_t>(m) * m, -1);
    auto entry = [&](ArrIx g, ArrIx f) -> ArrIx& { return cat.table_[g * m + f]; };

    // Identity compositions are filled in automatically. Explicit entries may
    // override them; validate() reports tables that break the identity laws,
    // which therefore stay representable.
    for (ArrIx f = 0; f < m; ++f) {
        entry(cat.identity(cat.cod(f)), f) = f;
        entry(f, cat.identity(cat.dom(f))) = f;
    }

    std::vector<char> explicit_entry(cat.table_.size(), 0);
    for (const auto& triple : spec.compose) {
        auto g = cat.arrow(triple[0]);
        auto f = cat.arrow(triple[1]);
        auto gf = cat.arrow(triple[2]);
        if (!g || !f || !gf)
            throw ValidationError("compose entry names an unknown arrow",
                                  triple[0] + "," + triple[1] + "," + triple[2]);
        if (!cat.composable(*g, *f))
            throw ValidationError("non-composable pair",
                                  triple[0] + "∘" + triple[1] + " (cod(" + triple[1] +
                                      ") ≠ dom(" + triple[0] + "))");
        if (cat.dom(*gf) != cat.dom(*f) || cat.cod(*gf) != cat.cod(*g))
            throw ValidationError("composite endpoint mismatch",
                                  triple[0] + "∘" + triple[1] + " = " + triple[2]);
        ArrIx& slot = entry(*g, *f);
        char& seen = explicit_entry[*g * m + *f];
        if (seen && slot != *gf)
            throw ValidationError("conflicting compose entries",
                                  triple[0] + "∘" + triple[1]);
        slot = *gf;
        seen = 1;
    }

    for (ArrIx g = 0; g < m; ++g)
        for (ArrIx f = 0; f < m; ++f)
            if (cat.composable(g, f) && entry(g, f) == -1)
                throw ValidationError("missing compose entry",
                                      cat.arrow_name(g) + "∘" + cat.arrow_name(f));

    cat.build_index();
    return cat;
}

FinCat FinCat::checked(const CatSpec& spec) {
    FinCat cat = assemble(spec);
    auto report = cat.validate();
    if (!report.empty())
        throw ValidationError(report.front().law, report.front().witness);
    return cat;
}

void FinCat::build_index() {
    arrows_into_.assign(object_count(), {});
    local_pos_.assign(arrow_count(), -1);
    for (ArrIx f = 0; f < arrow_count(); ++f) {
        local_pos_[f] = static_cast<int>(arrows_into_[cod(f)].size());
        arrows_into_[cod(f)].push_back(f);
    }

    pull_pos_.assign(arrow_count(), {});
    for (ArrIx f = 0; f < arrow_count(); ++f) {
        const auto& incoming = arrows_into_[dom(f)];
        pull_pos_[f].resize(incoming.size());
        for (std::size_t j = 0; j < incoming.size(); ++j)
            pull_pos_[f][j] = local_pos_[compose(f, incoming[j])];
    }

    closure_req_.assign(object_count(), {});
    for (ObjIx c = 0; c < object_count(); ++c) {
        const auto& incoming = arrows_into_[c];
        if (incoming.size() > 64) continue;
        closure_req_[c].assign(incoming.size(), 0);
        for (std::size_t i = 0; i < incoming.size(); ++i) {
            ArrIx g = incoming[i];
            for (int pos : pull_pos_[g]) closure_req_[c][i] |= std::uint64_t{1} << pos;
        }
    }
}

std::vector<Violation> FinCat::validate() const {
    std::vector<Violation> report;

    for (ArrIx f = 0; f < arrow_count(); ++f) {
        if (compose(identity(cod(f)), f) != f || compose(f, identity(dom(f))) != f)
            report.push_back({"identity law", arrow_name(f)});
    }

    for (ArrIx h = 0; h < arrow_count(); ++h)
        for (ArrIx g = 0; g < arrow_count(); ++g) {
            if (!composable(h, g)) continue;
            for (ArrIx f = 0; f < arrow_count(); ++f) {
                if (!composable(g, f)) continue;
                if (compose(h, compose(g, f)) != compose(compose(h, g), f))
                    report.push_back({"associativity", "(" + arrow_name(h) + "," +
                                                           arrow_name(g) + "," + arrow_name(f) +
                                                           ")"});
            }
        }

    return report;
}

FinCat FinCat::full_subcategory(const std::vector<ObjIx>& keep) const {
    std::set<ObjIx> kept;
    for (ObjIx c : keep) {
        if (c < 0 || c >= object_count())
            throw DomainError("unknown object in subcategory selection", std::to_string(c));
        kept.insert(c);
    }

    CatSpec spec;
    for (ObjIx c = 0; c < object_count(); ++c)
        if (kept.count(c)) spec.objects.push_back(objects_[c]);

    std::vector<bool> arrow_kept(arrow_count(), false);
    for (ArrIx f = 0; f < arrow_count(); ++f) {
        if (!kept.count(dom(f)) || !kept.count(cod(f))) continue;
        arrow_kept[f] = true;
        if (!is_identity(f))
            spec.arrows.push_back({arrow_name(f), object_name(dom(f)), object_name(cod(f))});
    }

    for (ArrIx g = 0; g < arrow_count(); ++g)
        for (ArrIx f = 0; f < arrow_count(); ++f)
            if (arrow_kept[g] && arrow_kept[f] && composable(g, f))
                spec.compose.push_back(
                    {arrow_name(g), arrow_name(f), arrow_name(compose(g, f))});

    return assemble(spec);
}

FinCat builtin(std::string_view name) {
    CatSpec spec;
    if (name == "C1") {
        spec.objects = {"x"};
    } else if (name == "C2") {
        spec.objects = {"a", "b"};
        spec.arrows = {{"f", "a", "b"}};
    } else if (name == "D2") {
        spec.objects = {"a", "b"};
    } else if (name == "M2") {
        spec.objects = {"x"};
        spec.arrows = {{"e", "x", "x"}};
        spec.compose = {{"e", "e", "e"}};
    } else if (name == "SPAN") {
        spec.objects = {"a", "b", "c"};
        spec.arrows = {{"p", "a", "b"}, {"q", "a", "c"}};
    } else {
        throw DomainError("unknown fixture name", std::string(name));
    }
    return FinCat::checked(spec);
}

}  // namespace sievecalc
