#include "dc/reasoner.hpp"

#include <algorithm>
#include <functional>

namespace dc {

namespace {

// ---- inverse canonicalization ------------------------------------------

std::map<std::string, std::string> partner_map(const KnowledgeBase &kb) {
    std::map<std::string, std::string> out;
    for (const auto &[p, q] : kb.vocabulary.inverse_partners) {
        out.emplace(p, q);
        out.emplace(q, p);
    }
    return out;
}

RelationExpr canon_rel(const RelationExpr &r, const std::map<std::string, std::string> &partner) {
    switch (r.kind) {
    case RelationExpr::Kind::Inverse:
        if (auto it = partner.find(r.name); it != partner.end())
            return RelationExpr::atomic(it->second);
        return r;
    case RelationExpr::Kind::Complement:
        return RelationExpr::complement(canon_rel(*r.inner, partner));
    default:
        return r;
    }
}

ConceptExpr canon_concept(const ConceptExpr &c, const std::map<std::string, std::string> &partner) {
    ConceptExpr out = c;
    if (c.rel) out.rel = std::make_shared<RelationExpr>(canon_rel(*c.rel, partner));
    if (c.lhs) out.lhs = std::make_shared<ConceptExpr>(canon_concept(*c.lhs, partner));
    if (c.rhs) out.rhs = std::make_shared<ConceptExpr>(canon_concept(*c.rhs, partner));
    return out;
}

void forbid_positionalist(const ConceptExpr &c) {
    using K = ConceptExpr::Kind;
    if (c.kind == K::MinPlace || c.kind == K::MaxPlace)
        throw Error(ErrorCode::UnsupportedFeature,
                    "place-indexed restrictions are not supported here; rewrite the "
                    "positionalist kb to the standard view first");
    if (c.rel && c.rel->kind == RelationExpr::Kind::Selection)
        throw Error(ErrorCode::UnsupportedFeature,
                    "selection expressions are not supported here; rewrite the "
                    "positionalist kb to the standard view first");
    if (c.lhs) forbid_positionalist(*c.lhs);
    if (c.rhs) forbid_positionalist(*c.rhs);
}

void split_conj(const ConceptExpr &c, std::vector<ConceptExpr> &out) {
    if (c.kind == ConceptExpr::Kind::And) {
        split_conj(*c.lhs, out);
        split_conj(*c.rhs, out);
    } else {
        out.push_back(c);
    }
}

// ---- structural saturation ---------------------------------------------

struct Saturator {
    std::map<std::string, std::string> partner;
    std::map<std::string, std::vector<ConceptExpr>> base; // atomic lhs -> rhs literals
    struct Cond {
        std::vector<ConceptExpr> conds; // empty = fires unconditionally (⊤ lhs)
        std::vector<ConceptExpr> rhs;
    };
    std::vector<Cond> conditionals;
    std::map<std::string, std::set<std::string>> rel_supers, rel_subs; // by serialized form
    std::map<std::string, RelationExpr> rel_by_key;

    explicit Saturator(const KnowledgeBase &kb) {
        partner = partner_map(kb);
        auto note_rel = [&](const RelationExpr &r) {
            std::string key = serialize_relation(r);
            rel_by_key.emplace(key, r);
            rel_supers[key].insert(key);
            rel_subs[key].insert(key);
            return key;
        };
        auto inv_of = [&](const RelationExpr &r) -> RelationExpr {
            if (r.kind == RelationExpr::Kind::Atomic) {
                if (auto it = partner.find(r.name); it != partner.end())
                    return RelationExpr::atomic(it->second);
                return RelationExpr::inverse(r.name);
            }
            if (r.kind == RelationExpr::Kind::Inverse) return RelationExpr::atomic(r.name);
            return r; // TopN is its own inverse
        };
        std::vector<std::pair<std::string, std::string>> edges;
        for (const Axiom &ax : kb.axioms) {
            switch (ax.kind) {
            case Axiom::Kind::ConceptInc: {
                forbid_positionalist(ax.lhs_c);
                forbid_positionalist(ax.rhs_c);
                std::vector<ConceptExpr> lhs, rhs;
                split_conj(canon_concept(ax.lhs_c, partner), lhs);
                split_conj(canon_concept(ax.rhs_c, partner), rhs);
                if (lhs.size() == 1 && lhs[0].kind == ConceptExpr::Kind::Atomic) {
                    auto &v = base[lhs[0].name];
                    v.insert(v.end(), rhs.begin(), rhs.end());
                } else {
                    std::vector<ConceptExpr> conds;
                    for (ConceptExpr &l : lhs)
                        if (l.kind != ConceptExpr::Kind::Top) conds.push_back(std::move(l));
                    conditionals.push_back({std::move(conds), std::move(rhs)});
                }
                break;
            }
            case Axiom::Kind::RelInc: {
                RelationExpr l = canon_rel(ax.lhs_r, partner);
                RelationExpr r = canon_rel(ax.rhs_r, partner);
                if (l.kind == RelationExpr::Kind::Complement ||
                    r.kind == RelationExpr::Kind::Complement)
                    break; // disjointness content, no subsumption consequence here
                edges.emplace_back(note_rel(l), note_rel(r));
                edges.emplace_back(note_rel(inv_of(l)), note_rel(inv_of(r)));
                break;
            }
            case Axiom::Kind::IdAttr:
                base[ax.concept_name].push_back(ConceptExpr::at_most_one_attr(ax.attribute));
                break;
            case Axiom::Kind::IdRoles:
                for (const std::string &rel : ax.roles) {
                    base[ax.concept_name].push_back(
                        ConceptExpr::min(1, RelationExpr::atomic(rel)));
                    base[ax.concept_name].push_back(
                        ConceptExpr::max(1, RelationExpr::atomic(rel)));
                }
                break;
            case Axiom::Kind::Fd:
                break;
            }
        }
        // reflexive-transitive closure of the relation-inclusion graph
        bool changed = true;
        for (const auto &[a, b] : edges) {
            rel_supers[a].insert(b);
            rel_subs[b].insert(a);
        }
        while (changed) {
            changed = false;
            for (auto &[a, sups] : rel_supers) {
                std::set<std::string> add;
                for (const std::string &b : sups)
                    for (const std::string &c : rel_supers[b])
                        if (!sups.count(c)) add.insert(c);
                for (const std::string &c : add) {
                    sups.insert(c);
                    rel_subs[c].insert(a);
                    changed = true;
                }
            }
        }
    }

    static bool trivially_true(const ConceptExpr &w) {
        using K = ConceptExpr::Kind;
        if (w.kind == K::Top) return true;
        if ((w.kind == K::Min || w.kind == K::AttrMin) && w.count == 0) return true;
        return false;
    }

    bool lit_entails(const ConceptExpr &h, const ConceptExpr &w) const {
        using K = ConceptExpr::Kind;
        if (trivially_true(w)) return true;
        if (serialize_concept(h) == serialize_concept(w)) return true;
        auto same_rel = [&] { return serialize_relation(*h.rel) == serialize_relation(*w.rel); };
        if (h.kind == K::Min && w.kind == K::Min && same_rel()) return h.count >= w.count;
        if (h.kind == K::Max && w.kind == K::Max && same_rel()) return h.count <= w.count;
        if (h.kind == K::AttrMin && w.kind == K::AttrMin && h.name == w.name &&
            h.datatype == w.datatype)
            return h.count >= w.count;
        if (h.kind == K::AttrMax && w.kind == K::AttrMax && h.name == w.name &&
            h.datatype == w.datatype)
            return h.count <= w.count;
        if (h.kind == K::SomeAttr && w.kind == K::AttrMin && h.name == w.name &&
            h.datatype == w.datatype)
            return w.count <= 1;
        if (h.kind == K::AttrMin && w.kind == K::SomeAttr && h.name == w.name &&
            h.datatype == w.datatype)
            return h.count >= 1;
        if (h.kind == K::AtMostOneAttr && w.kind == K::AttrMax && h.name == w.name)
            return w.count >= 1;
        if (h.kind == K::SomeRel && w.kind == K::Min && same_rel()) return w.count <= 1;
        return false;
    }

    bool entails(const std::map<std::string, ConceptExpr> &lits, const ConceptExpr &w) const {
        using K = ConceptExpr::Kind;
        if (w.kind == K::And) return entails(lits, *w.lhs) && entails(lits, *w.rhs);
        if (w.kind == K::Or) return entails(lits, *w.lhs) || entails(lits, *w.rhs);
        for (const auto &[key, h] : lits)
            if (lit_entails(h, w)) return true;
        return false;
    }

    std::map<std::string, ConceptExpr> saturate(const std::string &concept_name) const {
        std::map<std::string, ConceptExpr> lits;
        auto add = [&](const ConceptExpr &c) {
            std::vector<ConceptExpr> parts;
            split_conj(c, parts);
            bool changed = false;
            for (ConceptExpr &p : parts)
                changed |= lits.emplace(serialize_concept(p), p).second;
            return changed;
        };
        add(ConceptExpr::atomic(concept_name));
        bool changed = true;
        while (changed) {
            changed = false;
            std::vector<ConceptExpr> snapshot;
            for (const auto &[key, l] : lits) snapshot.push_back(l);
            for (const ConceptExpr &l : snapshot) {
                using K = ConceptExpr::Kind;
                if (l.kind == K::Atomic) {
                    if (auto it = base.find(l.name); it != base.end())
                        for (const ConceptExpr &r : it->second) changed |= add(r);
                } else if (l.kind == K::SomeRel) {
                    changed |= add(ConceptExpr::min(1, *l.rel));
                    std::string key = serialize_relation(*l.rel);
                    if (auto it = rel_supers.find(key); it != rel_supers.end())
                        for (const std::string &s : it->second)
                            changed |= add(ConceptExpr::some_rel(rel_by_key.at(s), l.name));
                } else if (l.kind == K::Min) {
                    std::string key = serialize_relation(*l.rel);
                    if (auto it = rel_supers.find(key); it != rel_supers.end())
                        for (const std::string &s : it->second)
                            changed |= add(ConceptExpr::min(l.count, rel_by_key.at(s)));
                } else if (l.kind == K::Max) {
                    std::string key = serialize_relation(*l.rel);
                    if (auto it = rel_subs.find(key); it != rel_subs.end())
                        for (const std::string &s : it->second)
                            changed |= add(ConceptExpr::max(l.count, rel_by_key.at(s)));
                } else if (l.kind == K::AllRel) {
                    std::string key = serialize_relation(*l.rel);
                    if (auto it = rel_subs.find(key); it != rel_subs.end())
                        for (const std::string &s : it->second)
                            changed |= add(ConceptExpr::all_rel(rel_by_key.at(s), l.name));
                }
            }
            for (const Cond &c : conditionals) {
                bool fire = true;
                for (const ConceptExpr &cond : c.conds)
                    if (!entails(lits, cond)) fire = false;
                if (fire)
                    for (const ConceptExpr &r : c.rhs) changed |= add(r);
            }
        }
        return lits;
    }

    bool unsat(const std::map<std::string, ConceptExpr> &lits) const {
        using K = ConceptExpr::Kind;
        for (const auto &[k1, a] : lits)
            for (const auto &[k2, b] : lits) {
                if (a.kind == K::Min && b.kind == K::Max &&
                    serialize_relation(*a.rel) == serialize_relation(*b.rel) &&
                    a.count > b.count)
                    return true;
                if (a.kind == K::AttrMin && b.kind == K::AttrMax && a.name == b.name &&
                    a.datatype == b.datatype && a.count > b.count)
                    return true;
                if (a.kind == K::AttrMin && b.kind == K::AtMostOneAttr && a.name == b.name &&
                    a.count > 1)
                    return true;
                if (a.kind == K::SomeAttr && b.kind == K::AttrMax && a.name == b.name &&
                    a.datatype == b.datatype && b.count == 0)
                    return true;
            }
        return false;
    }
};

// ---- exhaustive finite-model search ------------------------------------

using Tri = signed char; // 1 true, 0 false, -1 unassigned

struct Engine {
    const KnowledgeBase &kb;
    int m = 1, k = 0;
    std::vector<std::string> objs, vals;
    std::map<std::string, size_t> conc_off, attr_off, dt_off;
    struct RelEntry {
        size_t off = 0;
        int arity = 2;
        bool derived = false;  // extension = swap of base's
        std::string base;
    };
    std::map<std::string, RelEntry> rels;
    std::vector<Tri> bits;
    std::vector<size_t> order;
    unsigned long long budget = 0, used = 0;

    Engine(const KnowledgeBase &kb_, int m_, unsigned long long budget_)
        : kb(kb_), m(m_), budget(budget_) {
        const Vocabulary &voc = kb.vocabulary;
        k = (voc.attributes.empty() && voc.datatypes.empty()) ? 0 : m;
        for (int i = 0; i < m; ++i) objs.push_back("c" + std::to_string(i + 1));
        for (int i = 0; i < k; ++i) vals.push_back("v" + std::to_string(i + 1));

        std::map<std::string, std::string> derived; // relation -> base
        for (const auto &[p, q] : voc.inverse_partners)
            if (p != q && !derived.count(p) && !derived.count(q)) derived.emplace(q, p);

        size_t off = 0;
        for (const auto &[name, gen] : voc.datatypes) {
            dt_off[name] = off;
            off += k;
        }
        for (const auto &[name, gen] : voc.concepts) {
            conc_off[name] = off;
            off += m;
        }
        for (const auto &[name, gen] : voc.attributes) {
            attr_off[name] = off;
            off += static_cast<size_t>(m) * k;
        }
        for (const auto &[name, decl] : voc.relations) {
            RelEntry e;
            e.arity = decl.arity;
            if (auto it = derived.find(name); it != derived.end()) {
                e.derived = true;
                e.base = it->second;
            } else {
                e.off = off;
                size_t sz = 1;
                for (int i = 0; i < decl.arity; ++i) sz *= m;
                off += sz;
            }
            rels[name] = e;
        }
        bits.assign(off, -1);

        // assignment order: value-side bits first, then object stages; a
        // tuple joins the stage of its largest component
        for (const auto &[name, o] : dt_off)
            for (int v = 0; v < k; ++v) order.push_back(o + v);
        for (int stage = 0; stage < m; ++stage) {
            for (const auto &[name, o] : conc_off) order.push_back(o + stage);
            for (const auto &[name, o] : attr_off)
                for (int v = 0; v < k; ++v)
                    order.push_back(o + static_cast<size_t>(stage) * k + v);
            for (const auto &[name, e] : rels) {
                if (e.derived) continue;
                size_t sz = 1;
                for (int i = 0; i < e.arity; ++i) sz *= m;
                for (size_t t = 0; t < sz; ++t) {
                    size_t rem = t;
                    int mx = 0;
                    for (int i = 0; i < e.arity; ++i) {
                        mx = std::max(mx, static_cast<int>(rem % m));
                        rem /= m;
                    }
                    if (mx == stage) order.push_back(e.off + t);
                }
            }
        }
    }

    Tri cbit(const std::string &name, int o) const {
        auto it = conc_off.find(name);
        if (it == conc_off.end())
            throw Error(ErrorCode::VocabularyError, "concept '" + name + "' not declared");
        return bits[it->second + o];
    }
    Tri dbit(const std::string &name, int v) const {
        auto it = dt_off.find(name);
        if (it == dt_off.end())
            throw Error(ErrorCode::VocabularyError, "datatype '" + name + "' not declared");
        return bits[it->second + v];
    }
    Tri abit(const std::string &name, int o, int v) const {
        auto it = attr_off.find(name);
        if (it == attr_off.end())
            throw Error(ErrorCode::VocabularyError, "attribute '" + name + "' not declared");
        return bits[it->second + static_cast<size_t>(o) * k + v];
    }
    // tuple given positionally in the relation's declared place order
    Tri rbit(const std::string &name, std::vector<int> tuple) const {
        auto it = rels.find(name);
        if (it == rels.end())
            throw Error(ErrorCode::VocabularyError, "relation '" + name + "' not declared");
        const RelEntry &e = it->second;
        if (static_cast<int>(tuple.size()) != e.arity)
            throw Error(ErrorCode::InvalidArgument, "arity mismatch on '" + name + "'");
        if (e.derived) return rbit(e.base, {tuple[1], tuple[0]});
        size_t idx = 0;
        for (int i = e.arity - 1; i >= 0; --i) idx = idx * m + tuple[i];
        return bits[e.off + idx];
    }

    Tri tri_pair(const RelationExpr &r, int a, int b) const {
        switch (r.kind) {
        case RelationExpr::Kind::TopN:
            return 1;
        case RelationExpr::Kind::Atomic:
            return rbit(r.name, {a, b});
        case RelationExpr::Kind::Inverse:
            return rbit(r.name, {b, a});
        case RelationExpr::Kind::Complement: {
            Tri t = tri_pair(*r.inner, a, b);
            return t < 0 ? t : static_cast<Tri>(1 - t);
        }
        case RelationExpr::Kind::Selection:
            return tri_c(*r.sel_concept, r.place == "1" ? a : b);
        }
        return -1;
    }

    // count of tuples of `r` whose component at `place` is o: (true, unknown)
    std::pair<int, int> count_place(const RelationExpr &r, const std::string &place,
                                    int o) const {
        int ct = 0, cu = 0;
        if (r.kind == RelationExpr::Kind::Atomic) {
            auto dit = kb.vocabulary.relations.find(r.name);
            if (dit == kb.vocabulary.relations.end())
                throw Error(ErrorCode::VocabularyError, "relation '" + r.name + "' not declared");
            const std::vector<std::string> &places = dit->second.places;
            int pos = -1;
            for (size_t i = 0; i < places.size(); ++i)
                if (places[i] == place) pos = static_cast<int>(i);
            if (pos < 0)
                throw Error(ErrorCode::InvalidArgument,
                            "relation '" + r.name + "' has no place '" + place + "'");
            int n = dit->second.arity;
            std::vector<int> t(n, 0);
            t[pos] = o;
            std::function<void(int)> walk = [&](int i) {
                if (i == n) {
                    Tri b = rbit(r.name, t);
                    if (b == 1) ++ct;
                    else if (b == -1) ++cu;
                    return;
                }
                if (i == pos) {
                    walk(i + 1);
                    return;
                }
                for (int d = 0; d < m; ++d) {
                    t[i] = d;
                    walk(i + 1);
                }
            };
            walk(0);
            return {ct, cu};
        }
        // non-atomic relation expressions are binary with places "1","2"
        if (place != "1" && place != "2")
            throw Error(ErrorCode::InvalidArgument, "place must be 1 or 2 here");
        for (int d = 0; d < m; ++d) {
            Tri b = place == "1" ? tri_pair(r, o, d) : tri_pair(r, d, o);
            if (b == 1) ++ct;
            else if (b == -1) ++cu;
        }
        return {ct, cu};
    }

    Tri tri_c(const ConceptExpr &c, int o) const {
        using K = ConceptExpr::Kind;
        switch (c.kind) {
        case K::Top:
            return 1;
        case K::Atomic:
            return cbit(c.name, o);
        case K::MinPlace:
        case K::MaxPlace: {
            auto [ct, cu] = count_place(*c.rel, c.place, o);
            if (c.kind == K::MinPlace)
                return ct >= static_cast<int>(c.count)      ? 1
                       : ct + cu < static_cast<int>(c.count) ? 0
                                                             : -1;
            return ct > static_cast<int>(c.count)        ? 0
                   : ct + cu <= static_cast<int>(c.count) ? 1
                                                          : -1;
        }
        case K::Min:
        case K::Max: {
            int ct = 0, cu = 0;
            for (int d = 0; d < m; ++d) {
                Tri b = tri_pair(*c.rel, o, d);
                if (b == 1) ++ct;
                else if (b == -1) ++cu;
            }
            if (c.kind == K::Min)
                return ct >= static_cast<int>(c.count)      ? 1
                       : ct + cu < static_cast<int>(c.count) ? 0
                                                             : -1;
            return ct > static_cast<int>(c.count)        ? 0
                   : ct + cu <= static_cast<int>(c.count) ? 1
                                                          : -1;
        }
        case K::AllRel:
        case K::SomeRel: {
            bool some_true = false, any_unknown = false, all_ok = true;
            for (int d = 0; d < m; ++d) {
                Tri r = tri_pair(*c.rel, o, d);
                Tri f = cbit(c.name, d);
                if (c.kind == K::AllRel) {
                    if (r == 1 && f == 0) return 0;
                    if (!(r == 0 || f == 1)) any_unknown = true;
                } else {
                    if (r == 1 && f == 1) some_true = true;
                    if (!(r == 0 || f == 0)) any_unknown = true;
                }
            }
            (void)all_ok;
            if (c.kind == K::AllRel) return any_unknown ? -1 : 1;
            return some_true ? 1 : any_unknown ? -1 : 0;
        }
        case K::AllAttr:
        case K::SomeAttr: {
            bool some_true = false, any_unknown = false;
            for (int v = 0; v < k; ++v) {
                Tri a = abit(c.name, o, v);
                Tri t = dbit(c.datatype, v);
                if (c.kind == K::AllAttr) {
                    if (a == 1 && t == 0) return 0;
                    if (!(a == 0 || t == 1)) any_unknown = true;
                } else {
                    if (a == 1 && t == 1) some_true = true;
                    if (!(a == 0 || t == 0)) any_unknown = true;
                }
            }
            if (c.kind == K::AllAttr) return any_unknown ? -1 : 1;
            return some_true ? 1 : any_unknown ? -1 : 0;
        }
        case K::AtMostOneAttr: {
            int ct = 0, cu = 0;
            for (int v = 0; v < k; ++v) {
                Tri a = abit(c.name, o, v);
                if (a == 1) ++ct;
                else if (a == -1) ++cu;
            }
            return ct > 1 ? 0 : ct + cu <= 1 ? 1 : -1;
        }
        case K::AttrMin:
        case K::AttrMax: {
            int ct = 0, cu = 0;
            for (int v = 0; v < k; ++v) {
                Tri a = abit(c.name, o, v);
                Tri t = dbit(c.datatype, v);
                if (a == 1 && t == 1) ++ct;
                else if (a != 0 && t != 0) ++cu;
            }
            if (c.kind == K::AttrMin)
                return ct >= static_cast<int>(c.count)      ? 1
                       : ct + cu < static_cast<int>(c.count) ? 0
                                                             : -1;
            return ct > static_cast<int>(c.count)        ? 0
                   : ct + cu <= static_cast<int>(c.count) ? 1
                                                          : -1;
        }
        case K::And: {
            Tri a = tri_c(*c.lhs, o);
            if (a == 0) return 0;
            Tri b = tri_c(*c.rhs, o);
            if (b == 0) return 0;
            return (a == 1 && b == 1) ? 1 : -1;
        }
        case K::Or: {
            Tri a = tri_c(*c.lhs, o);
            if (a == 1) return 1;
            Tri b = tri_c(*c.rhs, o);
            if (b == 1) return 1;
            return (a == 0 && b == 0) ? 0 : -1;
        }
        }
        return -1;
    }

    // definite violation of one axiom under the current partial assignment
    bool violated(const Axiom &ax) const {
        switch (ax.kind) {
        case Axiom::Kind::ConceptInc:
            for (int o = 0; o < m; ++o)
                if (tri_c(ax.lhs_c, o) == 1 && tri_c(ax.rhs_c, o) == 0) return true;
            return false;
        case Axiom::Kind::RelInc:
            for (int a = 0; a < m; ++a)
                for (int b = 0; b < m; ++b)
                    if (tri_pair(ax.lhs_r, a, b) == 1 && tri_pair(ax.rhs_r, a, b) == 0)
                        return true;
            return false;
        case Axiom::Kind::IdAttr: {
            for (int v = 0; v < k; ++v) {
                int owners = 0;
                for (int o = 0; o < m; ++o)
                    if (abit(ax.attribute, o, v) == 1 && cbit(ax.concept_name, o) == 1)
                        ++owners;
                if (owners > 1) return true;
            }
            for (int o = 0; o < m; ++o) {
                if (cbit(ax.concept_name, o) != 1) continue;
                int ct = 0, possible = 0;
                for (int v = 0; v < k; ++v) {
                    Tri a = abit(ax.attribute, o, v);
                    if (a == 1) ++ct;
                    if (a != 0) ++possible;
                }
                if (ct > 1 || possible == 0) return true;
            }
            return false;
        }
        case Axiom::Kind::IdRoles:
            for (int o = 0; o < m; ++o) {
                if (cbit(ax.concept_name, o) != 1) continue;
                for (const std::string &rel : ax.roles) {
                    int ct = 0, possible = 0;
                    for (int d = 0; d < m; ++d) {
                        Tri b = rbit(rel, {o, d});
                        if (b == 1) ++ct;
                        if (b != 0) ++possible;
                    }
                    if (ct > 1 || possible == 0) return true;
                }
            }
            return false;
        case Axiom::Kind::Fd: {
            auto dit = kb.vocabulary.relations.find(ax.relation);
            if (dit == kb.vocabulary.relations.end())
                throw Error(ErrorCode::VocabularyError,
                            "relation '" + ax.relation + "' not declared");
            const std::vector<std::string> &places = dit->second.places;
            auto pos_of = [&](const std::string &p) {
                for (size_t i = 0; i < places.size(); ++i)
                    if (places[i] == p) return static_cast<int>(i);
                throw Error(ErrorCode::InvalidArgument,
                            "relation '" + ax.relation + "' has no place '" + p + "'");
            };
            int p1 = pos_of(ax.fd_i1), p2 = pos_of(ax.fd_i2), p3 = pos_of(ax.fd_i3);
            int n = dit->second.arity;
            size_t sz = 1;
            for (int i = 0; i < n; ++i) sz *= m;
            std::vector<std::vector<int>> in_ext;
            for (size_t t = 0; t < sz; ++t) {
                size_t rem = t;
                std::vector<int> tup(n);
                for (int i = 0; i < n; ++i) {
                    tup[i] = static_cast<int>(rem % m);
                    rem /= m;
                }
                if (rbit(ax.relation, tup) == 1) in_ext.push_back(std::move(tup));
            }
            for (const auto &r : in_ext)
                for (const auto &s : in_ext)
                    if (r[p1] == s[p1] && r[p2] == s[p2] && r[p3] != s[p3]) return true;
            return false;
        }
        }
        return false;
    }

    bool any_violated() const {
        for (const Axiom &ax : kb.axioms)
            if (violated(ax)) return true;
        for (const auto &[a, b] : kb.vocabulary.disjoint_concepts)
            for (int o = 0; o < m; ++o)
                if (cbit(a, o) == 1 && cbit(b, o) == 1) return true;
        return false;
    }

    Interpretation materialize() const {
        Interpretation interp;
        for (const std::string &o : objs) interp.delta_c.insert(o);
        interp.top_set = interp.delta_c;
        for (const std::string &v : vals) interp.delta_t.insert(v);
        for (const auto &[name, off] : conc_off) {
            auto &ext = interp.concept_map[name];
            for (int o = 0; o < m; ++o)
                if (bits[off + o] == 1) ext.insert(objs[o]);
        }
        for (const auto &[name, off] : dt_off) {
            auto &ext = interp.datatype_map[name];
            for (int v = 0; v < k; ++v)
                if (bits[off + v] == 1) ext.insert(vals[v]);
        }
        for (const auto &[name, off] : attr_off) {
            auto &ext = interp.attr_map[name];
            for (int o = 0; o < m; ++o)
                for (int v = 0; v < k; ++v)
                    if (bits[off + static_cast<size_t>(o) * k + v] == 1)
                        ext.emplace(objs[o], vals[v]);
        }
        for (const auto &[name, e] : rels) {
            const RelationDecl &decl = kb.vocabulary.relations.at(name);
            auto &ext = interp.relation_map[name];
            size_t sz = 1;
            for (int i = 0; i < e.arity; ++i) sz *= m;
            for (size_t t = 0; t < sz; ++t) {
                size_t rem = t;
                std::vector<int> tup(e.arity);
                for (int i = 0; i < e.arity; ++i) {
                    tup[i] = static_cast<int>(rem % m);
                    rem /= m;
                }
                if (rbit(name, tup) == 1) {
                    Tuple row;
                    for (int i = 0; i < e.arity; ++i) row[decl.places[i]] = objs[tup[i]];
                    ext.insert(std::move(row));
                }
            }
        }
        return interp;
    }

    std::optional<Interpretation> dfs(size_t i) {
        if (i == order.size()) {
            Interpretation interp = materialize();
            if (is_model(interp, kb).ok) return interp;
            return std::nullopt;
        }
        if (bits[order[i]] != -1) return dfs(i + 1); // pinned
        for (Tri v : {Tri(0), Tri(1)}) {
            if (++used > budget)
                throw Error(ErrorCode::BudgetExceeded,
                            "countermodel search exceeded its node budget (" +
                                std::to_string(budget) + ")");
            bits[order[i]] = v;
            if (!any_violated())
                if (auto r = dfs(i + 1)) return r;
        }
        bits[order[i]] = -1;
        return std::nullopt;
    }

    std::optional<Interpretation> run(const std::vector<std::pair<std::string, Tri>> &pins) {
        for (const auto &[concept_name, v] : pins) {
            auto it = conc_off.find(concept_name);
            if (it == conc_off.end())
                throw Error(ErrorCode::VocabularyError,
                            "concept '" + concept_name + "' not declared");
            bits[it->second + 0] = v; // pin on the first object
        }
        if (any_violated()) return std::nullopt;
        return dfs(0);
    }
};

} // namespace

std::optional<CounterModel> find_countermodel(const SubsumptionQuery &q, unsigned bound,
                                              unsigned long long node_budget) {
    if (!q.kb) throw Error(ErrorCode::InvalidArgument, "query lacks a knowledge base");
    if (bound < 1) throw Error(ErrorCode::InvalidArgument, "bound must be at least 1");
    const Vocabulary &voc = q.kb->vocabulary;
    if (!voc.concepts.count(q.sub))
        throw Error(ErrorCode::VocabularyError, "concept '" + q.sub + "' not declared");
    if (!voc.concepts.count(q.super))
        throw Error(ErrorCode::VocabularyError, "concept '" + q.super + "' not declared");
    if (q.sub == q.super) return std::nullopt;
    for (unsigned m = 1; m <= bound; ++m) {
        Engine eng(*q.kb, static_cast<int>(m), node_budget);
        if (auto interp = eng.run({{q.sub, 1}, {q.super, 0}}))
            return CounterModel{std::move(*interp), "c1", bound};
    }
    return std::nullopt;
}

bool subsumes_structural(const KnowledgeBase &kb, const std::string &sub,
                         const std::string &super) {
    if (!kb.vocabulary.concepts.count(sub))
        throw Error(ErrorCode::VocabularyError, "concept '" + sub + "' not declared");
    if (!kb.vocabulary.concepts.count(super))
        throw Error(ErrorCode::VocabularyError, "concept '" + super + "' not declared");
    if (sub == super) return true;
    Saturator sat(kb);
    auto lits = sat.saturate(sub);
    return sat.entails(lits, ConceptExpr::atomic(super)) || sat.unsat(lits);
}

bool equivalent(const KnowledgeBase &kb, const std::string &a, const std::string &b) {
    return subsumes_structural(kb, a, b) && subsumes_structural(kb, b, a);
}

unsigned default_bound(const KnowledgeBase &kb) {
    unsigned max_card = 0;
    std::function<void(const ConceptExpr &)> walk = [&](const ConceptExpr &c) {
        max_card = std::max(max_card, c.count);
        if (c.lhs) walk(*c.lhs);
        if (c.rhs) walk(*c.rhs);
    };
    for (const Axiom &ax : kb.axioms)
        if (ax.kind == Axiom::Kind::ConceptInc) {
            walk(ax.lhs_c);
            walk(ax.rhs_c);
        }
    unsigned b = static_cast<unsigned>(kb.vocabulary.concepts.size()) + max_card + 1;
    return std::min(b, 5u);
}

bool ClassificationResult::subsumed(const std::string &sub, const std::string &super) const {
    auto it = verdicts.find({sub, super});
    return it != verdicts.end() && it->second == PairVerdict::Subsumed;
}

ClassificationResult classify(const KnowledgeBase &kb, unsigned bound) {
    ClassificationResult out;
    out.bound = bound;
    for (const auto &[name, gen] : kb.vocabulary.concepts) out.concepts.push_back(name);
    Saturator sat(kb);
    std::map<std::string, std::map<std::string, ConceptExpr>> closures;
    for (const std::string &a : out.concepts) closures.emplace(a, sat.saturate(a));
    for (const std::string &a : out.concepts)
        for (const std::string &b : out.concepts) {
            bool holds = a == b || sat.entails(closures.at(a), ConceptExpr::atomic(b)) ||
                         sat.unsat(closures.at(a));
            if (holds) {
                out.verdicts[{a, b}] = PairVerdict::Subsumed;
            } else {
                SubsumptionQuery q{&kb, a, b};
                out.verdicts[{a, b}] = find_countermodel(q, bound)
                                           ? PairVerdict::RefutedWithWitness
                                           : PairVerdict::UnknownAtBound;
            }
        }
    // equivalence classes from mutual subsumption
    std::map<std::string, std::string> root;
    std::function<std::string(const std::string &)> find = [&](const std::string &x) {
        auto it = root.find(x);
        if (it == root.end() || it->second == x) return x;
        return it->second = find(it->second);
    };
    for (const std::string &a : out.concepts) root[a] = a;
    for (const std::string &a : out.concepts)
        for (const std::string &b : out.concepts)
            if (a < b && out.subsumed(a, b) && out.subsumed(b, a)) {
                std::string ra = find(a), rb = find(b);
                if (ra != rb) root[std::max(ra, rb)] = std::min(ra, rb);
            }
    std::map<std::string, std::vector<std::string>> classes;
    for (const std::string &a : out.concepts) classes[find(a)].push_back(a);
    for (auto &[r, members] : classes) out.equivalence_classes.push_back(members);
    return out;
}

std::vector<std::string> unsatisfiable_concepts(const KnowledgeBase &kb, unsigned bound) {
    std::vector<std::string> out;
    for (const auto &[name, gen] : kb.vocabulary.concepts) {
        bool satisfiable = false;
        for (unsigned m = 1; m <= bound && !satisfiable; ++m) {
            Engine eng(kb, static_cast<int>(m), 1000000);
            if (eng.run({{name, 1}})) satisfiable = true;
        }
        if (!satisfiable) out.push_back(name);
    }
    return out;
}

} // namespace dc
