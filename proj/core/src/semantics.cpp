#include "dc/semantics.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>

namespace dc {

namespace {

const std::set<std::string> empty_set;
const std::set<Tuple> empty_tuples;
const std::set<std::pair<std::string, std::string>> empty_pairs;

std::vector<std::string> default_places(int n) {
    std::vector<std::string> out;
    for (int i = 1; i <= n; ++i) out.push_back(std::to_string(i));
    return out;
}

std::string tuple_to_string(const Tuple &t) {
    std::string out = "(";
    bool first = true;
    for (const auto &[place, obj] : t) {
        if (!first) out += ",";
        out += place + ":" + obj;
        first = false;
    }
    return out + ")";
}

} // namespace

const std::set<std::string> &Interpretation::concept_ext(const std::string &name) const {
    auto it = concept_map.find(name);
    return it == concept_map.end() ? empty_set : it->second;
}
const std::set<Tuple> &Interpretation::relation_ext(const std::string &name) const {
    auto it = relation_map.find(name);
    return it == relation_map.end() ? empty_tuples : it->second;
}
const std::set<std::pair<std::string, std::string>> &
Interpretation::attr_ext(const std::string &name) const {
    auto it = attr_map.find(name);
    return it == attr_map.end() ? empty_pairs : it->second;
}
const std::set<std::string> &Interpretation::datatype_ext(const std::string &name) const {
    auto it = datatype_map.find(name);
    return it == datatype_map.end() ? empty_set : it->second;
}

std::vector<std::string> check_interpretation(const Interpretation &interp,
                                              const Vocabulary &voc) {
    std::vector<std::string> out;
    for (const std::string &c : interp.top_set)
        if (!interp.delta_c.count(c)) out.push_back("top contains '" + c + "' outside delta_c");
    for (const auto &[name, ext] : interp.concept_map) {
        if (!voc.concepts.count(name)) out.push_back("undeclared concept '" + name + "'");
        for (const std::string &c : ext)
            if (!interp.top_set.count(c))
                out.push_back("concept " + name + " contains '" + c + "' outside top");
    }
    for (const auto &[name, ext] : interp.relation_map) {
        auto rit = voc.relations.find(name);
        if (rit == voc.relations.end()) {
            out.push_back("undeclared relation '" + name + "'");
            continue;
        }
        std::set<std::string> declared(rit->second.places.begin(), rit->second.places.end());
        for (const Tuple &t : ext) {
            std::set<std::string> keys;
            for (const auto &[place, obj] : t) {
                keys.insert(place);
                if (!interp.top_set.count(obj))
                    out.push_back("relation " + name + " tuple " + tuple_to_string(t) +
                                  " uses '" + obj + "' outside top");
            }
            if (keys != declared)
                out.push_back("relation " + name + " tuple " + tuple_to_string(t) +
                              " does not match declared places");
        }
    }
    for (const auto &[name, ext] : interp.attr_map) {
        if (!voc.attributes.count(name)) out.push_back("undeclared attribute '" + name + "'");
        for (const auto &[obj, val] : ext) {
            if (!interp.top_set.count(obj))
                out.push_back("attribute " + name + " pairs '" + obj + "' outside top");
            if (!interp.delta_t.count(val))
                out.push_back("attribute " + name + " uses value '" + val +
                              "' outside delta_t");
        }
    }
    for (const auto &[name, ext] : interp.datatype_map) {
        if (!voc.datatypes.count(name)) out.push_back("undeclared datatype '" + name + "'");
        for (const std::string &v : ext)
            if (!interp.delta_t.count(v))
                out.push_back("datatype " + name + " contains '" + v + "' outside delta_t");
    }
    return out;
}

namespace {

struct Evaluator {
    const Interpretation &interp;
    const Vocabulary &voc;

    const RelationDecl &decl(const std::string &name) const {
        auto it = voc.relations.find(name);
        if (it == voc.relations.end())
            throw Error(ErrorCode::VocabularyError, "relation '" + name + "' not declared");
        return it->second;
    }

    std::vector<std::string> place_order(const RelationExpr &r) const {
        switch (r.kind) {
        case RelationExpr::Kind::TopN:
            return default_places(r.arity);
        case RelationExpr::Kind::Atomic:
        case RelationExpr::Kind::Inverse:
            return decl(r.name).places;
        case RelationExpr::Kind::Selection:
            return default_places(2);
        case RelationExpr::Kind::Complement:
            return place_order(*r.inner);
        }
        return default_places(2);
    }

    std::set<Tuple> product(const std::vector<std::string> &places) const {
        std::set<Tuple> out;
        std::vector<std::string> objs(interp.top_set.begin(), interp.top_set.end());
        size_t n = places.size();
        std::vector<size_t> ix(n, 0);
        if (objs.empty()) return out;
        while (true) {
            Tuple t;
            for (size_t i = 0; i < n; ++i) t[places[i]] = objs[ix[i]];
            out.insert(std::move(t));
            size_t k = 0;
            while (k < n && ++ix[k] == objs.size()) ix[k++] = 0;
            if (k == n) break;
        }
        return out;
    }

    std::set<Tuple> relation(const RelationExpr &r) const {
        switch (r.kind) {
        case RelationExpr::Kind::TopN:
            return product(default_places(r.arity));
        case RelationExpr::Kind::Atomic:
            decl(r.name);
            return interp.relation_ext(r.name);
        case RelationExpr::Kind::Inverse: {
            const RelationDecl &d = decl(r.name);
            if (d.arity != 2)
                throw Error(ErrorCode::InvalidArgument,
                            "inverse of non-binary relation '" + r.name + "'");
            std::set<Tuple> out;
            for (const Tuple &t : interp.relation_ext(r.name)) {
                Tuple s;
                s[d.places[0]] = t.at(d.places[1]);
                s[d.places[1]] = t.at(d.places[0]);
                out.insert(std::move(s));
            }
            return out;
        }
        case RelationExpr::Kind::Selection: {
            if (r.place != "1" && r.place != "2")
                throw Error(ErrorCode::InvalidArgument,
                            "selection place must be 1 or 2, got '" + r.place + "'");
            std::set<std::string> cext = concept_set(*r.sel_concept);
            std::set<Tuple> out;
            for (const Tuple &t : product(default_places(2)))
                if (cext.count(t.at(r.place))) out.insert(t);
            return out;
        }
        case RelationExpr::Kind::Complement: {
            std::set<Tuple> inner = relation(*r.inner);
            std::set<Tuple> out;
            for (const Tuple &t : product(place_order(*r.inner)))
                if (!inner.count(t)) out.insert(t);
            return out;
        }
        }
        return {};
    }

    // #{tuples of `ext` whose component at `place` is c}
    static size_t count_at(const std::set<Tuple> &ext, const std::string &place,
                           const std::string &c) {
        size_t n = 0;
        for (const Tuple &t : ext) {
            auto it = t.find(place);
            if (it == t.end())
                throw Error(ErrorCode::InvalidArgument, "tuple lacks place '" + place + "'");
            if (it->second == c) ++n;
        }
        return n;
    }

    std::set<std::string> concept_set(const ConceptExpr &c) const {
        using K = ConceptExpr::Kind;
        switch (c.kind) {
        case K::Top:
            return interp.top_set;
        case K::Atomic:
            if (!voc.concepts.count(c.name))
                throw Error(ErrorCode::VocabularyError, "concept '" + c.name + "' not declared");
            return interp.concept_ext(c.name);
        case K::MinPlace:
        case K::MaxPlace: {
            std::set<Tuple> ext = relation(*c.rel);
            std::set<std::string> out;
            for (const std::string &d : interp.top_set) {
                size_t n = count_at(ext, c.place, d);
                if (c.kind == K::MinPlace ? n >= c.count : n <= c.count) out.insert(d);
            }
            return out;
        }
        case K::AllAttr: {
            const auto &vals = interp.datatype_ext(datatype_checked(c.datatype));
            const auto &pairs = interp.attr_ext(attr_checked(c.name));
            std::set<std::string> out;
            for (const std::string &d : interp.top_set) {
                bool ok = true;
                for (const auto &[obj, val] : pairs)
                    if (obj == d && !vals.count(val)) ok = false;
                if (ok) out.insert(d);
            }
            return out;
        }
        case K::SomeAttr: {
            const auto &vals = interp.datatype_ext(datatype_checked(c.datatype));
            const auto &pairs = interp.attr_ext(attr_checked(c.name));
            std::set<std::string> out;
            for (const auto &[obj, val] : pairs)
                if (vals.count(val) && interp.top_set.count(obj)) out.insert(obj);
            return out;
        }
        case K::AtMostOneAttr: {
            const auto &pairs = interp.attr_ext(attr_checked(c.name));
            std::set<std::string> out;
            for (const std::string &d : interp.top_set) {
                size_t n = 0;
                for (const auto &[obj, val] : pairs)
                    if (obj == d) ++n;
                if (n <= 1) out.insert(d);
            }
            return out;
        }
        case K::AttrMin:
        case K::AttrMax: {
            const auto &vals = interp.datatype_ext(datatype_checked(c.datatype));
            const auto &pairs = interp.attr_ext(attr_checked(c.name));
            std::set<std::string> out;
            for (const std::string &d : interp.top_set) {
                size_t n = 0;
                for (const auto &[obj, val] : pairs)
                    if (obj == d && vals.count(val)) ++n;
                if (c.kind == K::AttrMin ? n >= c.count : n <= c.count) out.insert(d);
            }
            return out;
        }
        case K::And: {
            std::set<std::string> a = concept_set(*c.lhs), b = concept_set(*c.rhs), out;
            std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                                  std::inserter(out, out.begin()));
            return out;
        }
        case K::Or: {
            std::set<std::string> out = concept_set(*c.lhs);
            for (const std::string &d : concept_set(*c.rhs)) out.insert(d);
            return out;
        }
        case K::AllRel:
        case K::SomeRel: {
            std::set<Tuple> ext = relation(*c.rel);
            std::vector<std::string> order = place_order(*c.rel);
            if (order.size() != 2)
                throw Error(ErrorCode::InvalidArgument, "qualified restriction needs a binary");
            if (!voc.concepts.count(c.name))
                throw Error(ErrorCode::VocabularyError, "concept '" + c.name + "' not declared");
            const auto &filler = interp.concept_ext(c.name);
            std::set<std::string> out;
            for (const std::string &d : interp.top_set) {
                bool all = true, some = false;
                for (const Tuple &t : ext) {
                    if (t.at(order[0]) != d) continue;
                    if (filler.count(t.at(order[1]))) some = true;
                    else all = false;
                }
                if (c.kind == K::AllRel ? all : some) out.insert(d);
            }
            return out;
        }
        case K::Min:
        case K::Max: {
            std::set<Tuple> ext = relation(*c.rel);
            std::vector<std::string> order = place_order(*c.rel);
            if (order.size() != 2)
                throw Error(ErrorCode::InvalidArgument, "number restriction needs a binary");
            std::set<std::string> out;
            for (const std::string &d : interp.top_set) {
                size_t n = count_at(ext, order[0], d);
                if (c.kind == K::Min ? n >= c.count : n <= c.count) out.insert(d);
            }
            return out;
        }
        }
        return {};
    }

    const std::string &attr_checked(const std::string &a) const {
        if (!voc.attributes.count(a))
            throw Error(ErrorCode::VocabularyError, "attribute '" + a + "' not declared");
        return a;
    }
    const std::string &datatype_checked(const std::string &t) const {
        if (!voc.datatypes.count(t))
            throw Error(ErrorCode::VocabularyError, "datatype '" + t + "' not declared");
        return t;
    }

    // Positional view of a tuple set, for comparisons across place labelings.
    static std::set<std::vector<std::string>> positional(const std::set<Tuple> &ext,
                                                         const std::vector<std::string> &order) {
        std::set<std::vector<std::string>> out;
        for (const Tuple &t : ext) {
            std::vector<std::string> row;
            for (const std::string &p : order) {
                auto it = t.find(p);
                if (it == t.end())
                    throw Error(ErrorCode::InvalidArgument, "tuple lacks place '" + p + "'");
                row.push_back(it->second);
            }
            out.insert(std::move(row));
        }
        return out;
    }

    std::optional<std::string> axiom_violation(const Axiom &ax) const {
        switch (ax.kind) {
        case Axiom::Kind::ConceptInc: {
            std::set<std::string> l = concept_set(ax.lhs_c), r = concept_set(ax.rhs_c);
            for (const std::string &d : l)
                if (!r.count(d)) return d;
            return std::nullopt;
        }
        case Axiom::Kind::RelInc: {
            auto l = positional(relation(ax.lhs_r), place_order(ax.lhs_r));
            auto r = positional(relation(ax.rhs_r), place_order(ax.rhs_r));
            for (const auto &row : l)
                if (!r.count(row)) {
                    std::string w = "(";
                    for (size_t i = 0; i < row.size(); ++i)
                        w += (i ? "," : "") + row[i];
                    return w + ")";
                }
            return std::nullopt;
        }
        case Axiom::Kind::IdAttr: {
            const auto &cext = interp.concept_ext(ax.concept_name);
            const auto &pairs = interp.attr_ext(attr_checked(ax.attribute));
            // identifying values may not be shared inside the concept
            std::map<std::string, std::string> seen; // value -> first owner in C
            for (const auto &[obj, val] : pairs) {
                if (!cext.count(obj)) continue;
                auto [it, fresh] = seen.emplace(val, obj);
                if (!fresh && it->second != obj) return val;
            }
            if (cext.empty()) return std::nullopt;
            // some declared datatype must make the attribute total+functional on C
            for (const auto &[t, gen] : voc.datatypes) {
                ConceptExpr req = ConceptExpr::conj(ConceptExpr::some_attr(ax.attribute, t),
                                                    ConceptExpr::at_most_one_attr(ax.attribute));
                std::set<std::string> ok = concept_set(req);
                if (std::all_of(cext.begin(), cext.end(),
                                [&](const std::string &d) { return ok.count(d) > 0; }))
                    return std::nullopt;
            }
            return *cext.begin();
        }
        case Axiom::Kind::IdRoles: {
            const auto &cext = interp.concept_ext(ax.concept_name);
            std::map<std::vector<std::string>, std::string> seen; // signature -> object
            for (const std::string &d : cext) {
                std::vector<std::string> sig;
                for (const std::string &rel : ax.roles) {
                    const RelationDecl &rd = decl(rel);
                    const auto &ext = interp.relation_ext(rel);
                    std::vector<std::string> partners;
                    for (const Tuple &t : ext)
                        if (t.at(rd.places[0]) == d) partners.push_back(t.at(rd.places[1]));
                    if (partners.size() != 1) return d; // not total+functional on C
                    sig.push_back(partners[0]);
                }
                auto [it, fresh] = seen.emplace(std::move(sig), d);
                if (!fresh) return d; // shares its identifier tuple with it->second
            }
            return std::nullopt;
        }
        case Axiom::Kind::Fd: {
            const RelationDecl &rd = decl(ax.relation);
            (void)rd;
            const auto &ext = interp.relation_ext(ax.relation);
            for (const Tuple &r : ext)
                for (const Tuple &s : ext)
                    if (r.at(ax.fd_i1) == s.at(ax.fd_i1) && r.at(ax.fd_i2) == s.at(ax.fd_i2) &&
                        r.at(ax.fd_i3) != s.at(ax.fd_i3))
                        return tuple_to_string(r) + " vs " + tuple_to_string(s);
            return std::nullopt;
        }
        }
        return std::nullopt;
    }
};

} // namespace

std::set<std::string> eval_concept(const Interpretation &interp, const Vocabulary &voc,
                                   const ConceptExpr &c) {
    return Evaluator{interp, voc}.concept_set(c);
}

std::set<Tuple> eval_relation(const Interpretation &interp, const Vocabulary &voc,
                              const RelationExpr &r) {
    return Evaluator{interp, voc}.relation(r);
}

bool satisfies_axiom(const Interpretation &interp, const Vocabulary &voc, const Axiom &ax) {
    return !Evaluator{interp, voc}.axiom_violation(ax).has_value();
}

ModelCheck is_model(const Interpretation &interp, const KnowledgeBase &kb) {
    ModelCheck out;
    Evaluator ev{interp, kb.vocabulary};
    for (const Axiom &ax : kb.axioms)
        if (auto w = ev.axiom_violation(ax))
            out.violations.push_back({serialize_axiom(ax), *w});
    for (const auto &[p, q] : kb.vocabulary.inverse_partners) {
        auto lhs = Evaluator::positional(ev.relation(RelationExpr::inverse(p)),
                                         ev.place_order(RelationExpr::inverse(p)));
        auto rhs = Evaluator::positional(interp.relation_ext(q), ev.decl(q).places);
        if (lhs != rhs) {
            std::string witness;
            for (const auto &row : lhs)
                if (!rhs.count(row)) witness = "(" + row[0] + "," + row[1] + ")";
            if (witness.empty())
                for (const auto &row : rhs)
                    if (!lhs.count(row)) witness = "(" + row[0] + "," + row[1] + ")";
            out.violations.push_back({"inverse " + p + " " + q, witness});
        }
    }
    for (const auto &[a, b] : kb.vocabulary.disjoint_concepts) {
        for (const std::string &d : interp.concept_ext(a))
            if (interp.concept_ext(b).count(d)) {
                out.violations.push_back({"disjoint " + a + " " + b, d});
                break;
            }
    }
    out.ok = out.violations.empty();
    return out;
}

// ---- text format --------------------------------------------------------

namespace {

void emit_names(std::ostringstream &os, const std::string &kw,
                const std::set<std::string> &names) {
    os << kw;
    for (const std::string &n : names) os << " " << n;
    os << "\n";
}

std::string join_set(const std::set<std::string> &s) {
    std::string out = "{";
    bool first = true;
    for (const std::string &x : s) {
        if (!first) out += ", ";
        out += x;
        first = false;
    }
    return out + "}";
}

struct LineScanner {
    const std::string &line;
    size_t pos = 0;
    int lineno;

    [[noreturn]] void fail(const std::string &msg) const {
        throw Error(ErrorCode::ParseError,
                    "line " + std::to_string(lineno) + ": " + msg);
    }
    void skip_ws() {
        while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    }
    bool at_end() {
        skip_ws();
        return pos >= line.size();
    }
    bool eat(char c) {
        skip_ws();
        if (pos < line.size() && line[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }
    std::string name() {
        skip_ws();
        size_t start = pos;
        while (pos < line.size()) {
            char c = line[pos];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'') ++pos;
            else break;
        }
        if (pos == start) fail("expected a name");
        return line.substr(start, pos - start);
    }
};

} // namespace

std::string serialize_interpretation(const Interpretation &interp) {
    std::ostringstream os;
    emit_names(os, "obj", interp.delta_c);
    if (!interp.delta_t.empty()) emit_names(os, "val", interp.delta_t);
    if (interp.top_set != interp.delta_c) emit_names(os, "top", interp.top_set);
    for (const auto &[name, ext] : interp.concept_map)
        os << "set " << name << " = " << join_set(ext) << "\n";
    for (const auto &[name, ext] : interp.relation_map) {
        os << "rel " << name << " = {";
        bool first = true;
        for (const Tuple &t : ext) {
            if (!first) os << ", ";
            os << tuple_to_string(t);
            first = false;
        }
        os << "}\n";
    }
    for (const auto &[name, ext] : interp.attr_map) {
        os << "attr " << name << " = {";
        bool first = true;
        for (const auto &[obj, val] : ext) {
            if (!first) os << ", ";
            os << "(" << obj << "," << val << ")";
            first = false;
        }
        os << "}\n";
    }
    for (const auto &[name, ext] : interp.datatype_map)
        os << "dt " << name << " = " << join_set(ext) << "\n";
    return os.str();
}

Interpretation parse_interpretation(const std::string &text) {
    Interpretation interp;
    bool explicit_top = false;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        LineScanner sc{line, 0, lineno};
        if (sc.at_end()) continue;
        std::string kw = sc.name();
        if (kw == "obj" || kw == "val" || kw == "top") {
            std::set<std::string> &target = kw == "obj"   ? interp.delta_c
                                            : kw == "val" ? interp.delta_t
                                                          : interp.top_set;
            if (kw == "top") explicit_top = true;
            while (!sc.at_end()) target.insert(sc.name());
        } else if (kw == "set" || kw == "dt") {
            std::string name = sc.name();
            sc.expect('=');
            sc.expect('{');
            std::set<std::string> ext;
            if (!sc.eat('}')) {
                do ext.insert(sc.name());
                while (sc.eat(','));
                sc.expect('}');
            }
            (kw == "set" ? interp.concept_map : interp.datatype_map)[name] = std::move(ext);
            if (!sc.at_end()) sc.fail("trailing tokens");
        } else if (kw == "rel") {
            std::string name = sc.name();
            sc.expect('=');
            sc.expect('{');
            std::set<Tuple> ext;
            if (!sc.eat('}')) {
                do {
                    sc.expect('(');
                    Tuple t;
                    do {
                        std::string place = sc.name();
                        sc.expect(':');
                        t[place] = sc.name();
                    } while (sc.eat(','));
                    sc.expect(')');
                    ext.insert(std::move(t));
                } while (sc.eat(','));
                sc.expect('}');
            }
            interp.relation_map[name] = std::move(ext);
            if (!sc.at_end()) sc.fail("trailing tokens");
        } else if (kw == "attr") {
            std::string name = sc.name();
            sc.expect('=');
            sc.expect('{');
            std::set<std::pair<std::string, std::string>> ext;
            if (!sc.eat('}')) {
                do {
                    sc.expect('(');
                    std::string obj = sc.name();
                    sc.expect(',');
                    std::string val = sc.name();
                    sc.expect(')');
                    ext.emplace(std::move(obj), std::move(val));
                } while (sc.eat(','));
                sc.expect('}');
            }
            interp.attr_map[name] = std::move(ext);
            if (!sc.at_end()) sc.fail("trailing tokens");
        } else {
            sc.fail("unknown directive '" + kw + "'");
        }
    }
    if (!explicit_top) interp.top_set = interp.delta_c;
    return interp;
}

} // namespace dc
