#include "dc/kb.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace dc {

const char *profile_name(Profile p) {
    switch (p) {
    case Profile::DCp: return "dcp";
    case Profile::DCs: return "dcs";
    case Profile::DCuml: return "dcuml";
    case Profile::DCeer: return "dceer";
    case Profile::DCorm: return "dcorm";
    }
    return "?";
}

std::optional<Profile> profile_from_name(const std::string &name) {
    if (name == "dcp") return Profile::DCp;
    if (name == "dcs") return Profile::DCs;
    if (name == "dcuml") return Profile::DCuml;
    if (name == "dceer") return Profile::DCeer;
    if (name == "dcorm") return Profile::DCorm;
    return std::nullopt;
}

// ---- Vocabulary ---------------------------------------------------------

bool Vocabulary::has_symbol(const std::string &name) const {
    return concepts.count(name) || relations.count(name) ||
           attributes.count(name) || datatypes.count(name);
}

bool Vocabulary::is_generated(const std::string &name) const {
    if (auto it = concepts.find(name); it != concepts.end()) return it->second;
    if (auto it = relations.find(name); it != relations.end()) return it->second.generated;
    if (auto it = attributes.find(name); it != attributes.end()) return it->second;
    if (auto it = datatypes.find(name); it != datatypes.end()) return it->second;
    return false;
}

std::optional<std::string> Vocabulary::inverse_partner_of(const std::string &rel) const {
    for (const auto &[p, q] : inverse_partners) {
        if (p == rel) return q;
        if (q == rel) return p;
    }
    return std::nullopt;
}

void Vocabulary::declare_concept(const std::string &name, bool generated) {
    if (has_symbol(name) && !concepts.count(name))
        throw Error(ErrorCode::VocabularyError, "symbol already declared with another kind: " + name);
    concepts.emplace(name, generated);
}

void Vocabulary::declare_relation(const std::string &name, int arity,
                                  std::vector<std::string> places, bool generated) {
    if (arity != 2 && arity != 3)
        throw Error(ErrorCode::VocabularyError, "relation arity must be 2 or 3: " + name);
    if (has_symbol(name) && !relations.count(name))
        throw Error(ErrorCode::VocabularyError, "symbol already declared with another kind: " + name);
    RelationDecl decl;
    decl.arity = arity;
    if (places.empty())
        for (int i = 1; i <= arity; ++i) places.push_back(std::to_string(i));
    if (static_cast<int>(places.size()) != arity)
        throw Error(ErrorCode::VocabularyError, "place list does not match arity: " + name);
    decl.places = std::move(places);
    decl.generated = generated;
    relations.emplace(name, std::move(decl));
}

void Vocabulary::declare_attribute(const std::string &name, bool generated) {
    if (has_symbol(name) && !attributes.count(name))
        throw Error(ErrorCode::VocabularyError, "symbol already declared with another kind: " + name);
    attributes.emplace(name, generated);
}

void Vocabulary::declare_datatype(const std::string &name, bool generated) {
    if (has_symbol(name) && !datatypes.count(name))
        throw Error(ErrorCode::VocabularyError, "symbol already declared with another kind: " + name);
    datatypes.emplace(name, generated);
}

// ---- expression constructors -------------------------------------------

RelationExpr RelationExpr::top(int arity) {
    RelationExpr r;
    r.kind = Kind::TopN;
    r.arity = arity;
    return r;
}
RelationExpr RelationExpr::atomic(std::string name) {
    RelationExpr r;
    r.kind = Kind::Atomic;
    r.name = std::move(name);
    return r;
}
RelationExpr RelationExpr::inverse(std::string name) {
    RelationExpr r;
    r.kind = Kind::Inverse;
    r.name = std::move(name);
    return r;
}
RelationExpr RelationExpr::selection(std::string place, ConceptExpr c) {
    RelationExpr r;
    r.kind = Kind::Selection;
    r.place = std::move(place);
    r.sel_concept = std::make_shared<ConceptExpr>(std::move(c));
    return r;
}
RelationExpr RelationExpr::complement(RelationExpr inner) {
    RelationExpr r;
    r.kind = Kind::Complement;
    r.inner = std::make_shared<RelationExpr>(std::move(inner));
    return r;
}

ConceptExpr ConceptExpr::top() {
    return ConceptExpr{};
}
ConceptExpr ConceptExpr::atomic(std::string name) {
    ConceptExpr c;
    c.kind = Kind::Atomic;
    c.name = std::move(name);
    return c;
}
ConceptExpr ConceptExpr::min_place(unsigned k, std::string place, RelationExpr r) {
    ConceptExpr c;
    c.kind = Kind::MinPlace;
    c.count = k;
    c.place = std::move(place);
    c.rel = std::make_shared<RelationExpr>(std::move(r));
    return c;
}
ConceptExpr ConceptExpr::max_place(unsigned k, std::string place, RelationExpr r) {
    ConceptExpr c;
    c.kind = Kind::MaxPlace;
    c.count = k;
    c.place = std::move(place);
    c.rel = std::make_shared<RelationExpr>(std::move(r));
    return c;
}
ConceptExpr ConceptExpr::all_attr(std::string attr, std::string datatype) {
    ConceptExpr c;
    c.kind = Kind::AllAttr;
    c.name = std::move(attr);
    c.datatype = std::move(datatype);
    return c;
}
ConceptExpr ConceptExpr::some_attr(std::string attr, std::string datatype) {
    ConceptExpr c;
    c.kind = Kind::SomeAttr;
    c.name = std::move(attr);
    c.datatype = std::move(datatype);
    return c;
}
ConceptExpr ConceptExpr::at_most_one_attr(std::string attr) {
    ConceptExpr c;
    c.kind = Kind::AtMostOneAttr;
    c.name = std::move(attr);
    return c;
}
ConceptExpr ConceptExpr::conj(ConceptExpr a, ConceptExpr b) {
    ConceptExpr c;
    c.kind = Kind::And;
    c.lhs = std::make_shared<ConceptExpr>(std::move(a));
    c.rhs = std::make_shared<ConceptExpr>(std::move(b));
    return c;
}
ConceptExpr ConceptExpr::disj(ConceptExpr a, ConceptExpr b) {
    ConceptExpr c;
    c.kind = Kind::Or;
    c.lhs = std::make_shared<ConceptExpr>(std::move(a));
    c.rhs = std::make_shared<ConceptExpr>(std::move(b));
    return c;
}
ConceptExpr ConceptExpr::all_rel(RelationExpr r, std::string filler) {
    ConceptExpr c;
    c.kind = Kind::AllRel;
    c.rel = std::make_shared<RelationExpr>(std::move(r));
    c.name = std::move(filler);
    return c;
}
ConceptExpr ConceptExpr::some_rel(RelationExpr r, std::string filler) {
    ConceptExpr c;
    c.kind = Kind::SomeRel;
    c.rel = std::make_shared<RelationExpr>(std::move(r));
    c.name = std::move(filler);
    return c;
}
ConceptExpr ConceptExpr::min(unsigned k, RelationExpr r) {
    ConceptExpr c;
    c.kind = Kind::Min;
    c.count = k;
    c.rel = std::make_shared<RelationExpr>(std::move(r));
    return c;
}
ConceptExpr ConceptExpr::max(unsigned k, RelationExpr r) {
    ConceptExpr c;
    c.kind = Kind::Max;
    c.count = k;
    c.rel = std::make_shared<RelationExpr>(std::move(r));
    return c;
}
ConceptExpr ConceptExpr::attr_min(unsigned k, std::string attr, std::string datatype) {
    ConceptExpr c;
    c.kind = Kind::AttrMin;
    c.count = k;
    c.name = std::move(attr);
    c.datatype = std::move(datatype);
    return c;
}
ConceptExpr ConceptExpr::attr_max(unsigned k, std::string attr, std::string datatype) {
    ConceptExpr c;
    c.kind = Kind::AttrMax;
    c.count = k;
    c.name = std::move(attr);
    c.datatype = std::move(datatype);
    return c;
}

Axiom Axiom::concept_inc(ConceptExpr lhs, ConceptExpr rhs) {
    Axiom ax;
    ax.kind = Kind::ConceptInc;
    ax.lhs_c = std::move(lhs);
    ax.rhs_c = std::move(rhs);
    return ax;
}
Axiom Axiom::rel_inc(RelationExpr lhs, RelationExpr rhs) {
    Axiom ax;
    ax.kind = Kind::RelInc;
    ax.lhs_r = std::move(lhs);
    ax.rhs_r = std::move(rhs);
    return ax;
}
Axiom Axiom::id_attr(std::string concept_name, std::string attr) {
    Axiom ax;
    ax.kind = Kind::IdAttr;
    ax.concept_name = std::move(concept_name);
    ax.attribute = std::move(attr);
    return ax;
}
Axiom Axiom::id_roles(std::string concept_name, std::vector<std::string> roles) {
    Axiom ax;
    ax.kind = Kind::IdRoles;
    ax.concept_name = std::move(concept_name);
    ax.roles = std::move(roles);
    return ax;
}
Axiom Axiom::fd(std::string relation, std::string i1, std::string i2, std::string i3) {
    Axiom ax;
    ax.kind = Kind::Fd;
    ax.relation = std::move(relation);
    ax.fd_i1 = std::move(i1);
    ax.fd_i2 = std::move(i2);
    ax.fd_i3 = std::move(i3);
    return ax;
}

// ---- serialization ------------------------------------------------------

std::string serialize_relation(const RelationExpr &r) {
    switch (r.kind) {
    case RelationExpr::Kind::TopN:
        return r.arity == 3 ? "top3" : "top2";
    case RelationExpr::Kind::Atomic:
        return r.name;
    case RelationExpr::Kind::Inverse:
        return "inv ( " + r.name + " )";
    case RelationExpr::Kind::Selection:
        return "( " + r.place + " : " + serialize_concept(*r.sel_concept) + " )";
    case RelationExpr::Kind::Complement:
        return "not " + serialize_relation(*r.inner);
    }
    return "?";
}

std::string serialize_concept(const ConceptExpr &c) {
    using K = ConceptExpr::Kind;
    switch (c.kind) {
    case K::Top: return "top";
    case K::Atomic: return c.name;
    case K::MinPlace:
        return ">= " + std::to_string(c.count) + " [ " + c.place + " ] " + serialize_relation(*c.rel);
    case K::MaxPlace:
        return "<= " + std::to_string(c.count) + " [ " + c.place + " ] " + serialize_relation(*c.rel);
    case K::AllAttr: return "all " + c.name + " . " + c.datatype;
    case K::SomeAttr: return "some " + c.name + " . " + c.datatype;
    case K::AtMostOneAttr: return "<=1 " + c.name;
    case K::And: return serialize_concept(*c.lhs) + " and " + serialize_concept(*c.rhs);
    case K::Or: return serialize_concept(*c.lhs) + " or " + serialize_concept(*c.rhs);
    case K::AllRel: return "all " + serialize_relation(*c.rel) + " . " + c.name;
    case K::SomeRel: return "some " + serialize_relation(*c.rel) + " . " + c.name;
    case K::Min: return ">= " + std::to_string(c.count) + " " + serialize_relation(*c.rel);
    case K::Max: return "<= " + std::to_string(c.count) + " " + serialize_relation(*c.rel);
    case K::AttrMin:
        return ">= " + std::to_string(c.count) + " " + c.name + " . " + c.datatype;
    case K::AttrMax:
        return "<= " + std::to_string(c.count) + " " + c.name + " . " + c.datatype;
    }
    return "?";
}

std::string serialize_axiom(const Axiom &ax) {
    switch (ax.kind) {
    case Axiom::Kind::ConceptInc:
        return serialize_concept(ax.lhs_c) + " <= " + serialize_concept(ax.rhs_c);
    case Axiom::Kind::RelInc:
        return serialize_relation(ax.lhs_r) + " <= " + serialize_relation(ax.rhs_r);
    case Axiom::Kind::IdAttr:
        return "id " + ax.concept_name + " " + ax.attribute;
    case Axiom::Kind::IdRoles: {
        std::string out = "id " + ax.concept_name;
        for (const auto &r : ax.roles) out += " " + r;
        return out;
    }
    case Axiom::Kind::Fd:
        return "fd " + ax.relation + " " + ax.fd_i1 + " , " + ax.fd_i2 + " -> " + ax.fd_i3;
    }
    return "?";
}

void KnowledgeBase::add_axiom(Axiom ax, std::string source) {
    axioms.push_back(std::move(ax));
    provenance.push_back(std::move(source));
}

void KnowledgeBase::canonicalize() {
    std::vector<size_t> order(axioms.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::vector<std::string> keys(axioms.size());
    for (size_t i = 0; i < axioms.size(); ++i) keys[i] = serialize_axiom(axioms[i]);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (axioms[a].kind != axioms[b].kind)
            return static_cast<int>(axioms[a].kind) < static_cast<int>(axioms[b].kind);
        return keys[a] < keys[b];
    });
    std::vector<Axiom> new_axioms;
    std::vector<std::string> new_prov;
    new_axioms.reserve(axioms.size());
    bool has_prov = provenance.size() == axioms.size();
    for (size_t i : order) {
        new_axioms.push_back(std::move(axioms[i]));
        if (has_prov) new_prov.push_back(std::move(provenance[i]));
    }
    axioms = std::move(new_axioms);
    provenance = std::move(new_prov);
    std::sort(vocabulary.inverse_partners.begin(), vocabulary.inverse_partners.end());
    std::sort(vocabulary.disjoint_concepts.begin(), vocabulary.disjoint_concepts.end());
}

std::string serialize_kb_text(const KnowledgeBase &kb) {
    KnowledgeBase copy = kb;
    copy.canonicalize();
    std::ostringstream out;
    out << "profile " << profile_name(copy.profile) << "\n";
    for (const auto &[name, gen] : copy.vocabulary.concepts)
        out << "concept " << name << (gen ? " gen" : "") << "\n";
    for (const auto &[name, gen] : copy.vocabulary.datatypes)
        out << "datatype " << name << (gen ? " gen" : "") << "\n";
    for (const auto &[name, gen] : copy.vocabulary.attributes)
        out << "attr " << name << (gen ? " gen" : "") << "\n";
    for (const auto &[name, decl] : copy.vocabulary.relations) {
        out << "rel " << name << " / " << decl.arity;
        bool default_places = true;
        for (int i = 0; i < decl.arity; ++i)
            if (decl.places[i] != std::to_string(i + 1)) default_places = false;
        if (!default_places) {
            out << " places";
            for (const auto &p : decl.places) out << " " << p;
        }
        if (decl.generated) out << " gen";
        out << "\n";
    }
    for (const auto &[p, q] : copy.vocabulary.inverse_partners)
        out << "inverse " << p << " " << q << "\n";
    for (const auto &[a, b] : copy.vocabulary.disjoint_concepts)
        out << "disjoint " << a << " " << b << "\n";
    for (const auto &ax : copy.axioms) out << serialize_axiom(ax) << "\n";
    return out.str();
}

// ---- parser -------------------------------------------------------------

namespace {

struct Token {
    std::string text;
    int line = 0;
    int col = 0;
};

bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> lex_line(const std::string &line, int line_no) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        if (c == '#') break;
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        int col = static_cast<int>(i) + 1;
        if (c == '<' && line.compare(i, 3, "<=1") == 0 &&
            (i + 3 >= line.size() || !is_name_char(line[i + 3]))) {
            out.push_back({"<=1", line_no, col});
            i += 3;
        } else if (c == '<' && line.compare(i, 2, "<=") == 0) {
            out.push_back({"<=", line_no, col});
            i += 2;
        } else if (c == '>' && line.compare(i, 2, ">=") == 0) {
            out.push_back({">=", line_no, col});
            i += 2;
        } else if (c == '-' && line.compare(i, 2, "->") == 0) {
            out.push_back({"->", line_no, col});
            i += 2;
        } else if (c == '(' || c == ')' || c == ':' || c == ',' || c == '.' ||
                   c == '[' || c == ']' || c == '/') {
            out.push_back({std::string(1, c), line_no, col});
            ++i;
        } else if (is_name_char(c)) {
            size_t j = i;
            while (j < line.size() && is_name_char(line[j])) ++j;
            out.push_back({line.substr(i, j - i), line_no, col});
            i = j;
        } else {
            throw Error(ErrorCode::ParseError,
                        "unexpected character '" + std::string(1, c) + "' at line " +
                            std::to_string(line_no) + ":" + std::to_string(col));
        }
    }
    return out;
}

[[noreturn]] void parse_fail(const Token &t, const std::string &what) {
    throw Error(ErrorCode::ParseError, what + " at line " + std::to_string(t.line) +
                                           ":" + std::to_string(t.col) + " near '" +
                                           t.text + "'");
}

bool all_digits(const std::string &s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

// Cursor over one line's tokens; parsing is vocabulary-directed because the
// textual grammar reuses NAME for relations, attributes, and concepts.
struct AxiomParser {
    const Vocabulary &vocab;
    const std::vector<Token> &toks;
    size_t pos = 0;

    const Token &peek(size_t ahead = 0) const {
        static Token eol{"<end-of-line>", 0, 0};
        return pos + ahead < toks.size() ? toks[pos + ahead] : eol;
    }
    bool at_end() const { return pos >= toks.size(); }
    Token next() {
        if (at_end()) parse_fail(peek(), "unexpected end of line");
        return toks[pos++];
    }
    void expect(const std::string &t) {
        Token tok = next();
        if (tok.text != t) parse_fail(tok, "expected '" + t + "'");
    }

    bool starts_relation() const {
        const std::string &t = peek().text;
        if (t == "top2" || t == "top3" || t == "inv" || t == "not" || t == "(")
            return true;
        return vocab.relations.count(t) > 0;
    }

    RelationExpr parse_relation() {
        Token t = next();
        if (t.text == "top2") return RelationExpr::top(2);
        if (t.text == "top3") return RelationExpr::top(3);
        if (t.text == "inv") {
            expect("(");
            Token name = next();
            expect(")");
            if (!vocab.relations.count(name.text))
                parse_fail(name, "undeclared relation");
            return RelationExpr::inverse(name.text);
        }
        if (t.text == "not") return RelationExpr::complement(parse_relation());
        if (t.text == "(") {
            Token place = next();
            expect(":");
            ConceptExpr c = parse_concept();
            expect(")");
            return RelationExpr::selection(place.text, std::move(c));
        }
        if (!vocab.relations.count(t.text)) parse_fail(t, "undeclared relation");
        return RelationExpr::atomic(t.text);
    }

    ConceptExpr parse_atom() {
        Token t = peek();
        if (t.text == "top") {
            next();
            return ConceptExpr::top();
        }
        if (t.text == "<=1") {
            next();
            Token a = next();
            if (!vocab.attributes.count(a.text)) parse_fail(a, "undeclared attribute");
            return ConceptExpr::at_most_one_attr(a.text);
        }
        if (t.text == ">=" || t.text == "<=") {
            bool is_min = t.text == ">=";
            next();
            Token k = next();
            if (!all_digits(k.text)) parse_fail(k, "expected cardinality");
            unsigned count = static_cast<unsigned>(std::stoul(k.text));
            if (peek().text == "[") {
                next();
                Token place = next();
                expect("]");
                RelationExpr r = parse_relation();
                return is_min ? ConceptExpr::min_place(count, place.text, std::move(r))
                              : ConceptExpr::max_place(count, place.text, std::move(r));
            }
            // `>= k a . T` (attribute cardinality) vs `>= k R`
            if (vocab.attributes.count(peek().text) && peek(1).text == ".") {
                Token a = next();
                next(); // '.'
                Token dt = next();
                if (!vocab.datatypes.count(dt.text)) parse_fail(dt, "undeclared datatype");
                return is_min ? ConceptExpr::attr_min(count, a.text, dt.text)
                              : ConceptExpr::attr_max(count, a.text, dt.text);
            }
            RelationExpr r = parse_relation();
            return is_min ? ConceptExpr::min(count, std::move(r))
                          : ConceptExpr::max(count, std::move(r));
        }
        if (t.text == "all" || t.text == "some") {
            bool universal = t.text == "all";
            next();
            if (vocab.attributes.count(peek().text)) {
                Token a = next();
                expect(".");
                Token dt = next();
                if (!vocab.datatypes.count(dt.text)) parse_fail(dt, "undeclared datatype");
                return universal ? ConceptExpr::all_attr(a.text, dt.text)
                                 : ConceptExpr::some_attr(a.text, dt.text);
            }
            RelationExpr r = parse_relation();
            expect(".");
            Token filler = next();
            if (!vocab.concepts.count(filler.text)) parse_fail(filler, "undeclared concept");
            return universal ? ConceptExpr::all_rel(std::move(r), filler.text)
                             : ConceptExpr::some_rel(std::move(r), filler.text);
        }
        Token name = next();
        if (!vocab.concepts.count(name.text)) parse_fail(name, "undeclared concept");
        return ConceptExpr::atomic(name.text);
    }

    ConceptExpr parse_conjunction() {
        ConceptExpr c = parse_atom();
        while (peek().text == "and") {
            next();
            c = ConceptExpr::conj(std::move(c), parse_atom());
        }
        return c;
    }

    ConceptExpr parse_concept() {
        ConceptExpr c = parse_conjunction();
        while (peek().text == "or") {
            next();
            c = ConceptExpr::disj(std::move(c), parse_conjunction());
        }
        return c;
    }

    Axiom parse_axiom() {
        if (peek().text == "id") {
            next();
            Token cname = next();
            if (!vocab.concepts.count(cname.text)) parse_fail(cname, "undeclared concept");
            std::vector<std::string> names;
            while (!at_end()) names.push_back(next().text);
            if (names.empty()) parse_fail(peek(), "id needs an attribute or role list");
            if (names.size() == 1 && vocab.attributes.count(names[0]))
                return Axiom::id_attr(cname.text, names[0]);
            for (const auto &n : names)
                if (!vocab.relations.count(n))
                    throw Error(ErrorCode::ParseError, "undeclared relation in id: " + n);
            return Axiom::id_roles(cname.text, std::move(names));
        }
        if (peek().text == "fd") {
            next();
            Token rel = next();
            if (!vocab.relations.count(rel.text)) parse_fail(rel, "undeclared relation");
            Token i1 = next();
            expect(",");
            Token i2 = next();
            expect("->");
            Token i3 = next();
            return Axiom::fd(rel.text, i1.text, i2.text, i3.text);
        }
        if (starts_relation()) {
            RelationExpr lhs = parse_relation();
            expect("<=");
            RelationExpr rhs = parse_relation();
            if (!at_end()) parse_fail(peek(), "trailing tokens");
            return Axiom::rel_inc(std::move(lhs), std::move(rhs));
        }
        ConceptExpr lhs = parse_concept();
        expect("<=");
        ConceptExpr rhs = parse_concept();
        if (!at_end()) parse_fail(peek(), "trailing tokens");
        return Axiom::concept_inc(std::move(lhs), std::move(rhs));
    }
};

} // namespace

KnowledgeBase parse_kb_text(const std::string &text) {
    KnowledgeBase kb;
    bool have_profile = false;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::vector<Token> toks = lex_line(line, line_no);
        if (toks.empty()) continue;
        const std::string &head = toks[0].text;
        if (head == "profile") {
            if (toks.size() != 2) parse_fail(toks[0], "profile needs one argument");
            auto p = profile_from_name(toks[1].text);
            if (!p) parse_fail(toks[1], "unknown profile");
            kb.profile = *p;
            have_profile = true;
        } else if (head == "concept" || head == "attr" || head == "datatype") {
            if (toks.size() < 2) parse_fail(toks[0], "declaration needs a name");
            bool gen = toks.size() == 3 && toks[2].text == "gen";
            if (toks.size() > 2 && !gen) parse_fail(toks[2], "trailing tokens");
            if (head == "concept") kb.vocabulary.declare_concept(toks[1].text, gen);
            else if (head == "attr") kb.vocabulary.declare_attribute(toks[1].text, gen);
            else kb.vocabulary.declare_datatype(toks[1].text, gen);
        } else if (head == "rel") {
            // rel NAME / ARITY [places p1 p2 ...] [gen]
            if (toks.size() < 4 || toks[2].text != "/")
                parse_fail(toks[0], "expected 'rel NAME / ARITY'");
            if (!all_digits(toks[3].text)) parse_fail(toks[3], "expected arity");
            int arity = std::stoi(toks[3].text);
            std::vector<std::string> places;
            size_t i = 4;
            bool gen = false;
            if (i < toks.size() && toks[i].text == "places") {
                ++i;
                while (i < toks.size() && toks[i].text != "gen") places.push_back(toks[i++].text);
            }
            if (i < toks.size() && toks[i].text == "gen") {
                gen = true;
                ++i;
            }
            if (i != toks.size()) parse_fail(toks[i], "trailing tokens");
            kb.vocabulary.declare_relation(toks[1].text, arity, std::move(places), gen);
        } else if (head == "inverse") {
            if (toks.size() != 3) parse_fail(toks[0], "inverse needs two relation names");
            for (int i = 1; i <= 2; ++i)
                if (!kb.vocabulary.relations.count(toks[i].text))
                    parse_fail(toks[i], "undeclared relation");
            kb.vocabulary.inverse_partners.emplace_back(toks[1].text, toks[2].text);
        } else if (head == "disjoint") {
            if (toks.size() != 3) parse_fail(toks[0], "disjoint needs two concept names");
            for (int i = 1; i <= 2; ++i)
                if (!kb.vocabulary.concepts.count(toks[i].text))
                    parse_fail(toks[i], "undeclared concept");
            kb.vocabulary.disjoint_concepts.emplace_back(toks[1].text, toks[2].text);
        } else {
            if (!have_profile)
                parse_fail(toks[0], "missing 'profile' header before axioms");
            AxiomParser p{kb.vocabulary, toks};
            kb.add_axiom(p.parse_axiom());
        }
    }
    if (!have_profile) throw Error(ErrorCode::ParseError, "missing 'profile' header");
    kb.canonicalize();
    return kb;
}

// ---- profile membership -------------------------------------------------

namespace {

struct ProfileRules {
    std::set<ConceptExpr::Kind> concepts;
    std::set<RelationExpr::Kind> relations;
    std::set<Axiom::Kind> axioms;
    bool ternary = false; // atomic ternaries and top3
};

const ProfileRules &rules_for(Profile p) {
    using C = ConceptExpr::Kind;
    using R = RelationExpr::Kind;
    using A = Axiom::Kind;
    static const ProfileRules dcp{
        {C::Top, C::Atomic, C::MinPlace, C::MaxPlace, C::AllAttr, C::SomeAttr,
         C::AtMostOneAttr, C::And},
        {R::TopN, R::Atomic, R::Selection},
        {A::ConceptInc, A::IdAttr},
        false};
    static const ProfileRules dcs{
        {C::Top, C::Atomic, C::AllRel, C::SomeRel, C::Min, C::Max, C::AllAttr,
         C::SomeAttr, C::AtMostOneAttr, C::And},
        {R::TopN, R::Atomic, R::Inverse},
        {A::ConceptInc, A::IdAttr},
        false};
    static const ProfileRules dcuml = [] {
        ProfileRules r = dcs;
        r.concepts.insert(C::AttrMin);
        r.concepts.insert(C::AttrMax);
        r.axioms.insert(A::RelInc);
        return r;
    }();
    static const ProfileRules dceer = [] {
        ProfileRules r = dcs;
        r.concepts.insert(C::AttrMin);
        r.concepts.insert(C::AttrMax);
        r.axioms.insert(A::Fd);
        r.ternary = true;
        return r;
    }();
    static const ProfileRules dcorm = [] {
        ProfileRules r = dcs;
        r.concepts.insert(C::Or);
        r.relations.insert(R::Complement);
        r.axioms.insert(A::RelInc);
        r.axioms.insert(A::IdRoles);
        return r;
    }();
    switch (p) {
    case Profile::DCp: return dcp;
    case Profile::DCs: return dcs;
    case Profile::DCuml: return dcuml;
    case Profile::DCeer: return dceer;
    case Profile::DCorm: return dcorm;
    }
    return dcs;
}

struct ProfileChecker {
    const Vocabulary &vocab;
    const ProfileRules &rules;
    MembershipReport &report;
    std::string axiom_text;

    void violation(const std::string &path, const std::string &reason) {
        report.violations.emplace_back(axiom_text + " @ " + path, reason);
    }

    int relation_arity(const RelationExpr &r) {
        switch (r.kind) {
        case RelationExpr::Kind::TopN: return r.arity;
        case RelationExpr::Kind::Atomic:
        case RelationExpr::Kind::Inverse: {
            auto it = vocab.relations.find(r.name);
            if (it == vocab.relations.end())
                throw Error(ErrorCode::VocabularyError, "undeclared relation: " + r.name);
            return r.kind == RelationExpr::Kind::Inverse ? 2 : it->second.arity;
        }
        case RelationExpr::Kind::Selection: return 2;
        case RelationExpr::Kind::Complement: return relation_arity(*r.inner);
        }
        return 2;
    }

    void check_rel(const RelationExpr &r, const std::string &path) {
        if (!rules.relations.count(r.kind)) {
            violation(path, "relation constructor not in profile grammar");
            return;
        }
        switch (r.kind) {
        case RelationExpr::Kind::TopN:
            if (r.arity == 3 && !rules.ternary)
                violation(path, "top3 not in profile grammar");
            break;
        case RelationExpr::Kind::Atomic: {
            auto it = vocab.relations.find(r.name);
            if (it == vocab.relations.end())
                throw Error(ErrorCode::VocabularyError, "undeclared relation: " + r.name);
            if (it->second.arity == 3 && !rules.ternary)
                violation(path, "ternary relation not in profile grammar");
            break;
        }
        case RelationExpr::Kind::Inverse: {
            auto it = vocab.relations.find(r.name);
            if (it == vocab.relations.end())
                throw Error(ErrorCode::VocabularyError, "undeclared relation: " + r.name);
            if (it->second.arity != 2)
                violation(path, "inverse only over atomic binary relations");
            break;
        }
        case RelationExpr::Kind::Selection:
            if (r.place != "1" && r.place != "2")
                violation(path, "selection place must index a binary component");
            check_concept(*r.sel_concept, path + "/selection");
            break;
        case RelationExpr::Kind::Complement:
            check_rel(*r.inner, path + "/not");
            break;
        }
    }

    void check_place_valid(const RelationExpr &r, const std::string &place,
                           const std::string &path) {
        if (r.kind == RelationExpr::Kind::Atomic) {
            const auto &decl = vocab.relations.at(r.name);
            if (std::find(decl.places.begin(), decl.places.end(), place) == decl.places.end())
                violation(path, "place '" + place + "' not in relation " + r.name);
        } else if (place != "1" && place != "2") {
            violation(path, "place '" + place + "' not valid for constructed relation");
        }
    }

    void check_concept(const ConceptExpr &c, const std::string &path) {
        using K = ConceptExpr::Kind;
        if (!rules.concepts.count(c.kind)) {
            violation(path, "concept constructor not in profile grammar");
            return;
        }
        switch (c.kind) {
        case K::Atomic:
            if (!vocab.concepts.count(c.name))
                throw Error(ErrorCode::VocabularyError, "undeclared concept: " + c.name);
            break;
        case K::MinPlace:
        case K::MaxPlace:
            if (c.kind == K::MinPlace && c.count < 1) violation(path, "k must be positive");
            check_rel(*c.rel, path + "/rel");
            check_place_valid(*c.rel, c.place, path);
            break;
        case K::Min:
            if (c.count < 1) violation(path, "k must be positive");
            check_rel(*c.rel, path + "/rel");
            break;
        case K::Max:
            check_rel(*c.rel, path + "/rel");
            break;
        case K::AllRel:
        case K::SomeRel:
            check_rel(*c.rel, path + "/rel");
            if (!vocab.concepts.count(c.name))
                throw Error(ErrorCode::VocabularyError, "undeclared concept: " + c.name);
            break;
        case K::AllAttr:
        case K::SomeAttr:
        case K::AttrMin:
        case K::AttrMax:
            if (!vocab.attributes.count(c.name))
                throw Error(ErrorCode::VocabularyError, "undeclared attribute: " + c.name);
            if (!vocab.datatypes.count(c.datatype))
                throw Error(ErrorCode::VocabularyError, "undeclared datatype: " + c.datatype);
            if (c.kind == K::AttrMin && c.count < 1) violation(path, "k must be positive");
            break;
        case K::AtMostOneAttr:
            if (!vocab.attributes.count(c.name))
                throw Error(ErrorCode::VocabularyError, "undeclared attribute: " + c.name);
            break;
        case K::And:
        case K::Or:
            check_concept(*c.lhs, path + "/lhs");
            check_concept(*c.rhs, path + "/rhs");
            break;
        case K::Top:
            break;
        }
    }

    void check_axiom(const Axiom &ax) {
        axiom_text = serialize_axiom(ax);
        if (!rules.axioms.count(ax.kind)) {
            violation("/", "axiom form not in profile grammar");
            return;
        }
        switch (ax.kind) {
        case Axiom::Kind::ConceptInc:
            check_concept(ax.lhs_c, "/lhs");
            check_concept(ax.rhs_c, "/rhs");
            break;
        case Axiom::Kind::RelInc:
            check_rel(ax.lhs_r, "/lhs");
            check_rel(ax.rhs_r, "/rhs");
            break;
        case Axiom::Kind::IdAttr:
            if (!vocab.concepts.count(ax.concept_name))
                throw Error(ErrorCode::VocabularyError, "undeclared concept: " + ax.concept_name);
            if (!vocab.attributes.count(ax.attribute))
                throw Error(ErrorCode::VocabularyError, "undeclared attribute: " + ax.attribute);
            break;
        case Axiom::Kind::IdRoles:
            if (!vocab.concepts.count(ax.concept_name))
                throw Error(ErrorCode::VocabularyError, "undeclared concept: " + ax.concept_name);
            for (const auto &r : ax.roles)
                if (!vocab.relations.count(r))
                    throw Error(ErrorCode::VocabularyError, "undeclared relation: " + r);
            break;
        case Axiom::Kind::Fd: {
            auto it = vocab.relations.find(ax.relation);
            if (it == vocab.relations.end())
                throw Error(ErrorCode::VocabularyError, "undeclared relation: " + ax.relation);
            if (it->second.arity != 3)
                violation("/", "fd requires a ternary relation");
            const auto &places = it->second.places;
            for (const std::string *p : {&ax.fd_i1, &ax.fd_i2, &ax.fd_i3})
                if (std::find(places.begin(), places.end(), *p) == places.end())
                    violation("/", "fd place '" + *p + "' not in relation");
            if (ax.fd_i1 == ax.fd_i2 || ax.fd_i1 == ax.fd_i3 || ax.fd_i2 == ax.fd_i3)
                violation("/", "fd places must all be different");
            break;
        }
        }
    }
};

// Encoder-producibility lints: shapes that the grammar admits but no
// translation of a valid conceptual model emits.
void run_lints(const KnowledgeBase &kb, MembershipReport &report) {
    using K = ConceptExpr::Kind;
    // Lint 1: a conjunction combining some/min and all over the same attribute.
    for (const auto &ax : kb.axioms) {
        if (ax.kind != Axiom::Kind::ConceptInc) continue;
        std::set<std::string> some_attrs, all_attrs;
        std::vector<const ConceptExpr *> stack{&ax.rhs_c};
        while (!stack.empty()) {
            const ConceptExpr *c = stack.back();
            stack.pop_back();
            if (c->kind == K::And || c->kind == K::Or) {
                stack.push_back(c->lhs.get());
                stack.push_back(c->rhs.get());
            } else if (c->kind == K::SomeAttr || c->kind == K::AttrMin) {
                some_attrs.insert(c->name);
            } else if (c->kind == K::AllAttr) {
                all_attrs.insert(c->name);
            }
        }
        for (const auto &a : some_attrs)
            if (all_attrs.count(a))
                report.lints.emplace_back(serialize_axiom(ax),
                                          "not encoder-producible: both existential and "
                                          "universal typing of attribute '" + a + "'");
    }
    // Lint 2: more than one min (or max) cardinality per (concept, relation, place).
    std::map<std::string, int> min_counts, max_counts;
    for (const auto &ax : kb.axioms) {
        if (ax.kind != Axiom::Kind::ConceptInc || ax.lhs_c.kind != K::Atomic) continue;
        std::vector<const ConceptExpr *> stack{&ax.rhs_c};
        while (!stack.empty()) {
            const ConceptExpr *c = stack.back();
            stack.pop_back();
            if (c->kind == K::And) {
                stack.push_back(c->lhs.get());
                stack.push_back(c->rhs.get());
            } else if (c->kind == K::Min || c->kind == K::MinPlace) {
                min_counts[ax.lhs_c.name + "|" + c->place + "|" + serialize_relation(*c->rel)]++;
            } else if (c->kind == K::Max || c->kind == K::MaxPlace) {
                max_counts[ax.lhs_c.name + "|" + c->place + "|" + serialize_relation(*c->rel)]++;
            }
        }
    }
    for (const auto &[key, n] : min_counts)
        if (n > 1)
            report.lints.emplace_back(key, "not encoder-producible: multiple min cardinalities "
                                           "on one relationship participation");
    for (const auto &[key, n] : max_counts)
        if (n > 1)
            report.lints.emplace_back(key, "not encoder-producible: multiple max cardinalities "
                                           "on one relationship participation");
}

} // namespace

MembershipReport check_profile(const KnowledgeBase &kb, Profile profile) {
    MembershipReport report;
    ProfileChecker checker{kb.vocabulary, rules_for(profile), report, {}};
    for (const auto &ax : kb.axioms) checker.check_axiom(ax);
    run_lints(kb, report);
    return report;
}

// ---- equality modulo renaming ------------------------------------------

namespace {

enum class SymKind { Concept, Relation, Attribute, Datatype };

struct SymInfo {
    SymKind kind;
    int arity = 0;
    bool generated = false;
};

std::map<std::string, SymInfo> symbol_table(const Vocabulary &v) {
    std::map<std::string, SymInfo> out;
    for (const auto &[n, g] : v.concepts) out[n] = {SymKind::Concept, 0, g};
    for (const auto &[n, d] : v.relations) out[n] = {SymKind::Relation, d.arity, d.generated};
    for (const auto &[n, g] : v.attributes) out[n] = {SymKind::Attribute, 0, g};
    for (const auto &[n, g] : v.datatypes) out[n] = {SymKind::Datatype, 0, g};
    return out;
}

using Renaming = std::map<std::string, std::string>;

std::string subst(const Renaming &m, const std::string &name) {
    auto it = m.find(name);
    return it == m.end() ? name : it->second;
}

RelationExpr rename_rel(const RelationExpr &r, const Renaming &m);
ConceptExpr rename_concept(const ConceptExpr &c, const Renaming &m) {
    ConceptExpr out = c;
    using K = ConceptExpr::Kind;
    switch (c.kind) {
    case K::Atomic:
    case K::AllAttr:
    case K::SomeAttr:
    case K::AtMostOneAttr:
    case K::AttrMin:
    case K::AttrMax:
        out.name = subst(m, c.name);
        break;
    case K::AllRel:
    case K::SomeRel:
        out.name = subst(m, c.name);
        break;
    default:
        break;
    }
    if (!out.datatype.empty()) out.datatype = subst(m, c.datatype);
    if (c.rel) out.rel = std::make_shared<RelationExpr>(rename_rel(*c.rel, m));
    if (c.lhs) out.lhs = std::make_shared<ConceptExpr>(rename_concept(*c.lhs, m));
    if (c.rhs) out.rhs = std::make_shared<ConceptExpr>(rename_concept(*c.rhs, m));
    return out;
}

RelationExpr rename_rel(const RelationExpr &r, const Renaming &m) {
    RelationExpr out = r;
    if (!out.name.empty()) out.name = subst(m, r.name);
    if (r.sel_concept)
        out.sel_concept = std::make_shared<ConceptExpr>(rename_concept(*r.sel_concept, m));
    if (r.inner) out.inner = std::make_shared<RelationExpr>(rename_rel(*r.inner, m));
    return out;
}

Axiom rename_axiom(const Axiom &ax, const Renaming &m) {
    Axiom out = ax;
    out.lhs_c = rename_concept(ax.lhs_c, m);
    out.rhs_c = rename_concept(ax.rhs_c, m);
    out.lhs_r = rename_rel(ax.lhs_r, m);
    out.rhs_r = rename_rel(ax.rhs_r, m);
    if (!out.concept_name.empty()) out.concept_name = subst(m, ax.concept_name);
    if (!out.attribute.empty()) out.attribute = subst(m, ax.attribute);
    for (auto &r : out.roles) r = subst(m, r);
    if (!out.relation.empty()) out.relation = subst(m, ax.relation);
    return out;
}

std::vector<std::string> sorted_axiom_keys(const KnowledgeBase &kb, const Renaming &m) {
    std::vector<std::string> keys;
    keys.reserve(kb.axioms.size());
    for (const auto &ax : kb.axioms) keys.push_back(serialize_axiom(rename_axiom(ax, m)));
    std::sort(keys.begin(), keys.end());
    return keys;
}

std::vector<std::string> metadata_keys(const Vocabulary &v, const Renaming &m) {
    std::vector<std::string> keys;
    for (const auto &[p, q] : v.inverse_partners) {
        std::string x = subst(m, p), y = subst(m, q);
        if (y < x) std::swap(x, y);
        keys.push_back("inv|" + x + "|" + y);
    }
    for (const auto &[a, b] : v.disjoint_concepts) {
        std::string x = subst(m, a), y = subst(m, b);
        if (y < x) std::swap(x, y);
        keys.push_back("dis|" + x + "|" + y);
    }
    std::sort(keys.begin(), keys.end());
    return keys;
}

// Occurrence fingerprint with all renameable symbols blanked out; candidate
// pairs must agree on it, which keeps the backtracking shallow.
std::string fingerprint(const KnowledgeBase &kb, const std::set<std::string> &renameable,
                        const std::string &symbol) {
    Renaming blank;
    for (const auto &s : renameable) blank[s] = "?";
    Renaming mark = blank;
    mark[symbol] = "!";
    std::vector<std::string> occ;
    for (const auto &ax : kb.axioms) {
        std::string s = serialize_axiom(rename_axiom(ax, mark));
        if (s.find('!') != std::string::npos) occ.push_back(s);
    }
    std::sort(occ.begin(), occ.end());
    std::string out;
    for (const auto &s : occ) out += s + "\n";
    return out;
}

} // namespace

std::optional<SymbolBijection> kb_equal_modulo_renaming(const KnowledgeBase &a,
                                                        const KnowledgeBase &b) {
    if (a.profile != b.profile) return std::nullopt;
    if (a.axioms.size() != b.axioms.size()) return std::nullopt;
    auto syms_a = symbol_table(a.vocabulary);
    auto syms_b = symbol_table(b.vocabulary);
    if (syms_a.size() != syms_b.size()) return std::nullopt;

    // Names user-declared on both sides are pinned to themselves; everything
    // else (generated on either side, or absent from the other) is matched by
    // search.
    // A user-chosen name present on both sides must map to itself. A name
    // that is auto-generated on at least one side is matched by search: an
    // auto label may differ between the kbs, and rendering may concretize an
    // auto label into a user-visible one.
    Renaming renaming;
    std::set<std::string> free_a, free_b;
    for (const auto &[name, info] : syms_a) {
        auto it = syms_b.find(name);
        if (!info.generated && it != syms_b.end() && !it->second.generated) {
            if (it->second.kind != info.kind || it->second.arity != info.arity)
                return std::nullopt;
            renaming[name] = name;
        } else {
            free_a.insert(name);
        }
    }
    for (const auto &[name, info] : syms_b)
        if (!renaming.count(name)) free_b.insert(name);
    // two distinct user-chosen names can never correspond
    for (const auto &name : free_a)
        if (!syms_a.at(name).generated) {
            bool has_target = false;
            for (const auto &t : free_b)
                if (syms_b.at(t).generated || t == name) has_target = true;
            if (!has_target) return std::nullopt;
        }
    // renaming keys cover pinned symbols; targets already used:
    std::set<std::string> used_b;
    for (const auto &[k, v] : renaming) used_b.insert(v);
    for (auto it = free_b.begin(); it != free_b.end();)
        it = used_b.count(*it) ? free_b.erase(it) : ++it;
    if (free_a.size() != free_b.size()) return std::nullopt;

    std::map<std::string, std::string> fp_a, fp_b;
    for (const auto &s : free_a) fp_a[s] = fingerprint(a, free_a, s);
    for (const auto &s : free_b) fp_b[s] = fingerprint(b, free_b, s);

    std::vector<std::string> order(free_a.begin(), free_a.end());
    std::vector<std::string> targets(free_b.begin(), free_b.end());
    std::vector<bool> taken(targets.size(), false);

    std::optional<SymbolBijection> result;
    auto leaf_check = [&](const Renaming &m) {
        if (sorted_axiom_keys(a, m) != sorted_axiom_keys(b, {})) return false;
        if (metadata_keys(a.vocabulary, m) != metadata_keys(b.vocabulary, {})) return false;
        return true;
    };

    std::function<bool(size_t)> search = [&](size_t idx) -> bool {
        if (idx == order.size()) return leaf_check(renaming);
        const std::string &sym = order[idx];
        const SymInfo &info = syms_a.at(sym);
        for (size_t t = 0; t < targets.size(); ++t) {
            if (taken[t]) continue;
            const SymInfo &tinfo = syms_b.at(targets[t]);
            if (tinfo.kind != info.kind || tinfo.arity != info.arity) continue;
            if (!info.generated && !tinfo.generated && sym != targets[t]) continue;
            if (fp_a.at(sym) != fp_b.at(targets[t])) continue;
            taken[t] = true;
            renaming[sym] = targets[t];
            if (search(idx + 1)) return true;
            renaming.erase(sym);
            taken[t] = false;
        }
        return false;
    };

    if (!search(0)) return std::nullopt;
    SymbolBijection bij;
    bij.mapping = renaming;
    return bij;
}

} // namespace dc
