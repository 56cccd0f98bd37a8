#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dc/error.hpp"

namespace dc {

enum class Profile { DCp, DCs, DCuml, DCeer, DCorm };

const char *profile_name(Profile p);
std::optional<Profile> profile_from_name(const std::string &name);

// Relation declaration: name, arity (2 or 3), and ordered place labels.
// Labels default to "1".."n" but can be any string and do not impose an order;
// the list here only fixes a storage layout for tuples.
struct RelationDecl {
    int arity = 2;
    std::vector<std::string> places; // size == arity
    bool generated = false;
};

struct Vocabulary {
    std::map<std::string, bool> concepts;   // name -> generated
    std::map<std::string, RelationDecl> relations;
    std::map<std::string, bool> attributes; // name -> generated
    std::map<std::string, bool> datatypes;  // name -> generated
    // Inverse-partner metadata: pairs (P, Q) meaning Q^I must equal (P^-)^I.
    // Used where the profile grammar has no relation-inclusion axiom.
    std::vector<std::pair<std::string, std::string>> inverse_partners;
    // Concept disjointness side-conditions (reified relationships of
    // different arity); not expressible in any profile grammar.
    std::vector<std::pair<std::string, std::string>> disjoint_concepts;

    bool has_symbol(const std::string &name) const;
    bool is_generated(const std::string &name) const;
    std::optional<std::string> inverse_partner_of(const std::string &rel) const;

    void declare_concept(const std::string &name, bool generated = false);
    void declare_relation(const std::string &name, int arity,
                          std::vector<std::string> places = {},
                          bool generated = false);
    void declare_attribute(const std::string &name, bool generated = false);
    void declare_datatype(const std::string &name, bool generated = false);
};

struct ConceptExpr;

struct RelationExpr {
    enum class Kind {
        TopN,       // top2 / top3
        Atomic,     // P
        Inverse,    // inv(P)
        Selection,  // (place : C)   -- DCp only
        Complement, // not R         -- DCorm only
    };

    Kind kind = Kind::Atomic;
    int arity = 2;                           // TopN
    std::string name;                        // Atomic / Inverse
    std::string place;                       // Selection
    std::shared_ptr<ConceptExpr> sel_concept; // Selection
    std::shared_ptr<RelationExpr> inner;      // Complement

    static RelationExpr top(int arity = 2);
    static RelationExpr atomic(std::string name);
    static RelationExpr inverse(std::string name);
    static RelationExpr selection(std::string place, ConceptExpr c);
    static RelationExpr complement(RelationExpr r);
};

struct ConceptExpr {
    enum class Kind {
        Top,
        Atomic,
        MinPlace,      // >= k [place] R
        MaxPlace,      // <= k [place] R
        AllAttr,       // all a . T
        SomeAttr,      // some a . T
        AtMostOneAttr, // <=1 a
        And,
        Or,            // DCorm only
        AllRel,        // all R . A
        SomeRel,       // some R . A
        Min,           // >= k R
        Max,           // <= k R
        AttrMin,       // >= k a . T
        AttrMax,       // <= k a . T
    };

    Kind kind = Kind::Top;
    std::string name;     // Atomic concept / attribute name / filler concept (AllRel, SomeRel)
    std::string datatype; // AllAttr / SomeAttr / AttrMin / AttrMax
    unsigned count = 0;   // k
    std::string place;    // MinPlace / MaxPlace
    std::shared_ptr<RelationExpr> rel;
    std::shared_ptr<ConceptExpr> lhs, rhs; // And / Or

    static ConceptExpr top();
    static ConceptExpr atomic(std::string name);
    static ConceptExpr min_place(unsigned k, std::string place, RelationExpr r);
    static ConceptExpr max_place(unsigned k, std::string place, RelationExpr r);
    static ConceptExpr all_attr(std::string attr, std::string datatype);
    static ConceptExpr some_attr(std::string attr, std::string datatype);
    static ConceptExpr at_most_one_attr(std::string attr);
    static ConceptExpr conj(ConceptExpr a, ConceptExpr b);
    static ConceptExpr disj(ConceptExpr a, ConceptExpr b);
    static ConceptExpr all_rel(RelationExpr r, std::string filler);
    static ConceptExpr some_rel(RelationExpr r, std::string filler);
    static ConceptExpr min(unsigned k, RelationExpr r);
    static ConceptExpr max(unsigned k, RelationExpr r);
    static ConceptExpr attr_min(unsigned k, std::string attr, std::string datatype);
    static ConceptExpr attr_max(unsigned k, std::string attr, std::string datatype);
};

struct Axiom {
    enum class Kind {
        ConceptInc, // C <= D
        RelInc,     // R <= S
        IdAttr,     // id C a
        IdRoles,    // id C R1 ... Rn
        Fd,         // fd P i1 , i2 -> i3
    };

    Kind kind = Kind::ConceptInc;
    ConceptExpr lhs_c, rhs_c;
    RelationExpr lhs_r, rhs_r;
    std::string concept_name;            // IdAttr / IdRoles
    std::string attribute;               // IdAttr
    std::vector<std::string> roles;      // IdRoles
    std::string relation;                // Fd
    std::string fd_i1, fd_i2, fd_i3;     // Fd places

    static Axiom concept_inc(ConceptExpr lhs, ConceptExpr rhs);
    static Axiom rel_inc(RelationExpr lhs, RelationExpr rhs);
    static Axiom id_attr(std::string concept_name, std::string attr);
    static Axiom id_roles(std::string concept_name, std::vector<std::string> roles);
    static Axiom fd(std::string relation, std::string i1, std::string i2, std::string i3);
};

struct KnowledgeBase {
    Profile profile = Profile::DCs;
    Vocabulary vocabulary;
    std::vector<Axiom> axioms;
    // Source model element per axiom (parallel to `axioms`); may be empty
    // when the kb was parsed from text rather than encoded.
    std::vector<std::string> provenance;

    void add_axiom(Axiom ax, std::string source = {});
    // Sorts axioms by kind then by serialized form; keeps provenance aligned.
    void canonicalize();
};

std::string serialize_concept(const ConceptExpr &c);
std::string serialize_relation(const RelationExpr &r);
std::string serialize_axiom(const Axiom &ax);

// ---- profile membership -------------------------------------------------

struct MembershipReport {
    // Grammar violations: (axiom serialization + sub-expression path, reason).
    std::vector<std::pair<std::string, std::string>> violations;
    // Shapes that are inside the grammar but cannot come out of any encoder.
    std::vector<std::pair<std::string, std::string>> lints;

    bool member() const { return violations.empty(); }
};

MembershipReport check_profile(const KnowledgeBase &kb, Profile profile);

// ---- text format --------------------------------------------------------

std::string serialize_kb_text(const KnowledgeBase &kb);
KnowledgeBase parse_kb_text(const std::string &text);

// ---- equality modulo renaming of generated symbols ----------------------

struct SymbolBijection {
    std::map<std::string, std::string> mapping; // kb1 symbol -> kb2 symbol
};

std::optional<SymbolBijection> kb_equal_modulo_renaming(const KnowledgeBase &a,
                                                        const KnowledgeBase &b);

} // namespace dc
