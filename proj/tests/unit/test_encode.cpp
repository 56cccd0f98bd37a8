#include <string>

#include "dc/encode.hpp"
#include "dc/modelgen.hpp"
#include "doctest.h"

using namespace dc;

namespace {

ConceptualModel binary(const std::string &rel, const std::string &a, const std::string &b) {
    ConceptualModel m;
    m.family = Family::UML;
    m.object_types.push_back({a});
    if (b != a) m.object_types.push_back({b});
    Relationship r;
    r.name = rel;
    r.roles.push_back({"1", a, {}});
    r.roles.push_back({"2", b, {}});
    m.relationships.push_back(std::move(r));
    return m;
}

bool has_axiom(const KnowledgeBase &kb, const std::string &text) {
    for (const Axiom &ax : kb.axioms)
        if (serialize_axiom(ax) == text) return true;
    return false;
}

} // namespace

TEST_CASE("positionalist encoding types each place") {
    ConceptualModel m = binary("teach", "Professor", "Course");
    KnowledgeBase kb = encode_dcp(m);
    CHECK(kb.profile == Profile::DCp);
    CHECK(has_axiom(kb, ">= 1 [ 1 ] teach <= Professor"));
    CHECK(has_axiom(kb, ">= 1 [ 2 ] teach <= Course"));
    CHECK(kb.axioms.size() == 2);
}

TEST_CASE("positionalist encoding of the core constraints") {
    ConceptualModel m = binary("P", "A", "B");
    m.data_types.push_back({"String"});
    m.attributes.push_back({"A", "name", "String", {}, {}, false});
    m.subsumptions.push_back({"B", "A"});
    m.constraints.push_back(Cardinality{"P", "1", 2, 5, {}});
    m.constraints.push_back(Mandatory{"P", "2", {}});
    m.constraints.push_back(SingleIdentification{"A", "name"});
    KnowledgeBase kb = encode_dcp(m);
    CHECK(has_axiom(kb, "A <= some name . String and <=1 name"));
    CHECK(has_axiom(kb, "B <= A"));
    CHECK(has_axiom(kb, "A <= <= 5 [ 1 ] P and >= 2 [ 1 ] P"));
    CHECK(has_axiom(kb, "B <= >= 1 [ 2 ] P"));
    CHECK(has_axiom(kb, "id A name"));
}

TEST_CASE("empty model gives an empty kb") {
    ConceptualModel m;
    m.family = Family::UML;
    CHECK(encode_dcp(m).axioms.empty());
    CHECK(encode_dcs(m).axioms.empty());
}

TEST_CASE("richer features are rejected with a pointer to the right encoder") {
    ConceptualModel m = binary("P", "A", "B");
    m.constraints.push_back(RoleDisjointness{{"#0", "1"}, {"#0", "2"}});
    m.family = Family::ORM;
    m.relationships[0].readings.push_back("… p …");
    m.relationships[0].name.reset();
    REQUIRE(validate_model(m).empty());
    try {
        encode_dcp(m);
        FAIL("expected rejection of the non-core constraint");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::UnsupportedFeature);
        CHECK(std::string(e.what()).find("orm") != std::string::npos);
    }
}

TEST_CASE("standard-view lifting picks role names and declares inverses") {
    ConceptualModel m = binary("", "Affiliation", "Person");
    m.relationships[0].name.reset();
    m.relationships[0].roles[0].role_name = "has";
    m.relationships[0].roles[1].role_name = "has_member";
    KnowledgeBase kb = encode_dcs(m);
    CHECK(kb.profile == Profile::DCs);
    CHECK(has_axiom(kb, ">= 1 has_member <= Affiliation"));
    CHECK(has_axiom(kb, ">= 1 inv ( has_member ) <= Person"));
    CHECK(kb.vocabulary.inverse_partner_of("has_member") == "has");
    CHECK(kb.vocabulary.inverse_partner_of("has") == "has_member");
}

TEST_CASE("recursive relationship with unnamed places gets auto labels") {
    ConceptualModel m = binary("P", "A", "A");
    KnowledgeBase kb = encode_dcs(m);
    CHECK(has_axiom(kb, ">= 1 P_e1 <= A"));
    CHECK(has_axiom(kb, ">= 1 inv ( P_e1 ) <= A"));
    CHECK(kb.vocabulary.is_generated("P_e1"));
    CHECK(kb.vocabulary.is_generated("P_e2"));
    CHECK(kb.vocabulary.inverse_partner_of("P_e1") == "P_e2");
}

TEST_CASE("lifting preserves place-indexed cardinalities one for one") {
    for (unsigned seed = 0; seed < 30; ++seed) {
        ConceptualModel m = generate_model(Family::UML, 40, seed, /*core_only=*/true);
        KnowledgeBase dcp = encode_dcp(m);
        KnowledgeBase dcs = encode_dcs(m);
        LiftInfo lift;
        pos_to_standard(dcp, m, &lift);
        // count cardinality constructors on the rhs of atomic-lhs inclusions
        auto count_cards = [](const KnowledgeBase &kb, ConceptExpr::Kind lo,
                              ConceptExpr::Kind hi) {
            size_t n = 0;
            auto walk = [&](const ConceptExpr &c, auto &&self) -> void {
                if (c.kind == lo || c.kind == hi) ++n;
                if (c.lhs) self(*c.lhs, self);
                if (c.rhs) self(*c.rhs, self);
            };
            for (const Axiom &ax : kb.axioms)
                if (ax.kind == Axiom::Kind::ConceptInc &&
                    ax.lhs_c.kind == ConceptExpr::Kind::Atomic)
                    walk(ax.rhs_c, walk);
            return n;
        };
        size_t place_cards =
            count_cards(dcp, ConceptExpr::Kind::MinPlace, ConceptExpr::Kind::MaxPlace);
        size_t lifted_cards = count_cards(dcs, ConceptExpr::Kind::Min, ConceptExpr::Kind::Max);
        CHECK(place_cards == lifted_cards);
    }
}

TEST_CASE("encoding is deterministic") {
    ConceptualModel m = generate_model(Family::EER, 60, 7);
    CHECK(serialize_kb_text(encode_eer(m)) == serialize_kb_text(encode_eer(m)));
}

TEST_CASE("uml extension axioms") {
    ConceptualModel m = binary("P", "Person", "B");
    m.data_types.push_back({"String"});
    m.attributes.push_back({"Person", "phone", "String", 1, 3, true});
    KnowledgeBase kb = encode_uml(m);
    CHECK(kb.profile == Profile::DCuml);
    CHECK(has_axiom(kb, "Person <= <= 3 phone . String and >= 1 phone . String"));
}

TEST_CASE("uml association subsumption becomes componentwise relation inclusion") {
    ConceptualModel m = binary("supervises", "A", "B");
    Relationship s;
    s.name = "manages";
    s.roles.push_back({"1", "A", {}});
    s.roles.push_back({"2", "B", {}});
    m.relationships.push_back(s);
    m.rel_subsumptions.push_back({"supervises", "manages"});
    KnowledgeBase kb = encode_uml(m);
    bool found = false;
    for (size_t i = 0; i < kb.axioms.size(); ++i)
        if (kb.axioms[i].kind == Axiom::Kind::RelInc &&
            kb.provenance[i].find("relSubsumption") != std::string::npos)
            found = true;
    CHECK(found);
}

TEST_CASE("eer keeps ternaries atomic unless reification is requested") {
    ConceptualModel m;
    m.family = Family::EER;
    m.object_types = {{"Vendor"}, {"Part"}, {"Project"}};
    Relationship r;
    r.name = "supply";
    r.roles = {{"1", "Vendor", {}}, {"2", "Part", {}}, {"3", "Project", {}}};
    m.relationships.push_back(r);

    KnowledgeBase atomic = encode_eer(m);
    CHECK(atomic.profile == Profile::DCeer);
    CHECK(atomic.vocabulary.relations.at("supply").arity == 3);

    KnowledgeBase reified = encode_eer(m, /*reify_ternaries=*/true);
    CHECK(reified.profile == Profile::DCorm);
    CHECK(reified.vocabulary.concepts.count("supply_r") == 1);
    CHECK(has_axiom(reified, "supply_r <= top"));
}

TEST_CASE("eer weak identification becomes a functional dependency") {
    ConceptualModel m;
    m.family = Family::EER;
    m.object_types = {{"A"}, {"B"}, {"Dependent"}};
    Relationship r;
    r.name = "insures";
    r.roles = {{"1", "A", {}}, {"2", "B", {}}, {"3", "Dependent", {}}};
    m.relationships.push_back(r);
    m.constraints.push_back(WeakIdentification{"insures", "1", "2", "3"});
    KnowledgeBase kb = encode_eer(m);
    CHECK(has_axiom(kb, "fd insures 1 , 2 -> 3"));
}

TEST_CASE("eer multi-attribute identification makes a composite attribute") {
    ConceptualModel m;
    m.family = Family::EER;
    m.object_types.push_back({"Person"});
    m.data_types.push_back({"String"});
    m.attributes.push_back({"Person", "fname", "String", {}, {}, false});
    m.attributes.push_back({"Person", "lname", "String", {}, {}, false});
    m.constraints.push_back(MultiAttributeIdentification{"Person", {"fname", "lname"}});
    KnowledgeBase kb = encode_eer(m);
    CHECK(kb.vocabulary.attributes.count("fname_lname") == 1);
    CHECK(has_axiom(kb, "id Person fname_lname"));
}

TEST_CASE("reification emits typing, totality, functionality, and the identifier") {
    ConceptualModel m;
    m.family = Family::EER;
    m.object_types = {{"Vendor"}, {"Part"}, {"Project"}};
    Relationship r;
    r.name = "supply";
    r.roles = {{"1", "Vendor", {}}, {"2", "Part", {}}, {"3", "Project", {}}};
    m.relationships.push_back(r);
    KnowledgeBase kb = reify_nary(m, "supply");
    CHECK(has_axiom(kb, "supply_r <= top"));
    CHECK(has_axiom(kb, ">= 1 supply_c1 <= supply_r"));
    CHECK(has_axiom(kb, ">= 1 inv ( supply_c1 ) <= Vendor"));
    CHECK(has_axiom(kb, "supply_r <= >= 1 supply_c1"));
    CHECK(has_axiom(kb, "supply_r <= <= 1 supply_c1"));
    CHECK(has_axiom(kb, "id supply_r supply_c1 supply_c2 supply_c3"));
}

TEST_CASE("reification rejects binary input") {
    ConceptualModel m = binary("P", "A", "B");
    CHECK_THROWS_AS(reify_nary(m, "P"), Error);
}

TEST_CASE("orm reading names") {
    Relationship two;
    two.roles = {{"1", "A", {}}, {"2", "B", {}}};
    two.readings = {"… has member …", "… member of …"};
    auto names = orm_reading_names(two);
    REQUIRE(names.size() == 2);
    CHECK(names[0] == std::pair<std::string, bool>{"has_member", false});
    CHECK(names[1] == std::pair<std::string, bool>{"member_of", false});

    Relationship one;
    one.roles = two.roles;
    one.readings = {"… smokes at …"};
    names = orm_reading_names(one);
    CHECK(names[0] == std::pair<std::string, bool>{"smokes_at", false});
    CHECK(names[1] == std::pair<std::string, bool>{"smokes_at_inv", true});

    Relationship none;
    none.roles = two.roles;
    CHECK_THROWS_AS(orm_reading_names(none), Error);
}

TEST_CASE("orm unary fact type becomes a boolean attribute") {
    ConceptualModel m;
    m.family = Family::ORM;
    m.object_types.push_back({"Person"});
    Relationship r;
    r.roles.push_back({"1", "Person", {}});
    r.readings.push_back("… smokes …");
    m.relationships.push_back(r);
    KnowledgeBase kb = encode_orm(m);
    CHECK(kb.profile == Profile::DCorm);
    bool found = false;
    for (const Axiom &ax : kb.axioms)
        if (serialize_axiom(ax) == "Person <= all smokes . Boolean and <=1 smokes") found = true;
    CHECK(found);
}

TEST_CASE("orm role disjointness uses relation complement both ways") {
    ConceptualModel m;
    m.family = Family::ORM;
    m.object_types = {{"A"}, {"B"}};
    for (const char *reading : {"… r …", "… s …"}) {
        Relationship r;
        r.roles = {{"1", "A", {}}, {"2", "B", {}}};
        r.readings = {reading};
        m.relationships.push_back(r);
    }
    m.constraints.push_back(RoleDisjointness{{"#0", "1"}, {"#1", "1"}});
    KnowledgeBase kb = encode_orm(m);
    CHECK(has_axiom(kb, "r <= not s"));
    CHECK(has_axiom(kb, "s <= not r"));
}

TEST_CASE("orm disjunctive mandatory is a disjunction of participations") {
    ConceptualModel m;
    m.family = Family::ORM;
    m.object_types = {{"Person"}, {"Course"}};
    for (const char *reading : {"… teaches …", "… studies …"}) {
        Relationship r;
        r.roles = {{"1", "Person", {}}, {"2", "Course", {}}};
        r.readings = {reading};
        m.relationships.push_back(r);
    }
    m.constraints.push_back(DisjunctiveMandatory{"Person", {{"#0", "1"}, {"#1", "1"}}});
    KnowledgeBase kb = encode_orm(m);
    CHECK(has_axiom(kb, "Person <= >= 1 teaches or >= 1 studies"));
}

TEST_CASE("orm value constraint introduces a restricted datatype") {
    ConceptualModel m;
    m.family = Family::ORM;
    m.object_types.push_back({"Person"});
    m.data_types.push_back({"String"});
    m.value_types.push_back({"Gender", "String"});
    Relationship bridge;
    bridge.roles = {{"1", "Person", {}}, {"2", "Gender", {}}};
    bridge.readings = {"… has gender …"};
    m.relationships.push_back(bridge);
    m.constraints.push_back(ValueConstraint{"Gender", {"m", "f"}});
    KnowledgeBase kb = encode_orm(m);
    bool restricted = false;
    for (const auto &[name, gen] : kb.vocabulary.datatypes)
        if (name.find("_vals") != std::string::npos || name.find("_restricted") != std::string::npos)
            restricted = true;
    CHECK(restricted);
}

TEST_CASE("every family encoder output is grammar-member of its profile") {
    struct Case {
        Family family;
        Profile profile;
    } cases[] = {{Family::UML, Profile::DCuml},
                 {Family::EER, Profile::DCeer},
                 {Family::ORM, Profile::DCorm}};
    for (const Case &c : cases)
        for (unsigned seed = 0; seed < 25; ++seed) {
            ConceptualModel m = generate_model(c.family, 30, seed);
            REQUIRE(validate_model(m).empty());
            KnowledgeBase kb = c.family == Family::UML   ? encode_uml(m)
                               : c.family == Family::EER ? encode_eer(m)
                                                         : encode_orm(m);
            auto report = check_profile(kb, kb.profile);
            if (!report.member()) {
                CAPTURE(family_name(c.family));
                CAPTURE(seed);
                CAPTURE(report.violations[0].second);
                CHECK(report.member());
            }
        }
}

TEST_CASE("provenance is total") {
    ConceptualModel m = generate_model(Family::ORM, 50, 3);
    KnowledgeBase kb = encode_orm(m);
    CHECK(kb.provenance.size() == kb.axioms.size());
    for (const std::string &src : kb.provenance) CHECK_FALSE(src.empty());
}
