#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dc/error.hpp"

namespace dc {

enum class Family { UML, EER, ORM };

const char *family_name(Family f);
std::optional<Family> family_from_name(const std::string &name);

struct ObjectType {
    std::string name;
};

struct DataType {
    std::string name;
};

// ORM value type: participates in fact types like an object type but stands
// for lexical values of one datatype. Absent outside the ORM family.
struct ValueType {
    std::string name;
    std::string datatype;
};

struct Role {
    // Place labels are free-form and unordered ("1","2",.. by default).
    std::string place;
    std::string player;                   // object-type name
    std::optional<std::string> role_name; // association-end / role label
};

struct Relationship {
    std::optional<std::string> name;
    std::vector<Role> roles;
    // ORM fact-type readings ("… has member …"); 0-2 for binaries, up to
    // arity entries for ternaries.
    std::vector<std::string> readings;

    int arity() const { return static_cast<int>(roles.size()); }
};

struct Attribute {
    std::string owner; // object-type name
    std::string name;
    std::string datatype;
    // Attribute multiplicity (UML/EER); absent means the default 0..1.
    std::optional<unsigned> card_min;
    std::optional<unsigned> card_max; // nullopt inside an engaged card = unbounded
    bool has_card = false;
};

// A relationship is referenced by its name, or by "#<index>" into
// `relationships` when it is unnamed.
using RelRef = std::string;

struct RolePos {
    RelRef rel;
    std::string place;
};

// ---- constraints --------------------------------------------------------

struct Cardinality {
    RelRef rel;
    std::string place;
    unsigned min = 0;
    std::optional<unsigned> max; // nullopt = unbounded
    // Normally the constrained concept is the role player; a subtype may
    // carry its own participation bound, so it can be overridden.
    std::optional<std::string> player;
};

struct Mandatory {
    RelRef rel;
    std::string place;
    std::optional<std::string> player;
};

struct AttributeCardinality {
    std::string owner;
    std::string attribute;
    unsigned min = 0;
    std::optional<unsigned> max;
};

struct SingleIdentification {
    std::string object_type;
    std::string attribute;
};

struct WeakIdentification {
    RelRef rel;
    std::string i1, i2, i3; // places of a ternary
};

struct MultiAttributeIdentification {
    std::string object_type;
    std::vector<std::string> attributes;
};

struct AssociativeObjectType {
    RelRef rel;
    std::string object_type;
};

struct RoleSubsumption {
    RolePos sub, super;
};

struct RoleDisjointness {
    RolePos first, second;
};

struct DisjunctiveMandatory {
    std::string object_type;
    std::vector<RolePos> roles;
};

struct InternalUniqueness {
    RelRef rel;
    std::vector<std::string> places;
};

struct ExternalUniqueness {
    std::vector<RolePos> roles;
};

struct ExternalIdentification {
    std::string object_type;
    std::vector<RolePos> roles;
};

struct ValueConstraint {
    std::string target; // datatype name, or "owner.attribute"
    std::vector<std::string> values;
};

using Constraint =
    std::variant<Cardinality, Mandatory, AttributeCardinality, SingleIdentification,
                 WeakIdentification, MultiAttributeIdentification, AssociativeObjectType,
                 RoleSubsumption, RoleDisjointness, DisjunctiveMandatory,
                 InternalUniqueness, ExternalUniqueness, ExternalIdentification,
                 ValueConstraint>;

const char *constraint_kind_name(const Constraint &c);

struct Subsumption {
    std::string sub, super; // object-type names
};

struct RelSubsumption {
    RelRef sub, super;
};

struct ConceptualModel {
    Family family = Family::UML;
    std::vector<ObjectType> object_types;
    std::vector<DataType> data_types;
    std::vector<ValueType> value_types; // ORM only
    std::vector<Relationship> relationships;
    std::vector<Attribute> attributes;
    std::vector<Subsumption> subsumptions;
    std::vector<RelSubsumption> rel_subsumptions;
    std::vector<Constraint> constraints;

    bool has_object_type(const std::string &name) const;
    bool has_data_type(const std::string &name) const;
    bool has_value_type(const std::string &name) const;
    // Resolves "#i" or a relationship name; -1 when unresolved.
    int find_relationship(const RelRef &ref) const;
    // Canonical reference for relationship at `index`: its name or "#i".
    RelRef ref_for(int index) const;
};

struct Violation {
    std::string path;    // element path, e.g. "relationships[2]/roles[0]"
    std::string rule_id; // e.g. "duplicate-place-label"
    std::string detail;
};

std::vector<Violation> validate_model(const ConceptualModel &model);

// Rewrites ORM value types (object types linked to a datatype via a binary
// bridging fact type) into plain attributes of the connected object type.
ConceptualModel normalize_orm_value_types(const ConceptualModel &model);

// Lowercases, maps spaces to underscores, and strips the "…"/"..." reading
// placeholders; used for fact-type readings and value-type attribute names.
std::string slugify(const std::string &text);

} // namespace dc
