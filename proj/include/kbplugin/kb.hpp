#pragma once

// In-memory knowledge base: concepts, entities, relations and the three
// disjoint triple partitions (instance-of, subclass-of, relational).
//
// A KnowledgeBase is built once from a KbSource (the id-level content of a KB
// file), validated, indexed, and never mutated afterwards. All indexes use
// dense 32-bit positions into the entity/concept/relation tables; ids and
// names are only touched at the boundaries.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "json.hpp"
#include "kbplugin/literal.hpp"

namespace kbplugin {

using EntityIndex = std::uint32_t;
using ConceptIndex = std::uint32_t;
using RelationIndex = std::uint32_t;
using TripleIndex = std::uint32_t;

inline constexpr std::string_view kInstanceOf = "instance of";
inline constexpr std::string_view kSubclassOf = "subclass of";

enum class SchemaKind : std::uint8_t { Concept, Relation };
std::string_view to_string(SchemaKind kind) noexcept;

struct SchemaItem {
    std::string id;
    std::string name;
    std::vector<std::string> aliases;

    friend bool operator==(const SchemaItem&, const SchemaItem&) = default;
};

struct Entity {
    std::string id;
    std::string name;
    std::vector<std::string> aliases;

    friend bool operator==(const Entity&, const Entity&) = default;
};

/// Id-level KB content exactly as stored in a KB file.
struct KbSource {
    using Tail = std::variant<std::string, LiteralValue>;  // entity id or literal

    struct Relational {
        std::string head;
        std::string relation;
        Tail tail;

        friend bool operator==(const Relational&, const Relational&) = default;
    };

    std::vector<SchemaItem> concepts;
    std::vector<SchemaItem> relations;
    std::vector<Entity> entities;
    std::vector<std::pair<std::string, std::string>> instance_of;  // (entity, concept)
    std::vector<std::pair<std::string, std::string>> subclass_of;  // (child, parent)
    std::vector<Relational> relational;

    /// Structural parse only; referential checks happen in KnowledgeBase::build.
    static KbSource from_json(const nlohmann::json& doc);
    nlohmann::ordered_json to_json() const;

    friend bool operator==(const KbSource&, const KbSource&) = default;
};

struct InstanceTriple {
    EntityIndex entity;
    ConceptIndex concept_idx;
};

struct SubclassTriple {
    ConceptIndex child;
    ConceptIndex parent;
};

struct RelationalTriple {
    using Tail = std::variant<EntityIndex, LiteralValue>;

    EntityIndex head;
    RelationIndex relation;
    Tail tail;

    bool has_entity_tail() const noexcept { return std::holds_alternative<EntityIndex>(tail); }
    EntityIndex tail_entity() const { return std::get<EntityIndex>(tail); }
    const LiteralValue& tail_literal() const { return std::get<LiteralValue>(tail); }
};

enum class Direction : std::uint8_t { Forward, Backward };

/// Result of one hop: entity targets and literal targets, each sorted and unique.
struct HopResult {
    std::vector<EntityIndex> entities;
    std::vector<LiteralValue> values;

    bool empty() const noexcept { return entities.empty() && values.empty(); }
};

struct KbStats {
    std::size_t concepts = 0;
    std::size_t relations = 0;                 // excluding the reserved relations
    std::size_t relations_with_reserved = 0;   // counts instance-of/subclass-of when used
    std::size_t entities = 0;
    std::size_t instance_of = 0;
    std::size_t subclass_of = 0;
    std::size_t relational = 0;

    nlohmann::ordered_json to_json() const;
    friend bool operator==(const KbStats&, const KbStats&) = default;
};

class KnowledgeBase {
public:
    /// Validates and indexes. Throws Error(Parse | Reference | Cycle). Duplicate
    /// triples are dropped and reported through warnings().
    static KnowledgeBase build(KbSource source);

    KnowledgeBase(const KnowledgeBase&) = default;
    KnowledgeBase(KnowledgeBase&&) noexcept = default;
    KnowledgeBase& operator=(const KnowledgeBase&) = default;
    KnowledgeBase& operator=(KnowledgeBase&&) noexcept = default;

    /// Deduplicated id-level content; serializing it reproduces this KB.
    const KbSource& source() const noexcept { return source_; }
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

    std::span<const Entity> entities() const noexcept { return source_.entities; }
    std::span<const SchemaItem> concepts() const noexcept { return source_.concepts; }
    std::span<const SchemaItem> relations() const noexcept { return source_.relations; }
    const Entity& entity(EntityIndex e) const { return source_.entities.at(e); }
    const SchemaItem& concept_item(ConceptIndex c) const { return source_.concepts.at(c); }
    const SchemaItem& relation_item(RelationIndex r) const { return source_.relations.at(r); }

    std::optional<EntityIndex> entity_by_id(std::string_view id) const;
    std::optional<ConceptIndex> concept_by_id(std::string_view id) const;
    std::optional<RelationIndex> relation_by_id(std::string_view id) const;

    /// Exact name matches; when there are none, exact alias matches. Sorted.
    std::vector<EntityIndex> resolve_entity(std::string_view name) const;
    /// Exact display-name matches (aliases are not consulted for schema items).
    std::span<const ConceptIndex> resolve_concept(std::string_view name) const;
    std::span<const RelationIndex> resolve_relation(std::string_view name) const;

    std::span<const InstanceTriple> instance_of() const noexcept { return instance_of_; }
    std::span<const SubclassTriple> subclass_of() const noexcept { return subclass_of_; }
    std::span<const RelationalTriple> relational() const noexcept { return relational_; }

    std::size_t popularity(EntityIndex e) const { return popularity_.at(e); }

    HopResult neighbors(std::span<const EntityIndex> sources, RelationIndex r,
                        Direction direction) const;

    std::span<const EntityIndex> concept_instances(ConceptIndex c, bool transitive) const;
    /// Concepts the entity is a direct instance of.
    std::span<const ConceptIndex> concepts_of(EntityIndex e) const { return concepts_of_.at(e); }
    /// The concept itself plus every transitive superclass.
    std::span<const ConceptIndex> ancestors(ConceptIndex c) const { return ancestors_.at(c); }

    /// Relational triples with e as head / as entity tail.
    std::span<const TripleIndex> out_edges(EntityIndex e) const { return out_edges_.at(e); }
    std::span<const TripleIndex> in_edges(EntityIndex e) const { return in_edges_.at(e); }
    /// Relational triples of r whose tail is a literal.
    std::span<const TripleIndex> literal_triples(RelationIndex r) const {
        return literal_triples_.at(r);
    }

    KbStats stats() const;

private:
    KnowledgeBase() = default;
    void index();

    struct Edge {
        EntityIndex key;
        TripleIndex triple;
        friend auto operator<=>(const Edge&, const Edge&) = default;
    };

    KbSource source_;
    std::vector<std::string> warnings_;

    std::unordered_map<std::string, EntityIndex> entity_ids_;
    std::unordered_map<std::string, ConceptIndex> concept_ids_;
    std::unordered_map<std::string, RelationIndex> relation_ids_;
    std::unordered_map<std::string, std::vector<EntityIndex>> entity_names_;
    std::unordered_map<std::string, std::vector<EntityIndex>> entity_aliases_;
    std::unordered_map<std::string, std::vector<ConceptIndex>> concept_names_;
    std::unordered_map<std::string, std::vector<RelationIndex>> relation_names_;

    std::vector<InstanceTriple> instance_of_;
    std::vector<SubclassTriple> subclass_of_;
    std::vector<RelationalTriple> relational_;

    std::vector<std::vector<EntityIndex>> direct_instances_;
    std::vector<std::vector<EntityIndex>> transitive_instances_;
    std::vector<std::vector<ConceptIndex>> concepts_of_;
    std::vector<std::vector<ConceptIndex>> ancestors_;
    std::vector<std::vector<Edge>> forward_;   // per relation, keyed by head
    std::vector<std::vector<Edge>> backward_;  // per relation, keyed by entity tail
    std::vector<std::vector<TripleIndex>> out_edges_;
    std::vector<std::vector<TripleIndex>> in_edges_;
    std::vector<std::vector<TripleIndex>> literal_triples_;
    std::vector<std::size_t> popularity_;
};

/// Reads and builds a KB file. Throws Error(Io | Parse | Reference | Cycle).
KnowledgeBase load_kb(const std::filesystem::path& path);
void write_kb(const KnowledgeBase& kb, const std::filesystem::path& path);

// Id-level queries. Unknown ids raise UnknownEntity/UnknownRelation/UnknownConcept;
// the reserved relations raise ReservedRelation.
std::size_t popularity(const KnowledgeBase& kb, std::string_view entity_id);
HopResult neighbors(const KnowledgeBase& kb, std::span<const std::string> entity_ids,
                    std::string_view relation_id, Direction direction);
std::vector<std::string> concept_instances(const KnowledgeBase& kb, std::string_view concept_id,
                                           bool transitive);

} // namespace kbplugin
