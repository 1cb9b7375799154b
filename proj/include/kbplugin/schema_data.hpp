#pragma once

// Self-supervised triple-completion corpus for schema plugins.
//
// Every concept is described by popular instances and by its sub/super
// concepts, every relation by popular triples annotated with the concepts
// of their endpoints. Queries and answers use " || " between the known part
// and the question, and " | " inside a part.

#include <array>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "kbplugin/kb.hpp"

namespace kbplugin {

enum class Template : std::uint8_t { InstFwd, InstBwd, SubFwd, SubBwd, RelFwd, RelBwd, RelWhat };

inline constexpr std::array kAllTemplates{Template::InstFwd, Template::InstBwd, Template::SubFwd,
                                          Template::SubBwd,  Template::RelFwd,  Template::RelBwd,
                                          Template::RelWhat};

std::string_view to_string(Template t) noexcept;

struct QAPair {
    std::string query;
    std::string answer;
    SchemaKind item_kind;
    std::string item_id;
    Template template_id;

    friend bool operator==(const QAPair&, const QAPair&) = default;
};

struct SamplingConfig {
    std::size_t k = 0;  // required, >= 1
};

/// Instance-of triples of c, most popular entity first (ties: entity id).
std::vector<InstanceTriple> sample_instance_triples(const KnowledgeBase& kb, ConceptIndex c,
                                                    std::size_t k);
std::vector<InstanceTriple> sample_instance_triples(const KnowledgeBase& kb,
                                                    std::string_view concept_id, std::size_t k);

/// Relational triples of r by descending min endpoint popularity (the head's
/// popularity alone for literal tails); ties by (head id, tail).
std::vector<TripleIndex> sample_relational_triples(const KnowledgeBase& kb, RelationIndex r,
                                                   std::size_t k);
std::vector<TripleIndex> sample_relational_triples(const KnowledgeBase& kb,
                                                   std::string_view relation_id, std::size_t k);

/// The entity's direct concept with the fewest (transitive) instances; ties
/// by concept id. Throws Error(NoConcept).
ConceptIndex pick_concept(const KnowledgeBase& kb, EntityIndex e);

struct PairBuild {
    std::vector<QAPair> pairs;
    std::vector<std::string> warnings;
};

/// Throws Error(Argument) when cfg.k == 0.
PairBuild build_pairs(const KnowledgeBase& kb, const SamplingConfig& cfg);

struct CorpusSummary {
    std::size_t pairs = 0;
    std::map<Template, std::size_t> per_template;
    std::map<std::string, std::size_t> per_item;  // "concept:<id>" / "relation:<id>"
    std::vector<std::string> zero_coverage;

    nlohmann::ordered_json to_json() const;
};

/// JSON-lines {"query", "answer", "item_id", "template"}. `kb`, when given,
/// supplies the item universe for the zero-coverage list.
CorpusSummary emit_corpus(std::span<const QAPair> pairs, const std::filesystem::path& out,
                          const KnowledgeBase* kb = nullptr);

} // namespace kbplugin
