#pragma once

// Alias-replacement augmentation: derive N knowledge bases that share the
// source KB's structure but surface concepts and relations under different
// names, and rewrite gold programs so each one runs on its KB.

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "kbplugin/kb.hpp"
#include "kbplugin/program.hpp"

namespace kbplugin {

struct AliasMap {
    std::size_t index = 1;  // 1-based; index 1 is the identity
    std::map<std::pair<SchemaKind, std::string>, std::string> images;

    /// nullptr when the item has no image.
    const std::string* image(SchemaKind kind, const std::string& id) const;
    nlohmann::ordered_json to_json() const;
    std::string digest() const;
};

AliasMap identity_alias_map(const KnowledgeBase& kb);

/// Index 1 is the identity; otherwise each item's image is drawn uniformly
/// from its name and aliases with a stream keyed by (seed, index, kind, id).
AliasMap sample_alias_map(const KnowledgeBase& kb, std::size_t index, std::uint64_t seed);

/// Same ids and triples; schema-item names replaced by their images (the
/// displaced names join the alias list). Throws Error(Coverage).
KnowledgeBase apply_alias_map(const KnowledgeBase& kb, const AliasMap& map);

/// Replaces concept and relation arguments by their images; Find arguments
/// stay. Names resolve against `source`. Throws Error(UnresolvableArgument).
Program rewrite_program(const KnowledgeBase& source, const Program& program, const AliasMap& map);

struct DataRecord {
    std::string question;
    std::string program;
};

struct AugmentedRecord {
    std::string question;
    std::vector<std::string> programs;  // one canonical text per generated KB

    friend bool operator==(const AugmentedRecord&, const AugmentedRecord&) = default;
};

/// {"question", "program"} per line. Throws Error(Io | Parse) naming the line.
std::vector<DataRecord> read_program_data(const std::filesystem::path& path);

struct SkippedRecord {
    std::size_t line;  // 1-based
    std::string reason;
};

struct Augmentation {
    std::uint64_t seed = 0;
    std::vector<AliasMap> maps;
    std::vector<KnowledgeBase> kbs;
    std::vector<AugmentedRecord> records;
    std::vector<SkippedRecord> skipped;
    std::size_t programs_verified = 0;
    std::vector<std::string> violations;  // answer-invariance failures
    std::vector<std::vector<std::size_t>> name_differences;  // pairwise schema-name diffs
};

/// Builds the N KBs and rewritten records in memory and checks answer
/// invariance of every rewritten program.
Augmentation augment(const KnowledgeBase& kb, std::span<const DataRecord> data, std::size_t n,
                     std::uint64_t seed);

/// Writes kb_<i>.json (i = 1..n), augmented.jsonl and manifest.json into
/// `out` and returns the manifest.
nlohmann::ordered_json augment_dataset(const KnowledgeBase& kb, std::span<const DataRecord> data,
                                       std::size_t n, std::uint64_t seed,
                                       const std::filesystem::path& out);

} // namespace kbplugin
