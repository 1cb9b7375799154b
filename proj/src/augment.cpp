#include "kbplugin/augment.hpp"

#include <fstream>
#include <random>

#include "kbplugin/digest.hpp"
#include "kbplugin/error.hpp"
#include "kbplugin/executor.hpp"

namespace kbplugin {

namespace {

std::vector<std::string> name_pool(const SchemaItem& item) {
    std::vector<std::string> pool{item.name};
    pool.insert(pool.end(), item.aliases.begin(), item.aliases.end());
    return pool;
}

std::size_t draw_index(std::uint64_t seed, std::size_t index, SchemaKind kind, const std::string& id,
                       std::size_t pool_size) {
    const auto h = fnv1a64(id);
    std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(index),
                      std::uint32_t(std::uint64_t(index) >> 32), std::uint32_t(kind),
                      std::uint32_t(h), std::uint32_t(h >> 32)};
    std::mt19937_64 gen(seq);
    // Multiply-shift keeps the draw reproducible across standard libraries.
    return static_cast<std::size_t>((static_cast<unsigned __int128>(gen()) * pool_size) >> 64);
}

std::vector<SchemaItem> renamed(std::span<const SchemaItem> items, SchemaKind kind, const AliasMap& map) {
    std::vector<SchemaItem> out;
    out.reserve(items.size());
    for (const auto& item : items) {
        const auto* img = map.image(kind, item.id);
        if (!img)
            throw Error(ErrorKind::Coverage, "alias map " + std::to_string(map.index) + " has no image for " +
                                                 std::string(to_string(kind)) + " '" + item.id + "'");
        SchemaItem next{item.id, *img, {}};
        for (auto& name : name_pool(item))
            if (name != *img) next.aliases.push_back(std::move(name));
        out.push_back(std::move(next));
    }
    return out;
}

const std::string& rewrite_arg(const KnowledgeBase& kb, const FunctionCall& call, const AliasMap& map) {
    const bool is_concept = arg_kind(call.function) == ArgKind::Concept;
    auto ids = is_concept ? kb.resolve_concept(call.arg) : kb.resolve_relation(call.arg);
    if (ids.empty())
        throw Error(ErrorKind::UnresolvableArgument, std::string(is_concept ? "concept" : "relation") +
                                                         " argument '" + call.arg + "' of " + call.text() +
                                                         " is not in the source KB");
    const auto kind = is_concept ? SchemaKind::Concept : SchemaKind::Relation;
    const auto& id = is_concept ? kb.concept_item(ids.front()).id : kb.relation_item(ids.front()).id;
    const auto* img = map.image(kind, id);
    if (!img)
        throw Error(ErrorKind::Coverage, "alias map " + std::to_string(map.index) + " has no image for '" + id + "'");
    return *img;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw Error(ErrorKind::Io, "write failed for '" + path.string() + "'");
}

} // namespace

const std::string* AliasMap::image(SchemaKind kind, const std::string& id) const {
    auto it = images.find({kind, id});
    return it == images.end() ? nullptr : &it->second;
}

nlohmann::ordered_json AliasMap::to_json() const {
    nlohmann::ordered_json concepts = nlohmann::ordered_json::object();
    nlohmann::ordered_json relations = nlohmann::ordered_json::object();
    for (const auto& [key, name] : images)
        (key.first == SchemaKind::Concept ? concepts : relations)[key.second] = name;
    return {{"index", index}, {"concepts", std::move(concepts)}, {"relations", std::move(relations)}};
}

std::string AliasMap::digest() const {
    return sha256_hex(to_json().dump());
}

AliasMap identity_alias_map(const KnowledgeBase& kb) {
    AliasMap map;
    for (const auto& c : kb.concepts()) map.images[{SchemaKind::Concept, c.id}] = c.name;
    for (const auto& r : kb.relations()) map.images[{SchemaKind::Relation, r.id}] = r.name;
    return map;
}

AliasMap sample_alias_map(const KnowledgeBase& kb, std::size_t index, std::uint64_t seed) {
    if (index < 1) throw Error(ErrorKind::Argument, "alias map index is 1-based");
    if (index == 1) return identity_alias_map(kb);
    AliasMap map;
    map.index = index;
    auto pick = [&](SchemaKind kind, const SchemaItem& item) {
        auto pool = name_pool(item);
        map.images[{kind, item.id}] = pool[draw_index(seed, index, kind, item.id, pool.size())];
    };
    for (const auto& c : kb.concepts()) pick(SchemaKind::Concept, c);
    for (const auto& r : kb.relations()) pick(SchemaKind::Relation, r);
    return map;
}

KnowledgeBase apply_alias_map(const KnowledgeBase& kb, const AliasMap& map) {
    KbSource src = kb.source();
    src.concepts = renamed(kb.concepts(), SchemaKind::Concept, map);
    src.relations = renamed(kb.relations(), SchemaKind::Relation, map);
    return KnowledgeBase::build(std::move(src));
}

Program rewrite_program(const KnowledgeBase& source, const Program& program, const AliasMap& map) {
    std::vector<FunctionCall> calls;
    for (const auto& call : program.calls()) {
        const auto kind = arg_kind(call.function);
        if (kind == ArgKind::Concept || kind == ArgKind::Relation)
            calls.push_back(make_call(call.function, rewrite_arg(source, call, map)));
        else
            calls.push_back(call);
    }
    return Program(std::move(calls));
}

std::vector<DataRecord> read_program_data(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open data file '" + path.string() + "'");
    std::vector<DataRecord> out;
    std::string line;
    for (std::size_t n = 1; std::getline(in, line); ++n) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto doc = nlohmann::json::parse(line, nullptr, false);
        if (doc.is_discarded() || !doc.is_object() || !doc.contains("question") ||
            !doc.contains("program") || !doc.at("question").is_string() || !doc.at("program").is_string())
            throw Error(ErrorKind::Parse, path.string() + ":" + std::to_string(n) +
                                              ": expected {\"question\": string, \"program\": string}");
        out.push_back({doc.at("question").get<std::string>(), doc.at("program").get<std::string>()});
    }
    return out;
}

Augmentation augment(const KnowledgeBase& kb, std::span<const DataRecord> data, std::size_t n,
                     std::uint64_t seed) {
    if (n < 1) throw Error(ErrorKind::Argument, "number of generated KBs must be at least 1");
    Augmentation result;
    result.seed = seed;
    for (std::size_t i = 1; i <= n; ++i) {
        result.maps.push_back(sample_alias_map(kb, i, seed));
        result.kbs.push_back(apply_alias_map(kb, result.maps.back()));
    }

    for (std::size_t line = 0; line < data.size(); ++line) {
        const auto& rec = data[line];
        Program gold;
        Denotation expected;
        try {
            gold = parse_program(rec.program);
            expected = execute(kb, gold);
        } catch (const Error& e) {
            result.skipped.push_back({line + 1, e.what()});
            continue;
        }
        AugmentedRecord out{rec.question, {}};
        for (std::size_t i = 0; i < n; ++i) {
            auto rewritten = rewrite_program(kb, gold, result.maps[i]);
            out.programs.push_back(rewritten.text());
            ++result.programs_verified;
            try {
                if (execute(result.kbs[i], rewritten) != expected)
                    result.violations.push_back("record " + std::to_string(line + 1) + ", KB " +
                                                std::to_string(i + 1) + ": denotation differs");
            } catch (const Error& e) {
                result.violations.push_back("record " + std::to_string(line + 1) + ", KB " +
                                            std::to_string(i + 1) + ": " + e.what());
            }
        }
        result.records.push_back(std::move(out));
    }

    result.name_differences.assign(n, std::vector<std::size_t>(n, 0));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (const auto& [key, name] : result.maps[a].images)
                if (*result.maps[b].image(key.first, key.second) != name) ++result.name_differences[a][b];
    return result;
}

nlohmann::ordered_json augment_dataset(const KnowledgeBase& kb, std::span<const DataRecord> data,
                                       std::size_t n, std::uint64_t seed,
                                       const std::filesystem::path& out) {
    auto result = augment(kb, data, n, seed);
    std::error_code ec;
    std::filesystem::create_directories(out, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create '" + out.string() + "': " + ec.message());

    nlohmann::ordered_json manifest;
    manifest["n"] = n;
    manifest["seed"] = seed;
    auto files = nlohmann::ordered_json::array();
    auto digests = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < n; ++i) {
        const auto name = "kb_" + std::to_string(i + 1) + ".json";
        write_kb(result.kbs[i], out / name);
        files.push_back(name);
        digests.push_back(result.maps[i].digest());
    }
    std::string lines;
    for (const auto& rec : result.records) {
        nlohmann::ordered_json j{{"question", rec.question}, {"programs", rec.programs}};
        lines += j.dump() + '\n';
    }
    write_text(out / "augmented.jsonl", lines);

    manifest["kb_files"] = std::move(files);
    manifest["alias_map_digests"] = std::move(digests);
    manifest["data_file"] = "augmented.jsonl";
    manifest["records_in"] = data.size();
    manifest["records_out"] = result.records.size();
    auto skipped = nlohmann::ordered_json::array();
    for (const auto& s : result.skipped) skipped.push_back({{"line", s.line}, {"reason", s.reason}});
    manifest["skipped"] = std::move(skipped);
    manifest["programs_verified"] = result.programs_verified;
    manifest["violations"] = result.violations.size();
    manifest["violation_details"] = result.violations;
    manifest["pairwise_name_differences"] = result.name_differences;
    write_text(out / "manifest.json", manifest.dump(2) + '\n');
    return manifest;
}

} // namespace kbplugin
