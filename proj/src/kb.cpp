#include "kbplugin/kb.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "kbplugin/error.hpp"

namespace kbplugin {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string at_path(std::string_view section, std::size_t i) {
    return std::string(section) + "[" + std::to_string(i) + "]";
}

const json& require(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key))
        throw Error(ErrorKind::Parse, where + ": missing '" + key + "'");
    return obj.at(key);
}

std::string require_string(const json& v, const std::string& where) {
    if (!v.is_string()) throw Error(ErrorKind::Parse, where + ": expected a string");
    return v.get<std::string>();
}

template <class Item>
std::vector<Item> parse_items(const json& doc, const char* section) {
    std::vector<Item> out;
    if (!doc.contains(section)) return out;
    const auto& arr = doc.at(section);
    if (!arr.is_array()) throw Error(ErrorKind::Parse, std::string(section) + ": expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const auto where = at_path(section, i);
        const auto& rec = arr[i];
        Item item;
        item.id = require_string(require(rec, "id", where), where + ".id");
        item.name = require_string(require(rec, "name", where), where + ".name");
        if (rec.contains("aliases") && !rec.at("aliases").is_null()) {
            const auto& aliases = rec.at("aliases");
            if (!aliases.is_array()) throw Error(ErrorKind::Parse, where + ".aliases: expected an array");
            for (std::size_t k = 0; k < aliases.size(); ++k)
                item.aliases.push_back(require_string(aliases[k], where + ".aliases"));
        }
        out.push_back(std::move(item));
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> parse_pairs(const json& doc, const char* section) {
    std::vector<std::pair<std::string, std::string>> out;
    if (!doc.contains(section)) return out;
    const auto& arr = doc.at(section);
    if (!arr.is_array()) throw Error(ErrorKind::Parse, std::string(section) + ": expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const auto where = at_path(section, i);
        const auto& rec = arr[i];
        if (!rec.is_array() || rec.size() != 2)
            throw Error(ErrorKind::Parse, where + ": expected a two-element array");
        out.emplace_back(require_string(rec[0], where), require_string(rec[1], where));
    }
    return out;
}

template <class Item>
void check_items(std::vector<Item>& items, std::string_view section,
                 std::vector<std::string>& warnings) {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < items.size(); ++i) {
        auto& item = items[i];
        const auto where = at_path(section, i);
        if (item.id.empty()) throw Error(ErrorKind::Parse, where + ": empty id");
        if (item.name.empty()) throw Error(ErrorKind::Parse, where + ": empty name for '" + item.id + "'");
        if (!seen.insert(item.id).second)
            throw Error(ErrorKind::Parse, where + ": duplicate id '" + item.id + "'");
        std::vector<std::string> aliases;
        for (auto& alias : item.aliases) {
            if (alias == item.name) {
                warnings.push_back(where + ": alias equal to name dropped for '" + item.id + "'");
                continue;
            }
            if (alias.empty() || std::find(aliases.begin(), aliases.end(), alias) != aliases.end())
                continue;
            aliases.push_back(alias);
        }
        item.aliases = std::move(aliases);
    }
}

std::string tail_key(const KbSource::Tail& tail) {
    if (const auto* id = std::get_if<std::string>(&tail)) return "e\x1f" + *id;
    return "l\x1f" + std::get<LiteralValue>(tail).to_json().dump();
}

template <class T>
void sort_unique(std::vector<T>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

} // namespace

std::string_view to_string(SchemaKind kind) noexcept {
    return kind == SchemaKind::Concept ? "concept" : "relation";
}

KbSource KbSource::from_json(const json& doc) {
    if (!doc.is_object()) throw Error(ErrorKind::Parse, "KB document must be a JSON object");
    KbSource src;
    src.concepts = parse_items<SchemaItem>(doc, "concepts");
    src.relations = parse_items<SchemaItem>(doc, "relations");
    src.entities = parse_items<Entity>(doc, "entities");
    src.instance_of = parse_pairs(doc, "instance_of");
    src.subclass_of = parse_pairs(doc, "subclass_of");
    if (doc.contains("relational")) {
        const auto& arr = doc.at("relational");
        if (!arr.is_array()) throw Error(ErrorKind::Parse, "relational: expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const auto where = at_path("relational", i);
            const auto& rec = arr[i];
            if (!rec.is_array() || rec.size() != 3)
                throw Error(ErrorKind::Parse, where + ": expected a three-element array");
            Relational r{require_string(rec[0], where), require_string(rec[1], where), std::string{}};
            if (rec[2].is_string()) {
                r.tail = rec[2].get<std::string>();
            } else {
                try {
                    r.tail = LiteralValue::from_json(rec[2]);
                } catch (const Error& e) {
                    throw Error(ErrorKind::Parse, where + ": " + e.what());
                }
            }
            src.relational.push_back(std::move(r));
        }
    }
    return src;
}

ordered_json KbSource::to_json() const {
    auto items = [](const auto& v) {
        ordered_json arr = ordered_json::array();
        for (const auto& item : v)
            arr.push_back({{"id", item.id}, {"name", item.name}, {"aliases", item.aliases}});
        return arr;
    };
    auto pairs = [](const auto& v) {
        ordered_json arr = ordered_json::array();
        for (const auto& [a, b] : v) arr.push_back({a, b});
        return arr;
    };
    ordered_json doc;
    doc["concepts"] = items(concepts);
    doc["relations"] = items(relations);
    doc["entities"] = items(entities);
    doc["instance_of"] = pairs(instance_of);
    doc["subclass_of"] = pairs(subclass_of);
    ordered_json rel = ordered_json::array();
    for (const auto& t : relational) {
        ordered_json tail;
        if (const auto* id = std::get_if<std::string>(&t.tail)) tail = *id;
        else tail = std::get<LiteralValue>(t.tail).to_json();
        rel.push_back({t.head, t.relation, tail});
    }
    doc["relational"] = std::move(rel);
    return doc;
}

ordered_json KbStats::to_json() const {
    return {{"concepts", concepts},
            {"relations", relations},
            {"relations_with_reserved", relations_with_reserved},
            {"entities", entities},
            {"instance_of", instance_of},
            {"subclass_of", subclass_of},
            {"relational", relational}};
}

KnowledgeBase KnowledgeBase::build(KbSource source) {
    KnowledgeBase kb;
    auto& warnings = kb.warnings_;
    check_items(source.concepts, "concepts", warnings);
    check_items(source.relations, "relations", warnings);
    check_items(source.entities, "entities", warnings);
    for (std::size_t i = 0; i < source.relations.size(); ++i) {
        const auto& r = source.relations[i];
        for (auto reserved : {kInstanceOf, kSubclassOf})
            if (r.id == reserved || r.name == reserved)
                throw Error(ErrorKind::Parse, at_path("relations", i) + ": reserved relation '" +
                                                  std::string(reserved) + "' must not be declared");
    }

    for (std::size_t i = 0; i < source.entities.size(); ++i)
        kb.entity_ids_.emplace(source.entities[i].id, EntityIndex(i));
    for (std::size_t i = 0; i < source.concepts.size(); ++i)
        kb.concept_ids_.emplace(source.concepts[i].id, ConceptIndex(i));
    for (std::size_t i = 0; i < source.relations.size(); ++i)
        kb.relation_ids_.emplace(source.relations[i].id, RelationIndex(i));

    auto entity_ref = [&](const std::string& id, const std::string& where) {
        auto it = kb.entity_ids_.find(id);
        if (it == kb.entity_ids_.end())
            throw Error(ErrorKind::Reference, where + ": unknown entity '" + id + "'");
        return it->second;
    };
    auto concept_ref = [&](const std::string& id, const std::string& where) {
        auto it = kb.concept_ids_.find(id);
        if (it == kb.concept_ids_.end())
            throw Error(ErrorKind::Reference, where + ": unknown concept '" + id + "'");
        return it->second;
    };

    // Referential checks and deduplication, keeping first occurrences in file order.
    KbSource clean;
    clean.concepts = std::move(source.concepts);
    clean.relations = std::move(source.relations);
    clean.entities = std::move(source.entities);
    {
        std::set<std::pair<std::string, std::string>> seen;
        for (std::size_t i = 0; i < source.instance_of.size(); ++i) {
            const auto& [e, c] = source.instance_of[i];
            const auto where = at_path("instance_of", i);
            auto ei = entity_ref(e, where);
            auto ci = concept_ref(c, where);
            if (!seen.insert({e, c}).second) {
                warnings.push_back(where + ": duplicate triple (" + e + ", instance of, " + c + ") dropped");
                continue;
            }
            clean.instance_of.emplace_back(e, c);
            kb.instance_of_.push_back({ei, ci});
        }
    }
    {
        std::set<std::pair<std::string, std::string>> seen;
        for (std::size_t i = 0; i < source.subclass_of.size(); ++i) {
            const auto& [child, parent] = source.subclass_of[i];
            const auto where = at_path("subclass_of", i);
            auto ci = concept_ref(child, where);
            auto pi = concept_ref(parent, where);
            if (!seen.insert({child, parent}).second) {
                warnings.push_back(where + ": duplicate triple (" + child + ", subclass of, " + parent +
                                   ") dropped");
                continue;
            }
            clean.subclass_of.emplace_back(child, parent);
            kb.subclass_of_.push_back({ci, pi});
        }
    }
    {
        std::set<std::string> seen;
        for (std::size_t i = 0; i < source.relational.size(); ++i) {
            auto& t = source.relational[i];
            const auto where = at_path("relational", i);
            if (t.relation == kInstanceOf || t.relation == kSubclassOf)
                throw Error(ErrorKind::Reference,
                            where + ": reserved relation '" + t.relation + "' belongs in its own section");
            auto hi = entity_ref(t.head, where);
            auto rit = kb.relation_ids_.find(t.relation);
            if (rit == kb.relation_ids_.end())
                throw Error(ErrorKind::Reference, where + ": unknown relation '" + t.relation + "'");
            RelationalTriple triple{hi, rit->second, EntityIndex{0}};
            if (const auto* id = std::get_if<std::string>(&t.tail))
                triple.tail = entity_ref(*id, where);
            else
                triple.tail = std::get<LiteralValue>(t.tail);
            if (!seen.insert(t.head + "\x1f" + t.relation + "\x1f" + tail_key(t.tail)).second) {
                warnings.push_back(where + ": duplicate triple (" + t.head + ", " + t.relation + ", …) dropped");
                continue;
            }
            clean.relational.push_back(std::move(t));
            kb.relational_.push_back(std::move(triple));
        }
    }
    kb.source_ = std::move(clean);

    // subclass_of must be acyclic.
    {
        const auto n = kb.source_.concepts.size();
        std::vector<std::vector<ConceptIndex>> parents(n);
        for (const auto& t : kb.subclass_of_) parents[t.child].push_back(t.parent);
        std::vector<std::uint8_t> color(n, 0);  // 0 white, 1 on stack, 2 done
        std::vector<ConceptIndex> path;
        std::vector<std::pair<ConceptIndex, std::size_t>> stack;
        for (ConceptIndex root = 0; root < n; ++root) {
            if (color[root]) continue;
            stack.push_back({root, 0});
            color[root] = 1;
            path.push_back(root);
            while (!stack.empty()) {
                auto& [c, next] = stack.back();
                if (next < parents[c].size()) {
                    ConceptIndex p = parents[c][next++];
                    if (color[p] == 1) {
                        std::string msg = "subclass_of cycle: ";
                        auto start = std::find(path.begin(), path.end(), p);
                        for (auto it = start; it != path.end(); ++it)
                            msg += kb.source_.concepts[*it].id + " -> ";
                        msg += kb.source_.concepts[p].id;
                        throw Error(ErrorKind::Cycle, msg);
                    }
                    if (color[p] == 0) {
                        color[p] = 1;
                        path.push_back(p);
                        stack.push_back({p, 0});
                    }
                } else {
                    color[c] = 2;
                    path.pop_back();
                    stack.pop_back();
                }
            }
        }
    }

    kb.index();
    return kb;
}

void KnowledgeBase::index() {
    const auto ne = source_.entities.size();
    const auto nc = source_.concepts.size();
    const auto nr = source_.relations.size();

    for (EntityIndex e = 0; e < ne; ++e) {
        entity_names_[source_.entities[e].name].push_back(e);
        for (const auto& alias : source_.entities[e].aliases) entity_aliases_[alias].push_back(e);
    }
    for (ConceptIndex c = 0; c < nc; ++c) concept_names_[source_.concepts[c].name].push_back(c);
    for (RelationIndex r = 0; r < nr; ++r) relation_names_[source_.relations[r].name].push_back(r);

    std::vector<std::vector<ConceptIndex>> parents(nc);
    for (const auto& t : subclass_of_) parents[t.child].push_back(t.parent);
    ancestors_.assign(nc, {});
    for (ConceptIndex c = 0; c < nc; ++c) {
        std::vector<ConceptIndex> frontier{c};
        std::vector<bool> seen(nc, false);
        seen[c] = true;
        while (!frontier.empty()) {
            auto x = frontier.back();
            frontier.pop_back();
            ancestors_[c].push_back(x);
            for (auto p : parents[x])
                if (!seen[p]) {
                    seen[p] = true;
                    frontier.push_back(p);
                }
        }
        std::sort(ancestors_[c].begin(), ancestors_[c].end());
    }

    direct_instances_.assign(nc, {});
    transitive_instances_.assign(nc, {});
    concepts_of_.assign(ne, {});
    popularity_.assign(ne, 0);
    for (const auto& t : instance_of_) {
        direct_instances_[t.concept_idx].push_back(t.entity);
        concepts_of_[t.entity].push_back(t.concept_idx);
        for (auto a : ancestors_[t.concept_idx]) transitive_instances_[a].push_back(t.entity);
        ++popularity_[t.entity];
    }
    for (auto& v : direct_instances_) sort_unique(v);
    for (auto& v : transitive_instances_) sort_unique(v);
    for (auto& v : concepts_of_) sort_unique(v);

    forward_.assign(nr, {});
    backward_.assign(nr, {});
    out_edges_.assign(ne, {});
    in_edges_.assign(ne, {});
    literal_triples_.assign(nr, {});
    for (TripleIndex i = 0; i < relational_.size(); ++i) {
        const auto& t = relational_[i];
        forward_[t.relation].push_back({t.head, i});
        out_edges_[t.head].push_back(i);
        ++popularity_[t.head];
        if (t.has_entity_tail()) {
            backward_[t.relation].push_back({t.tail_entity(), i});
            in_edges_[t.tail_entity()].push_back(i);
            ++popularity_[t.tail_entity()];
        } else {
            literal_triples_[t.relation].push_back(i);
        }
    }
    for (auto& v : forward_) std::sort(v.begin(), v.end());
    for (auto& v : backward_) std::sort(v.begin(), v.end());
}

std::optional<EntityIndex> KnowledgeBase::entity_by_id(std::string_view id) const {
    auto it = entity_ids_.find(std::string(id));
    if (it == entity_ids_.end()) return std::nullopt;
    return it->second;
}

std::optional<ConceptIndex> KnowledgeBase::concept_by_id(std::string_view id) const {
    auto it = concept_ids_.find(std::string(id));
    if (it == concept_ids_.end()) return std::nullopt;
    return it->second;
}

std::optional<RelationIndex> KnowledgeBase::relation_by_id(std::string_view id) const {
    auto it = relation_ids_.find(std::string(id));
    if (it == relation_ids_.end()) return std::nullopt;
    return it->second;
}

std::vector<EntityIndex> KnowledgeBase::resolve_entity(std::string_view name) const {
    const std::string key(name);
    if (auto it = entity_names_.find(key); it != entity_names_.end()) return it->second;
    if (auto it = entity_aliases_.find(key); it != entity_aliases_.end()) return it->second;
    return {};
}

std::span<const ConceptIndex> KnowledgeBase::resolve_concept(std::string_view name) const {
    auto it = concept_names_.find(std::string(name));
    if (it == concept_names_.end()) return {};
    return it->second;
}

std::span<const RelationIndex> KnowledgeBase::resolve_relation(std::string_view name) const {
    auto it = relation_names_.find(std::string(name));
    if (it == relation_names_.end()) return {};
    return it->second;
}

HopResult KnowledgeBase::neighbors(std::span<const EntityIndex> sources, RelationIndex r,
                                   Direction direction) const {
    HopResult out;
    const auto& edges = direction == Direction::Forward ? forward_.at(r) : backward_.at(r);
    for (auto s : sources) {
        auto lo = std::lower_bound(edges.begin(), edges.end(), Edge{s, 0});
        for (auto it = lo; it != edges.end() && it->key == s; ++it) {
            const auto& t = relational_[it->triple];
            if (direction == Direction::Backward) {
                out.entities.push_back(t.head);
            } else if (t.has_entity_tail()) {
                out.entities.push_back(t.tail_entity());
            } else {
                out.values.push_back(t.tail_literal());
            }
        }
    }
    sort_unique(out.entities);
    sort_unique(out.values);
    return out;
}

std::span<const EntityIndex> KnowledgeBase::concept_instances(ConceptIndex c, bool transitive) const {
    return transitive ? transitive_instances_.at(c) : direct_instances_.at(c);
}

KbStats KnowledgeBase::stats() const {
    KbStats s;
    s.concepts = source_.concepts.size();
    s.relations = source_.relations.size();
    s.relations_with_reserved =
        s.relations + (instance_of_.empty() ? 0 : 1) + (subclass_of_.empty() ? 0 : 1);
    s.entities = source_.entities.size();
    s.instance_of = instance_of_.size();
    s.subclass_of = subclass_of_.size();
    s.relational = relational_.size();
    return s;
}

KnowledgeBase load_kb(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open KB file '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Parse, path.string() + ": " + e.what());
    }
    return KnowledgeBase::build(KbSource::from_json(doc));
}

void write_kb(const KnowledgeBase& kb, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write KB file '" + path.string() + "'");
    out << kb.source().to_json().dump(1) << '\n';
    if (!out) throw Error(ErrorKind::Io, "write failed for '" + path.string() + "'");
}

std::size_t popularity(const KnowledgeBase& kb, std::string_view entity_id) {
    auto e = kb.entity_by_id(entity_id);
    if (!e) throw Error(ErrorKind::UnknownEntity, "unknown entity '" + std::string(entity_id) + "'");
    return kb.popularity(*e);
}

HopResult neighbors(const KnowledgeBase& kb, std::span<const std::string> entity_ids,
                    std::string_view relation_id, Direction direction) {
    if (relation_id == kInstanceOf || relation_id == kSubclassOf)
        throw Error(ErrorKind::ReservedRelation,
                    "'" + std::string(relation_id) + "' cannot be traversed as a relational hop");
    auto r = kb.relation_by_id(relation_id);
    if (!r) throw Error(ErrorKind::UnknownRelation, "unknown relation '" + std::string(relation_id) + "'");
    std::vector<EntityIndex> sources;
    for (const auto& id : entity_ids) {
        auto e = kb.entity_by_id(id);
        if (!e) throw Error(ErrorKind::UnknownEntity, "unknown entity '" + id + "'");
        sources.push_back(*e);
    }
    return kb.neighbors(sources, *r, direction);
}

std::vector<std::string> concept_instances(const KnowledgeBase& kb, std::string_view concept_id,
                                           bool transitive) {
    auto c = kb.concept_by_id(concept_id);
    if (!c) throw Error(ErrorKind::UnknownConcept, "unknown concept '" + std::string(concept_id) + "'");
    std::vector<std::string> out;
    for (auto e : kb.concept_instances(*c, transitive)) out.push_back(kb.entity(e).id);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace kbplugin
