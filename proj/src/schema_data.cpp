#include "kbplugin/schema_data.hpp"

#include <algorithm>
#include <fstream>
#include <optional>

#include "kbplugin/error.hpp"

namespace kbplugin {

namespace {

std::string item_key(SchemaKind kind, const std::string& id) {
    return std::string(to_string(kind)) + ":" + id;
}

std::string tail_sort_key(const KnowledgeBase& kb, const RelationalTriple& t) {
    // Entity tails order before literal tails when the heads tie.
    return t.has_entity_tail() ? "0" + kb.entity(t.tail_entity()).id : "1" + t.tail_literal().render();
}

std::optional<ConceptIndex> try_pick(const KnowledgeBase& kb, EntityIndex e) {
    auto concepts = kb.concepts_of(e);
    if (concepts.empty()) return std::nullopt;
    auto best = *std::min_element(concepts.begin(), concepts.end(), [&](ConceptIndex a, ConceptIndex b) {
        auto na = kb.concept_instances(a, true).size(), nb = kb.concept_instances(b, true).size();
        if (na != nb) return na < nb;
        return kb.concept_item(a).id < kb.concept_item(b).id;
    });
    return best;
}

} // namespace

std::string_view to_string(Template t) noexcept {
    switch (t) {
    case Template::InstFwd: return "inst_fwd";
    case Template::InstBwd: return "inst_bwd";
    case Template::SubFwd: return "sub_fwd";
    case Template::SubBwd: return "sub_bwd";
    case Template::RelFwd: return "rel_fwd";
    case Template::RelBwd: return "rel_bwd";
    case Template::RelWhat: return "rel_what";
    }
    return "?";
}

std::vector<InstanceTriple> sample_instance_triples(const KnowledgeBase& kb, ConceptIndex c, std::size_t k) {
    std::vector<InstanceTriple> out;
    for (const auto& t : kb.instance_of())
        if (t.concept_idx == c) out.push_back(t);
    std::sort(out.begin(), out.end(), [&](const InstanceTriple& a, const InstanceTriple& b) {
        auto pa = kb.popularity(a.entity), pb = kb.popularity(b.entity);
        if (pa != pb) return pa > pb;
        return kb.entity(a.entity).id < kb.entity(b.entity).id;
    });
    if (out.size() > k) out.resize(k);
    return out;
}

std::vector<InstanceTriple> sample_instance_triples(const KnowledgeBase& kb, std::string_view concept_id,
                                                    std::size_t k) {
    auto c = kb.concept_by_id(concept_id);
    if (!c) throw Error(ErrorKind::UnknownConcept, "unknown concept '" + std::string(concept_id) + "'");
    return sample_instance_triples(kb, *c, k);
}

std::vector<TripleIndex> sample_relational_triples(const KnowledgeBase& kb, RelationIndex r, std::size_t k) {
    std::vector<TripleIndex> out;
    const auto triples = kb.relational();
    for (TripleIndex i = 0; i < triples.size(); ++i)
        if (triples[i].relation == r) out.push_back(i);
    auto weight = [&](TripleIndex i) {
        const auto& t = triples[i];
        auto w = kb.popularity(t.head);
        if (t.has_entity_tail()) w = std::min(w, kb.popularity(t.tail_entity()));
        return w;
    };
    std::sort(out.begin(), out.end(), [&](TripleIndex a, TripleIndex b) {
        auto wa = weight(a), wb = weight(b);
        if (wa != wb) return wa > wb;
        const auto& ha = kb.entity(triples[a].head).id;
        const auto& hb = kb.entity(triples[b].head).id;
        if (ha != hb) return ha < hb;
        return tail_sort_key(kb, triples[a]) < tail_sort_key(kb, triples[b]);
    });
    if (out.size() > k) out.resize(k);
    return out;
}

std::vector<TripleIndex> sample_relational_triples(const KnowledgeBase& kb, std::string_view relation_id,
                                                   std::size_t k) {
    if (relation_id == kInstanceOf || relation_id == kSubclassOf)
        throw Error(ErrorKind::ReservedRelation,
                    "'" + std::string(relation_id) + "' triples are sampled per concept, not per relation");
    auto r = kb.relation_by_id(relation_id);
    if (!r) throw Error(ErrorKind::UnknownRelation, "unknown relation '" + std::string(relation_id) + "'");
    return sample_relational_triples(kb, *r, k);
}

ConceptIndex pick_concept(const KnowledgeBase& kb, EntityIndex e) {
    auto c = try_pick(kb, e);
    if (!c) throw Error(ErrorKind::NoConcept, "entity '" + kb.entity(e).id + "' is not an instance of any concept");
    return *c;
}

PairBuild build_pairs(const KnowledgeBase& kb, const SamplingConfig& cfg) {
    if (cfg.k < 1) throw Error(ErrorKind::Argument, "sampling number K must be at least 1");
    PairBuild out;
    auto emit = [&](std::string query, std::string answer, SchemaKind kind, const std::string& id, Template t) {
        out.pairs.push_back({std::move(query), std::move(answer), kind, id, t});
    };

    auto by_id = [](auto items) {
        std::vector<std::uint32_t> order(items.size());
        for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return items[a].id < items[b].id; });
        return order;
    };

    for (auto c : by_id(kb.concepts())) {
        const auto& item = kb.concept_item(c);
        for (const auto& t : sample_instance_triples(kb, c, cfg.k)) {
            const auto& entity = kb.entity(t.entity).name;
            emit(entity + " || instance of", item.name, SchemaKind::Concept, item.id, Template::InstFwd);
            emit(item.name + " || contains instance", entity, SchemaKind::Concept, item.id,
                 Template::InstBwd);
        }
    }

    std::vector<SubclassTriple> subclass(kb.subclass_of().begin(), kb.subclass_of().end());
    std::sort(subclass.begin(), subclass.end(), [&](const SubclassTriple& a, const SubclassTriple& b) {
        const auto &ca = kb.concept_item(a.child).id, &cb = kb.concept_item(b.child).id;
        if (ca != cb) return ca < cb;
        return kb.concept_item(a.parent).id < kb.concept_item(b.parent).id;
    });
    for (const auto& t : subclass) {
        const auto& child = kb.concept_item(t.child);
        const auto& parent = kb.concept_item(t.parent);
        emit(child.name + " || subclass of", parent.name, SchemaKind::Concept, child.id, Template::SubFwd);
        emit(parent.name + " || contains subclass", child.name, SchemaKind::Concept, parent.id,
             Template::SubBwd);
    }

    const auto triples = kb.relational();
    for (auto r : by_id(kb.relations())) {
        const auto& relation = kb.relation_item(r);
        std::size_t taken = 0, skipped = 0;
        for (auto ti : sample_relational_triples(kb, r, triples.size())) {
            if (taken == cfg.k) break;
            const auto& t = triples[ti];
            auto head_concept = try_pick(kb, t.head);
            std::optional<ConceptIndex> tail_concept;
            if (t.has_entity_tail()) tail_concept = try_pick(kb, t.tail_entity());
            if (!head_concept || (t.has_entity_tail() && !tail_concept)) {
                ++skipped;
                continue;
            }
            ++taken;
            const auto& ei = kb.entity(t.head).name;
            const auto& ci = kb.concept_item(*head_concept).name;
            if (!t.has_entity_tail()) {
                const auto& lit = t.tail_literal();
                emit(ei + " | " + ci + " || " + relation.name + " | forward",
                     std::string(to_string(lit.kind())) + " | " + lit.render(), SchemaKind::Relation,
                     relation.id, Template::RelFwd);
                continue;
            }
            const auto& ej = kb.entity(t.tail_entity()).name;
            const auto& cj = kb.concept_item(*tail_concept).name;
            emit(ei + " | " + ci + " || " + relation.name + " | forward", cj + " | " + ej, SchemaKind::Relation,
                 relation.id, Template::RelFwd);
            emit(ej + " | " + cj + " || " + relation.name + " | backward", ci + " | " + ei,
                 SchemaKind::Relation, relation.id, Template::RelBwd);
            emit(ei + " | " + ci + " || what relation || " + cj + " | " + ej, relation.name,
                 SchemaKind::Relation, relation.id, Template::RelWhat);
        }
        if (skipped)
            out.warnings.push_back("relation '" + relation.id + "': " + std::to_string(skipped) +
                                   " triple(s) skipped, endpoint without a concept");
    }
    return out;
}

nlohmann::ordered_json CorpusSummary::to_json() const {
    nlohmann::ordered_json per_t = nlohmann::ordered_json::object();
    for (auto t : kAllTemplates) {
        auto it = per_template.find(t);
        per_t[std::string(to_string(t))] = it == per_template.end() ? 0 : it->second;
    }
    nlohmann::ordered_json items = nlohmann::ordered_json::object();
    for (const auto& [k, v] : per_item) items[k] = v;
    return {{"pairs", pairs}, {"per_template", per_t}, {"per_item", items}, {"zero_coverage", zero_coverage}};
}

CorpusSummary emit_corpus(std::span<const QAPair> pairs, const std::filesystem::path& out,
                          const KnowledgeBase* kb) {
    std::ofstream file(out, std::ios::binary | std::ios::trunc);
    if (!file) throw Error(ErrorKind::Io, "cannot write corpus '" + out.string() + "'");
    CorpusSummary summary;
    if (kb) {
        for (const auto& c : kb->concepts()) summary.per_item[item_key(SchemaKind::Concept, c.id)] = 0;
        for (const auto& r : kb->relations()) summary.per_item[item_key(SchemaKind::Relation, r.id)] = 0;
    }
    for (const auto& p : pairs) {
        nlohmann::ordered_json j{{"query", p.query},
                                 {"answer", p.answer},
                                 {"item_id", p.item_id},
                                 {"template", to_string(p.template_id)}};
        file << j.dump() << '\n';
        ++summary.pairs;
        ++summary.per_template[p.template_id];
        ++summary.per_item[item_key(p.item_kind, p.item_id)];
    }
    if (!file) throw Error(ErrorKind::Io, "write failed for '" + out.string() + "'");
    for (const auto& [k, v] : summary.per_item)
        if (v == 0) summary.zero_coverage.push_back(k);
    return summary;
}

} // namespace kbplugin
