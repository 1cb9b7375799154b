#include "kbplugin/executor.hpp"

#include <algorithm>
#include <iterator>
#include <map>
#include <numeric>

#include "kbplugin/error.hpp"

namespace kbplugin {

namespace {

template <class T>
void sort_unique(std::vector<T>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

[[noreturn]] void type_error(const FunctionCall& call, const Denotation& got, std::string_view want) {
    throw Error(ErrorKind::Type, call.text() + " expects " + std::string(want) + ", got " +
                                     std::string(got.type_name()));
}

Denotation& require_top(ExecState& state, const FunctionCall& call) {
    if (state.stack.empty())
        throw Error(ErrorKind::StackUnderflow, call.text() + " needs a branch but the stack is empty");
    return state.stack.back();
}

const EntitySet& require_entities(ExecState& state, const FunctionCall& call) {
    const auto& top = require_top(state, call);
    if (!top.is_entities()) type_error(call, top, "an entity set");
    return top.entities();
}

std::span<const RelationIndex> relation_ids(const KnowledgeBase& kb, const FunctionCall& call) {
    auto ids = kb.resolve_relation(call.arg);
    if (ids.empty()) throw Error(ErrorKind::NameResolution, "unknown relation name '" + call.arg + "'");
    return ids;
}

std::span<const ConceptIndex> concept_ids(const KnowledgeBase& kb, const FunctionCall& call) {
    auto ids = kb.resolve_concept(call.arg);
    if (ids.empty()) throw Error(ErrorKind::NameResolution, "unknown concept name '" + call.arg + "'");
    return ids;
}

Denotation hop(const KnowledgeBase& kb, const EntitySet& sources, std::span<const RelationIndex> rels,
               Direction direction) {
    HopResult all;
    for (auto r : rels) {
        auto h = kb.neighbors(sources, r, direction);
        all.entities.insert(all.entities.end(), h.entities.begin(), h.entities.end());
        all.values.insert(all.values.end(), h.values.begin(), h.values.end());
    }
    sort_unique(all.entities);
    sort_unique(all.values);
    // Entity targets dominate; a purely literal result becomes a value set.
    if (!all.entities.empty() || all.values.empty()) return Denotation(std::move(all.entities));
    return Denotation(std::move(all.values));
}

bool contains(std::span<const RelationIndex> rels, RelationIndex r) {
    return std::find(rels.begin(), rels.end(), r) != rels.end();
}

EntitySet superlative(const KnowledgeBase& kb, const EntitySet& input,
                      std::span<const RelationIndex> rels, bool maximize) {
    struct Candidate {
        EntityIndex entity;
        const LiteralValue* value;
    };
    std::vector<Candidate> candidates;
    for (auto e : input)
        for (auto ti : kb.out_edges(e)) {
            const auto& t = kb.relational()[ti];
            if (t.has_entity_tail() || !contains(rels, t.relation)) continue;
            if (!t.tail_literal().is_orderable()) continue;
            candidates.push_back({e, &t.tail_literal()});
        }
    if (candidates.empty()) return {};

    // Values outside the dominant (kind, unit) class are skipped: the class
    // covering the most entities wins, ties going to the smaller key.
    std::map<std::pair<LiteralKind, std::string>, std::vector<EntityIndex>> classes;
    for (const auto& c : candidates)
        classes[{c.value->kind(), c.value->unit()}].push_back(c.entity);
    const std::pair<LiteralKind, std::string>* best = nullptr;
    std::size_t best_size = 0;
    for (auto& [key, ents] : classes) {
        sort_unique(ents);
        if (ents.size() > best_size) {
            best = &key;
            best_size = ents.size();
        }
    }

    const LiteralValue* extremum = nullptr;
    for (const auto& c : candidates) {
        if (c.value->kind() != best->first || c.value->unit() != best->second) continue;
        if (!extremum) {
            extremum = c.value;
            continue;
        }
        auto ord = *c.value->compare(*extremum);
        if (maximize ? ord > 0 : ord < 0) extremum = c.value;
    }
    EntitySet out;
    for (const auto& c : candidates) {
        auto ord = c.value->compare(*extremum);
        if (ord && *ord == 0) out.push_back(c.entity);
    }
    sort_unique(out);
    return out;
}

bool holds(Function f, std::partial_ordering ord) {
    switch (f) {
    case Function::LT: return ord < 0;
    case Function::LE: return ord <= 0;
    case Function::GT: return ord > 0;
    case Function::GE: return ord >= 0;
    default: return false;
    }
}

} // namespace

bool Denotation::empty() const noexcept {
    if (const auto* e = std::get_if<EntitySet>(&v_)) return e->empty();
    if (const auto* v = std::get_if<ValueSet>(&v_)) return v->empty();
    return false;
}

std::string_view Denotation::type_name() const noexcept {
    if (is_entities()) return "entity set";
    if (is_values()) return "value set";
    return "count";
}

void apply_call(const KnowledgeBase& kb, ExecState& state, const FunctionCall& call,
                const ExecOptions& options) {
    switch (call.function) {
    case Function::Find: {
        auto found = kb.resolve_entity(call.arg);
        if (found.empty()) throw Error(ErrorKind::NameResolution, "unknown entity name '" + call.arg + "'");
        state.stack.emplace_back(std::move(found));
        return;
    }
    case Function::FindAll: {
        EntitySet all(kb.entities().size());
        std::iota(all.begin(), all.end(), EntityIndex{0});
        state.stack.emplace_back(std::move(all));
        return;
    }
    case Function::Relate:
    case Function::ReverseRelate: {
        const auto& top = require_entities(state, call);
        auto rels = relation_ids(kb, call);
        auto result = hop(kb, top, rels,
                          call.function == Function::Relate ? Direction::Forward : Direction::Backward);
        state.stack.back() = std::move(result);
        return;
    }
    case Function::FilterConcept: {
        const auto& top = require_entities(state, call);
        EntitySet members;
        for (auto c : concept_ids(kb, call)) {
            auto inst = kb.concept_instances(c, options.transitive_concepts);
            members.insert(members.end(), inst.begin(), inst.end());
        }
        sort_unique(members);
        EntitySet out;
        std::set_intersection(top.begin(), top.end(), members.begin(), members.end(),
                              std::back_inserter(out));
        state.stack.back() = std::move(out);
        return;
    }
    case Function::And:
    case Function::Or: {
        if (state.stack.size() < 2)
            throw Error(ErrorKind::StackUnderflow, call.text() + " needs two branches, have " +
                                                       std::to_string(state.stack.size()));
        const auto& b = state.stack[state.stack.size() - 1];
        const auto& a = state.stack[state.stack.size() - 2];
        if (!a.is_entities()) type_error(call, a, "an entity set");
        if (!b.is_entities()) type_error(call, b, "an entity set");
        EntitySet out;
        if (call.function == Function::And)
            std::set_intersection(a.entities().begin(), a.entities().end(), b.entities().begin(),
                                  b.entities().end(), std::back_inserter(out));
        else
            std::set_union(a.entities().begin(), a.entities().end(), b.entities().begin(),
                           b.entities().end(), std::back_inserter(out));
        state.stack.pop_back();
        state.stack.back() = std::move(out);
        return;
    }
    case Function::Argmax:
    case Function::Argmin: {
        const auto& top = require_entities(state, call);
        auto rels = relation_ids(kb, call);
        auto out = superlative(kb, top, rels, call.function == Function::Argmax);
        state.stack.back() = std::move(out);
        return;
    }
    case Function::LT:
    case Function::LE:
    case Function::GT:
    case Function::GE: {
        auto& top = require_top(state, call);
        if (!top.is_values()) type_error(call, top, "a single value");
        if (top.values().size() != 1)
            throw Error(ErrorKind::NonSingletonValue,
                        call.text() + " expects exactly one value, got " +
                            std::to_string(top.values().size()));
        const auto pivot = top.values().front();
        if (!pivot.is_orderable())
            throw Error(ErrorKind::Type, call.text() + " cannot compare a " +
                                             std::string(to_string(pivot.kind())) + " value");
        auto rels = relation_ids(kb, call);
        EntitySet out;
        for (auto r : rels)
            for (auto ti : kb.literal_triples(r)) {
                const auto& t = kb.relational()[ti];
                auto ord = t.tail_literal().compare(pivot);
                if (ord && holds(call.function, *ord)) out.push_back(t.head);
            }
        sort_unique(out);
        state.stack.back() = std::move(out);
        return;
    }
    case Function::Count: {
        const auto& top = require_entities(state, call);
        auto n = top.size();
        state.stack.back() = CountValue{n};
        return;
    }
    }
}

ExecState execute_prefix(const KnowledgeBase& kb, const Program& p, const ExecOptions& options) {
    ExecState state;
    for (const auto& call : p.calls()) apply_call(kb, state, call, options);
    return state;
}

Denotation execute(const KnowledgeBase& kb, const Program& p, const ExecOptions& options) {
    auto state = execute_prefix(kb, p, options);
    if (state.stack.size() != 1)
        throw Error(ErrorKind::Structure, "program leaves " + std::to_string(state.stack.size()) +
                                              " branches; expected exactly one");
    return std::move(state.stack.front());
}

std::vector<std::string> answer_strings(const KnowledgeBase& kb, const Denotation& d) {
    std::vector<std::string> out;
    if (d.is_entities())
        for (auto e : d.entities()) out.push_back(kb.entity(e).name);
    else if (d.is_values())
        for (const auto& v : d.values()) out.push_back(v.render());
    else
        out.push_back(std::to_string(d.count()));
    return out;
}

nlohmann::ordered_json denotation_to_json(const KnowledgeBase& kb, const Denotation& d) {
    nlohmann::ordered_json j;
    if (d.is_entities()) {
        auto arr = nlohmann::ordered_json::array();
        for (auto e : d.entities()) arr.push_back({{"id", kb.entity(e).id}, {"name", kb.entity(e).name}});
        j["entities"] = std::move(arr);
    } else if (d.is_values()) {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& v : d.values()) arr.push_back(v.render());
        j["values"] = std::move(arr);
    } else {
        j["count"] = d.count();
    }
    return j;
}

} // namespace kbplugin
