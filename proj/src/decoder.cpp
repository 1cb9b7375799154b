#include "kbplugin/decoder.hpp"

#include <algorithm>
#include <set>

#include "kbplugin/error.hpp"

namespace kbplugin {

namespace {

bool topic_used(const Program& p, const std::string& name) {
    return std::any_of(p.calls().begin(), p.calls().end(), [&](const FunctionCall& c) {
        return c.function == Function::Find && c.arg == name;
    });
}

// Whether appending `chunk` keeps the program executable with a non-empty
// result on the branch it writes.
bool admissible(const KnowledgeBase& kb, const ExecState& state, const CandidateChunk& chunk,
                const ExecOptions& exec) {
    ExecState trial = state;
    try {
        for (const auto& call : chunk.calls) apply_call(kb, trial, call, exec);
    } catch (const Error&) {
        return false;
    }
    return !trial.stack.empty() && !trial.top().empty();
}

std::vector<CandidateChunk> seeds(const KnowledgeBase& kb, const TopicSpec& topics) {
    std::vector<CandidateChunk> out;
    if (!topics.entities.empty()) {
        for (const auto& name : topics.entities)
            if (!kb.resolve_entity(name).empty()) out.push_back({{make_call(Function::Find, name)}});
        if (out.empty())
            throw Error(ErrorKind::Seed, "none of the topic entities resolves in the KB");
        return out;
    }
    if (topics.concepts.empty())
        throw Error(ErrorKind::Seed, "no topic entity and no topic concept given");
    for (const auto& name : topics.concepts)
        if (!kb.resolve_concept(name).empty())
            out.push_back({{make_call(Function::FindAll), make_call(Function::FilterConcept, name)}});
    return out;
}

void propose_from_entities(const KnowledgeBase& kb, const EntitySet& top, const ExecOptions& exec,
                           std::vector<CandidateChunk>& out) {
    std::set<ConceptIndex> concepts;
    std::set<RelationIndex> forward, backward, ordered;
    for (auto e : top) {
        for (auto c : kb.concepts_of(e)) {
            if (exec.transitive_concepts) {
                auto anc = kb.ancestors(c);
                concepts.insert(anc.begin(), anc.end());
            } else {
                concepts.insert(c);
            }
        }
        for (auto ti : kb.out_edges(e)) {
            const auto& t = kb.relational()[ti];
            forward.insert(t.relation);
            if (!t.has_entity_tail() && t.tail_literal().is_orderable()) ordered.insert(t.relation);
        }
        for (auto ti : kb.in_edges(e)) backward.insert(kb.relational()[ti].relation);
    }
    for (auto c : concepts) out.push_back({{make_call(Function::FilterConcept, kb.concept_item(c).name)}});
    for (auto r : forward) out.push_back({{make_call(Function::Relate, kb.relation_item(r).name)}});
    for (auto r : backward) out.push_back({{make_call(Function::ReverseRelate, kb.relation_item(r).name)}});
    for (auto r : ordered) {
        out.push_back({{make_call(Function::Argmax, kb.relation_item(r).name)}});
        out.push_back({{make_call(Function::Argmin, kb.relation_item(r).name)}});
    }
    out.push_back({{make_call(Function::Count)}});
}

void propose_comparisons(const KnowledgeBase& kb, const LiteralValue& pivot,
                         std::vector<CandidateChunk>& out) {
    for (RelationIndex r = 0; r < kb.relations().size(); ++r) {
        auto lits = kb.literal_triples(r);
        bool comparable = std::any_of(lits.begin(), lits.end(), [&](TripleIndex ti) {
            return kb.relational()[ti].tail_literal().compare(pivot).has_value();
        });
        if (!comparable) continue;
        for (auto f : {Function::LT, Function::LE, Function::GT, Function::GE})
            out.push_back({{make_call(f, kb.relation_item(r).name)}});
    }
}

} // namespace

std::string CandidateChunk::text() const {
    if (calls.empty()) return std::string(kEndChunk);
    std::string out;
    for (std::size_t i = 0; i < calls.size(); ++i) {
        if (i) out += ' ';
        out += calls[i].text();
    }
    return out;
}

bool canonical_less(const CandidateChunk& a, const CandidateChunk& b) {
    auto key = [](const CandidateChunk& c) {
        std::vector<std::pair<std::string_view, std::string_view>> k;
        if (c.is_end()) k.emplace_back(kEndChunk, std::string_view{});
        for (const auto& call : c.calls) k.emplace_back(function_name(call.function), call.arg);
        return k;
    };
    return key(a) < key(b);
}

std::vector<CandidateChunk> enumerate_candidates(const KnowledgeBase& kb, const Hypothesis& hyp,
                                                 const TopicSpec& topics, const ExecOptions& exec) {
    if (hyp.finished) throw Error(ErrorKind::Argument, "cannot extend a finished hypothesis");
    const auto& program = hyp.program;
    const auto& state = hyp.state;

    std::vector<CandidateChunk> proposals;
    bool allow_end = false;
    if (program.empty()) {
        proposals = seeds(kb, topics);
    } else {
        const auto& top = state.top();
        allow_end = state.branches() == 1;
        // Count is terminal: only END may follow it.
        if (!top.is_count() && program.size() < kMaxProgramLength) {
            if (top.is_entities() && !top.empty()) propose_from_entities(kb, top.entities(), exec, proposals);
            if (top.is_values() && top.values().size() == 1 && top.values().front().is_orderable())
                propose_comparisons(kb, top.values().front(), proposals);
            for (const auto& name : topics.entities)
                if (!topic_used(program, name) && !kb.resolve_entity(name).empty())
                    proposals.push_back({{make_call(Function::Find, name)}});
            if (state.branches() >= 2 && state.stack[state.branches() - 2].is_entities() &&
                top.is_entities()) {
                proposals.push_back({{make_call(Function::And)}});
                proposals.push_back({{make_call(Function::Or)}});
            }
        }
    }

    std::vector<CandidateChunk> out;
    for (auto& chunk : proposals)
        if (admissible(kb, state, chunk, exec)) out.push_back(std::move(chunk));
    if (program.empty() && out.empty())
        throw Error(ErrorKind::Seed, "no topic seed yields a non-empty denotation");
    if (allow_end) out.push_back(CandidateChunk::end());
    std::sort(out.begin(), out.end(), canonical_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<SearchResult> beam_search(const KnowledgeBase& kb, std::string_view question,
                                      const TopicSpec& topics, Scorer& scorer,
                                      const BeamOptions& options) {
    if (options.beam < 1) throw Error(ErrorKind::Argument, "beam width must be at least 1");
    if (options.max_steps < 1) throw Error(ErrorKind::Argument, "max_steps must be at least 1");

    std::vector<Hypothesis> live{Hypothesis{}};
    std::vector<Hypothesis> finished;

    struct Expansion {
        std::size_t hyp;
        std::size_t candidate;
        double score;
        std::string text;  // canonical program text after the expansion
        bool end;
    };

    for (std::size_t step = 0; step <= options.max_steps && !live.empty(); ++step) {
        if (options.deadline && std::chrono::steady_clock::now() > *options.deadline)
            throw Error(ErrorKind::Timeout, "search deadline exceeded at step " + std::to_string(step));

        const bool end_only = step == options.max_steps;
        std::vector<std::vector<CandidateChunk>> candidates(live.size());
        std::vector<ScoreRequest> requests;
        std::vector<std::size_t> request_hyp;
        for (std::size_t h = 0; h < live.size(); ++h) {
            auto cands = enumerate_candidates(kb, live[h], topics, options.exec);
            if (end_only)
                std::erase_if(cands, [](const CandidateChunk& c) { return !c.is_end(); });
            if (cands.empty()) continue;
            ScoreRequest req{std::string(question), live[h].program.text(), {}};
            for (const auto& c : cands) req.candidates.push_back(c.text());
            requests.push_back(std::move(req));
            request_hyp.push_back(h);
            candidates[h] = std::move(cands);
        }
        if (requests.empty()) break;

        auto scores = scorer.score(requests);
        if (scores.size() != requests.size())
            throw Error(ErrorKind::LengthMismatch, "scorer returned " + std::to_string(scores.size()) +
                                                       " results for " +
                                                       std::to_string(requests.size()) + " requests");

        std::vector<Expansion> expansions;
        for (std::size_t i = 0; i < requests.size(); ++i) {
            const auto h = request_hyp[i];
            const auto& cands = candidates[h];
            if (scores[i].size() != cands.size())
                throw Error(ErrorKind::LengthMismatch,
                            "scorer returned " + std::to_string(scores[i].size()) + " scores for " +
                                std::to_string(cands.size()) + " candidates");
            const auto& prefix = requests[i].prefix;
            for (std::size_t c = 0; c < cands.size(); ++c) {
                const bool end = cands[c].is_end();
                std::string text = end ? prefix : (prefix.empty() ? "" : prefix + " ") + cands[c].text();
                expansions.push_back({h, c, live[h].score + scores[i][c], std::move(text), end});
            }
        }

        const auto keep = std::min(options.beam, expansions.size());
        std::partial_sort(expansions.begin(), expansions.begin() + keep, expansions.end(),
                          [](const Expansion& a, const Expansion& b) {
                              if (a.score != b.score) return a.score > b.score;
                              if (a.text != b.text) return a.text < b.text;
                              return a.end > b.end;
                          });

        std::vector<Hypothesis> next;
        for (std::size_t i = 0; i < keep; ++i) {
            const auto& x = expansions[i];
            const auto& parent = live[x.hyp];
            const auto& chunk = candidates[x.hyp][x.candidate];
            Hypothesis child;
            child.score = x.score;
            if (x.end) {
                child.program = parent.program;
                child.state = parent.state;
                child.finished = true;
                finished.push_back(std::move(child));
                continue;
            }
            child.program = parent.program.extended(chunk.calls);
            child.state = parent.state;
            for (const auto& call : chunk.calls) apply_call(kb, child.state, call, options.exec);
            next.push_back(std::move(child));
        }
        live = std::move(next);
    }

    if (finished.empty())
        throw Error(ErrorKind::NoFinished, "no finished program within " +
                                               std::to_string(options.max_steps) + " steps");

    std::vector<SearchResult> results;
    for (auto& h : finished)
        results.push_back({std::move(h.program), std::move(h.state.stack.front()), h.score});
    std::stable_sort(results.begin(), results.end(), [](const SearchResult& a, const SearchResult& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.program.text() < b.program.text();
    });
    return results;
}

} // namespace kbplugin
