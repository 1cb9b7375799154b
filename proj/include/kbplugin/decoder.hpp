#pragma once

// Constrained decoding over KoPL programs.
//
// At every step the decoder proposes only chunks that keep the program
// executable with a non-empty result on the branch they touch; a scorer
// ranks the proposals and a beam keeps the best partial programs.

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kbplugin/executor.hpp"
#include "kbplugin/kb.hpp"
#include "kbplugin/program.hpp"
#include "kbplugin/scorer.hpp"

namespace kbplugin {

/// Linked starting points of a question. Concepts are consulted only when
/// there are no topic entities.
struct TopicSpec {
    std::vector<std::string> entities;
    std::vector<std::string> concepts;
};

/// One decoding step: a single call, the atomic FindAll()+FilterConcept(c)
/// seed, or END (no calls).
struct CandidateChunk {
    std::vector<FunctionCall> calls;

    static CandidateChunk end() { return {}; }
    bool is_end() const noexcept { return calls.empty(); }
    std::string text() const;

    friend bool operator==(const CandidateChunk&, const CandidateChunk&) = default;
};

/// Canonical order: function name, then argument, chunk by chunk.
bool canonical_less(const CandidateChunk& a, const CandidateChunk& b);

struct Hypothesis {
    Program program;
    ExecState state;  // == execute_prefix(kb, program)
    double score = 0.0;
    bool finished = false;
};

std::vector<CandidateChunk> enumerate_candidates(const KnowledgeBase& kb, const Hypothesis& hyp,
                                                 const TopicSpec& topics,
                                                 const ExecOptions& exec = {});

struct BeamOptions {
    std::size_t beam = 5;
    /// Chunk-appending steps; a final END-only round follows the last one.
    std::size_t max_steps = 20;
    ExecOptions exec;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct SearchResult {
    Program program;
    Denotation denotation;
    double score = 0.0;
};

/// Finished hypotheses, best first (ties by canonical program text).
/// Throws Error(Seed | NoFinished | Timeout) and whatever the scorer raises.
std::vector<SearchResult> beam_search(const KnowledgeBase& kb, std::string_view question,
                                      const TopicSpec& topics, Scorer& scorer,
                                      const BeamOptions& options = {});

} // namespace kbplugin
