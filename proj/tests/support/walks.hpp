#pragma once

#include <optional>
#include <random>

#include "kbplugin/decoder.hpp"

namespace testing {

struct Walk {
    kbplugin::Program program;
    kbplugin::TopicSpec topics;
    std::vector<kbplugin::Program> prefixes;  // every prefix visited, including the empty one
};

/// Random topic set: one or two entity names, or (1 in 5) one concept name.
kbplugin::TopicSpec random_topics(const kbplugin::KnowledgeBase& kb, std::mt19937_64& rng);

/// Grows a program by picking uniformly among enumerate_candidates until END
/// is drawn or `max_chunks` chunks were added. nullopt on a dead end.
std::optional<Walk> random_walk(const kbplugin::KnowledgeBase& kb, const kbplugin::TopicSpec& topics,
                                std::mt19937_64& rng, std::size_t max_chunks, double end_bias = 0.3);

/// Retries random_walk with fresh topics until a finished program appears.
Walk finished_walk(const kbplugin::KnowledgeBase& kb, std::mt19937_64& rng, std::size_t max_chunks,
                   double end_bias = 0.3);

} // namespace testing
