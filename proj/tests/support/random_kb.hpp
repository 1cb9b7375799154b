#pragma once

#include <random>

#include "kbplugin/kb.hpp"

namespace testing {

struct RandomKbShape {
    std::size_t concepts_min = 3, concepts_max = 6;
    std::size_t entities_min = 8, entities_max = 20;
    std::size_t relations_min = 2, relations_max = 4;
    std::size_t triples_min = 10, triples_max = 40;
    bool literal_tails = false;
    bool untyped_entities = false;  // leave some entities without a concept
};

/// Random acyclic KB with unique names. Every entity has a concept unless
/// `untyped_entities` is set.
kbplugin::KbSource random_kb(std::mt19937_64& rng, const RandomKbShape& shape = {});

} // namespace testing
