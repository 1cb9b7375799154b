#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kbplugin {

/// Trims and collapses internal whitespace runs to one space; case is kept.
std::string normalize_answer(std::string_view answer);

struct AnswerScores {
    double f1 = 0.0;
    double hit1 = 0.0;
    double accuracy = 0.0;
};

// All three compare normalized answer sets.
double f1_score(std::span<const std::string> predicted, std::span<const std::string> gold);
double hit_at_1(std::span<const std::string> predicted, std::span<const std::string> gold);
double exact_accuracy(std::span<const std::string> predicted, std::span<const std::string> gold);
AnswerScores score_answers(std::span<const std::string> predicted, std::span<const std::string> gold);

} // namespace kbplugin
