#include "kbplugin/metrics.hpp"

#include <algorithm>
#include <iterator>
#include <set>

namespace kbplugin {

namespace {

std::set<std::string> answer_set(std::span<const std::string> answers) {
    std::set<std::string> out;
    for (const auto& a : answers) out.insert(normalize_answer(a));
    return out;
}

std::size_t overlap(const std::set<std::string>& a, const std::set<std::string>& b) {
    std::vector<std::string> common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
    return common.size();
}

} // namespace

std::string normalize_answer(std::string_view answer) {
    std::string out;
    bool pending_space = false;
    for (char c : answer) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out += ' ';
        pending_space = false;
        out += c;
    }
    return out;
}

double f1_score(std::span<const std::string> predicted, std::span<const std::string> gold) {
    auto p = answer_set(predicted), g = answer_set(gold);
    if (p.empty() || g.empty()) return 0.0;
    // 2PR/(P+R) with P = hits/|p| and R = hits/|g|, in a form free of rounding drift.
    const auto hits = overlap(p, g);
    return 2.0 * static_cast<double>(hits) / static_cast<double>(p.size() + g.size());
}

double hit_at_1(std::span<const std::string> predicted, std::span<const std::string> gold) {
    return overlap(answer_set(predicted), answer_set(gold)) > 0 ? 1.0 : 0.0;
}

double exact_accuracy(std::span<const std::string> predicted, std::span<const std::string> gold) {
    return answer_set(predicted) == answer_set(gold) ? 1.0 : 0.0;
}

AnswerScores score_answers(std::span<const std::string> predicted, std::span<const std::string> gold) {
    return {f1_score(predicted, gold), hit_at_1(predicted, gold), exact_accuracy(predicted, gold)};
}

} // namespace kbplugin
