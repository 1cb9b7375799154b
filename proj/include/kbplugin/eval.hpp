#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "kbplugin/decoder.hpp"
#include "kbplugin/metrics.hpp"

namespace kbplugin {

struct EvalRecord {
    std::string question;
    std::vector<std::string> topic_entities;
    std::vector<std::string> topic_concepts;
    std::vector<std::string> gold_answers;
    std::optional<std::string> gold_program;
};

/// JSON-lines; gold_answers may be empty only when gold_program is present.
std::vector<EvalRecord> read_eval_dataset(const std::filesystem::path& path);

enum class Metric { F1, Hit1, Accuracy };
std::optional<Metric> metric_from_string(std::string_view name) noexcept;
std::string_view to_string(Metric m) noexcept;

using ScorerFactory = std::function<std::unique_ptr<Scorer>(const EvalRecord&)>;

struct EvalOptions {
    Metric metric = Metric::F1;
    std::size_t parallel = 1;
    BeamOptions beam;
    std::chrono::milliseconds record_timeout{30000};
};

struct RecordResult {
    std::string question;
    std::optional<std::string> program;
    std::vector<std::string> predicted;
    std::vector<std::string> gold;
    AnswerScores scores;
    std::optional<std::string> error;
    double seconds = 0.0;
};

struct EvalReport {
    Metric metric = Metric::F1;
    std::vector<RecordResult> records;
    AnswerScores aggregate;  // arithmetic means over records
    std::size_t failures = 0;
    double seconds = 0.0;

    nlohmann::ordered_json to_json() const;
};

/// Runs induction on every record; failures score 0 and never abort the run.
/// Results keep input order whatever the parallelism.
EvalReport evaluate(const KnowledgeBase& kb, std::span<const EvalRecord> dataset,
                    const ScorerFactory& make_scorer, const EvalOptions& options);

} // namespace kbplugin
