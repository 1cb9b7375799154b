#pragma once

#include <chrono>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "kbplugin/program.hpp"

namespace kbplugin {

inline constexpr std::string_view kEndChunk = "END";
inline constexpr double kDefaultScoreFloor = -100.0;

/// One wire request: score every candidate chunk as a continuation of
/// `prefix` (canonical program text, possibly empty) for `question`.
struct ScoreRequest {
    std::string question;
    std::string prefix;
    std::vector<std::string> candidates;
};

/// Assigns log-probabilities to candidate chunks. Implementations return one
/// vector per request, positionally matching its candidates.
class Scorer {
public:
    virtual ~Scorer() = default;
    virtual std::vector<std::vector<double>> score(std::span<const ScoreRequest> batch) = 0;
};

/// Test double: 0 for the gold program's next chunk (END once the prefix is
/// the whole gold program), `floor` for everything else.
class OracleScorer final : public Scorer {
public:
    explicit OracleScorer(Program gold, double floor = kDefaultScoreFloor);
    std::vector<std::vector<double>> score(std::span<const ScoreRequest> batch) override;

    const Program& gold() const noexcept { return gold_; }

private:
    double score_one(const std::vector<FunctionCall>& prefix, bool prefix_ok,
                     const std::string& candidate) const;

    Program gold_;
    double floor_;
};

/// Scores every candidate 0; ranking then falls back to canonical text order.
class UniformScorer final : public Scorer {
public:
    std::vector<std::vector<double>> score(std::span<const ScoreRequest> batch) override;
};

struct RemoteScorerOptions {
    int retries = 3;  // additional attempts after the first
    std::chrono::milliseconds connect_timeout{2000};
    std::chrono::milliseconds read_timeout{30000};
    std::chrono::milliseconds backoff{50};
};

/// Client for the model bridge: POST {endpoint}/score per request.
class RemoteScorer final : public Scorer {
public:
    /// endpoint: "http://host:port" with an optional base path.
    explicit RemoteScorer(std::string endpoint, RemoteScorerOptions options = {});
    ~RemoteScorer() override;
    std::vector<std::vector<double>> score(std::span<const ScoreRequest> batch) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

std::unique_ptr<Scorer> oracle_scorer(Program gold, double floor = kDefaultScoreFloor);
std::unique_ptr<Scorer> remote_scorer(std::string endpoint, RemoteScorerOptions options = {});

// Wire format helpers, shared with the test-side bridge stubs.
nlohmann::json score_request_to_json(const ScoreRequest& request);
ScoreRequest score_request_from_json(const nlohmann::json& body);
/// Throws Error(MalformedResponse | LengthMismatch).
std::vector<double> parse_score_response(std::string_view body, std::size_t expected);

} // namespace kbplugin
