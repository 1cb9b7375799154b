#include "kbplugin/scorer.hpp"

#include "kbplugin/error.hpp"

namespace kbplugin {

OracleScorer::OracleScorer(Program gold, double floor) : gold_(std::move(gold)), floor_(floor) {}

double OracleScorer::score_one(const std::vector<FunctionCall>& prefix, bool prefix_ok,
                               const std::string& candidate) const {
    if (!prefix_ok || prefix.size() > gold_.size()) return floor_;
    if (!std::equal(prefix.begin(), prefix.end(), gold_.calls().begin())) return floor_;
    if (candidate == kEndChunk) return prefix.size() == gold_.size() ? 0.0 : floor_;
    Program chunk;
    try {
        chunk = parse_program(candidate);
    } catch (const Error&) {
        return floor_;
    }
    if (prefix.size() + chunk.size() > gold_.size()) return floor_;
    return std::equal(chunk.calls().begin(), chunk.calls().end(), gold_.calls().begin() + prefix.size())
               ? 0.0
               : floor_;
}

std::vector<std::vector<double>> OracleScorer::score(std::span<const ScoreRequest> batch) {
    std::vector<std::vector<double>> out;
    out.reserve(batch.size());
    for (const auto& req : batch) {
        Program prefix;
        bool ok = true;
        try {
            prefix = parse_prefix(req.prefix);
        } catch (const Error&) {
            ok = false;
        }
        std::vector<double> row;
        row.reserve(req.candidates.size());
        for (const auto& c : req.candidates) row.push_back(score_one(prefix.calls(), ok, c));
        out.push_back(std::move(row));
    }
    return out;
}

std::vector<std::vector<double>> UniformScorer::score(std::span<const ScoreRequest> batch) {
    std::vector<std::vector<double>> out;
    for (const auto& req : batch) out.emplace_back(req.candidates.size(), 0.0);
    return out;
}

std::unique_ptr<Scorer> oracle_scorer(Program gold, double floor) {
    return std::make_unique<OracleScorer>(std::move(gold), floor);
}

nlohmann::json score_request_to_json(const ScoreRequest& request) {
    return {{"question", request.question},
            {"prefix", request.prefix},
            {"candidates", request.candidates}};
}

ScoreRequest score_request_from_json(const nlohmann::json& body) {
    try {
        ScoreRequest req;
        req.question = body.at("question").get<std::string>();
        req.prefix = body.at("prefix").get<std::string>();
        req.candidates = body.at("candidates").get<std::vector<std::string>>();
        return req;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::MalformedResponse, std::string("malformed score request: ") + e.what());
    }
}

std::vector<double> parse_score_response(std::string_view body, std::size_t expected) {
    nlohmann::json doc = nlohmann::json::parse(body, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("log_probs") ||
        !doc.at("log_probs").is_array())
        throw Error(ErrorKind::MalformedResponse, "score response lacks a 'log_probs' array");
    std::vector<double> out;
    for (const auto& v : doc.at("log_probs")) {
        if (!v.is_number()) throw Error(ErrorKind::MalformedResponse, "non-numeric log-probability");
        out.push_back(v.get<double>());
    }
    if (out.size() != expected)
        throw Error(ErrorKind::LengthMismatch, "bridge returned " + std::to_string(out.size()) +
                                                   " log-probabilities for " + std::to_string(expected) +
                                                   " candidates");
    return out;
}

} // namespace kbplugin
