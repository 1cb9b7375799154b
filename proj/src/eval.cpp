#include "kbplugin/eval.hpp"

#include <atomic>
#include <fstream>
#include <thread>

#include "kbplugin/error.hpp"

namespace kbplugin {

namespace {

std::vector<std::string> string_list(const nlohmann::json& rec, const char* key, const std::string& where) {
    if (!rec.contains(key) || rec.at(key).is_null()) return {};
    const auto& v = rec.at(key);
    if (!v.is_array()) throw Error(ErrorKind::Parse, where + ": '" + key + "' must be an array of strings");
    std::vector<std::string> out;
    for (const auto& s : v) {
        if (!s.is_string()) throw Error(ErrorKind::Parse, where + ": '" + key + "' must be an array of strings");
        out.push_back(s.get<std::string>());
    }
    return out;
}

RecordResult run_record(const KnowledgeBase& kb, const EvalRecord& rec, const ScorerFactory& make_scorer,
                        const EvalOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    RecordResult out;
    out.question = rec.question;
    out.gold = rec.gold_answers;
    try {
        if (out.gold.empty() && rec.gold_program)
            out.gold = answer_strings(kb, execute(kb, parse_program(*rec.gold_program)));
        auto scorer = make_scorer(rec);
        auto beam = options.beam;
        beam.deadline = start + options.record_timeout;
        auto results = beam_search(kb, rec.question, {rec.topic_entities, rec.topic_concepts}, *scorer, beam);
        const auto& best = results.front();
        out.program = best.program.text();
        out.predicted = answer_strings(kb, best.denotation);
        out.scores = score_answers(out.predicted, out.gold);
    } catch (const std::exception& e) {
        out.scores = {};
        out.error = e.what();
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

} // namespace

std::vector<EvalRecord> read_eval_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open dataset '" + path.string() + "'");
    std::vector<EvalRecord> out;
    std::string line;
    for (std::size_t n = 1; std::getline(in, line); ++n) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto where = path.string() + ":" + std::to_string(n);
        auto doc = nlohmann::json::parse(line, nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) throw Error(ErrorKind::Parse, where + ": not a JSON object");
        if (!doc.contains("question") || !doc.at("question").is_string())
            throw Error(ErrorKind::Parse, where + ": missing string 'question'");
        EvalRecord rec;
        rec.question = doc.at("question").get<std::string>();
        rec.topic_entities = string_list(doc, "topic_entities", where);
        rec.topic_concepts = string_list(doc, "topic_concepts", where);
        rec.gold_answers = string_list(doc, "gold_answers", where);
        if (doc.contains("gold_program") && !doc.at("gold_program").is_null()) {
            if (!doc.at("gold_program").is_string())
                throw Error(ErrorKind::Parse, where + ": 'gold_program' must be a string");
            rec.gold_program = doc.at("gold_program").get<std::string>();
        }
        if (rec.gold_answers.empty() && !rec.gold_program)
            throw Error(ErrorKind::Parse, where + ": needs gold_answers or gold_program");
        out.push_back(std::move(rec));
    }
    return out;
}

std::optional<Metric> metric_from_string(std::string_view name) noexcept {
    if (name == "f1") return Metric::F1;
    if (name == "hit1") return Metric::Hit1;
    if (name == "accuracy") return Metric::Accuracy;
    return std::nullopt;
}

std::string_view to_string(Metric m) noexcept {
    switch (m) {
    case Metric::F1: return "f1";
    case Metric::Hit1: return "hit1";
    case Metric::Accuracy: return "accuracy";
    }
    return "?";
}

EvalReport evaluate(const KnowledgeBase& kb, std::span<const EvalRecord> dataset,
                    const ScorerFactory& make_scorer, const EvalOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    EvalReport report;
    report.metric = options.metric;
    report.records.resize(dataset.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < dataset.size(); i = next++)
            report.records[i] = run_record(kb, dataset[i], make_scorer, options);
    };
    const auto threads = std::max<std::size_t>(1, std::min(options.parallel, dataset.size()));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    for (const auto& r : report.records) {
        report.aggregate.f1 += r.scores.f1;
        report.aggregate.hit1 += r.scores.hit1;
        report.aggregate.accuracy += r.scores.accuracy;
        if (r.error) ++report.failures;
    }
    if (!report.records.empty()) {
        const double n = static_cast<double>(report.records.size());
        report.aggregate.f1 /= n;
        report.aggregate.hit1 /= n;
        report.aggregate.accuracy /= n;
    }
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

nlohmann::ordered_json EvalReport::to_json() const {
    auto recs = nlohmann::ordered_json::array();
    for (const auto& r : records) {
        nlohmann::ordered_json j;
        j["question"] = r.question;
        j["program"] = r.program ? nlohmann::ordered_json(*r.program) : nlohmann::ordered_json();
        j["predicted"] = r.predicted;
        j["gold"] = r.gold;
        j["f1"] = r.scores.f1;
        j["hit1"] = r.scores.hit1;
        j["accuracy"] = r.scores.accuracy;
        if (r.error) j["error"] = *r.error;
        j["seconds"] = r.seconds;
        recs.push_back(std::move(j));
    }
    const double headline = metric == Metric::F1     ? aggregate.f1
                            : metric == Metric::Hit1 ? aggregate.hit1
                                                     : aggregate.accuracy;
    nlohmann::ordered_json out;
    out["metric"] = std::string(to_string(metric));
    out["score"] = headline;
    out["aggregate"] = {{"f1", aggregate.f1}, {"hit1", aggregate.hit1}, {"accuracy", aggregate.accuracy}};
    out["records"] = std::move(recs);
    out["runtime"] = {{"records", records.size()}, {"failures", failures}, {"seconds", seconds}};
    return out;
}

} // namespace kbplugin
