#include "doctest.h"

#include <fstream>

#include "fixtures.hpp"
#include "kbplugin/error.hpp"
#include "kbplugin/eval.hpp"

using namespace kbplugin;

namespace {

const KnowledgeBase& groups() {
    static auto kb = load_kb(testing::fixture("toy_music_groups.json"));
    return kb;
}

std::unique_ptr<Scorer> gold_scorer(const EvalRecord& rec) { return oracle_scorer(parse_program(*rec.gold_program)); }

std::vector<EvalRecord> three() {
    return {
        {"Which role did Paul play in the Beatles?", {"Beatles", "Paul Mccartney"}, {}, {"bass"},
         "Find(Beatles) Relate(member) Find(Paul Mccartney) ReverseRelate(member) And() Relate(role)"},
        {"How many bands are there?", {}, {"band"}, {}, "FindAll() FilterConcept(band) Count()"},
        {"Who is the tallest person?", {}, {"person"}, {"Paul Mccartney"}, "FindAll() FilterConcept(person) Argmax(height)"},
    };
}

} // namespace

TEST_SUITE("eval") {

TEST_CASE("oracle scorer scores perfectly") {
    auto data = three();
    auto report = evaluate(groups(), data, gold_scorer, {});
    REQUIRE(report.records.size() == 3);
    CHECK(report.failures == 0);
    CHECK(report.aggregate.f1 == 1.0);
    CHECK(report.aggregate.hit1 == 1.0);
    CHECK(report.aggregate.accuracy == 1.0);
    CHECK(report.records[1].gold == std::vector<std::string>{"2"});
    CHECK(report.records[0].program == data[0].gold_program);
    auto j = report.to_json();
    CHECK(j.at("metric") == "f1");
    CHECK(j.at("score") == 1.0);
    CHECK(j.at("runtime").at("records") == 3);
}

TEST_CASE("aggregate is the mean, failures score zero") {
    auto data = three();
    data[0].gold_answers = {"bass", "guitar"};           // half recall
    data[2].topic_concepts = {"no such concept"};         // seed error
    EvalOptions opts;
    opts.metric = Metric::Accuracy;
    auto report = evaluate(groups(), data, gold_scorer, opts);
    CHECK(report.failures == 1);
    REQUIRE(report.records[2].error);
    CHECK(report.records[2].scores.f1 == 0.0);
    CHECK(report.records[0].scores.f1 == doctest::Approx(2.0 / 3.0));
    double mean = 0;
    for (const auto& r : report.records) mean += r.scores.f1;
    CHECK(report.aggregate.f1 == doctest::Approx(mean / 3));
    CHECK(report.aggregate.accuracy == doctest::Approx(1.0 / 3));
    CHECK(report.to_json().at("score") == report.aggregate.accuracy);
}

TEST_CASE("parallel runs keep input order") {
    std::vector<EvalRecord> data;
    for (int i = 0; i < 4; ++i)
        for (auto& r : three()) data.push_back(r);
    EvalOptions serial, parallel;
    parallel.parallel = 4;
    auto a = evaluate(groups(), data, gold_scorer, serial);
    auto b = evaluate(groups(), data, gold_scorer, parallel);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].question == b.records[i].question);
        CHECK(a.records[i].program == b.records[i].program);
        CHECK(a.records[i].predicted == b.records[i].predicted);
    }
    CHECK(a.aggregate.f1 == b.aggregate.f1);
}

TEST_CASE("per-record timeout") {
    auto data = three();
    EvalOptions opts;
    opts.record_timeout = std::chrono::milliseconds(0);
    auto report = evaluate(groups(), data, gold_scorer, opts);
    CHECK(report.failures == 3);
    CHECK(report.aggregate.f1 == 0.0);
}

TEST_CASE("dataset parsing") {
    auto dir = testing::scratch_dir("eval");
    {
        std::ofstream(dir / "ok.jsonl")
            << R"J({"question":"q","topic_entities":["Beatles"],"gold_answers":["x"]})J" << "\n\n"
            << R"J({"question":"r","topic_concepts":["band"],"gold_program":"FindAll() FilterConcept(band) Count()"})J"
            << "\n";
        std::ofstream(dir / "bad.jsonl") << R"J({"question":"q","gold_answers":["x"]})J" << "\n"
                                         << R"J({"question":"q"})J" << "\n";
    }
    auto ok = read_eval_dataset(dir / "ok.jsonl");
    REQUIRE(ok.size() == 2);
    CHECK(ok[0].topic_entities == std::vector<std::string>{"Beatles"});
    CHECK_FALSE(ok[0].gold_program);
    CHECK(ok[1].gold_program == "FindAll() FilterConcept(band) Count()");
    try {
        read_eval_dataset(dir / "bad.jsonl");
        FAIL("parsed a record without gold");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Parse);
        CHECK(std::string(e.what()).find("bad.jsonl:2") != std::string::npos);
    }
    CHECK(metric_from_string("hit1") == Metric::Hit1);
    CHECK_FALSE(metric_from_string("bleu"));
    std::filesystem::remove_all(dir);
}

}
