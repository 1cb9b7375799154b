#include "doctest.h"

#include <algorithm>

#include "fixtures.hpp"
#include "kbplugin/error.hpp"
#include "kbplugin/executor.hpp"
#include "oracle.hpp"

using namespace kbplugin;

namespace {

const KnowledgeBase& toy() {
    static auto kb = load_kb(testing::fixture("toy_music.json"));
    return kb;
}

const KnowledgeBase& groups() {
    static auto kb = load_kb(testing::fixture("toy_music_groups.json"));
    return kb;
}

std::vector<std::string> answers(const KnowledgeBase& kb, const std::string& program, ExecOptions opts = {}) {
    auto a = answer_strings(kb, execute(kb, parse_program(program), opts));
    std::sort(a.begin(), a.end());
    return a;
}

ErrorKind exec_error(const KnowledgeBase& kb, const std::string& program) {
    try {
        execute(kb, parse_program(program));
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::Io;
}

using Names = std::vector<std::string>;

} // namespace

TEST_SUITE("executor") {

TEST_CASE("basic programs on the flat music KB") {
    CHECK(execute(toy(), parse_program("FindAll() Count()")).count() == 4);
    CHECK(answers(toy(), "Find(Beatles) Relate(member) FilterConcept(person)") == Names{"John Lennon", "Paul Mccartney"});
    CHECK(exec_error(toy(), "Find(Beatles) And()") == ErrorKind::StackUnderflow);
    CHECK(exec_error(toy(), "Find(Nonexistent)") == ErrorKind::NameResolution);
    CHECK(exec_error(toy(), "Find(Beatles) Relate(drummer)") == ErrorKind::NameResolution);
    CHECK(exec_error(toy(), "Find(Beatles) FilterConcept(drummer)") == ErrorKind::NameResolution);
    CHECK(exec_error(toy(), "Find(Beatles) Find(Paul)") == ErrorKind::Structure);
}

TEST_CASE("case-study program") {
    const std::string case_study =
        "Find(Beatles) Relate(member) Find(Paul Mccartney) ReverseRelate(member) And() Relate(role)";
    // On the flat music graph the band and Paul are directly linked, so the
    // intersection holds no membership node and nothing has a role.
    CHECK(execute(toy(), parse_program(case_study)).entities().empty());
    CHECK(answers(groups(), case_study) == Names{"bass"});
}

TEST_CASE("prefix states keep every branch") {
    auto st = execute_prefix(toy(), parse_prefix("Find(Beatles) Relate(member) Find(Paul Mccartney)"));
    REQUIRE(st.branches() == 2);
    CHECK(st.stack[0].entities().size() == 2);
    CHECK(st.stack[1].entities().size() == 1);
    CHECK(execute_prefix(toy(), parse_prefix("")).stack.empty());
}

TEST_CASE("literal hops and comparisons") {
    auto d = execute(groups(), parse_program("Find(Paul Mccartney) Relate(height)"));
    REQUIRE(d.is_values());
    CHECK(answer_strings(groups(), d) == Names{"1.8 m"});
    CHECK(answers(groups(), "Find(Paul Mccartney) Relate(height) LT(height)") == Names{"George Harrison", "John Lennon"});
    CHECK(answers(groups(), "Find(Paul Mccartney) Relate(height) LE(height)") ==
          Names{"George Harrison", "John Lennon", "Paul Mccartney"});
    CHECK(answers(groups(), "Find(Paul Mccartney) Relate(height) GT(height)").empty());
    CHECK(answers(groups(), "Find(John Lennon) Relate(date of birth) GT(date of birth)") ==
          Names{"George Harrison", "Linda Mccartney", "Paul Mccartney"});
    CHECK(answers(groups(), "Find(Beatles) Relate(year formed) GE(year formed)") == Names{"Beatles", "Wings"});
    CHECK(exec_error(groups(), "FindAll() FilterConcept(person) Relate(height) LT(height)") ==
          ErrorKind::NonSingletonValue);
    CHECK(exec_error(groups(), "Find(Paul) LT(height)") == ErrorKind::Type);
    CHECK(exec_error(groups(), "Find(Paul) Relate(height) Count()") == ErrorKind::Type);
    CHECK(exec_error(groups(), "Find(Paul) Relate(height) Relate(height)") == ErrorKind::Type);
}

TEST_CASE("argmax keeps the dominant unit") {
    // Three heights are in metres and one in feet; 5.5 ft is never compared with metres.
    CHECK(answers(groups(), "FindAll() FilterConcept(person) Argmax(height)") == Names{"Paul Mccartney"});
    CHECK(answers(groups(), "FindAll() FilterConcept(person) Argmin(height)") == Names{"George Harrison"});
    CHECK(answers(groups(), "Find(Linda) Argmax(height)") == Names{"Linda Mccartney"});
    CHECK(answers(groups(), "FindAll() FilterConcept(person) Argmin(date of birth)") == Names{"John Lennon"});
    CHECK(answers(groups(), "FindAll() Argmax(year formed)") == Names{"Wings"});
    CHECK(answers(groups(), "FindAll() FilterConcept(instrument) Argmax(height)").empty());
}

TEST_CASE("transitive concepts") {
    CHECK(answers(groups(), "FindAll() FilterConcept(organization)") == Names{"Beatles", "Wings"});
    CHECK(answers(groups(), "FindAll() FilterConcept(organization)", ExecOptions{false}).empty());
}

TEST_CASE("set algebra") {
    const auto& kb = groups();
    auto raw = oracle::RawKb::load(testing::fixture("toy_music_groups.json"));
    auto concepts = oracle::concept_names(raw);
    for (const auto& a : concepts)
        for (const auto& b : concepts) {
            const std::string pa = "FindAll() FilterConcept(" + a + ")", pb = "FindAll() FilterConcept(" + b + ")";
            auto ea = execute(kb, parse_program(pa)).entities(), eb = execute(kb, parse_program(pb)).entities();
            EntitySet inter, uni;
            std::set_intersection(ea.begin(), ea.end(), eb.begin(), eb.end(), std::back_inserter(inter));
            std::set_union(ea.begin(), ea.end(), eb.begin(), eb.end(), std::back_inserter(uni));
            CHECK(execute(kb, parse_program(pa + " " + pb + " And()")).entities() == inter);
            CHECK(execute(kb, parse_program(pa + " " + pb + " Or()")).entities() == uni);
            CHECK(execute(kb, parse_program(pb + " " + pa + " And()")).entities() == inter);
        }
    for (const auto& name : oracle::entity_names(raw)) {
        auto once = execute(kb, parse_program("Find(" + name + ")"));
        CHECK(execute(kb, parse_program("Find(" + name + ") Find(" + name + ") And()")) == once);
        CHECK(execute(kb, parse_program("Find(" + name + ") Find(" + name + ") Or()")) == once);
        CHECK(execute(kb, parse_program("Find(" + name + ") FilterConcept(person) FilterConcept(person)")) ==
              execute(kb, parse_program("Find(" + name + ") FilterConcept(person)")));
    }
}

TEST_CASE("hop duality") {
    for (const char* file : {"toy_music_groups.json", "travel.json", "film.json"}) {
        CAPTURE(file);
        auto kb = load_kb(testing::fixture(file));
        auto raw = oracle::RawKb::load(testing::fixture(file));
        for (const auto& r : oracle::relation_names(raw))
            for (const auto& a : oracle::entity_names(raw))
                for (const auto& b : oracle::entity_names(raw)) {
                    auto fwd = answer_strings(kb, execute(kb, parse_program("Find(" + a + ") Relate(" + r + ")")));
                    auto bwd =
                        answer_strings(kb, execute(kb, parse_program("Find(" + b + ") ReverseRelate(" + r + ")")));
                    bool ab = std::count(fwd.begin(), fwd.end(), b) > 0;
                    bool ba = std::count(bwd.begin(), bwd.end(), a) > 0;
                    if (ab != ba) CHECK_MESSAGE(false, a << " -" << r << "-> " << b);
                }
    }
}

TEST_CASE("denotation json") {
    CHECK(denotation_to_json(toy(), execute(toy(), parse_program("FindAll() Count()"))).dump() == R"J({"count":4})J");
    auto j = denotation_to_json(toy(), execute(toy(), parse_program("Find(Paul) Relate(role)")));
    CHECK(j.dump() == R"J({"entities":[{"id":"bass","name":"bass"}]})J");
    auto v = denotation_to_json(groups(), execute(groups(), parse_program("Find(Beatles) Relate(year formed)")));
    CHECK(v.dump() == R"J({"values":["1960"]})J");
}

}
