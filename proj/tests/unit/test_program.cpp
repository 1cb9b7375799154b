#include "doctest.h"

#include "kbplugin/error.hpp"
#include "kbplugin/program.hpp"

using namespace kbplugin;

namespace {

ErrorKind parse_error(std::string_view text) {
    try {
        parse_program(text);
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::Io;
}

} // namespace

TEST_SUITE("program") {

TEST_CASE("parses the case-study program") {
    const std::string text =
        "Find(Beatles) Relate(member) Find(Paul Mccartney) ReverseRelate(member) And() Relate(role)";
    auto p = parse_program(text);
    REQUIRE(p.size() == 6);
    CHECK(p[0] == make_call(Function::Find, "Beatles"));
    CHECK(p[2].arg == "Paul Mccartney");
    CHECK(p[4].function == Function::And);
    CHECK(p.text() == text);
    CHECK(serialize(p) == text);
}

TEST_CASE("canonical text") {
    CHECK(parse_program("FindAll() FilterConcept(director)").size() == 2);
    CHECK(parse_program("Count()").text() == "Count()");
    CHECK(parse_program("  Find( Beatles )\n\tRelate(member)  ").text() == "Find(Beatles) Relate(member)");
    CHECK(parse_program("FindAll() FilterConcept(rail network)").text() == "FindAll() FilterConcept(rail network)");
    CHECK(parse_program("FindAll()FilterConcept(x)").size() == 2);
    CHECK(parse_prefix("").empty());
    CHECK(parse_prefix("   ").empty());
}

TEST_CASE("round trip over every function") {
    for (auto f : kAllFunctions) {
        auto call = arg_kind(f) == ArgKind::None ? make_call(f) : make_call(f, "some arg");
        Program p({call});
        CHECK(parse_program(p.text()) == p);
        CHECK(function_from_name(function_name(f)) == f);
    }
}

TEST_CASE("syntax errors") {
    CHECK(parse_error("Relate()") == ErrorKind::Syntax);
    CHECK(parse_error("Count(x)") == ErrorKind::Syntax);
    CHECK(parse_error("Teleport(x)") == ErrorKind::Syntax);
    CHECK(parse_error("Find(a(b))") == ErrorKind::Syntax);
    CHECK(parse_error("Find(a") == ErrorKind::Syntax);
    CHECK(parse_error("Find a") == ErrorKind::Syntax);
    CHECK(parse_error("") == ErrorKind::Syntax);
    CHECK(parse_error("find(x)") == ErrorKind::Syntax);
    CHECK_THROWS_AS(make_call(Function::Find), Error);
    CHECK_THROWS_AS(make_call(Function::And, "x"), Error);
}

TEST_CASE("length cap") {
    std::string twenty, twentyone;
    for (int i = 0; i < 20; ++i) twenty += "FindAll() ";
    CHECK(parse_program(twenty).size() == kMaxProgramLength);
    twentyone = twenty + "FindAll()";
    CHECK(parse_error(twentyone) == ErrorKind::Syntax);
    auto p = parse_program(twenty);
    std::vector<FunctionCall> one{make_call(Function::Count)};
    CHECK_THROWS_AS(p.extended(one), Error);
}

}
