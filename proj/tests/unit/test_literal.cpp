#include "doctest.h"

#include "kbplugin/error.hpp"
#include "kbplugin/literal.hpp"

using namespace kbplugin;
using nlohmann::json;

TEST_SUITE("literal") {

TEST_CASE("json round trip for every kind") {
    for (const char* text : {R"J({"kind":"quantity","value":1.85,"unit":"m"})J", R"J({"kind":"quantity","value":3.0})J",
                             R"J({"kind":"date","value":"1942-06-18"})J", R"J({"kind":"year","value":1960})J",
                             R"J({"kind":"string","value":"drama"})J"}) {
        auto doc = json::parse(text);
        auto lit = LiteralValue::from_json(doc);
        CHECK(json::parse(lit.to_json().dump()) == doc);
        CHECK(LiteralValue::from_json(json::parse(lit.to_json().dump())) == lit);
    }
}

TEST_CASE("render") {
    CHECK(LiteralValue::quantity(1.85, "m").render() == "1.85 m");
    CHECK(LiteralValue::quantity(70).render() == "70");
    CHECK(LiteralValue::year(1960).render() == "1960");
    CHECK(LiteralValue::from_json(json::parse(R"J({"kind":"date","value":"0800-01-05"})J")).render() == "0800-01-05");
}

TEST_CASE("ordering only within a class") {
    auto a = LiteralValue::quantity(1.7, "m"), b = LiteralValue::quantity(1.9, "m");
    auto ft = LiteralValue::quantity(6.0, "ft");
    REQUIRE(a.compare(b));
    CHECK(*a.compare(b) == std::partial_ordering::less);
    CHECK_FALSE(a.compare(ft));
    CHECK_FALSE(LiteralValue::string("x").compare(LiteralValue::string("y")));
    CHECK_FALSE(LiteralValue::year(1990).compare(a));
    auto d1 = LiteralValue::from_json(json::parse(R"J({"kind":"date","value":"1940-10-09"})J"));
    auto d2 = LiteralValue::from_json(json::parse(R"J({"kind":"date","value":"1942-06-18"})J"));
    CHECK(*d1.compare(d2) == std::partial_ordering::less);
}

TEST_CASE("malformed literals") {
    for (const char* text : {R"J({"kind":"date","value":"1942-02-30"})J", R"J({"kind":"date","value":"June 1942"})J",
                             R"J({"kind":"year","value":"1960"})J", R"J({"kind":"colour","value":"red"})J",
                             R"J({"kind":"string","value":"x","unit":"m"})J", R"J({"value":3})J", R"J([1,2])J"}) {
        CAPTURE(text);
        try {
            LiteralValue::from_json(json::parse(text));
            FAIL("accepted");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Parse);
        }
    }
}

}
