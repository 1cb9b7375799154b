#include "kbplugin/literal.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "kbplugin/error.hpp"

namespace kbplugin {

namespace {

std::chrono::year_month_day parse_date(const std::string& text) {
    int y = 0;
    unsigned m = 0, d = 0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%d-%u-%u%c", &y, &m, &d, &tail) != 3)
        throw Error(ErrorKind::Parse, "date literal '" + text + "' is not YYYY-MM-DD");
    std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                    std::chrono::day{d}};
    if (!ymd.ok())
        throw Error(ErrorKind::Parse, "date literal '" + text + "' is not a calendar date");
    return ymd;
}

std::string format_date(std::chrono::year_month_day ymd) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(ymd.year()), unsigned(ymd.month()),
                  unsigned(ymd.day()));
    return buf;
}

std::string format_number(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

} // namespace

std::string_view to_string(LiteralKind kind) noexcept {
    switch (kind) {
    case LiteralKind::Quantity: return "quantity";
    case LiteralKind::Date: return "date";
    case LiteralKind::Year: return "year";
    case LiteralKind::String: return "string";
    }
    return "?";
}

std::optional<LiteralKind> literal_kind_from_string(std::string_view name) noexcept {
    if (name == "quantity") return LiteralKind::Quantity;
    if (name == "date") return LiteralKind::Date;
    if (name == "year") return LiteralKind::Year;
    if (name == "string") return LiteralKind::String;
    return std::nullopt;
}

LiteralValue LiteralValue::quantity(double value, std::string unit) {
    if (!std::isfinite(value))
        throw Error(ErrorKind::Parse, "quantity literal must be finite");
    return LiteralValue(LiteralKind::Quantity, value, std::move(unit));
}

LiteralValue LiteralValue::date(std::chrono::year_month_day value) {
    if (!value.ok()) throw Error(ErrorKind::Parse, "invalid calendar date");
    return LiteralValue(LiteralKind::Date, value, {});
}

LiteralValue LiteralValue::year(std::int64_t value) {
    return LiteralValue(LiteralKind::Year, value, {});
}

LiteralValue LiteralValue::string(std::string value) {
    return LiteralValue(LiteralKind::String, std::move(value), {});
}

LiteralValue LiteralValue::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind") || !j.contains("value"))
        throw Error(ErrorKind::Parse, "literal must be an object with 'kind' and 'value'");
    const auto& kind_field = j.at("kind");
    if (!kind_field.is_string())
        throw Error(ErrorKind::Parse, "literal 'kind' must be a string");
    auto kind = literal_kind_from_string(kind_field.get<std::string>());
    if (!kind) throw Error(ErrorKind::Parse, "unknown literal kind '" + kind_field.get<std::string>() + "'");
    const auto& v = j.at("value");
    std::string unit;
    if (j.contains("unit") && !j.at("unit").is_null()) {
        if (!j.at("unit").is_string()) throw Error(ErrorKind::Parse, "literal 'unit' must be a string");
        unit = j.at("unit").get<std::string>();
    }
    if (!unit.empty() && *kind != LiteralKind::Quantity)
        throw Error(ErrorKind::Parse, "only quantity literals carry a unit");

    switch (*kind) {
    case LiteralKind::Quantity:
        if (!v.is_number()) throw Error(ErrorKind::Parse, "quantity literal value must be numeric");
        return quantity(v.get<double>(), std::move(unit));
    case LiteralKind::Date:
        if (!v.is_string()) throw Error(ErrorKind::Parse, "date literal value must be a string");
        return date(parse_date(v.get<std::string>()));
    case LiteralKind::Year:
        if (!v.is_number_integer()) throw Error(ErrorKind::Parse, "year literal value must be an integer");
        return year(v.get<std::int64_t>());
    case LiteralKind::String:
        if (!v.is_string()) throw Error(ErrorKind::Parse, "string literal value must be a string");
        return string(v.get<std::string>());
    }
    throw Error(ErrorKind::Parse, "unreachable literal kind");
}

nlohmann::ordered_json LiteralValue::to_json() const {
    nlohmann::ordered_json j;
    j["kind"] = std::string(to_string(kind_));
    switch (kind_) {
    case LiteralKind::Quantity: j["value"] = quantity_value(); break;
    case LiteralKind::Date: j["value"] = format_date(date_value()); break;
    case LiteralKind::Year: j["value"] = year_value(); break;
    case LiteralKind::String: j["value"] = string_value(); break;
    }
    if (!unit_.empty()) j["unit"] = unit_;
    return j;
}

bool LiteralValue::comparable_with(const LiteralValue& other) const noexcept {
    return kind_ == other.kind_ && (kind_ != LiteralKind::Quantity || unit_ == other.unit_);
}

std::optional<std::partial_ordering> LiteralValue::compare(const LiteralValue& other) const {
    if (!is_orderable() || !comparable_with(other)) return std::nullopt;
    switch (kind_) {
    case LiteralKind::Quantity: return quantity_value() <=> other.quantity_value();
    case LiteralKind::Date: return date_value() <=> other.date_value();
    case LiteralKind::Year: return year_value() <=> other.year_value();
    case LiteralKind::String: break;
    }
    return std::nullopt;
}

std::string LiteralValue::render() const {
    switch (kind_) {
    case LiteralKind::Quantity:
        return unit_.empty() ? format_number(quantity_value())
                             : format_number(quantity_value()) + " " + unit_;
    case LiteralKind::Date: return format_date(date_value());
    case LiteralKind::Year: return std::to_string(year_value());
    case LiteralKind::String: return string_value();
    }
    return {};
}

std::strong_ordering operator<=>(const LiteralValue& a, const LiteralValue& b) {
    if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
    if (auto c = a.unit_ <=> b.unit_; c != 0) return c;
    switch (a.kind_) {
    case LiteralKind::Quantity: {
        double x = a.quantity_value(), y = b.quantity_value();
        if (x < y) return std::strong_ordering::less;
        if (y < x) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }
    case LiteralKind::Date: {
        auto x = std::chrono::sys_days{a.date_value()}, y = std::chrono::sys_days{b.date_value()};
        return x.time_since_epoch().count() <=> y.time_since_epoch().count();
    }
    case LiteralKind::Year: return a.year_value() <=> b.year_value();
    case LiteralKind::String: return a.string_value() <=> b.string_value();
    }
    return std::strong_ordering::equal;
}

bool operator==(const LiteralValue& a, const LiteralValue& b) {
    return (a <=> b) == 0;
}

} // namespace kbplugin
