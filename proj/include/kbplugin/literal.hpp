#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "json.hpp"

namespace kbplugin {

enum class LiteralKind : std::uint8_t { Quantity, Date, Year, String };

std::string_view to_string(LiteralKind kind) noexcept;
std::optional<LiteralKind> literal_kind_from_string(std::string_view name) noexcept;

// Attribute-like tail of a relational triple, e.g. a weight in kg or a birth date.
class LiteralValue {
public:
    static LiteralValue quantity(double value, std::string unit = {});
    static LiteralValue date(std::chrono::year_month_day value);
    static LiteralValue year(std::int64_t value);
    static LiteralValue string(std::string value);

    /// Parses the KB-file object form {kind, value, unit}. Throws Error(Parse).
    static LiteralValue from_json(const nlohmann::json& j);
    nlohmann::ordered_json to_json() const;

    LiteralKind kind() const noexcept { return kind_; }
    const std::string& unit() const noexcept { return unit_; }

    double quantity_value() const { return std::get<double>(payload_); }
    std::chrono::year_month_day date_value() const {
        return std::get<std::chrono::year_month_day>(payload_);
    }
    std::int64_t year_value() const { return std::get<std::int64_t>(payload_); }
    const std::string& string_value() const { return std::get<std::string>(payload_); }

    /// Quantities, dates and years can be ordered; strings cannot.
    bool is_orderable() const noexcept { return kind_ != LiteralKind::String; }

    /// Same kind, and for quantities the same unit.
    bool comparable_with(const LiteralValue& other) const noexcept;

    /// Ordering between comparable orderable values; nullopt otherwise.
    std::optional<std::partial_ordering> compare(const LiteralValue& other) const;

    /// Human-readable form used for answers and schema corpora.
    std::string render() const;

    // Total order used only for canonical set ordering.
    friend std::strong_ordering operator<=>(const LiteralValue& a, const LiteralValue& b);
    friend bool operator==(const LiteralValue& a, const LiteralValue& b);

private:
    using Payload = std::variant<double, std::chrono::year_month_day, std::int64_t, std::string>;

    LiteralValue(LiteralKind kind, Payload payload, std::string unit)
        : kind_(kind), payload_(std::move(payload)), unit_(std::move(unit)) {}

    LiteralKind kind_;
    Payload payload_;
    std::string unit_;
};

} // namespace kbplugin
