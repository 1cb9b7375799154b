#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kbplugin {

enum class Function : std::uint8_t {
    Find,
    FindAll,
    Relate,
    ReverseRelate,
    FilterConcept,
    And,
    Or,
    Argmax,
    Argmin,
    LT,
    LE,
    GT,
    GE,
    Count,
};

inline constexpr std::array kAllFunctions{
    Function::Find,   Function::FindAll, Function::Relate, Function::ReverseRelate,
    Function::FilterConcept, Function::And, Function::Or, Function::Argmax,
    Function::Argmin, Function::LT, Function::LE, Function::GT, Function::GE,
    Function::Count,
};

/// What a function's argument names.
enum class ArgKind : std::uint8_t { None, Entity, Relation, Concept };

std::string_view function_name(Function f) noexcept;
std::optional<Function> function_from_name(std::string_view name) noexcept;
ArgKind arg_kind(Function f) noexcept;

inline constexpr std::size_t kMaxProgramLength = 20;

struct FunctionCall {
    Function function;
    std::string arg;  // empty iff arg_kind(function) == ArgKind::None

    std::string text() const;
    friend bool operator==(const FunctionCall&, const FunctionCall&) = default;
    friend auto operator<=>(const FunctionCall&, const FunctionCall&) = default;
};

/// Validating constructor; throws Error(Syntax) on signature mismatch.
FunctionCall make_call(Function f, std::string arg = {});

class Program {
public:
    Program() = default;
    /// Throws Error(Syntax) when longer than kMaxProgramLength.
    explicit Program(std::vector<FunctionCall> calls);

    const std::vector<FunctionCall>& calls() const noexcept { return calls_; }
    std::size_t size() const noexcept { return calls_.size(); }
    bool empty() const noexcept { return calls_.empty(); }
    const FunctionCall& operator[](std::size_t i) const { return calls_[i]; }

    /// Returns a copy with the calls appended (length cap enforced).
    Program extended(std::span<const FunctionCall> more) const;

    /// Canonical text: chunks joined by single spaces, args trimmed.
    std::string text() const;

    friend bool operator==(const Program&, const Program&) = default;

private:
    std::vector<FunctionCall> calls_;
};

/// Accepts any whitespace between chunks and around arguments; rejects
/// unknown functions, nested or unbalanced parentheses and signature
/// violations with Error(Syntax). The empty string parses to nothing only
/// through parse_prefix; parse_program requires at least one chunk.
Program parse_program(std::string_view text);
Program parse_prefix(std::string_view text);

std::string serialize(const Program& p);

} // namespace kbplugin
