#include "kbplugin/program.hpp"

#include <span>

#include "kbplugin/error.hpp"

namespace kbplugin {

namespace {

constexpr std::array<std::string_view, kAllFunctions.size()> kNames{
    "Find", "FindAll", "Relate", "ReverseRelate", "FilterConcept", "And", "Or",
    "Argmax", "Argmin", "LT", "LE", "GT", "GE", "Count",
};

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

} // namespace

std::string_view function_name(Function f) noexcept {
    return kNames[static_cast<std::size_t>(f)];
}

std::optional<Function> function_from_name(std::string_view name) noexcept {
    for (std::size_t i = 0; i < kNames.size(); ++i)
        if (kNames[i] == name) return kAllFunctions[i];
    return std::nullopt;
}

ArgKind arg_kind(Function f) noexcept {
    switch (f) {
    case Function::Find: return ArgKind::Entity;
    case Function::FilterConcept: return ArgKind::Concept;
    case Function::Relate:
    case Function::ReverseRelate:
    case Function::Argmax:
    case Function::Argmin:
    case Function::LT:
    case Function::LE:
    case Function::GT:
    case Function::GE: return ArgKind::Relation;
    case Function::FindAll:
    case Function::And:
    case Function::Or:
    case Function::Count: return ArgKind::None;
    }
    return ArgKind::None;
}

std::string FunctionCall::text() const {
    std::string out(function_name(function));
    out += '(';
    out += arg;
    out += ')';
    return out;
}

FunctionCall make_call(Function f, std::string arg) {
    auto trimmed = std::string(trim(arg));
    const auto name = std::string(function_name(f));
    if (arg_kind(f) == ArgKind::None && !trimmed.empty())
        throw Error(ErrorKind::Syntax, name + " takes no argument, got '" + trimmed + "'");
    if (arg_kind(f) != ArgKind::None && trimmed.empty()) {
        const char* what = arg_kind(f) == ArgKind::Entity    ? "an entity"
                           : arg_kind(f) == ArgKind::Concept ? "a concept"
                                                             : "a relation";
        throw Error(ErrorKind::Syntax, name + " requires " + what + " argument");
    }
    if (trimmed.find_first_of("()") != std::string::npos)
        throw Error(ErrorKind::Syntax, "argument of " + name + " must not contain parentheses");
    return FunctionCall{f, std::move(trimmed)};
}

Program::Program(std::vector<FunctionCall> calls) : calls_(std::move(calls)) {
    if (calls_.size() > kMaxProgramLength)
        throw Error(ErrorKind::Syntax, "program has " + std::to_string(calls_.size()) +
                                           " calls; the maximum is " +
                                           std::to_string(kMaxProgramLength));
}

Program Program::extended(std::span<const FunctionCall> more) const {
    auto calls = calls_;
    calls.insert(calls.end(), more.begin(), more.end());
    return Program(std::move(calls));
}

std::string Program::text() const {
    std::string out;
    for (std::size_t i = 0; i < calls_.size(); ++i) {
        if (i) out += ' ';
        out += calls_[i].text();
    }
    return out;
}

Program parse_prefix(std::string_view text) {
    std::vector<FunctionCall> calls;
    std::size_t pos = 0;
    auto skip_space = [&] {
        while (pos < text.size() && is_space(text[pos])) ++pos;
    };
    skip_space();
    while (pos < text.size()) {
        const auto start = pos;
        while (pos < text.size() && text[pos] != '(' && text[pos] != ')' && !is_space(text[pos])) ++pos;
        const auto name = text.substr(start, pos - start);
        if (name.empty())
            throw Error(ErrorKind::Syntax, "expected a function name at offset " + std::to_string(start));
        if (pos >= text.size() || text[pos] != '(')
            throw Error(ErrorKind::Syntax, "expected '(' after '" + std::string(name) + "'");
        auto f = function_from_name(name);
        if (!f) throw Error(ErrorKind::Syntax, "unknown function '" + std::string(name) + "'");
        const auto open = pos++;
        const auto arg_start = pos;
        while (pos < text.size() && text[pos] != ')') {
            if (text[pos] == '(')
                throw Error(ErrorKind::Syntax, "nested '(' in argument of " + std::string(name) +
                                                   " at offset " + std::to_string(pos));
            ++pos;
        }
        if (pos >= text.size())
            throw Error(ErrorKind::Syntax, "unbalanced '(' at offset " + std::to_string(open));
        calls.push_back(make_call(*f, std::string(text.substr(arg_start, pos - arg_start))));
        ++pos;
        skip_space();
    }
    return Program(std::move(calls));
}

Program parse_program(std::string_view text) {
    auto p = parse_prefix(text);
    if (p.empty()) throw Error(ErrorKind::Syntax, "empty program");
    return p;
}

std::string serialize(const Program& p) {
    return p.text();
}

} // namespace kbplugin
