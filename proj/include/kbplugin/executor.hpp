#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "kbplugin/kb.hpp"
#include "kbplugin/program.hpp"

namespace kbplugin {

using EntitySet = std::vector<EntityIndex>;   // sorted, unique
using ValueSet = std::vector<LiteralValue>;   // sorted, unique

struct CountValue {
    std::uint64_t count = 0;
    friend bool operator==(const CountValue&, const CountValue&) = default;
};

/// Value of a (partial) program branch.
class Denotation {
public:
    using Variant = std::variant<EntitySet, ValueSet, CountValue>;

    Denotation() = default;
    Denotation(EntitySet s) : v_(std::move(s)) {}
    Denotation(ValueSet s) : v_(std::move(s)) {}
    Denotation(CountValue c) : v_(c) {}

    bool is_entities() const noexcept { return std::holds_alternative<EntitySet>(v_); }
    bool is_values() const noexcept { return std::holds_alternative<ValueSet>(v_); }
    bool is_count() const noexcept { return std::holds_alternative<CountValue>(v_); }

    const EntitySet& entities() const { return std::get<EntitySet>(v_); }
    const ValueSet& values() const { return std::get<ValueSet>(v_); }
    std::uint64_t count() const { return std::get<CountValue>(v_).count; }
    const Variant& variant() const noexcept { return v_; }

    /// Empty entity/value set; a count is never empty.
    bool empty() const noexcept;
    std::string_view type_name() const noexcept;

    friend bool operator==(const Denotation&, const Denotation&) = default;

private:
    Variant v_;
};

struct ExecOptions {
    /// FilterConcept includes instances of subclasses.
    bool transitive_concepts = true;
};

/// Branch stack of a partially executed program.
struct ExecState {
    std::vector<Denotation> stack;

    std::size_t branches() const noexcept { return stack.size(); }
    const Denotation& top() const { return stack.back(); }
    friend bool operator==(const ExecState&, const ExecState&) = default;
};

/// Applies one call to the state in place. Throws Error(NameResolution |
/// StackUnderflow | Type | NonSingletonValue).
void apply_call(const KnowledgeBase& kb, ExecState& state, const FunctionCall& call,
                const ExecOptions& options = {});

ExecState execute_prefix(const KnowledgeBase& kb, const Program& p, const ExecOptions& options = {});

/// Full execution; additionally requires exactly one branch at the end
/// (Error(Structure) otherwise).
Denotation execute(const KnowledgeBase& kb, const Program& p, const ExecOptions& options = {});

/// Answer strings: entity names, rendered literals, or the decimal count.
std::vector<std::string> answer_strings(const KnowledgeBase& kb, const Denotation& d);

/// {"entities": [{id, name}]} | {"values": [...]} | {"count": n}
nlohmann::ordered_json denotation_to_json(const KnowledgeBase& kb, const Denotation& d);

} // namespace kbplugin
