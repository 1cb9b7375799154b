#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kbplugin {

enum class ErrorKind {
    // kb-core
    Parse,
    Reference,
    Cycle,
    UnknownEntity,
    UnknownRelation,
    UnknownConcept,
    ReservedRelation,
    // kopl-lang
    Syntax,
    NameResolution,
    StackUnderflow,
    Type,
    NonSingletonValue,
    Structure,
    // decoder / scorers
    Seed,
    Transport,
    MalformedResponse,
    LengthMismatch,
    NoFinished,
    Timeout,
    // augmentor / schema-data / cli
    Coverage,
    UnresolvableArgument,
    NoConcept,
    Argument,
    Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a machine-readable kind so
/// the CLI can emit structured diagnostics.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace kbplugin
