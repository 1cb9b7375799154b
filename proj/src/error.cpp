#include "kbplugin/error.hpp"

namespace kbplugin {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Reference: return "reference";
    case ErrorKind::Cycle: return "cycle";
    case ErrorKind::UnknownEntity: return "unknown_entity";
    case ErrorKind::UnknownRelation: return "unknown_relation";
    case ErrorKind::UnknownConcept: return "unknown_concept";
    case ErrorKind::ReservedRelation: return "reserved_relation";
    case ErrorKind::Syntax: return "syntax";
    case ErrorKind::NameResolution: return "name_resolution";
    case ErrorKind::StackUnderflow: return "stack_underflow";
    case ErrorKind::Type: return "type";
    case ErrorKind::NonSingletonValue: return "non_singleton_value";
    case ErrorKind::Structure: return "structure";
    case ErrorKind::Seed: return "seed";
    case ErrorKind::Transport: return "transport";
    case ErrorKind::MalformedResponse: return "malformed_response";
    case ErrorKind::LengthMismatch: return "length_mismatch";
    case ErrorKind::NoFinished: return "no_finished_hypothesis";
    case ErrorKind::Timeout: return "timeout";
    case ErrorKind::Coverage: return "coverage";
    case ErrorKind::UnresolvableArgument: return "unresolvable_argument";
    case ErrorKind::NoConcept: return "no_concept";
    case ErrorKind::Argument: return "argument";
    case ErrorKind::Io: return "io";
    }
    return "unknown";
}

} // namespace kbplugin
