#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ontopure {

// Every failure the library reports carries one of these codes. The names
// are part of the wire format (service error JSON, CLI messages).
enum class ErrorCode {
    // ontology-core
    UnknownParent,
    UnknownId,
    EmptyLabel,
    DuplicateSiblingLabel,
    CannotDeleteRoot,
    InvalidMove,
    // diff / purify
    IncompatibleVersions,
    NonConvergence,
    ZeroTotal,
    InvalidArgument,
    InapplicablePatch,
    RootMismatch,
    // owl-io
    XmlSyntax,
    JsonSyntax,
    UnknownElement,
    MissingElement,
    DuplicateId,
    DanglingSubclass,
    MultipleRoots,
    CyclicSubclass,
    MissingVersion,
    InvalidVersionHeader,
    // search
    EmptyQuery,
    DomainMismatch,
    // io
    Io,
};

std::string_view code_name(ErrorCode code) noexcept;

class OntologyError : public std::runtime_error {
public:
    OntologyError(ErrorCode code, std::string detail, std::string location = {});

    ErrorCode code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }
    // "line:col" for OWL input, a JSON pointer for JSON input, empty otherwise.
    const std::string& location() const noexcept { return location_; }

private:
    ErrorCode code_;
    std::string detail_;
    std::string location_;
};

}  // namespace ontopure
