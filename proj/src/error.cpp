#include "ontopure/error.hpp"

namespace ontopure {

std::string_view code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::UnknownParent: return "UnknownParent";
        case ErrorCode::UnknownId: return "UnknownId";
        case ErrorCode::EmptyLabel: return "EmptyLabel";
        case ErrorCode::DuplicateSiblingLabel: return "DuplicateSiblingLabel";
        case ErrorCode::CannotDeleteRoot: return "CannotDeleteRoot";
        case ErrorCode::InvalidMove: return "InvalidMove";
        case ErrorCode::IncompatibleVersions: return "IncompatibleVersions";
        case ErrorCode::NonConvergence: return "NonConvergence";
        case ErrorCode::ZeroTotal: return "ZeroTotal";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::InapplicablePatch: return "InapplicablePatch";
        case ErrorCode::RootMismatch: return "RootMismatch";
        case ErrorCode::XmlSyntax: return "XmlSyntax";
        case ErrorCode::JsonSyntax: return "JsonSyntax";
        case ErrorCode::UnknownElement: return "UnknownElement";
        case ErrorCode::MissingElement: return "MissingElement";
        case ErrorCode::DuplicateId: return "DuplicateId";
        case ErrorCode::DanglingSubclass: return "DanglingSubclass";
        case ErrorCode::MultipleRoots: return "MultipleRoots";
        case ErrorCode::CyclicSubclass: return "CyclicSubclass";
        case ErrorCode::MissingVersion: return "MissingVersion";
        case ErrorCode::InvalidVersionHeader: return "InvalidVersionHeader";
        case ErrorCode::EmptyQuery: return "EmptyQuery";
        case ErrorCode::DomainMismatch: return "DomainMismatch";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

namespace {

std::string compose(ErrorCode code, const std::string& detail, const std::string& location) {
    std::string msg(code_name(code));
    if (!location.empty()) msg += " at " + location;
    if (!detail.empty()) msg += ": " + detail;
    return msg;
}

}  // namespace

OntologyError::OntologyError(ErrorCode code, std::string detail, std::string location)
    : std::runtime_error(compose(code, detail, location)),
      code_(code),
      detail_(std::move(detail)),
      location_(std::move(location)) {}

}  // namespace ontopure
