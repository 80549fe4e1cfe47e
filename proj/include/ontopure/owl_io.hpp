#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ontopure/ontology.hpp"

namespace ontopure {

// One class as written in a document, before any structural checking.
struct OwlClass {
    NodeId id;
    std::string label;
    std::optional<NodeId> subclass_of;
    Synonyms synonyms;
    Properties properties;
    std::string location;  // "line:col" or JSON pointer
};

struct OwlDocument {
    VersionHeader header;
    std::string domain;
    std::vector<OwlClass> classes;  // document order
};

// Syntax and vocabulary only: XmlSyntax, UnknownElement, MissingElement,
// MissingVersion, DuplicateId.
OwlDocument read_owl_document(std::string_view text);
OwlDocument read_json_document(std::string_view text);

// Structural checks on top of the readers: DanglingSubclass, MultipleRoots,
// CyclicSubclass, EmptyLabel, DuplicateSiblingLabel, InvalidVersionHeader.
// Children are ordered by ascending ID and next_id = max ID + 1.
Ontology build_ontology(const OwlDocument& document);

// Links whatever the document says without rejecting anything, so `validate`
// can list every problem of a broken file.
Ontology assemble_unchecked(const OwlDocument& document);

Ontology parse_owl(std::string_view text);
std::string serialize_owl(const Ontology& ontology);

Ontology parse_json(std::string_view text);
std::string serialize_json(const Ontology& ontology);

enum class Format { Owl, Json };

// '<' after leading whitespace means OWL, anything else JSON.
Format sniff_format(std::string_view text);
// .owl/.rdf/.xml map to OWL, everything else to JSON.
Format format_for_path(const std::filesystem::path& path);

Ontology parse_ontology(std::string_view text, std::optional<Format> format = std::nullopt);
std::string serialize(const Ontology& ontology, Format format);

// File helpers. Io errors name the path.
std::string read_text_file(const std::filesystem::path& path);
Ontology load_ontology(const std::filesystem::path& path, std::optional<Format> format = std::nullopt);

}  // namespace ontopure
