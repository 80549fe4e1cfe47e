#include "ontopure/owl_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "ontopure/error.hpp"
#include "ontopure/wire.hpp"

namespace ontopure {

namespace {

constexpr std::string_view kRdfNs = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
constexpr std::string_view kRdfsNs = "http://www.w3.org/2000/01/rdf-schema#";
constexpr std::string_view kOwlNs = "http://www.w3.org/2002/07/owl#";
constexpr std::string_view kDomNs = "urn:ontopure:dom#";

// ---------------------------------------------------------------------------
// Minimal XML reader: elements, attributes, text, comments, CDATA, the five
// predefined entities and character references. No DTDs, no namespace
// resolution (prefixes are matched literally).

struct XmlElement {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attrs;
    std::vector<XmlElement> children;
    std::string text;
    std::size_t offset = 0;

    const std::string* attr(std::string_view key) const {
        for (const auto& [k, v] : attrs)
            if (k == key) return &v;
        return nullptr;
    }
};

class XmlReader {
public:
    explicit XmlReader(std::string_view text) : src_(text) {
        line_starts_.push_back(0);
        for (std::size_t i = 0; i < src_.size(); ++i)
            if (src_[i] == '\n') line_starts_.push_back(i + 1);
    }

    XmlElement parse_document() {
        if (src_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
        skip_misc();
        if (at_end() || peek() != '<') fail("expected the root element");
        XmlElement root = parse_element();
        skip_misc();
        if (!at_end()) fail("content after the root element");
        return root;
    }

    std::string location(std::size_t offset) const {
        auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
        const std::size_t line = static_cast<std::size_t>(it - line_starts_.begin());
        const std::size_t col = offset - *(it - 1) + 1;
        return std::to_string(line) + ":" + std::to_string(col);
    }

private:
    [[noreturn]] void fail(const std::string& why) const { fail_at(pos_, why); }
    [[noreturn]] void fail_at(std::size_t offset, const std::string& why) const {
        throw OntologyError(ErrorCode::XmlSyntax, why, location(offset));
    }

    bool at_end() const { return pos_ >= src_.size(); }
    char peek() const { return src_[pos_]; }
    bool starts_with(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }

    void expect(std::string_view s) {
        if (!starts_with(s)) fail("expected '" + std::string(s) + "'");
        pos_ += s.size();
    }

    void skip_ws() {
        while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\n' || peek() == '\r')) ++pos_;
    }

    void skip_until(std::string_view terminator, std::string_view what) {
        const auto end = src_.find(terminator, pos_);
        if (end == std::string_view::npos) fail("unterminated " + std::string(what));
        pos_ = end + terminator.size();
    }

    // Whitespace, comments, processing instructions (including the XML declaration).
    void skip_misc() {
        for (;;) {
            skip_ws();
            if (starts_with("<!--")) {
                skip_until("-->", "comment");
            } else if (starts_with("<?")) {
                skip_until("?>", "processing instruction");
            } else if (starts_with("<!DOCTYPE")) {
                fail("DOCTYPE declarations are not supported");
            } else {
                return;
            }
        }
    }

    static bool name_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':' || c == '-' || c == '.' ||
               static_cast<unsigned char>(c) >= 0x80;
    }

    std::string parse_name() {
        const std::size_t start = pos_;
        while (!at_end() && name_char(peek())) ++pos_;
        if (start == pos_) fail("expected a name");
        return std::string(src_.substr(start, pos_ - start));
    }

    static void append_utf8(std::string& out, std::uint32_t cp) {
        if (cp < 0x80) {
            out += static_cast<char>(cp);
        } else if (cp < 0x800) {
            out += static_cast<char>(0xC0 | (cp >> 6));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        } else if (cp < 0x10000) {
            out += static_cast<char>(0xE0 | (cp >> 12));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        } else {
            out += static_cast<char>(0xF0 | (cp >> 18));
            out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        }
    }

    void parse_entity(std::string& out) {
        const std::size_t start = pos_;
        const auto semi = src_.find(';', pos_);
        if (semi == std::string_view::npos || semi - pos_ > 12) fail("unterminated entity reference");
        const std::string_view ref = src_.substr(pos_ + 1, semi - pos_ - 1);
        pos_ = semi + 1;
        if (ref == "lt") {
            out += '<';
        } else if (ref == "gt") {
            out += '>';
        } else if (ref == "amp") {
            out += '&';
        } else if (ref == "quot") {
            out += '"';
        } else if (ref == "apos") {
            out += '\'';
        } else if (ref.size() > 1 && ref[0] == '#') {
            std::uint32_t cp = 0;
            const bool hex = ref[1] == 'x';
            const auto digits = ref.substr(hex ? 2 : 1);
            auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), cp, hex ? 16 : 10);
            if (digits.empty() || ec != std::errc{} || p != digits.data() + digits.size() || cp == 0 ||
                cp > 0x10FFFF)
                fail_at(start, "bad character reference &" + std::string(ref) + ";");
            append_utf8(out, cp);
        } else {
            fail_at(start, "unknown entity &" + std::string(ref) + ";");
        }
    }

    std::string parse_attr_value() {
        if (at_end() || (peek() != '"' && peek() != '\'')) fail("expected a quoted attribute value");
        const char quote = peek();
        ++pos_;
        std::string value;
        for (;;) {
            if (at_end()) fail("unterminated attribute value");
            const char c = peek();
            if (c == quote) {
                ++pos_;
                return value;
            }
            if (c == '<') fail("'<' inside an attribute value");
            if (c == '&') {
                parse_entity(value);
            } else {
                value += c;
                ++pos_;
            }
        }
    }

    XmlElement parse_element() {
        XmlElement el;
        el.offset = pos_;
        expect("<");
        el.name = parse_name();
        for (;;) {
            const bool had_space = !at_end() && std::isspace(static_cast<unsigned char>(peek()));
            skip_ws();
            if (at_end()) fail("unterminated start tag <" + el.name + ">");
            if (starts_with("/>")) {
                pos_ += 2;
                return el;
            }
            if (peek() == '>') {
                ++pos_;
                break;
            }
            if (!had_space) fail("expected whitespace before attribute");
            const std::size_t attr_pos = pos_;
            std::string key = parse_name();
            skip_ws();
            expect("=");
            skip_ws();
            std::string value = parse_attr_value();
            if (el.attr(key) != nullptr) fail_at(attr_pos, "duplicate attribute " + key);
            el.attrs.emplace_back(std::move(key), std::move(value));
        }

        for (;;) {
            if (at_end()) fail_at(el.offset, "element <" + el.name + "> is never closed");
            if (starts_with("</")) {
                const std::size_t close_pos = pos_;
                pos_ += 2;
                const std::string name = parse_name();
                skip_ws();
                expect(">");
                if (name != el.name)
                    fail_at(close_pos, "closing </" + name + "> does not match <" + el.name + ">");
                return el;
            }
            if (starts_with("<!--")) {
                skip_until("-->", "comment");
            } else if (starts_with("<![CDATA[")) {
                pos_ += 9;
                const auto end = src_.find("]]>", pos_);
                if (end == std::string_view::npos) fail("unterminated CDATA section");
                el.text.append(src_.substr(pos_, end - pos_));
                pos_ = end + 3;
            } else if (starts_with("<?")) {
                skip_until("?>", "processing instruction");
            } else if (peek() == '<') {
                el.children.push_back(parse_element());
            } else if (peek() == '&') {
                parse_entity(el.text);
            } else {
                el.text += peek();
                ++pos_;
            }
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::vector<std::size_t> line_starts_;
};

// ---------------------------------------------------------------------------
// Vocabulary checks on the element tree.

class OwlReader {
public:
    explicit OwlReader(std::string_view text) : xml_(text) {}

    OwlDocument read() {
        const XmlElement root = xml_.parse_document();
        if (root.name != "rdf:RDF") unknown(root, "document element must be rdf:RDF");
        for (const auto& [key, value] : root.attrs) {
            if (key != "xmlns" && key.rfind("xmlns:", 0) != 0 && key != "xml:base")
                throw OntologyError(ErrorCode::UnknownElement, "attribute " + key + " on rdf:RDF", loc(root));
        }
        require_no_text(root);

        OwlDocument doc;
        const XmlElement* header = nullptr;
        std::map<std::uint64_t, std::string> seen;
        for (const auto& child : root.children) {
            if (child.name == "owl:Ontology") {
                if (header != nullptr) unknown(child, "a second owl:Ontology header");
                header = &child;
                read_header(child, doc);
            } else if (child.name == "owl:Class") {
                OwlClass cls = read_class(child);
                auto [it, fresh] = seen.emplace(cls.id.value, cls.location);
                if (!fresh)
                    throw OntologyError(ErrorCode::DuplicateId,
                                        "n" + std::to_string(cls.id.value) + " already defined at " + it->second,
                                        cls.location);
                doc.classes.push_back(std::move(cls));
            } else {
                unknown(child, "<" + child.name + "> is outside the supported subset");
            }
        }
        if (header == nullptr) throw OntologyError(ErrorCode::MissingElement, "no owl:Ontology header", loc(root));
        return doc;
    }

private:
    std::string loc(const XmlElement& el) const { return xml_.location(el.offset); }

    [[noreturn]] void unknown(const XmlElement& el, const std::string& why) const {
        throw OntologyError(ErrorCode::UnknownElement, why, loc(el));
    }

    void require_no_text(const XmlElement& el) const {
        if (el.text.find_first_not_of(" \t\r\n") != std::string::npos)
            throw OntologyError(ErrorCode::XmlSyntax, "unexpected text inside <" + el.name + ">", loc(el));
    }

    void allow_attrs(const XmlElement& el, std::initializer_list<std::string_view> allowed) const {
        for (const auto& [key, value] : el.attrs) {
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
                throw OntologyError(ErrorCode::UnknownElement, "attribute " + key + " on <" + el.name + ">", loc(el));
        }
    }

    // Leaf element holding only text.
    std::string text_of(const XmlElement& el) const {
        if (!el.children.empty()) unknown(el.children.front(), "<" + el.name + "> takes text only");
        return el.text;
    }

    void read_header(const XmlElement& el, OwlDocument& doc) const {
        allow_attrs(el, {"rdf:about"});
        require_no_text(el);
        bool have_version = false;
        bool have_domain = false;
        bool have_prior = false;
        for (const auto& child : el.children) {
            allow_attrs(child, {});
            if (child.name == "owl:versionInfo") {
                if (have_version) unknown(child, "repeated owl:versionInfo");
                have_version = true;
                doc.header.version = text_of(child);
            } else if (child.name == "owl:backwardCompatibleWith") {
                doc.header.backward_compatible_with.push_back(text_of(child));
            } else if (child.name == "owl:incompatibleWith" || child.name == "owl:inCompatibleWith") {
                doc.header.incompatible_with.push_back(text_of(child));
            } else if (child.name == "owl:priorVersion") {
                if (have_prior) unknown(child, "repeated owl:priorVersion");
                have_prior = true;
                doc.header.prior_version = text_of(child);
            } else if (child.name == "dom:domain") {
                if (have_domain) unknown(child, "repeated dom:domain");
                have_domain = true;
                doc.domain = text_of(child);
            } else {
                unknown(child, "<" + child.name + "> is outside the supported subset");
            }
        }
        if (!have_version || doc.header.version.empty())
            throw OntologyError(ErrorCode::MissingVersion, "owl:Ontology needs a non-empty owl:versionInfo", loc(el));
        if (!have_domain) throw OntologyError(ErrorCode::MissingElement, "owl:Ontology needs dom:domain", loc(el));
    }

    NodeId parse_ref(const XmlElement& el, std::string_view value, std::string_view prefix) const {
        std::uint64_t v = 0;
        const auto digits = value.substr(std::min(prefix.size(), value.size()));
        auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
        if (value.substr(0, prefix.size()) != prefix || digits.empty() || ec != std::errc{} ||
            p != digits.data() + digits.size() || v == 0)
            throw OntologyError(ErrorCode::XmlSyntax,
                                "'" + std::string(value) + "' is not of the form " + std::string(prefix) + "<id>",
                                loc(el));
        return NodeId{v};
    }

    OwlClass read_class(const XmlElement& el) const {
        allow_attrs(el, {"rdf:ID"});
        require_no_text(el);
        const auto* id = el.attr("rdf:ID");
        if (id == nullptr) throw OntologyError(ErrorCode::MissingElement, "owl:Class needs rdf:ID", loc(el));

        OwlClass cls;
        cls.location = loc(el);
        cls.id = parse_ref(el, *id, "n");
        bool have_label = false;
        for (const auto& child : el.children) {
            if (child.name == "rdfs:label") {
                allow_attrs(child, {});
                if (have_label) unknown(child, "repeated rdfs:label");
                have_label = true;
                cls.label = text_of(child);
            } else if (child.name == "rdfs:subClassOf") {
                allow_attrs(child, {"rdf:resource"});
                if (cls.subclass_of) unknown(child, "repeated rdfs:subClassOf");
                require_no_text(child);
                if (!child.children.empty()) unknown(child.children.front(), "rdfs:subClassOf must be empty");
                const auto* res = child.attr("rdf:resource");
                if (res == nullptr)
                    throw OntologyError(ErrorCode::MissingElement, "rdfs:subClassOf needs rdf:resource", loc(child));
                cls.subclass_of = parse_ref(child, *res, "#n");
            } else if (child.name == "dom:synonym") {
                allow_attrs(child, {});
                cls.synonyms.insert(text_of(child));
            } else if (child.name == "dom:property") {
                allow_attrs(child, {"key"});
                const auto* key = child.attr("key");
                if (key == nullptr)
                    throw OntologyError(ErrorCode::MissingElement, "dom:property needs a key", loc(child));
                if (!cls.properties.emplace(*key, text_of(child)).second)
                    throw OntologyError(ErrorCode::XmlSyntax, "repeated property key '" + *key + "'", loc(child));
            } else {
                unknown(child, "<" + child.name + "> is outside the supported subset");
            }
        }
        if (!have_label) throw OntologyError(ErrorCode::MissingElement, "owl:Class needs rdfs:label", loc(el));
        return cls;
    }

    XmlReader xml_;
};

void escape_into(std::string& out, std::string_view s, bool attribute) {
    for (char c : s) {
        const auto u = static_cast<unsigned char>(c);
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"':
                if (attribute) {
                    out += "&quot;";
                } else {
                    out += c;
                }
                break;
            default:
                if (u < 0x20 && c != '\n' && c != '\t') {
                    out += "&#" + std::to_string(u) + ";";
                } else if (c == '\r' || (attribute && (c == '\n' || c == '\t'))) {
                    out += "&#" + std::to_string(u) + ";";
                } else {
                    out += c;
                }
        }
    }
}

void text_element(std::string& out, int indent, std::string_view name, std::string_view text) {
    out.append(static_cast<std::size_t>(indent), ' ');
    out += '<';
    out += name;
    out += '>';
    escape_into(out, text, false);
    out += "</";
    out += name;
    out += ">\n";
}

}  // namespace

OwlDocument read_owl_document(std::string_view text) { return OwlReader(text).read(); }

Ontology assemble_unchecked(const OwlDocument& doc) {
    Ontology o;
    o.domain = doc.domain;
    o.version = doc.header;
    NodeId max_id{};
    for (const auto& cls : doc.classes) {
        OntologyNode n;
        n.id = cls.id;
        n.label = cls.label;
        n.synonyms = cls.synonyms;
        n.properties = cls.properties;
        n.parent = cls.subclass_of;
        max_id = std::max(max_id, cls.id);
        if (!n.parent && !o.root) o.root = n.id;
        o.nodes.emplace(n.id, std::move(n));
    }
    for (auto& [id, node] : o.nodes) {
        if (!node.parent) continue;
        auto it = o.nodes.find(*node.parent);
        if (it != o.nodes.end()) it->second.children.push_back(id);
    }
    o.next_id = NodeId{max_id.value + 1};
    return o;
}

Ontology build_ontology(const OwlDocument& doc) {
    check_version_header(doc.header);
    if (doc.classes.empty()) throw OntologyError(ErrorCode::MissingElement, "the document defines no class");

    std::unordered_map<std::uint64_t, const OwlClass*> by_id;
    for (const auto& cls : doc.classes) {
        if (!by_id.emplace(cls.id.value, &cls).second)
            throw OntologyError(ErrorCode::DuplicateId, "id " + std::to_string(cls.id.value), cls.location);
    }
    const OwlClass* root = nullptr;
    for (const auto& cls : doc.classes) {
        if (cls.label.empty()) throw OntologyError(ErrorCode::EmptyLabel, "class without label text", cls.location);
        if (!cls.subclass_of) {
            if (root != nullptr)
                throw OntologyError(ErrorCode::MultipleRoots,
                                    "n" + std::to_string(cls.id.value) + " and n" + std::to_string(root->id.value) +
                                        " both lack rdfs:subClassOf",
                                    cls.location);
            root = &cls;
        } else if (!by_id.contains(cls.subclass_of->value)) {
            throw OntologyError(ErrorCode::DanglingSubclass,
                                "n" + std::to_string(cls.id.value) + " refers to missing n" +
                                    std::to_string(cls.subclass_of->value),
                                cls.location);
        }
    }
    if (root == nullptr)
        throw OntologyError(ErrorCode::CyclicSubclass, "every class has a superclass, so the hierarchy loops");

    Ontology o = assemble_unchecked(doc);
    o.root = root->id;
    for (const auto& v : validate(o)) {
        const auto it = by_id.find(v.id.value);
        const std::string where = it == by_id.end() ? std::string() : it->second->location;
        switch (v.kind) {
            case ViolationKind::Cycle: throw OntologyError(ErrorCode::CyclicSubclass, v.detail, where);
            case ViolationKind::DuplicateSiblingLabel:
                throw OntologyError(ErrorCode::DuplicateSiblingLabel, v.detail, where);
            default: throw OntologyError(ErrorCode::InvalidArgument, v.detail, where);
        }
    }
    return o;
}

Ontology parse_owl(std::string_view text) { return build_ontology(read_owl_document(text)); }

std::string serialize_owl(const Ontology& o) {
    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<rdf:RDF xmlns:rdf=\"";
    out += kRdfNs;
    out += "\" xmlns:rdfs=\"";
    out += kRdfsNs;
    out += "\" xmlns:owl=\"";
    out += kOwlNs;
    out += "\" xmlns:dom=\"";
    out += kDomNs;
    out += "\">\n";

    out += "  <owl:Ontology rdf:about=\"\">\n";
    text_element(out, 4, "owl:versionInfo", o.version.version);
    for (const auto& v : o.version.backward_compatible_with) text_element(out, 4, "owl:backwardCompatibleWith", v);
    for (const auto& v : o.version.incompatible_with) text_element(out, 4, "owl:incompatibleWith", v);
    if (o.version.prior_version) text_element(out, 4, "owl:priorVersion", *o.version.prior_version);
    text_element(out, 4, "dom:domain", o.domain);
    out += "  </owl:Ontology>\n";

    for (const auto& [id, node] : o.nodes) {
        out += "  <owl:Class rdf:ID=\"n" + std::to_string(id.value) + "\">\n";
        text_element(out, 4, "rdfs:label", node.label);
        if (node.parent) out += "    <rdfs:subClassOf rdf:resource=\"#n" + std::to_string(node.parent->value) + "\"/>\n";
        for (const auto& s : node.synonyms) text_element(out, 4, "dom:synonym", s);
        for (const auto& [key, value] : node.properties) {
            out += "    <dom:property key=\"";
            escape_into(out, key, true);
            out += "\">";
            escape_into(out, value, false);
            out += "</dom:property>\n";
        }
        out += "  </owl:Class>\n";
    }
    out += "</rdf:RDF>\n";
    return out;
}

// ---------------------------------------------------------------------------
// Canonical JSON form.

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void json_error(ErrorCode code, const std::string& why, const std::string& pointer) {
    throw OntologyError(code, why, pointer.empty() ? std::string("/") : pointer);
}

const json& member(const json& obj, const char* key, const std::string& at, bool required, ErrorCode missing_code) {
    static const json null_value;
    auto it = obj.find(key);
    if (it == obj.end()) {
        if (required) json_error(missing_code, std::string("missing \"") + key + "\"", at);
        return null_value;
    }
    return *it;
}

std::string get_string(const json& v, const std::string& at) {
    if (!v.is_string()) json_error(ErrorCode::JsonSyntax, "expected a string", at);
    return v.get<std::string>();
}

std::vector<std::string> get_strings(const json& v, const std::string& at) {
    std::vector<std::string> out;
    if (v.is_null()) return out;
    if (!v.is_array()) json_error(ErrorCode::JsonSyntax, "expected an array of strings", at);
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(get_string(v[i], at + "/" + std::to_string(i)));
    return out;
}

NodeId get_id(const json& v, const std::string& at) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 1)
        json_error(ErrorCode::JsonSyntax, "expected a positive integer id", at);
    return NodeId{v.get<std::uint64_t>()};
}

void only_keys(const json& obj, std::initializer_list<std::string_view> keys, const std::string& at) {
    for (const auto& [k, v] : obj.items()) {
        if (std::find(keys.begin(), keys.end(), k) == keys.end())
            json_error(ErrorCode::UnknownElement, "unknown key \"" + k + "\"", at + "/" + k);
    }
}

}  // namespace

OwlDocument read_json_document(std::string_view text) {
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw OntologyError(ErrorCode::JsonSyntax, e.what(), "byte " + std::to_string(e.byte));
    }
    if (!root.is_object()) json_error(ErrorCode::JsonSyntax, "top level must be an object", "");
    only_keys(root, {"domain", "version", "nodes"}, "");

    OwlDocument doc;
    doc.domain = get_string(member(root, "domain", "", true, ErrorCode::MissingElement), "/domain");

    const json& version = member(root, "version", "", true, ErrorCode::MissingVersion);
    if (!version.is_object()) json_error(ErrorCode::JsonSyntax, "expected an object", "/version");
    only_keys(version, {"version", "backwardCompatibleWith", "incompatibleWith", "priorVersion"}, "/version");
    doc.header.version =
        get_string(member(version, "version", "/version", true, ErrorCode::MissingVersion), "/version/version");
    if (doc.header.version.empty()) json_error(ErrorCode::MissingVersion, "empty version", "/version/version");
    doc.header.backward_compatible_with = get_strings(
        member(version, "backwardCompatibleWith", "/version", false, ErrorCode::MissingElement),
        "/version/backwardCompatibleWith");
    doc.header.incompatible_with =
        get_strings(member(version, "incompatibleWith", "/version", false, ErrorCode::MissingElement),
                    "/version/incompatibleWith");
    const json& prior = member(version, "priorVersion", "/version", false, ErrorCode::MissingElement);
    if (!prior.is_null()) doc.header.prior_version = get_string(prior, "/version/priorVersion");

    const json& nodes = member(root, "nodes", "", true, ErrorCode::MissingElement);
    if (!nodes.is_array()) json_error(ErrorCode::JsonSyntax, "expected an array", "/nodes");
    std::map<std::uint64_t, std::string> seen;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const std::string at = "/nodes/" + std::to_string(i);
        const json& n = nodes[i];
        if (!n.is_object()) json_error(ErrorCode::JsonSyntax, "expected an object", at);
        only_keys(n, {"id", "label", "parent", "synonyms", "properties"}, at);

        OwlClass cls;
        cls.location = at;
        cls.id = get_id(member(n, "id", at, true, ErrorCode::MissingElement), at + "/id");
        cls.label = get_string(member(n, "label", at, true, ErrorCode::MissingElement), at + "/label");
        const json& parent = member(n, "parent", at, false, ErrorCode::MissingElement);
        if (!parent.is_null()) cls.subclass_of = get_id(parent, at + "/parent");
        for (auto& s : get_strings(member(n, "synonyms", at, false, ErrorCode::MissingElement), at + "/synonyms"))
            cls.synonyms.insert(std::move(s));
        const json& props = member(n, "properties", at, false, ErrorCode::MissingElement);
        if (!props.is_null()) {
            if (!props.is_object()) json_error(ErrorCode::JsonSyntax, "expected an object", at + "/properties");
            for (const auto& [k, v] : props.items()) cls.properties[k] = get_string(v, at + "/properties/" + k);
        }

        auto [it, fresh] = seen.emplace(cls.id.value, at);
        if (!fresh)
            json_error(ErrorCode::DuplicateId, "id " + std::to_string(cls.id.value) + " already used at " + it->second,
                       at + "/id");
        doc.classes.push_back(std::move(cls));
    }
    return doc;
}

Ontology parse_json(std::string_view text) { return build_ontology(read_json_document(text)); }

std::string serialize_json(const Ontology& o) { return ontology_to_json(o).dump(2) + "\n"; }

Format sniff_format(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n\xEF\xBB\xBF");
    return first != std::string_view::npos && text[first] == '<' ? Format::Owl : Format::Json;
}

Format format_for_path(const std::filesystem::path& path) {
    const auto ext = path.extension().string();
    return ext == ".owl" || ext == ".rdf" || ext == ".xml" ? Format::Owl : Format::Json;
}

Ontology parse_ontology(std::string_view text, std::optional<Format> format) {
    return format.value_or(sniff_format(text)) == Format::Owl ? parse_owl(text) : parse_json(text);
}

std::string serialize(const Ontology& ontology, Format format) {
    return format == Format::Owl ? serialize_owl(ontology) : serialize_json(ontology);
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw OntologyError(ErrorCode::Io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw OntologyError(ErrorCode::Io, "cannot read " + path.string());
    return ss.str();
}

Ontology load_ontology(const std::filesystem::path& path, std::optional<Format> format) {
    return parse_ontology(read_text_file(path), format);
}

}  // namespace ontopure
