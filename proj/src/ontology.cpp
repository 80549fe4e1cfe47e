#include "ontopure/ontology.hpp"

#include <algorithm>
#include <unordered_map>

#include "ontopure/error.hpp"

namespace ontopure {

namespace {

std::string id_str(NodeId id) { return "#" + std::to_string(id.value); }

OntologyNode& node_or_throw(Ontology& o, NodeId id, ErrorCode code) {
    auto it = o.nodes.find(id);
    if (it == o.nodes.end()) throw OntologyError(code, "no node " + id_str(id));
    return it->second;
}

// Label clash among the children of `parent`, ignoring `self`.
bool sibling_label_taken(const Ontology& o, NodeId parent, std::string_view label,
                         std::optional<NodeId> self = std::nullopt) {
    const auto* p = find_node(o, parent);
    if (p == nullptr) return false;
    for (NodeId c : p->children) {
        if (self && c == *self) continue;
        const auto* child = find_node(o, c);
        if (child != nullptr && child->label == label) return true;
    }
    return false;
}

std::size_t count_from(const Ontology& o, NodeId id) {
    const auto& node = o.nodes.at(id);
    std::size_t n = 1;
    for (NodeId c : node.children) n += count_from(o, c);
    return n;
}

void detach(Ontology& o, OntologyNode& node) {
    if (!node.parent) return;
    auto& siblings = o.nodes.at(*node.parent).children;
    siblings.erase(std::remove(siblings.begin(), siblings.end(), node.id), siblings.end());
}

}  // namespace

void check_version_header(const VersionHeader& h) {
    if (h.version.empty()) throw OntologyError(ErrorCode::MissingVersion, "empty version string");
    for (const auto& v : h.backward_compatible_with) {
        if (v == h.version)
            throw OntologyError(ErrorCode::InvalidVersionHeader, "version " + v + " lists itself as compatible");
        if (std::find(h.incompatible_with.begin(), h.incompatible_with.end(), v) != h.incompatible_with.end())
            throw OntologyError(ErrorCode::InvalidVersionHeader,
                                "version " + v + " is both backward compatible and incompatible");
    }
    for (const auto& v : h.incompatible_with) {
        if (v == h.version)
            throw OntologyError(ErrorCode::InvalidVersionHeader, "version " + v + " lists itself as incompatible");
    }
}

Ontology make_ontology(std::string domain, std::string root_label, VersionHeader version) {
    if (root_label.empty()) throw OntologyError(ErrorCode::EmptyLabel, "root label");
    Ontology o;
    o.domain = std::move(domain);
    o.version = std::move(version);
    OntologyNode root;
    root.id = NodeId{1};
    root.label = std::move(root_label);
    o.root = root.id;
    o.nodes.emplace(root.id, std::move(root));
    o.next_id = NodeId{2};
    return o;
}

std::size_t count_nodes(const Ontology& ontology) {
    if (!ontology.root) return 0;
    return count_from(ontology, *ontology.root);
}

const OntologyNode* find_node(const Ontology& ontology, NodeId id) {
    auto it = ontology.nodes.find(id);
    return it == ontology.nodes.end() ? nullptr : &it->second;
}

NodeId insert_node(Ontology& ontology, NodeId parent, std::string label, Synonyms synonyms, Properties properties) {
    auto& p = node_or_throw(ontology, parent, ErrorCode::UnknownParent);
    if (label.empty()) throw OntologyError(ErrorCode::EmptyLabel, "insert under " + id_str(parent));
    if (sibling_label_taken(ontology, parent, label))
        throw OntologyError(ErrorCode::DuplicateSiblingLabel, "'" + label + "' under " + id_str(parent));

    const NodeId id = ontology.next_id;
    ontology.next_id = NodeId{id.value + 1};
    p.children.push_back(id);

    OntologyNode node;
    node.id = id;
    node.label = std::move(label);
    node.synonyms = std::move(synonyms);
    node.parent = parent;
    node.properties = std::move(properties);
    ontology.nodes.emplace(id, std::move(node));
    return id;
}

std::vector<NodeId> delete_node(Ontology& ontology, NodeId id, DeletePolicy policy) {
    auto& node = node_or_throw(ontology, id, ErrorCode::UnknownId);
    if (ontology.root == id || !node.parent) throw OntologyError(ErrorCode::CannotDeleteRoot, id_str(id));
    auto& parent = ontology.nodes.at(*node.parent);

    if (policy == DeletePolicy::Subtree) {
        std::vector<NodeId> removed;
        for_each_preorder(ontology, id, [&](const OntologyNode& n) { removed.push_back(n.id); });
        detach(ontology, node);
        for (NodeId r : removed) ontology.nodes.erase(r);
        return removed;
    }

    for (NodeId c : node.children) {
        const auto& label = ontology.nodes.at(c).label;
        if (sibling_label_taken(ontology, parent.id, label, id))
            throw OntologyError(ErrorCode::DuplicateSiblingLabel,
                                "reparenting '" + label + "' into " + id_str(parent.id));
    }
    auto pos = std::find(parent.children.begin(), parent.children.end(), id);
    pos = parent.children.erase(pos);
    parent.children.insert(pos, node.children.begin(), node.children.end());
    for (NodeId c : node.children) ontology.nodes.at(c).parent = parent.id;
    ontology.nodes.erase(id);
    return {id};
}

const OntologyNode& modify_node(Ontology& ontology, NodeId id, const NodeEdit& edit) {
    auto& node = node_or_throw(ontology, id, ErrorCode::UnknownId);
    if (edit.label) {
        if (edit.label->empty()) throw OntologyError(ErrorCode::EmptyLabel, "modify " + id_str(id));
        if (node.parent && sibling_label_taken(ontology, *node.parent, *edit.label, id))
            throw OntologyError(ErrorCode::DuplicateSiblingLabel,
                                "'" + *edit.label + "' under " + id_str(*node.parent));
    }
    if (edit.label) node.label = *edit.label;
    if (edit.synonyms) node.synonyms = *edit.synonyms;
    if (edit.properties) node.properties = *edit.properties;
    return node;
}

void move_node(Ontology& ontology, NodeId id, NodeId new_parent) {
    auto& node = node_or_throw(ontology, id, ErrorCode::UnknownId);
    auto& target = node_or_throw(ontology, new_parent, ErrorCode::UnknownParent);
    if (!node.parent) throw OntologyError(ErrorCode::InvalidMove, "cannot move the root");
    if (in_subtree(ontology, id, new_parent))
        throw OntologyError(ErrorCode::InvalidMove, id_str(new_parent) + " lies under " + id_str(id));
    if (sibling_label_taken(ontology, new_parent, node.label, id))
        throw OntologyError(ErrorCode::DuplicateSiblingLabel, "'" + node.label + "' under " + id_str(new_parent));

    detach(ontology, node);
    target.children.push_back(id);
    node.parent = new_parent;
}

bool in_subtree(const Ontology& ontology, NodeId ancestor, NodeId id) {
    std::optional<NodeId> cur = id;
    // Bounded by the node count so a corrupted parent cycle cannot spin forever.
    for (std::size_t steps = 0; cur && steps <= ontology.nodes.size(); ++steps) {
        if (*cur == ancestor) return true;
        const auto* n = find_node(ontology, *cur);
        if (n == nullptr) return false;
        cur = n->parent;
    }
    return false;
}

void for_each_preorder(const Ontology& ontology, const std::function<void(const OntologyNode&)>& visit) {
    if (ontology.root) for_each_preorder(ontology, *ontology.root, visit);
}

void for_each_preorder(const Ontology& ontology, NodeId start, const std::function<void(const OntologyNode&)>& visit) {
    std::vector<NodeId> stack{start};
    while (!stack.empty()) {
        const NodeId id = stack.back();
        stack.pop_back();
        const auto* n = find_node(ontology, id);
        if (n == nullptr) continue;
        visit(*n);
        for (auto it = n->children.rbegin(); it != n->children.rend(); ++it) stack.push_back(*it);
    }
}

std::vector<std::string> label_path(const Ontology& ontology, NodeId id) {
    std::vector<std::string> path;
    const auto* n = find_node(ontology, id);
    while (n != nullptr && path.size() <= ontology.nodes.size()) {
        path.push_back(n->label);
        n = n->parent ? find_node(ontology, *n->parent) : nullptr;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

const OntologyNode* find_child_by_label(const Ontology& ontology, NodeId parent, std::string_view label) {
    const auto* p = find_node(ontology, parent);
    if (p == nullptr) return nullptr;
    for (NodeId c : p->children) {
        const auto* child = find_node(ontology, c);
        if (child != nullptr && child->label == label) return child;
    }
    return nullptr;
}

std::string_view violation_name(ViolationKind kind) noexcept {
    switch (kind) {
        case ViolationKind::InvalidId: return "InvalidId";
        case ViolationKind::KeyMismatch: return "KeyMismatch";
        case ViolationKind::EmptyLabel: return "EmptyLabel";
        case ViolationKind::MissingRoot: return "MissingRoot";
        case ViolationKind::RootHasParent: return "RootHasParent";
        case ViolationKind::MultipleRoots: return "MultipleRoots";
        case ViolationKind::DanglingParent: return "DanglingParent";
        case ViolationKind::DanglingChild: return "DanglingChild";
        case ViolationKind::ParentChildInconsistency: return "ParentChildInconsistency";
        case ViolationKind::DuplicateChild: return "DuplicateChild";
        case ViolationKind::Cycle: return "Cycle";
        case ViolationKind::DuplicateSiblingLabel: return "DuplicateSiblingLabel";
        case ViolationKind::StaleNextId: return "StaleNextId";
    }
    return "Unknown";
}

std::vector<Violation> validate(const Ontology& o) {
    std::vector<Violation> out;
    auto report = [&](ViolationKind k, NodeId id, std::string detail) {
        out.push_back({k, id, std::move(detail)});
    };

    if (o.nodes.empty()) {
        if (o.root) report(ViolationKind::MissingRoot, *o.root, "root " + id_str(*o.root) + " is not in the index");
        return out;
    }
    if (!o.root) {
        report(ViolationKind::MissingRoot, NodeId{}, "no root recorded");
    } else if (!o.nodes.contains(*o.root)) {
        report(ViolationKind::MissingRoot, *o.root, "root " + id_str(*o.root) + " is not in the index");
    }

    NodeId max_id{};
    for (const auto& [key, node] : o.nodes) {
        max_id = std::max(max_id, key);
        if (!key.valid() || !node.id.valid()) report(ViolationKind::InvalidId, key, "IDs must be >= 1");
        if (key != node.id)
            report(ViolationKind::KeyMismatch, key, "index key " + id_str(key) + " holds node " + id_str(node.id));
        if (node.label.empty()) report(ViolationKind::EmptyLabel, key, "node " + id_str(key) + " has no label");

        if (!node.parent) {
            if (o.root && key != *o.root)
                report(ViolationKind::MultipleRoots, key, "node " + id_str(key) + " has no parent");
        } else {
            if (o.root && key == *o.root)
                report(ViolationKind::RootHasParent, key, "root has parent " + id_str(*node.parent));
            const auto* p = find_node(o, *node.parent);
            if (p == nullptr) {
                report(ViolationKind::DanglingParent, key,
                       "node " + id_str(key) + " points at missing parent " + id_str(*node.parent));
            } else if (std::find(p->children.begin(), p->children.end(), key) == p->children.end()) {
                report(ViolationKind::ParentChildInconsistency, key,
                       "node " + id_str(key) + " is not among the children of " + id_str(p->id));
            }
        }

        std::vector<NodeId> seen;
        std::vector<std::string_view> labels;
        for (NodeId c : node.children) {
            if (std::find(seen.begin(), seen.end(), c) != seen.end()) {
                report(ViolationKind::DuplicateChild, key, id_str(c) + " listed twice under " + id_str(key));
                continue;
            }
            seen.push_back(c);
            const auto* child = find_node(o, c);
            if (child == nullptr) {
                report(ViolationKind::DanglingChild, key, id_str(key) + " lists missing child " + id_str(c));
                continue;
            }
            // A child whose own parent link dangles is already reported above.
            if (child->parent != key && (!child->parent || o.nodes.contains(*child->parent))) {
                report(ViolationKind::ParentChildInconsistency, c,
                       id_str(c) + " is listed under " + id_str(key) + " but its parent is " +
                           (child->parent ? id_str(*child->parent) : std::string("absent")));
            }
            if (std::find(labels.begin(), labels.end(), child->label) != labels.end()) {
                report(ViolationKind::DuplicateSiblingLabel, c, "'" + child->label + "' repeats under " + id_str(key));
            }
            labels.push_back(child->label);
        }
    }

    // Parent-link cycles: everything else that can make a node unreachable
    // (dangling or missing parents) is reported above.
    enum class Mark : unsigned char { None, Active, Done };
    std::unordered_map<std::uint64_t, Mark> mark;
    for (const auto& [key, node] : o.nodes) {
        if (mark[key.value] != Mark::None) continue;
        std::vector<NodeId> chain;
        std::optional<NodeId> cur = key;
        while (cur) {
            auto& m = mark[cur->value];
            if (m == Mark::Done) break;
            if (m == Mark::Active) {
                auto start = std::find(chain.begin(), chain.end(), *cur);
                const NodeId smallest = *std::min_element(start, chain.end());
                report(ViolationKind::Cycle, smallest, "parent links loop through " + id_str(smallest));
                break;
            }
            m = Mark::Active;
            chain.push_back(*cur);
            const auto* n = find_node(o, *cur);
            cur = n != nullptr ? n->parent : std::nullopt;
            if (cur && !o.nodes.contains(*cur)) break;
        }
        for (NodeId c : chain) mark[c.value] = Mark::Done;
    }

    if (o.next_id <= max_id)
        report(ViolationKind::StaleNextId, o.next_id,
               "next id " + std::to_string(o.next_id.value) + " <= largest id " + std::to_string(max_id.value));
    return out;
}

bool canonically_equal(const Ontology& a, const Ontology& b) {
    if (a.domain != b.domain || !(a.version == b.version) || a.root != b.root) return false;
    if (a.nodes.size() != b.nodes.size()) return false;
    for (auto ia = a.nodes.begin(), ib = b.nodes.begin(); ia != a.nodes.end(); ++ia, ++ib) {
        const auto& x = ia->second;
        const auto& y = ib->second;
        if (ia->first != ib->first || x.label != y.label || x.parent != y.parent || x.synonyms != y.synonyms ||
            x.properties != y.properties)
            return false;
    }
    return true;
}

}  // namespace ontopure
