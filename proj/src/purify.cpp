#include "ontopure/purify.hpp"

#include <algorithm>
#include <unordered_map>

#include "ontopure/error.hpp"

namespace ontopure {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string id_str(NodeId id) { return "#" + std::to_string(id.value); }

[[noreturn]] void inapplicable(const std::string& why) { throw OntologyError(ErrorCode::InapplicablePatch, why); }

void apply_add(Ontology& o, const AddOp& op) {
    const NodeId id = op.node.id;
    if (!id.valid()) inapplicable("add: invalid id");
    if (o.nodes.contains(id)) inapplicable("add: id " + id_str(id) + " already present");
    if (op.node.label.empty()) inapplicable("add: empty label");

    OntologyNode node = op.node;
    node.children.clear();
    if (!op.parent) {
        if (!o.empty()) inapplicable("add: only an empty ontology accepts a new root");
        node.parent.reset();
        o.root = id;
    } else {
        auto it = o.nodes.find(*op.parent);
        if (it == o.nodes.end()) inapplicable("add: parent " + id_str(*op.parent) + " not present");
        if (find_child_by_label(o, *op.parent, node.label) != nullptr)
            inapplicable("add: label '" + node.label + "' already used under " + id_str(*op.parent));
        node.parent = op.parent;
        it->second.children.push_back(id);
    }
    o.nodes.emplace(id, std::move(node));
    if (o.next_id <= id) o.next_id = NodeId{id.value + 1};
}

}  // namespace

std::string_view op_name(const PatchAction& action) noexcept {
    return std::visit(overloaded{[](const AddOp&) { return std::string_view("add"); },
                                 [](const DeleteOp&) { return std::string_view("delete"); },
                                 [](const ModifyOp&) { return std::string_view("modify"); },
                                 [](const MoveOp&) { return std::string_view("move"); },
                                 [](const SetHeaderOp&) { return std::string_view("setHeader"); }},
                      action);
}

void apply_patch_in_place(Ontology& o, const PatchOp& op) {
    try {
        std::visit(overloaded{
                       [&](const AddOp& a) { apply_add(o, a); },
                       [&](const DeleteOp& d) { delete_node(o, d.id, d.policy); },
                       [&](const ModifyOp& m) { modify_node(o, m.id, m.edit); },
                       [&](const MoveOp& m) { move_node(o, m.id, m.new_parent); },
                       [&](const SetHeaderOp& h) {
                           check_version_header(h.version);
                           o.domain = h.domain;
                           o.version = h.version;
                       },
                   },
                   op.action);
    } catch (const OntologyError& e) {
        if (e.code() == ErrorCode::InapplicablePatch) throw;
        inapplicable(std::string(op_name(op.action)) + " #" + std::to_string(op.seq) + ": " + e.what());
    }
}

Ontology apply_patch(const Ontology& ontology, const PatchOp& op) {
    Ontology copy = ontology;
    apply_patch_in_place(copy, op);
    return copy;
}

void order_children_like(Ontology& ontology, const Ontology& reference) {
    std::unordered_map<std::uint64_t, std::size_t> rank;
    for (const auto& [id, node] : reference.nodes) {
        for (std::size_t i = 0; i < node.children.size(); ++i) rank[node.children[i].value] = i;
    }
    auto pos = [&](NodeId id) {
        auto it = rank.find(id.value);
        return it == rank.end() ? reference.nodes.size() : it->second;
    };
    for (auto& [id, node] : ontology.nodes) {
        std::stable_sort(node.children.begin(), node.children.end(),
                         [&](NodeId a, NodeId b) { return pos(a) < pos(b); });
    }
}

namespace {

// One purification run. Each round walks the current mismatches and repairs
// them; a repair that is blocked (target parent not there yet, or the move
// would put a node under itself) waits for a later sweep of the same round.
class Purifier {
public:
    Purifier(const Ontology& local, const Ontology& reference) : work_(local), ref_(reference) {}

    PurifyResult run() {
        PurifyResult result;
        result.initial = find_mismatches(work_, ref_);
        check_roots();

        MismatchReport report = result.initial;
        const std::size_t bound = std::max<std::uint64_t>(report.total, 1);
        while (report.mismatched != 0) {
            if (++result.iterations > bound)
                throw OntologyError(ErrorCode::NonConvergence,
                                    "exceeded " + std::to_string(bound) + " purification rounds");
            round(report);
            MismatchReport next = find_mismatches(work_, ref_);
            if (next.mismatched >= report.mismatched)
                throw OntologyError(ErrorCode::NonConvergence, "round " + std::to_string(result.iterations) +
                                                                   " left M at " + std::to_string(next.mismatched));
            report = std::move(next);
        }

        if (work_.domain != ref_.domain || !(work_.version == ref_.version))
            emit(SetHeaderOp{ref_.domain, ref_.version});
        order_children_like(work_, ref_);

        result.final_report = find_mismatches(work_, ref_);
        result.purified = std::move(work_);
        result.log = std::move(log_);
        return result;
    }

private:
    void check_roots() const {
        if (ref_.empty()) {
            if (!work_.empty()) throw OntologyError(ErrorCode::RootMismatch, "reference is empty");
            return;
        }
        if (!work_.empty() && work_.root != ref_.root)
            throw OntologyError(ErrorCode::RootMismatch, "local root " + id_str(*work_.root) +
                                                             " differs from reference root " + id_str(*ref_.root));
    }

    void emit(PatchAction action) {
        PatchOp op{log_.size() + 1, std::move(action)};
        apply_patch_in_place(work_, op);
        log_.push_back(std::move(op));
    }

    // Parks a node under a label no reference concept uses, freeing its real
    // label for a sibling. The node is mismatched, so a later repair sets its
    // final label.
    void park(NodeId id) {
        NodeEdit edit;
        edit.label = "~pending-" + std::to_string(id.value);
        emit(ModifyOp{id, std::move(edit)});
    }

    // Same parent and label as in the reference.
    bool settled(const OntologyNode& n) const {
        const auto* r = find_node(ref_, n.id);
        return r != nullptr && r->parent == n.parent && r->label == n.label;
    }

    void round(const MismatchReport& report) {
        std::vector<NodeId> pending;
        std::vector<NodeId> missing;
        for (const auto& m : report.mismatches) {
            if (m.has(MismatchKind::Missing)) {
                missing.push_back(m.id);
            } else {
                pending.push_back(m.id);
            }
        }
        // Missing nodes follow reference preorder so parents are added before children.
        std::sort(missing.begin(), missing.end());
        for_each_preorder(ref_, [&](const OntologyNode& n) {
            if (std::binary_search(missing.begin(), missing.end(), n.id)) pending.push_back(n.id);
        });

        bool progress = true;
        while (progress && !pending.empty()) {
            progress = false;
            std::vector<NodeId> blocked;
            for (NodeId id : pending) {
                if (repair(id)) {
                    progress = true;
                } else {
                    blocked.push_back(id);
                }
            }
            pending = std::move(blocked);
        }
    }

    bool repair(NodeId id) {
        const auto* local = find_node(work_, id);
        const auto* ref = find_node(ref_, id);
        if (local != nullptr && ref == nullptr) return remove_extra(*local);
        if (local == nullptr && ref != nullptr) return add_missing(*ref);
        if (local == nullptr) return true;  // already removed with an extra subtree

        if (local->parent != ref->parent) {
            const NodeId target = *ref->parent;
            if (find_node(work_, target) == nullptr || in_subtree(work_, id, target)) return false;
            if (const auto* clash = find_child_by_label(work_, target, local->label)) {
                park(settled(*clash) ? id : clash->id);
            }
            emit(MoveOp{id, target});
            local = find_node(work_, id);
        }

        NodeEdit edit;
        if (local->label != ref->label) edit.label = ref->label;
        if (local->synonyms != ref->synonyms) edit.synonyms = ref->synonyms;
        if (local->properties != ref->properties) edit.properties = ref->properties;
        if (edit.label && local->parent) {
            const auto* clash = find_child_by_label(work_, *local->parent, *edit.label);
            if (clash != nullptr && clash->id != id) park(clash->id);
        }
        if (!edit.empty()) emit(ModifyOp{id, std::move(edit)});
        return true;
    }

    bool remove_extra(const OntologyNode& node) {
        bool whole_subtree_extra = true;
        for_each_preorder(work_, node.id, [&](const OntologyNode& n) {
            if (ref_.nodes.contains(n.id)) whole_subtree_extra = false;
        });
        if (whole_subtree_extra) {
            emit(DeleteOp{node.id, DeletePolicy::Subtree});
            return true;
        }
        // Children that survive are spliced into the grandparent; any whose
        // label is taken there gets parked first.
        const NodeId parent = *node.parent;
        const NodeId self = node.id;
        const std::vector<NodeId> children = node.children;
        for (NodeId c : children) {
            const auto* clash = find_child_by_label(work_, parent, work_.nodes.at(c).label);
            if (clash != nullptr && clash->id != self) park(c);
        }
        emit(DeleteOp{self, DeletePolicy::ReparentChildren});
        return true;
    }

    bool add_missing(const OntologyNode& ref) {
        if (!ref.parent) {
            emit(AddOp{std::nullopt, ref});
            return true;
        }
        if (find_node(work_, *ref.parent) == nullptr) return false;
        if (const auto* clash = find_child_by_label(work_, *ref.parent, ref.label)) park(clash->id);
        OntologyNode snapshot = ref;
        snapshot.children.clear();
        emit(AddOp{ref.parent, std::move(snapshot)});
        return true;
    }

    Ontology work_;
    const Ontology& ref_;
    std::vector<PatchOp> log_;
};

}  // namespace

PurifyResult purify(const Ontology& local, const Ontology& reference) {
    return Purifier(local, reference).run();
}

}  // namespace ontopure
