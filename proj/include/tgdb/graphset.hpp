#pragma once
// Registry of the disjoint graphs formed by committed nodes and edges.
//
// Each component is identified by its representative, the lowest node uid
// it contains. Adding a node creates a singleton; adding an edge merges the
// components of its endpoints. Removing an edge (or node) dissolves its
// component and re-adds the remaining members, which leaves one or two
// components.

#include <utility>
#include <vector>

#include "tgdb/error.hpp"
#include "tgdb/pmap.hpp"

namespace tgdb {

struct GraphComponent {
    Uid representative = 0;
    PSet<Uid> nodes;
    PSet<Uid> edges;

    bool operator==(const GraphComponent&) const = default;
};

class GraphSet {
public:
    void on_node_added(Uid node);
    void on_node_removed(Uid node);
    void on_edge_added(Uid edge, Uid leaving, Uid arriving);
    void on_edge_removed(Uid edge);

    // Components ordered by representative.
    std::vector<GraphComponent> components() const;
    // Throws ExecutionError for a uid that is not a registered node.
    const GraphComponent& component_of(Uid node) const;
    bool contains_node(Uid node) const { return node_rep_.contains(node); }
    std::size_t size() const { return components_.size(); }

private:
    void dissolve_and_rebuild(Uid rep, Uid skip_node, Uid skip_edge);

    PMap<Uid, Uid> node_rep_;
    PMap<Uid, GraphComponent> components_;
    PMap<Uid, std::pair<Uid, Uid>> edge_ends_;
};

}  // namespace tgdb
