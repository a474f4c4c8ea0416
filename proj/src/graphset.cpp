#include "tgdb/graphset.hpp"

#include <string>

namespace tgdb {

void GraphSet::on_node_added(Uid node) {
    if (node_rep_.contains(node)) return;
    GraphComponent c;
    c.representative = node;
    c.nodes.insert(node);
    components_.set(node, std::move(c));
    node_rep_.set(node, node);
}

void GraphSet::on_edge_added(Uid edge, Uid leaving, Uid arriving) {
    on_node_added(leaving);
    on_node_added(arriving);
    edge_ends_.set(edge, {leaving, arriving});

    Uid ra = *node_rep_.find(leaving);
    Uid rb = *node_rep_.find(arriving);
    if (ra == rb) {
        GraphComponent c = *components_.find(ra);
        c.edges.insert(edge);
        components_.set(ra, std::move(c));
        return;
    }
    // Fold the smaller component into the larger one.
    GraphComponent big = *components_.find(ra);
    GraphComponent small = *components_.find(rb);
    if (big.nodes.size() + big.edges.size() < small.nodes.size() + small.edges.size())
        std::swap(big, small);
    components_.erase(big.representative);
    components_.erase(small.representative);
    for (Uid n : small.nodes) big.nodes.insert(n);
    for (Uid e : small.edges) big.edges.insert(e);
    big.edges.insert(edge);
    big.representative = std::min(big.representative, small.representative);
    for (Uid n : big.nodes) {
        // Only nodes whose representative changed need rewriting.
        if (*node_rep_.find(n) != big.representative) node_rep_.set(n, big.representative);
    }
    components_.set(big.representative, std::move(big));
}

void GraphSet::on_edge_removed(Uid edge) {
    const auto* ends = edge_ends_.find(edge);
    if (!ends) return;
    Uid rep = *node_rep_.find(ends->first);
    dissolve_and_rebuild(rep, 0, edge);
}

void GraphSet::on_node_removed(Uid node) {
    const Uid* rep = node_rep_.find(node);
    if (!rep) return;
    dissolve_and_rebuild(*rep, node, 0);
}

void GraphSet::dissolve_and_rebuild(Uid rep, Uid skip_node, Uid skip_edge) {
    GraphComponent old = *components_.find(rep);
    components_.erase(rep);
    for (Uid n : old.nodes) node_rep_.erase(n);
    std::vector<std::pair<Uid, std::pair<Uid, Uid>>> edges;
    for (Uid e : old.edges) {
        auto ends = *edge_ends_.find(e);
        edge_ends_.erase(e);
        if (e == skip_edge || ends.first == skip_node || ends.second == skip_node) continue;
        edges.emplace_back(e, ends);
    }
    for (Uid n : old.nodes)
        if (n != skip_node) on_node_added(n);
    for (const auto& [e, ends] : edges) on_edge_added(e, ends.first, ends.second);
}

std::vector<GraphComponent> GraphSet::components() const {
    std::vector<GraphComponent> out;
    out.reserve(components_.size());
    for (auto it = components_.begin(); it != components_.end(); ++it) out.push_back(it.value());
    return out;
}

const GraphComponent& GraphSet::component_of(Uid node) const {
    const Uid* rep = node_rep_.find(node);
    if (!rep) throw ExecutionError("node " + std::to_string(node) + " is not in any graph");
    return *components_.find(*rep);
}

}  // namespace tgdb
