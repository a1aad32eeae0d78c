#include "websample/seen_catalog.hpp"

namespace websample {

SeenCatalog::SeenCatalog(const WebGraph& graph)
    : graph_(&graph),
      seen_(graph.node_count(), 0),
      visited_(graph.node_count(), 0),
      domain_slot_(graph.domain_count(), -1),
      host_slot_(graph.host_count(), -1) {}

bool SeenCatalog::add_seen(NodeId node) {
    if (seen_.at(node)) return false;
    seen_[node] = 1;
    ++seen_count_;

    const auto domain = graph_->domain_id(node);
    if (domain_slot_[domain] < 0) {
        domain_slot_[domain] = static_cast<std::int32_t>(domains_.size());
        domains_.emplace_back();
    }
    DomainEntry& d = domains_[domain_slot_[domain]];
    const auto host = graph_->host_id(node);
    if (host_slot_[host] < 0) {
        host_slot_[host] = static_cast<std::int32_t>(d.hosts.size());
        d.hosts.push_back({host, {}});
        ++host_count_;
    }
    d.hosts[host_slot_[host]].pages.push_back(node);
    return true;
}

void SeenCatalog::record_visit(NodeId node) {
    add_seen(node);
    if (!visited_[node]) {
        visited_[node] = 1;
        ++visited_count_;
    }
    for (NodeId head : graph_->out(node)) add_seen(head);
}

std::optional<NodeId> SeenCatalog::draw(std::mt19937_64& rng) const {
    if (domains_.empty()) return std::nullopt;
    const auto& d = domains_[std::uniform_int_distribution<std::size_t>(0, domains_.size() - 1)(rng)];
    const auto& h = d.hosts[std::uniform_int_distribution<std::size_t>(0, d.hosts.size() - 1)(rng)];
    return h.pages[std::uniform_int_distribution<std::size_t>(0, h.pages.size() - 1)(rng)];
}

} // namespace websample
