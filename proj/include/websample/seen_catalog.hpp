#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "websample/webgraph.hpp"

namespace websample {

/// Seen pages grouped domain -> host -> page, in insertion order.
///
/// A page is seen once it is visited or is the head of an outlink of a
/// visited page. Jumps pick a seen domain uniformly, then a seen host in it,
/// then a seen page on that host. Insertion order is what makes the draws
/// reproducible, so writers must insert in a deterministic order.
class SeenCatalog {
public:
    explicit SeenCatalog(const WebGraph& graph);

    /// Insert-if-absent; returns true when the page was new.
    bool add_seen(NodeId node);
    /// Marks the page visited and all heads of its outlinks seen.
    void record_visit(NodeId node);

    bool seen(NodeId node) const { return seen_.at(node) != 0; }
    bool visited(NodeId node) const { return visited_.at(node) != 0; }
    bool empty() const { return seen_count_ == 0; }

    std::size_t seen_count() const { return seen_count_; }
    std::size_t visited_count() const { return visited_count_; }
    std::size_t domain_count() const { return domains_.size(); }
    std::size_t host_count() const { return host_count_; }

    /// Three-level uniform draw; empty catalog yields nullopt.
    std::optional<NodeId> draw(std::mt19937_64& rng) const;

private:
    struct HostEntry {
        std::uint32_t host;
        std::vector<NodeId> pages;
    };
    struct DomainEntry {
        std::vector<HostEntry> hosts;
    };

    const WebGraph* graph_;
    std::vector<std::uint8_t> seen_;
    std::vector<std::uint8_t> visited_;
    std::vector<std::int32_t> domain_slot_;  // graph domain id -> index in domains_
    std::vector<std::int32_t> host_slot_;    // graph host id -> index in its DomainEntry
    std::vector<DomainEntry> domains_;
    std::size_t seen_count_ = 0;
    std::size_t visited_count_ = 0;
    std::size_t host_count_ = 0;
};

} // namespace websample
