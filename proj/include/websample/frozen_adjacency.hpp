#pragma once

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

#include "websample/environment.hpp"

namespace websample {

/// A node's undirected neighborhood as captured on its first visit.
struct AdjacencyRecord {
    std::vector<NodeId> outlinks;
    std::vector<NodeId> inlinks;  // at most kMaxInlinks
    std::uint64_t frozen_at_step = 0;

    /// Real (non-selfloop) adjacency slots.
    std::size_t size() const { return outlinks.size() + inlinks.size(); }
};

/// Outlinks of the page plus its retrieved inlinks; pure in (env, node).
AdjacencyRecord make_adjacency_record(const Environment& env, NodeId node, std::uint64_t step);

/// Write-once store of adjacency records shared by parallel walkers.
///
/// Registration is lock-free: the first writer publishes its record and later
/// writers discard theirs. Since records are pure in (node, seed), every
/// walker observes the same adjacency no matter who wins; only
/// `frozen_at_step` reflects the winner.
class FrozenAdjacency {
public:
    explicit FrozenAdjacency(std::size_t node_count);
    ~FrozenAdjacency();
    FrozenAdjacency(const FrozenAdjacency&) = delete;
    FrozenAdjacency& operator=(const FrozenAdjacency&) = delete;

    const AdjacencyRecord& freeze(const Environment& env, NodeId node, std::uint64_t step);
    const AdjacencyRecord* find(NodeId node) const;
    const AdjacencyRecord& at(NodeId node) const;  // throws ConfigError if absent

    std::size_t node_count() const { return node_count_; }
    std::size_t size() const { return registered_.load(std::memory_order_relaxed); }

    /// `F <id> out=<csv> in=<csv> step=<t>` per registered node, ascending id.
    void write_snapshot(std::ostream& out) const;

private:
    std::size_t node_count_;
    std::unique_ptr<std::atomic<AdjacencyRecord*>[]> slots_;
    std::atomic<std::size_t> registered_{0};
};

enum class Regularization : std::uint8_t { A, B };

/// A: |adjacency| + 1 (one selfloop slot). B: `max`, with the selfloop
/// multiplicity max - |adjacency| left implicit. Throws ConfigError when
/// |adjacency| + 1 > max under B.
std::uint64_t modified_degree(const AdjacencyRecord& record, Regularization reg, std::uint64_t max);

} // namespace websample
