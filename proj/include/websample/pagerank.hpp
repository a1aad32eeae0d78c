#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "websample/webgraph.hpp"

namespace websample {

/// Plain directed multigraph in CSR form, with the reverse adjacency kept for
/// pull-style iteration.
class Digraph {
public:
    Digraph() = default;
    Digraph(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges);

    static Digraph from_webgraph(const WebGraph& graph);
    /// Subgraph induced by `nodes` (relabelled 0..k-1 in the given order);
    /// edges leaving the set are dropped.
    static Digraph induced(const WebGraph& graph, std::span<const NodeId> nodes);

    std::size_t node_count() const { return out_offsets_.size() - 1; }
    std::size_t edge_count() const { return out_targets_.size(); }
    std::span<const NodeId> out(NodeId v) const;
    std::span<const NodeId> in(NodeId v) const;
    std::size_t out_degree(NodeId v) const { return out_offsets_[v + 1] - out_offsets_[v]; }

private:
    std::vector<std::size_t> out_offsets_{0};
    std::vector<NodeId> out_targets_;
    std::vector<std::size_t> in_offsets_{0};
    std::vector<NodeId> in_sources_;
};

struct PageRankResult {
    std::vector<double> scores;
    std::size_t iterations = 0;
    double residual = 0.0;  // L1 change of the last iteration
    bool converged = false;
};

inline constexpr double kPageRankTolerance = 1e-10;
inline constexpr std::size_t kPageRankMaxIterations = 200;

/// PageRank with teleport probability `d`: from v, jump to a uniform node with
/// probability d, otherwise follow a uniform outlink (multiplicity counts).
/// Dangling nodes jump uniformly. Iterates until the L1 residual drops below
/// `tolerance` or `max_iterations` is reached; a non-converged result still
/// carries the last iterate.
PageRankResult pagerank(const Digraph& graph, double d, double tolerance = kPageRankTolerance,
                        std::size_t max_iterations = kPageRankMaxIterations);

/// Push-style single-threaded reference.
PageRankResult pagerank_serial(const Digraph& graph, double d, double tolerance = kPageRankTolerance,
                               std::size_t max_iterations = kPageRankMaxIterations);

} // namespace websample
