#include "websample/pagerank.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "websample/errors.hpp"

namespace websample {

namespace {

void build_csr(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges, bool reverse,
               std::vector<std::size_t>& offsets, std::vector<NodeId>& targets) {
    offsets.assign(n + 1, 0);
    for (const auto& [u, v] : edges) ++offsets[(reverse ? v : u) + 1];
    for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
    targets.resize(edges.size());
    std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
    for (const auto& [u, v] : edges) {
        if (reverse) {
            targets[cursor[v]++] = u;
        } else {
            targets[cursor[u]++] = v;
        }
    }
}

} // namespace

Digraph::Digraph(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
    for (const auto& [u, v] : edges) {
        if (u >= n || v >= n) throw ParameterError("edge endpoint out of range");
    }
    build_csr(n, edges, false, out_offsets_, out_targets_);
    build_csr(n, edges, true, in_offsets_, in_sources_);
}

Digraph Digraph::from_webgraph(const WebGraph& graph) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(graph.edge_count());
    for (NodeId u = 0; u < graph.node_count(); ++u) {
        for (NodeId v : graph.out(u)) edges.emplace_back(u, v);
    }
    return Digraph(graph.node_count(), edges);
}

Digraph Digraph::induced(const WebGraph& graph, std::span<const NodeId> nodes) {
    std::unordered_map<NodeId, NodeId> local;
    local.reserve(nodes.size());
    for (NodeId i = 0; i < nodes.size(); ++i) {
        if (!local.emplace(nodes[i], i).second) throw ParameterError("duplicate node in induced subgraph");
    }
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId i = 0; i < nodes.size(); ++i) {
        for (NodeId head : graph.out(nodes[i])) {
            if (auto it = local.find(head); it != local.end()) edges.emplace_back(i, it->second);
        }
    }
    return Digraph(nodes.size(), edges);
}

std::span<const NodeId> Digraph::out(NodeId v) const {
    return {out_targets_.data() + out_offsets_[v], out_offsets_[v + 1] - out_offsets_[v]};
}

std::span<const NodeId> Digraph::in(NodeId v) const {
    return {in_sources_.data() + in_offsets_[v], in_offsets_[v + 1] - in_offsets_[v]};
}

namespace {

// Sums f(v) over fixed-size blocks so the rounding, and therefore the
// scores, do not depend on the thread count.
constexpr std::int64_t kSumBlock = 4096;

template <class F>
double blocked_sum(std::int64_t n, F&& f) {
    const std::int64_t blocks = (n + kSumBlock - 1) / kSumBlock;
    std::vector<double> partial(blocks, 0.0);
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < blocks; ++b) {
        double s = 0.0;
        for (std::int64_t v = b * kSumBlock; v < std::min(n, (b + 1) * kSumBlock); ++v) s += f(v);
        partial[b] = s;
    }
    double total = 0.0;
    for (double s : partial) total += s;
    return total;
}

} // namespace

PageRankResult pagerank(const Digraph& graph, double d, double tolerance, std::size_t max_iterations) {
    const auto n = static_cast<std::int64_t>(graph.node_count());
    PageRankResult result;
    if (n == 0) {
        result.converged = true;
        return result;
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    std::vector<double> rank(n, inv_n), next(n), share(n);

    while (result.iterations < max_iterations) {
        const double dangling = blocked_sum(n, [&](std::int64_t v) {
            const auto deg = graph.out_degree(static_cast<NodeId>(v));
            share[v] = deg == 0 ? 0.0 : rank[v] / static_cast<double>(deg);
            return deg == 0 ? rank[v] : 0.0;
        });
        const double base = d * inv_n + (1.0 - d) * dangling * inv_n;
        const double residual = blocked_sum(n, [&](std::int64_t v) {
            double pulled = 0.0;
            for (NodeId u : graph.in(static_cast<NodeId>(v))) pulled += share[u];
            next[v] = base + (1.0 - d) * pulled;
            return std::abs(next[v] - rank[v]);
        });
        rank.swap(next);
        ++result.iterations;
        result.residual = residual;
        if (residual < tolerance) {
            result.converged = true;
            break;
        }
    }
    result.scores = std::move(rank);
    return result;
}

PageRankResult pagerank_serial(const Digraph& graph, double d, double tolerance, std::size_t max_iterations) {
    const std::size_t n = graph.node_count();
    PageRankResult result;
    if (n == 0) {
        result.converged = true;
        return result;
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    std::vector<double> rank(n, inv_n), next(n);

    while (result.iterations < max_iterations) {
        double dangling = 0.0;
        std::fill(next.begin(), next.end(), 0.0);
        for (NodeId u = 0; u < n; ++u) {
            const auto heads = graph.out(u);
            if (heads.empty()) {
                dangling += rank[u];
                continue;
            }
            const double share = rank[u] / static_cast<double>(heads.size());
            for (NodeId v : heads) next[v] += share;
        }
        const double base = d * inv_n + (1.0 - d) * dangling * inv_n;
        double residual = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            next[v] = base + (1.0 - d) * next[v];
            residual += std::abs(next[v] - rank[v]);
        }
        rank.swap(next);
        ++result.iterations;
        result.residual = residual;
        if (residual < tolerance) {
            result.converged = true;
            break;
        }
    }
    result.scores = std::move(rank);
    return result;
}

} // namespace websample
