#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "websample/webgraph.hpp"

namespace websample {

inline constexpr std::size_t kMaxUrlLength = 300;  // encoded characters
inline constexpr std::size_t kMaxRedirects = 10;
inline constexpr std::size_t kMaxInlinks = 10;

enum class FetchFailure : std::uint8_t { TooLongUrl, FetchFail, Timeout, RedirectLimit, RedirectLoop };

std::string_view to_string(FetchFailure failure);

struct RedirectResolution {
    /// Requested node first, final node last. Holds at most kMaxRedirects + 1
    /// entries on success.
    std::vector<NodeId> chain;
    NodeId final = 0;
    bool truncation_applied = false;
    bool truncation_undone = false;
    std::optional<FetchFailure> failure;

    bool ok() const { return !failure.has_value(); }
};

struct FetchOutcome {
    std::optional<FetchFailure> failure;
    NodeId final = 0;
    std::span<const NodeId> outlinks;

    bool fetched() const { return !failure.has_value(); }
};

/// The URL a walker ends up at: truncated at '?' when truncation stuck.
std::string effective_url(const WebGraph& graph, const RedirectResolution& resolution);

/// Simulated fetchable web over an immutable graph.
///
/// Every query is a pure function of (graph, node, seed); resolutions are
/// computed once at construction so concurrent walkers only read. The graph
/// must outlive the environment.
class Environment {
public:
    Environment(const WebGraph& graph, std::uint64_t seed);

    const WebGraph& graph() const { return *graph_; }
    std::uint64_t seed() const { return seed_; }

    /// URL length check, behavior check, redirect chain, truncation, in that order.
    FetchOutcome fetch(NodeId node) const;
    const RedirectResolution& resolve_redirects(NodeId node) const { return resolutions_.at(node); }
    bool fetchable(NodeId node) const { return resolutions_.at(node).ok(); }

    /// Uniform sample without replacement of at most kMaxInlinks in-edges,
    /// pooled over the node and every page whose redirect chain ends at it.
    std::vector<NodeId> retrieve_inlinks(NodeId node) const;

    /// True in-edge sources of `node`, one entry per edge.
    std::span<const NodeId> in_edges(NodeId node) const;
    /// Pages (other than `node`) whose redirect chain resolves to `node`.
    std::span<const NodeId> redirect_aliases(NodeId node) const;

private:
    RedirectResolution compute_resolution(NodeId node) const;

    const WebGraph* graph_;
    std::uint64_t seed_;
    std::vector<RedirectResolution> resolutions_;
    std::vector<std::size_t> in_offsets_;
    std::vector<NodeId> in_sources_;
    std::vector<std::size_t> alias_offsets_;
    std::vector<NodeId> aliases_;
};

} // namespace websample
