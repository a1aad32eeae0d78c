#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "websample/errors.hpp"

namespace websample {

using NodeId = std::uint32_t;

/// Download cap applied to every page body.
inline constexpr std::uint64_t kMaxContentLength = 5ull * 1024 * 1024;
/// Parallel hyperlinks between one ordered pair beyond this count are dropped.
inline constexpr std::size_t kMaxParallelEdges = 2;

enum class TruncationOutcome : std::uint8_t { Ok, Error, Redirect };

/// How the simulated server answers a request for a page.
struct Behavior {
    enum class Kind : std::uint8_t { Normal, DeadEnd, FetchFail, Timeout, RedirectTo, SessionIdUrl };

    Kind kind = Kind::Normal;
    NodeId redirect_target = 0;                          // RedirectTo only
    TruncationOutcome truncation = TruncationOutcome::Ok; // SessionIdUrl only

    static Behavior normal() { return {}; }
    static Behavior dead_end() { return {Kind::DeadEnd}; }
    static Behavior fetch_fail() { return {Kind::FetchFail}; }
    static Behavior timeout() { return {Kind::Timeout}; }
    static Behavior redirect_to(NodeId target) { return {Kind::RedirectTo, target}; }
    static Behavior session_id(TruncationOutcome outcome) { return {Kind::SessionIdUrl, 0, outcome}; }

    bool operator==(const Behavior&) const = default;
};

struct NodeMeta {
    std::string url;
    std::string host;
    std::string domain;  // second-level, e.g. "epfl.ch"
    std::string tld;     // last label of host, without the dot
    std::uint64_t content_length = 0;
    Behavior behavior;

    bool operator==(const NodeMeta&) const = default;
};

/// Throws ParameterError if `meta` breaks the host/domain/tld/content invariants.
void validate_node_meta(const NodeMeta& meta);

/// Immutable directed multigraph with per-page web metadata.
///
/// Node ids are dense in [0, node_count()). Out-adjacency keeps insertion
/// order, which is also the order used by the file format. Hosts and domains
/// are interned to dense ids so walkers can index per-host state cheaply.
class WebGraph {
public:
    WebGraph() = default;
    WebGraph(std::vector<NodeMeta> nodes, const std::vector<std::vector<NodeId>>& out_adjacency);

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return targets_.size(); }
    bool contains(NodeId v) const { return v < nodes_.size(); }

    const NodeMeta& meta(NodeId v) const { return nodes_.at(v); }
    std::span<const NodeId> out(NodeId v) const;
    std::size_t out_degree(NodeId v) const { return out(v).size(); }
    std::size_t max_out_degree() const;

    std::uint32_t host_id(NodeId v) const { return host_of_.at(v); }
    std::uint32_t domain_id(NodeId v) const { return domain_of_.at(v); }
    std::size_t host_count() const { return host_names_.size(); }
    std::size_t domain_count() const { return domain_names_.size(); }
    const std::string& host_name(std::uint32_t host) const { return host_names_.at(host); }
    const std::string& domain_name(std::uint32_t domain) const { return domain_names_.at(domain); }
    std::uint32_t domain_of_host(std::uint32_t host) const { return host_domain_.at(host); }

    bool operator==(const WebGraph& other) const;

private:
    std::vector<NodeMeta> nodes_;
    std::vector<std::size_t> offsets_{0};
    std::vector<NodeId> targets_;

    std::vector<std::uint32_t> host_of_;
    std::vector<std::uint32_t> domain_of_;
    std::vector<std::string> host_names_;
    std::vector<std::string> domain_names_;
    std::vector<std::uint32_t> host_domain_;
};

} // namespace websample
