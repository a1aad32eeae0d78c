#include "websample/webgraph.hpp"

#include <algorithm>
#include <unordered_map>

namespace websample {

void validate_node_meta(const NodeMeta& meta) {
    if (meta.host.empty() || meta.domain.empty() || meta.tld.empty()) {
        throw ParameterError("node '" + meta.url + "' has empty host, domain or tld");
    }
    const bool host_extends_domain =
        meta.host == meta.domain ||
        (meta.host.size() > meta.domain.size() && meta.host.ends_with(meta.domain) &&
         meta.host[meta.host.size() - meta.domain.size() - 1] == '.');
    if (!host_extends_domain) {
        throw ParameterError("host '" + meta.host + "' does not extend domain '" + meta.domain + "'");
    }
    const auto dot = meta.host.rfind('.');
    const std::string last_label = dot == std::string::npos ? meta.host : meta.host.substr(dot + 1);
    if (last_label != meta.tld) {
        throw ParameterError("tld '" + meta.tld + "' is not the last label of host '" + meta.host + "'");
    }
    if (meta.behavior.kind == Behavior::Kind::Normal && meta.content_length > kMaxContentLength) {
        throw ParameterError("content length of '" + meta.url + "' exceeds the 5 MB download cap");
    }
    for (char c : meta.url) {
        if (c == ' ' || c == '\n' || c == '\t') throw ParameterError("url contains whitespace: '" + meta.url + "'");
    }
}

WebGraph::WebGraph(std::vector<NodeMeta> nodes, const std::vector<std::vector<NodeId>>& out_adjacency)
    : nodes_(std::move(nodes)) {
    if (out_adjacency.size() != nodes_.size()) {
        throw ParameterError("adjacency size does not match node count");
    }
    const auto n = nodes_.size();

    std::unordered_map<std::string, std::uint32_t> host_index;
    std::unordered_map<std::string, std::uint32_t> domain_index;
    host_of_.reserve(n);
    domain_of_.reserve(n);
    for (std::size_t v = 0; v < n; ++v) {
        const NodeMeta& m = nodes_[v];
        validate_node_meta(m);
        if (m.behavior.kind == Behavior::Kind::RedirectTo && m.behavior.redirect_target >= n) {
            throw ParameterError("node " + std::to_string(v) + " redirects to unknown node " +
                                 std::to_string(m.behavior.redirect_target));
        }
        auto [dit, dnew] = domain_index.try_emplace(m.domain, static_cast<std::uint32_t>(domain_names_.size()));
        if (dnew) domain_names_.push_back(m.domain);
        auto [hit, hnew] = host_index.try_emplace(m.host, static_cast<std::uint32_t>(host_names_.size()));
        if (hnew) {
            host_names_.push_back(m.host);
            host_domain_.push_back(dit->second);
        } else if (host_domain_[hit->second] != dit->second) {
            throw ParameterError("host '" + m.host + "' appears under two domains");
        }
        host_of_.push_back(hit->second);
        domain_of_.push_back(dit->second);
    }

    offsets_.assign(1, 0);
    offsets_.reserve(n + 1);
    std::vector<NodeId> sorted;
    for (std::size_t v = 0; v < n; ++v) {
        const auto& adj = out_adjacency[v];
        for (NodeId w : adj) {
            if (w >= n) {
                throw ParameterError("edge " + std::to_string(v) + "->" + std::to_string(w) + " references unknown node");
            }
        }
        sorted.assign(adj.begin(), adj.end());
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = kMaxParallelEdges; i < sorted.size(); ++i) {
            if (sorted[i] == sorted[i - kMaxParallelEdges]) {
                throw ParameterError("more than 2 parallel edges " + std::to_string(v) + "->" + std::to_string(sorted[i]));
            }
        }
        targets_.insert(targets_.end(), adj.begin(), adj.end());
        offsets_.push_back(targets_.size());
    }
}

std::span<const NodeId> WebGraph::out(NodeId v) const {
    if (v >= nodes_.size()) throw std::out_of_range("node id " + std::to_string(v));
    return {targets_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

std::size_t WebGraph::max_out_degree() const {
    std::size_t best = 0;
    for (std::size_t v = 0; v < nodes_.size(); ++v) best = std::max(best, offsets_[v + 1] - offsets_[v]);
    return best;
}

bool WebGraph::operator==(const WebGraph& other) const {
    return nodes_ == other.nodes_ && offsets_ == other.offsets_ && targets_ == other.targets_;
}

} // namespace websample
