#include "websample/environment.hpp"

#include <algorithm>
#include <random>

#include "websample/seeds.hpp"

namespace websample {

std::string_view to_string(FetchFailure failure) {
    switch (failure) {
    case FetchFailure::TooLongUrl: return "too_long_url";
    case FetchFailure::FetchFail: return "fetch_fail";
    case FetchFailure::Timeout: return "timeout";
    case FetchFailure::RedirectLimit: return "redirect_limit";
    case FetchFailure::RedirectLoop: return "redirect_loop";
    }
    return "unknown";
}

std::string effective_url(const WebGraph& graph, const RedirectResolution& resolution) {
    const std::string& url = graph.meta(resolution.final).url;
    if (resolution.truncation_applied && !resolution.truncation_undone) {
        const auto q = url.find('?');
        if (q != std::string::npos) return url.substr(0, q);
    }
    return url;
}

Environment::Environment(const WebGraph& graph, std::uint64_t seed) : graph_(&graph), seed_(seed) {
    const auto n = graph.node_count();

    in_offsets_.assign(n + 1, 0);
    for (NodeId v = 0; v < n; ++v) {
        for (NodeId w : graph.out(v)) ++in_offsets_[w + 1];
    }
    for (std::size_t v = 0; v < n; ++v) in_offsets_[v + 1] += in_offsets_[v];
    in_sources_.resize(in_offsets_[n]);
    std::vector<std::size_t> cursor(in_offsets_.begin(), in_offsets_.end() - 1);
    for (NodeId v = 0; v < n; ++v) {
        for (NodeId w : graph.out(v)) in_sources_[cursor[w]++] = v;
    }

    resolutions_.reserve(n);
    for (NodeId v = 0; v < n; ++v) resolutions_.push_back(compute_resolution(v));

    alias_offsets_.assign(n + 1, 0);
    for (NodeId v = 0; v < n; ++v) {
        const auto& r = resolutions_[v];
        if (r.ok() && r.final != v) ++alias_offsets_[r.final + 1];
    }
    for (std::size_t v = 0; v < n; ++v) alias_offsets_[v + 1] += alias_offsets_[v];
    aliases_.resize(alias_offsets_[n]);
    cursor.assign(alias_offsets_.begin(), alias_offsets_.end() - 1);
    for (NodeId v = 0; v < n; ++v) {
        const auto& r = resolutions_[v];
        if (r.ok() && r.final != v) aliases_[cursor[r.final]++] = v;
    }
}

RedirectResolution Environment::compute_resolution(NodeId node) const {
    const WebGraph& g = *graph_;
    RedirectResolution r;
    r.chain.push_back(node);

    const auto admit = [&](NodeId v) -> bool {
        const NodeMeta& m = g.meta(v);
        if (m.url.size() > kMaxUrlLength) {
            r.failure = FetchFailure::TooLongUrl;
        } else if (m.behavior.kind == Behavior::Kind::FetchFail) {
            r.failure = FetchFailure::FetchFail;
        } else if (m.behavior.kind == Behavior::Kind::Timeout) {
            r.failure = FetchFailure::Timeout;
        }
        return r.ok();
    };

    NodeId current = node;
    if (!admit(current)) return r;
    while (g.meta(current).behavior.kind == Behavior::Kind::RedirectTo) {
        const NodeId next = g.meta(current).behavior.redirect_target;
        if (std::find(r.chain.begin(), r.chain.end(), next) != r.chain.end()) {
            r.failure = FetchFailure::RedirectLoop;
            return r;
        }
        if (r.chain.size() > kMaxRedirects) {
            r.failure = FetchFailure::RedirectLimit;
            return r;
        }
        r.chain.push_back(next);
        current = next;
        if (!admit(current)) return r;
    }
    r.final = current;

    const Behavior& b = g.meta(current).behavior;
    if (b.kind == Behavior::Kind::SessionIdUrl) {
        r.truncation_applied = true;
        // An error page or a fresh redirect after truncation restores the full URL.
        r.truncation_undone = b.truncation != TruncationOutcome::Ok;
    }
    return r;
}

FetchOutcome Environment::fetch(NodeId node) const {
    const RedirectResolution& r = resolutions_.at(node);
    FetchOutcome out;
    if (!r.ok()) {
        out.failure = r.failure;
        out.final = node;
        return out;
    }
    out.final = r.final;
    out.outlinks = graph_->out(r.final);
    return out;
}

std::span<const NodeId> Environment::in_edges(NodeId node) const {
    return {in_sources_.data() + in_offsets_.at(node), in_offsets_[node + 1] - in_offsets_[node]};
}

std::span<const NodeId> Environment::redirect_aliases(NodeId node) const {
    return {aliases_.data() + alias_offsets_.at(node), alias_offsets_[node + 1] - alias_offsets_[node]};
}

std::vector<NodeId> Environment::retrieve_inlinks(NodeId node) const {
    std::vector<NodeId> pool(in_edges(node).begin(), in_edges(node).end());
    for (NodeId alias : redirect_aliases(node)) {
        const auto extra = in_edges(alias);
        pool.insert(pool.end(), extra.begin(), extra.end());
    }
    if (pool.size() <= kMaxInlinks) return pool;
    std::mt19937_64 rng(derive_seed(seed_, "inlinks", node));
    std::vector<NodeId> picked;
    picked.reserve(kMaxInlinks);
    std::sample(pool.begin(), pool.end(), std::back_inserter(picked), kMaxInlinks, rng);
    return picked;
}

} // namespace websample
