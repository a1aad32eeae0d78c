#include "websample/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <ostream>
#include <queue>

#include <json.hpp>

#include "websample/generators.hpp"
#include "websample/pagerank.hpp"

namespace websample {

namespace {

constexpr std::size_t kOutdegreeBins = 21;  // "0", [1,2), ..., [2^19,2^20), then >= 2^20
constexpr std::size_t kContentBuckets = 11;
constexpr std::uint64_t kContentWidth = 10'000;
constexpr int kDecades = 9;

void fill_percentages(DistributionReport& r) {
    r.total = 0;
    for (const auto& b : r.buckets) r.total += b.count;
    for (auto& b : r.buckets) {
        b.percentage = r.total == 0 ? 0.0 : 100.0 * static_cast<double>(b.count) / static_cast<double>(r.total);
    }
}

std::vector<std::vector<NodeId>> neighbor_lists(const FrozenAdjacency& frozen) {
    std::vector<std::vector<NodeId>> adj(frozen.node_count());
    for (NodeId v = 0; v < frozen.node_count(); ++v) {
        if (const auto* r = frozen.find(v)) {
            adj[v] = r->outlinks;
            adj[v].insert(adj[v].end(), r->inlinks.begin(), r->inlinks.end());
            std::sort(adj[v].begin(), adj[v].end());
        }
    }
    return adj;
}

std::size_t multiplicity(const std::vector<NodeId>& sorted, NodeId v) {
    const auto [lo, hi] = std::equal_range(sorted.begin(), sorted.end(), v);
    return static_cast<std::size_t>(hi - lo);
}

void require_reversible(const FrozenAdjacency& frozen, const std::vector<std::vector<NodeId>>& adj) {
    std::vector<NodeId> nodes;
    for (NodeId v = 0; v < frozen.node_count(); ++v) {
        if (frozen.find(v)) nodes.push_back(v);
    }
    if (nodes.empty()) throw DomainError("frozen adjacency is empty");
    for (NodeId u : nodes) {
        for (NodeId v : adj[u]) {
            if (!frozen.find(v)) {
                throw DomainError("neighbor " + std::to_string(v) + " of node " + std::to_string(u) + " is not frozen");
            }
            if (multiplicity(adj[u], v) != multiplicity(adj[v], u)) {
                throw DomainError("frozen adjacency is not symmetric between " + std::to_string(u) + " and " +
                                  std::to_string(v));
            }
        }
    }
    std::vector<std::uint8_t> reached(frozen.node_count(), 0);
    std::queue<NodeId> queue;
    queue.push(nodes.front());
    reached[nodes.front()] = 1;
    std::size_t count = 1;
    while (!queue.empty()) {
        const NodeId u = queue.front();
        queue.pop();
        for (NodeId v : adj[u]) {
            if (!reached[v]) {
                reached[v] = 1;
                ++count;
                queue.push(v);
            }
        }
    }
    if (count != nodes.size()) throw DomainError("frozen adjacency is not connected");
}

} // namespace

const Bucket* DistributionReport::find(const std::string& label) const {
    for (const auto& b : buckets) {
        if (b.label == label) return &b;
    }
    return nullptr;
}

std::string format_fixed(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", value);
    return buf;
}

HostReport host_report(std::span<const NodeId> members, const WebGraph& graph, std::size_t k) {
    std::map<std::uint32_t, std::size_t> counts;
    for (NodeId v : members) ++counts[graph.host_id(v)];
    HostReport r;
    r.sample_size = members.size();
    r.unique_host_count = counts.size();
    std::vector<HostCount> all;
    for (const auto& [host, count] : counts) {
        all.push_back({host, graph.host_name(host), count,
                       100.0 * static_cast<double>(count) / static_cast<double>(members.size())});
    }
    std::sort(all.begin(), all.end(), [](const HostCount& a, const HostCount& b) {
        return a.count != b.count ? a.count > b.count : a.name < b.name;
    });
    if (all.size() > k) all.resize(k);
    r.top = std::move(all);
    return r;
}

OutdegreeReport outdegree_report(std::span<const NodeId> members, const WebGraph& graph) {
    OutdegreeReport r;
    r.histogram.kind = DistributionKind::Outdegree;
    r.histogram.buckets.push_back({"0"});
    for (std::size_t b = 1; b < kOutdegreeBins; ++b) {
        const auto lo = std::uint64_t{1} << (b - 1);
        r.histogram.buckets.push_back({"[" + std::to_string(lo) + "," + std::to_string(lo * 2) + ")"});
    }
    r.histogram.buckets.push_back({">=" + std::to_string(std::uint64_t{1} << (kOutdegreeBins - 1))});

    std::vector<std::uint64_t> degrees;
    degrees.reserve(members.size());
    double sum = 0.0;
    for (NodeId v : members) {
        const auto deg = graph.out_degree(v);
        degrees.push_back(deg);
        sum += static_cast<double>(deg);
        r.max = std::max(r.max, deg);
        const std::size_t bin = deg == 0 ? 0 : std::min<std::size_t>(std::bit_width(deg), kOutdegreeBins);
        ++r.histogram.buckets[bin].count;
    }
    fill_percentages(r.histogram);
    r.average = members.empty() ? 0.0 : sum / static_cast<double>(members.size());
    r.fit = fit_power_law(degrees);
    return r;
}

DistributionReport tld_report(std::span<const NodeId> members, const WebGraph& graph) {
    DistributionReport r;
    r.kind = DistributionKind::Tld;
    for (auto tld : kTldPool) r.buckets.push_back({"." + std::string(tld)});
    r.buckets.push_back({"other"});
    for (NodeId v : members) {
        const auto& tld = graph.meta(v).tld;
        const auto it = std::find(kTldPool.begin(), kTldPool.end(), tld);
        ++r.buckets[static_cast<std::size_t>(it - kTldPool.begin())].count;
    }
    fill_percentages(r);
    return r;
}

DistributionReport content_length_report(std::span<const NodeId> members, const WebGraph& graph) {
    DistributionReport r;
    r.kind = DistributionKind::ContentLength;
    for (std::size_t b = 0; b + 1 < kContentBuckets; ++b) {
        r.buckets.push_back({"[" + std::to_string(b * 10) + "k," + std::to_string((b + 1) * 10) + "k)"});
    }
    r.buckets.push_back({">=100k"});
    for (NodeId v : members) {
        const auto len = graph.meta(v).content_length;
        ++r.buckets[std::min<std::size_t>(len / kContentWidth, kContentBuckets - 1)].count;
    }
    fill_percentages(r);
    return r;
}

DistributionReport pagerank_range_report(const ScoreVector& scores, std::span<const NodeId> population) {
    DistributionReport r;
    r.kind = DistributionKind::PageRankRange;
    r.buckets.push_back({"[1e-1,1e0]"});
    for (int k = 2; k <= kDecades; ++k) {
        r.buckets.push_back({"[1e-" + std::to_string(k) + ",1e-" + std::to_string(k - 1) + ")"});
    }
    r.buckets.push_back({"<1e-" + std::to_string(kDecades)});
    for (NodeId v : population) {
        const double s = scores.values.at(v);
        std::size_t bin = kDecades;
        for (int k = 1; k <= kDecades; ++k) {
            if (s >= std::pow(10.0, -k)) {
                bin = static_cast<std::size_t>(k - 1);
                break;
            }
        }
        ++r.buckets[bin].count;
    }
    fill_percentages(r);
    return r;
}

DistributionReport average_reports(std::span<const DistributionReport> reports) {
    if (reports.empty()) return {};
    DistributionReport out = reports.front();
    for (auto& b : out.buckets) {
        b.count = 0;
        b.percentage = 0.0;
    }
    out.total = 0;
    for (const auto& r : reports) {
        if (r.buckets.size() != out.buckets.size()) throw DataError("cannot average reports of different shape");
        out.total += r.total;
        for (std::size_t i = 0; i < r.buckets.size(); ++i) {
            out.buckets[i].count += r.buckets[i].count;
            out.buckets[i].percentage += r.buckets[i].percentage / static_cast<double>(reports.size());
        }
    }
    return out;
}

ScoreVector stationary_oracle(const FrozenAdjacency& frozen, OracleChain chain) {
    if (chain == OracleChain::PageRankTeleport) {
        throw DomainError("PageRank oracle needs the graph; use pagerank_oracle");
    }
    const auto adj = neighbor_lists(frozen);
    require_reversible(frozen, adj);
    ScoreVector out{ScoreKind::Oracle, std::vector<double>(frozen.node_count(), 0.0)};
    double total = 0.0;
    for (NodeId v = 0; v < frozen.node_count(); ++v) {
        if (!frozen.find(v)) continue;
        out.values[v] = chain == OracleChain::UndirectedDegree ? static_cast<double>(adj[v].size() + 1) : 1.0;
        total += out.values[v];
    }
    for (auto& x : out.values) x /= total;
    return out;
}

ScoreVector pagerank_oracle(const WebGraph& graph, double d) {
    const PageRankResult pr = pagerank(Digraph::from_webgraph(graph), d);
    if (!pr.converged) throw DomainError("PageRank oracle did not converge, residual " + std::to_string(pr.residual));
    return {ScoreKind::Oracle, pr.scores};
}

bool satisfies_detailed_balance(const FrozenAdjacency& frozen) {
    const auto adj = neighbor_lists(frozen);
    // pi(u) P(u,v) = (k_u / S) (m_uv / k_u); compare numerators over the
    // common denominator S k_u k_v.
    for (NodeId u = 0; u < frozen.node_count(); ++u) {
        const std::uint64_t ku = adj[u].size() + 1;
        for (NodeId v : adj[u]) {
            if (!frozen.find(v)) return false;
            const std::uint64_t kv = adj[v].size() + 1;
            const std::uint64_t lhs = ku * multiplicity(adj[u], v) * kv;
            const std::uint64_t rhs = kv * multiplicity(adj[v], u) * ku;
            if (lhs != rhs) return false;
        }
    }
    return true;
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
    const std::size_t n = std::max(p.size(), q.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = i < p.size() ? p[i] : 0.0;
        const double b = i < q.size() ? q[i] : 0.0;
        sum += std::abs(a - b);
    }
    return 0.5 * sum;
}

void write_csv(std::ostream& out, const DistributionReport& report) {
    out << "label,count,percentage\n";
    for (const auto& b : report.buckets) out << b.label << ',' << b.count << ',' << format_fixed(b.percentage) << '\n';
}

void write_csv(std::ostream& out, const HostReport& report) {
    out << "host,count,percentage\n";
    for (const auto& h : report.top) out << h.name << ',' << h.count << ',' << format_fixed(h.percentage) << '\n';
}

SampleTypeReport analyze_samples(std::span<const Sample> samples, const WebGraph& graph, const ScoreVector* scores) {
    SampleTypeReport r;
    if (samples.empty()) return r;
    r.label = samples.front().spec.label();
    std::vector<DistributionReport> tld, content, outdeg, prr;
    std::vector<double> exponents;
    const double reps = static_cast<double>(samples.size());
    for (const Sample& s : samples) {
        const auto hosts = host_report(s.members, graph, 1);
        const auto od = outdegree_report(s.members, graph);
        r.mean_size += static_cast<double>(s.members.size()) / reps;
        r.unique_hosts += static_cast<double>(hosts.unique_host_count) / reps;
        r.top_host_share += hosts.top_share() / reps;
        if (r.top_host.empty() && !hosts.top.empty()) r.top_host = hosts.top.front().name;
        r.avg_outdegree += od.average / reps;
        r.max_outdegree += static_cast<double>(od.max) / reps;
        if (od.fit) exponents.push_back(od.fit->exponent);
        tld.push_back(tld_report(s.members, graph));
        content.push_back(content_length_report(s.members, graph));
        outdeg.push_back(od.histogram);
        if (scores != nullptr) prr.push_back(pagerank_range_report(*scores, s.members));
    }
    if (!exponents.empty()) {
        r.exponent = std::accumulate(exponents.begin(), exponents.end(), 0.0) / static_cast<double>(exponents.size());
    }
    r.tld = average_reports(tld);
    r.content_length = average_reports(content);
    r.outdegree = average_reports(outdeg);
    if (!prr.empty()) r.pagerank_range = average_reports(prr);
    return r;
}

void write_json(std::ostream& out, const SampleTypeReport& report) {
    const auto buckets = [](const DistributionReport& d) {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& b : d.buckets) {
            rows.push_back({{"label", b.label}, {"count", b.count}, {"percentage", format_fixed(b.percentage)}});
        }
        return rows;
    };
    nlohmann::ordered_json j;
    j["label"] = report.label;
    j["mean_size"] = format_fixed(report.mean_size);
    j["unique_hosts"] = format_fixed(report.unique_hosts);
    j["top_host"] = report.top_host;
    j["top_host_share"] = format_fixed(report.top_host_share);
    j["avg_outdegree"] = format_fixed(report.avg_outdegree);
    j["max_outdegree"] = format_fixed(report.max_outdegree);
    j["exponent"] = report.exponent ? nlohmann::ordered_json(format_fixed(*report.exponent)) : nlohmann::ordered_json(nullptr);
    j["tld"] = buckets(report.tld);
    j["content_length"] = buckets(report.content_length);
    j["outdegree"] = buckets(report.outdegree);
    j["pagerank_range"] = buckets(report.pagerank_range);
    out << j.dump(2) << '\n';
}

} // namespace websample
