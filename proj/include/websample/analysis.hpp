#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "websample/frozen_adjacency.hpp"
#include "websample/powerlaw.hpp"
#include "websample/subsampling.hpp"

namespace websample {

struct HostCount {
    std::uint32_t host = 0;
    std::string name;
    std::size_t count = 0;
    double percentage = 0.0;
};

struct HostReport {
    std::vector<HostCount> top;  // descending count, ties by host name
    std::size_t unique_host_count = 0;
    std::size_t sample_size = 0;

    double top_share() const { return top.empty() ? 0.0 : top.front().percentage; }
};

enum class DistributionKind : std::uint8_t { Tld, ContentLength, PageRankRange, Outdegree };

struct Bucket {
    std::string label;
    std::size_t count = 0;
    double percentage = 0.0;
};

/// Buckets are half-open [lo, hi) unless the label says otherwise.
struct DistributionReport {
    DistributionKind kind = DistributionKind::Tld;
    std::vector<Bucket> buckets;
    std::size_t total = 0;

    const Bucket* find(const std::string& label) const;
};

struct OutdegreeReport {
    DistributionReport histogram;  // power-of-two bins for log-log plots
    double average = 0.0;
    std::size_t max = 0;
    std::optional<PowerLawFit> fit;
};

HostReport host_report(std::span<const NodeId> members, const WebGraph& graph, std::size_t k);
OutdegreeReport outdegree_report(std::span<const NodeId> members, const WebGraph& graph);
/// One row per TLD of the generator pool plus "other".
DistributionReport tld_report(std::span<const NodeId> members, const WebGraph& graph);
/// Eleven 10k buckets from 0; the last one also takes everything above 100k.
DistributionReport content_length_report(std::span<const NodeId> members, const WebGraph& graph);
/// Decade ranges of score: [1e-1,1e0], [1e-2,1e-1), ..., [1e-9,1e-8), <1e-9.
DistributionReport pagerank_range_report(const ScoreVector& scores, std::span<const NodeId> population);

/// Bucket-wise mean of same-shaped reports (the five-sample average).
DistributionReport average_reports(std::span<const DistributionReport> reports);

enum class OracleChain : std::uint8_t { UndirectedDegree, RegularUniform, PageRankTeleport };

/// Stationary law of the walk on the frozen undirected graph (one selfloop
/// slot per node). UndirectedDegree: (|adj|+1) / sum; RegularUniform: 1/n over
/// the frozen nodes. Throws DomainError when the frozen adjacency is not
/// symmetric or not connected.
ScoreVector stationary_oracle(const FrozenAdjacency& frozen, OracleChain chain);
/// PageRankTeleport: power-iteration PageRank of the whole graph.
ScoreVector pagerank_oracle(const WebGraph& graph, double d);

/// Exact check of pi(u) P(u,v) = pi(v) P(v,u) over all frozen edges for the
/// degree-proportional law, in integer arithmetic.
bool satisfies_detailed_balance(const FrozenAdjacency& frozen);

/// Half the L1 distance; a shorter vector reads as zero-padded.
double tv_distance(std::span<const double> p, std::span<const double> q);

// Report serialization: CSV rows `label,count,percentage` and JSON objects.
void write_csv(std::ostream& out, const DistributionReport& report);
void write_csv(std::ostream& out, const HostReport& report);

/// Everything the pipeline measures for one sample type, averaged over its
/// repetitions.
struct SampleTypeReport {
    std::string label;
    double mean_size = 0.0;
    double unique_hosts = 0.0;
    double top_host_share = 0.0;
    std::string top_host;
    double avg_outdegree = 0.0;
    double max_outdegree = 0.0;
    std::optional<double> exponent;  // mean over the repetitions that admit a fit
    DistributionReport tld;
    DistributionReport content_length;
    DistributionReport outdegree;
    DistributionReport pagerank_range;
};

SampleTypeReport analyze_samples(std::span<const Sample> samples, const WebGraph& graph, const ScoreVector* scores);
void write_json(std::ostream& out, const SampleTypeReport& report);

std::string format_fixed(double value);

} // namespace websample
