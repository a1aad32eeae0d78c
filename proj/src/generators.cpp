#include "websample/generators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <unordered_map>

namespace websample {

namespace {

constexpr std::uint64_t kMinContentLength = 1024;

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

std::uint64_t one_plus_geometric(std::mt19937_64& rng, double mean) {
    if (mean <= 1.0) return 1;
    std::geometric_distribution<std::uint64_t> geo(1.0 / mean);
    return 1 + geo(rng);
}

std::string hex_token(std::mt19937_64& rng) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng()));
    return buf;
}

} // namespace

void GeneratorSpec::validate() const {
    if (n == 0) throw ParameterError("generator needs n >= 1");
    if (!(target_exponent > 1.0)) throw ParameterError("target_exponent must be > 1");
    if (max_outdegree == 0) throw ParameterError("max_outdegree must be >= 1");
    if (!(mean_pages_per_host >= 1.0) || !(mean_hosts_per_domain >= 1.0)) {
        throw ParameterError("mean pages per host and hosts per domain must be >= 1");
    }
    if (!is_probability(intra_host_fraction)) throw ParameterError("intra_host_fraction must lie in [0,1]");
    for (double r : {hazards.dead_end, hazards.fetch_fail, hazards.timeout, hazards.redirect, hazards.session_id}) {
        if (!is_probability(r)) throw ParameterError("hazard rates must lie in [0,1]");
    }
    if (hazards.total() > 1.0 + 1e-12) throw ParameterError("hazard rates must sum to <= 1");
    double mass = 0.0;
    for (double w : tld_weights) {
        if (w < 0.0) throw ParameterError("tld weights must be non-negative");
        mass += w;
    }
    if (!(mass > 0.0)) throw ParameterError("tld weights must not all be zero");
}

DiscretePowerLaw::DiscretePowerLaw(double alpha, std::uint64_t kmin, std::uint64_t kmax) : kmin_(kmin), kmax_(kmax) {
    if (!(alpha > 1.0) || kmin == 0 || kmax < kmin) throw ParameterError("invalid discrete power law parameters");
    cumulative_.reserve(kmax - kmin + 1);
    double sum = 0.0;
    double weighted = 0.0;
    for (std::uint64_t k = kmin; k <= kmax; ++k) {
        const double p = std::pow(static_cast<double>(k), -alpha);
        sum += p;
        weighted += p * static_cast<double>(k);
        cumulative_.push_back(sum);
    }
    for (double& c : cumulative_) c /= sum;
    cumulative_.back() = 1.0;
    mean_ = weighted / sum;
}

std::uint64_t DiscretePowerLaw::operator()(std::mt19937_64& rng) const {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), cumulative_.size() - 1);
    return kmin_ + idx;
}

double truncated_power_law_mean(double alpha, std::uint64_t kmin, std::uint64_t kmax) {
    double sum = 0.0;
    double weighted = 0.0;
    for (std::uint64_t k = kmin; k <= kmax; ++k) {
        const double p = std::pow(static_cast<double>(k), -alpha);
        sum += p;
        weighted += p * static_cast<double>(k);
    }
    return weighted / sum;
}

WebGraph generate_power_law_web(const GeneratorSpec& spec) {
    spec.validate();
    const std::size_t n = spec.n;
    std::mt19937_64 rng(spec.seed);

    // Domains -> hosts -> pages, filled in node-id order.
    std::vector<NodeMeta> nodes(n);
    std::vector<std::uint32_t> host_of(n);
    std::vector<std::vector<NodeId>> host_pages;
    std::discrete_distribution<std::size_t> tld_dist(spec.tld_weights.begin(), spec.tld_weights.end());
    {
        NodeId next = 0;
        for (std::size_t domain = 0; next < n; ++domain) {
            const std::string tld(kTldPool[tld_dist(rng)]);
            const std::string domain_name = "d" + std::to_string(domain) + "." + tld;
            const auto hosts = one_plus_geometric(rng, spec.mean_hosts_per_domain);
            for (std::uint64_t h = 0; h < hosts && next < n; ++h) {
                const std::string host = (h == 0 ? "www." : "h" + std::to_string(h) + ".") + domain_name;
                const auto pages = one_plus_geometric(rng, spec.mean_pages_per_host);
                host_pages.emplace_back();
                for (std::uint64_t p = 0; p < pages && next < n; ++p, ++next) {
                    NodeMeta& m = nodes[next];
                    m.host = host;
                    m.domain = domain_name;
                    m.tld = tld;
                    host_of[next] = static_cast<std::uint32_t>(host_pages.size() - 1);
                    host_pages.back().push_back(next);
                }
            }
        }
    }

    const auto random_node_except = [&](NodeId self) -> NodeId {
        std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
        NodeId v = pick(rng);
        while (v == self) v = pick(rng);
        return v;
    };

    // Behaviors, content, URLs.
    const HazardRates& hz = spec.hazards;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double log_lo = std::log(static_cast<double>(kMinContentLength));
    const double log_hi = std::log(static_cast<double>(kMaxContentLength));
    for (NodeId v = 0; v < n; ++v) {
        NodeMeta& m = nodes[v];
        const double u = unit(rng);
        double edge = hz.dead_end;
        if (u < edge) {
            m.behavior = Behavior::dead_end();
        } else if (u < (edge += hz.fetch_fail)) {
            m.behavior = Behavior::fetch_fail();
        } else if (u < (edge += hz.timeout)) {
            m.behavior = Behavior::timeout();
        } else if (u < (edge += hz.redirect) && n > 1) {
            const auto& siblings = host_pages[host_of[v]];
            NodeId target = v;
            if (siblings.size() > 1) {
                std::uniform_int_distribution<std::size_t> pick(0, siblings.size() - 1);
                while (target == v) target = siblings[pick(rng)];
            } else {
                target = random_node_except(v);
            }
            m.behavior = Behavior::redirect_to(target);
        } else if (u < (edge += hz.session_id)) {
            const double o = unit(rng);
            m.behavior = Behavior::session_id(o < 0.6 ? TruncationOutcome::Ok
                                              : o < 0.8 ? TruncationOutcome::Error
                                                        : TruncationOutcome::Redirect);
        }
        m.content_length =
            std::min(kMaxContentLength, static_cast<std::uint64_t>(std::exp(log_lo + (log_hi - log_lo) * unit(rng))));
        m.url = "http://" + m.host + "/p" + std::to_string(v) +
                (m.behavior.kind == Behavior::Kind::SessionIdUrl ? ".php?sid=" + hex_token(rng) : ".html");
    }

    // Outdegrees: power law on [1, kmax]; dead ends and redirect stubs have none.
    std::vector<std::size_t> outdeg(n, 0);
    if (n > 1) {
        const DiscretePowerLaw law(spec.target_exponent, 1, std::min<std::uint64_t>(spec.max_outdegree, n - 1));
        for (NodeId v = 0; v < n; ++v) {
            const auto kind = nodes[v].behavior.kind;
            if (kind != Behavior::Kind::DeadEnd && kind != Behavior::Kind::RedirectTo) outdeg[v] = law(rng);
        }
    }

    // Targets: host-local uniform, otherwise preferential on (outdegree + 1).
    std::vector<double> popularity(n);
    for (NodeId v = 0; v < n; ++v) popularity[v] = static_cast<double>(outdeg[v] + 1);
    std::discrete_distribution<NodeId> global(popularity.begin(), popularity.end());
    std::vector<std::vector<NodeId>> adjacency(n);
    std::unordered_map<NodeId, std::size_t> multiplicity;
    for (NodeId v = 0; v < n; ++v) {
        const auto& siblings = host_pages[host_of[v]];
        auto& adj = adjacency[v];
        adj.reserve(outdeg[v]);
        multiplicity.clear();
        std::size_t attempts = 0;
        const std::size_t max_attempts = 32 * outdeg[v] + 64;
        while (adj.size() < outdeg[v] && attempts++ < max_attempts) {
            NodeId t;
            if (siblings.size() > 1 && unit(rng) < spec.intra_host_fraction) {
                t = siblings[std::uniform_int_distribution<std::size_t>(0, siblings.size() - 1)(rng)];
            } else {
                t = global(rng);
            }
            if (t == v) continue;
            auto& count = multiplicity[t];
            if (count >= kMaxParallelEdges) continue;
            ++count;
            adj.push_back(t);
        }
    }
    return WebGraph(std::move(nodes), adjacency);
}

WebGraph generate_trap_graph(std::size_t n) {
    if (n < 4 || n % 2 != 0) throw ParameterError("trap graph needs an even n >= 4, got " + std::to_string(n));
    const std::size_t half = n / 2;
    std::vector<NodeMeta> nodes(n);
    std::vector<std::vector<NodeId>> adjacency(n);
    for (NodeId v = 0; v < n; ++v) {
        NodeMeta& m = nodes[v];
        if (v < half) {
            m.host = "trap.example.com";
            m.domain = "example.com";
            m.tld = "com";
        } else {
            m.domain = "chain" + std::to_string(v) + ".net";
            m.host = "www." + m.domain;
            m.tld = "net";
        }
        m.url = "http://" + m.host + "/p" + std::to_string(v) + ".html";
        m.content_length = 2048 + 1024 * static_cast<std::uint64_t>(v % 64);
    }
    for (NodeId u = 0; u < half; ++u) {
        for (NodeId w = 0; w < half; ++w) {
            if (u != w) adjacency[u].push_back(w);
        }
    }
    const auto link = [&](NodeId a, NodeId b) {
        adjacency[a].push_back(b);
        adjacency[b].push_back(a);
    };
    link(0, static_cast<NodeId>(half));
    for (NodeId v = static_cast<NodeId>(half); v + 1 < n; ++v) link(v, v + 1);
    return WebGraph(std::move(nodes), adjacency);
}

} // namespace websample
