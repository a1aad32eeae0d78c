#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "websample/webgraph.hpp"

namespace websample {

/// Fixed TLD row set used by the generator and the TLD report.
inline constexpr std::array<std::string_view, 11> kTldPool = {"com", "edu", "org", "net", "jp", "gov",
                                                              "uk",  "us",  "de",  "ca",  "fr"};

/// Per-page probabilities of the non-normal server behaviors.
struct HazardRates {
    double dead_end = 0.0;
    double fetch_fail = 0.0;
    double timeout = 0.0;
    double redirect = 0.0;
    double session_id = 0.0;

    double total() const { return dead_end + fetch_fail + timeout + redirect + session_id; }
};

struct GeneratorSpec {
    std::size_t n = 10000;
    double target_exponent = 2.72;
    std::size_t max_outdegree = 1000;
    double mean_pages_per_host = 8.0;
    double mean_hosts_per_domain = 2.0;
    /// Fraction of outlinks that stay on the source page's host.
    double intra_host_fraction = 0.5;
    /// Relative page mass per entry of kTldPool.
    std::array<double, kTldPool.size()> tld_weights = {63.20, 0.64, 9.79, 6.19, 0.44, 0.47,
                                                       3.28,  0.63, 3.28, 0.83, 0.43};
    HazardRates hazards;
    std::uint64_t seed = 1;

    void validate() const;  // throws ParameterError
};

/// Discrete power law P(k) proportional to k^-alpha on [kmin, kmax], sampled by
/// inverse CDF over a cumulative table.
class DiscretePowerLaw {
public:
    DiscretePowerLaw(double alpha, std::uint64_t kmin, std::uint64_t kmax);

    std::uint64_t operator()(std::mt19937_64& rng) const;
    double mean() const { return mean_; }
    std::uint64_t kmin() const { return kmin_; }
    std::uint64_t kmax() const { return kmax_; }

private:
    std::uint64_t kmin_;
    std::uint64_t kmax_;
    std::vector<double> cumulative_;
    double mean_ = 0.0;
};

/// Mean of the discrete power law truncated to [kmin, kmax].
double truncated_power_law_mean(double alpha, std::uint64_t kmin, std::uint64_t kmax);

/// Synthetic web: domains d<k>.<tld> split into hosts and pages, power-law
/// outdegrees, host-local plus preferential global link targets, hazards
/// assigned per page. Pure in `spec` (including its seed).
WebGraph generate_power_law_web(const GeneratorSpec& spec);

/// Complete graph on nodes [0, n/2) sharing host "trap.example.com", plus a
/// chain on [n/2, n) attached to node 0; every edge is reciprocal and each
/// chain node has its own host and domain.
WebGraph generate_trap_graph(std::size_t n);

} // namespace websample
