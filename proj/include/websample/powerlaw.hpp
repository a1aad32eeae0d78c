#pragma once

#include <cstdint>
#include <optional>
#include <span>

namespace websample {

struct PowerLawFit {
    double exponent = 0.0;
    std::uint64_t xmin = 0;
    std::size_t n_tail = 0;
    double ks_distance = 0.0;
};

inline constexpr std::size_t kMinTailPoints = 10;

/// Hurwitz zeta: sum over k >= 0 of (k + q)^-s, for s > 1 and q > 0.
double hurwitz_zeta(double s, double q);

/// Approximate discrete MLE for a tail starting at xmin:
/// 1 + n / sum(ln(x / (xmin - 1/2))). Values below xmin are ignored.
double power_law_mle(std::span<const std::uint64_t> values, std::uint64_t xmin);

/// KS distance between the tail (values >= xmin) and the discrete power law
/// with the given exponent on [xmin, inf).
double power_law_ks(std::span<const std::uint64_t> values, std::uint64_t xmin, double exponent);

/// Fits every candidate xmin that leaves at least `min_tail` points and keeps
/// the one with the smallest KS distance. Zero values never enter a tail.
std::optional<PowerLawFit> fit_power_law(std::span<const std::uint64_t> values, std::size_t min_tail = kMinTailPoints);

} // namespace websample
