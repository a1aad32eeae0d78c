#include "websample/powerlaw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "websample/errors.hpp"

namespace websample {

double hurwitz_zeta(double s, double q) {
    if (!(s > 1.0) || !(q > 0.0)) throw ParameterError("hurwitz_zeta needs s > 1 and q > 0");
    // Euler-Maclaurin: direct sum up to q + N, then the integral and
    // Bernoulli correction terms.
    constexpr int kDirect = 12;
    static constexpr double kBernoulli[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 1.0 / 66, -691.0 / 2730, 7.0 / 6};
    double sum = 0.0;
    for (int k = 0; k < kDirect; ++k) sum += std::pow(q + k, -s);
    const double a = q + kDirect;
    sum += std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(a, -s);

    double rising = s;  // s (s+1) ... (s+2j-2)
    double factorial = 2.0;
    double power = std::pow(a, -s - 1.0);
    for (int j = 1; j <= 7; ++j) {
        sum += kBernoulli[j - 1] / factorial * rising * power;
        rising *= (s + 2 * j - 1) * (s + 2 * j);
        factorial *= (2.0 * j + 1) * (2.0 * j + 2);
        power /= a * a;
    }
    return sum;
}

double power_law_mle(std::span<const std::uint64_t> values, std::uint64_t xmin) {
    if (xmin == 0) throw ParameterError("xmin must be >= 1");
    const double shift = static_cast<double>(xmin) - 0.5;
    double log_sum = 0.0;
    std::size_t n = 0;
    for (auto x : values) {
        if (x < xmin) continue;
        log_sum += std::log(static_cast<double>(x) / shift);
        ++n;
    }
    if (n == 0 || log_sum <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return 1.0 + static_cast<double>(n) / log_sum;
}

namespace {

double ks_sorted_tail(const std::vector<std::uint64_t>& sorted, std::size_t first, double exponent) {
    const std::uint64_t xmin = sorted[first];
    const double n = static_cast<double>(sorted.size() - first);
    const double norm = hurwitz_zeta(exponent, static_cast<double>(xmin));
    double worst = 0.0;
    std::size_t i = first;
    while (i < sorted.size()) {
        const std::uint64_t x = sorted[i];
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == x) ++j;
        // Empirical and model CDF just below x and at x.
        const double emp_below = static_cast<double>(i - first) / n;
        const double emp_at = static_cast<double>(j - first) / n;
        const double model_below = 1.0 - hurwitz_zeta(exponent, static_cast<double>(x)) / norm;
        const double model_at = 1.0 - hurwitz_zeta(exponent, static_cast<double>(x) + 1.0) / norm;
        worst = std::max({worst, std::abs(emp_below - model_below), std::abs(emp_at - model_at)});
        i = j;
    }
    return worst;
}

} // namespace

double power_law_ks(std::span<const std::uint64_t> values, std::uint64_t xmin, double exponent) {
    std::vector<std::uint64_t> sorted;
    for (auto x : values) {
        if (x >= xmin) sorted.push_back(x);
    }
    if (sorted.empty()) return 1.0;
    std::sort(sorted.begin(), sorted.end());
    return ks_sorted_tail(sorted, 0, exponent);
}

std::optional<PowerLawFit> fit_power_law(std::span<const std::uint64_t> values, std::size_t min_tail) {
    std::vector<std::uint64_t> sorted;
    for (auto x : values) {
        if (x > 0) sorted.push_back(x);
    }
    std::sort(sorted.begin(), sorted.end());
    if (sorted.size() < min_tail) return std::nullopt;

    // Suffix sums of ln x make every candidate's MLE O(1).
    std::vector<double> log_suffix(sorted.size() + 1, 0.0);
    for (std::size_t i = sorted.size(); i-- > 0;) log_suffix[i] = log_suffix[i + 1] + std::log(static_cast<double>(sorted[i]));

    std::optional<PowerLawFit> best;
    for (std::size_t first = 0; first + min_tail <= sorted.size();) {
        const std::uint64_t xmin = sorted[first];
        const std::size_t n = sorted.size() - first;
        const double log_sum = log_suffix[first] - static_cast<double>(n) * std::log(static_cast<double>(xmin) - 0.5);
        if (log_sum > 0.0) {
            const double alpha = 1.0 + static_cast<double>(n) / log_sum;
            const double ks = ks_sorted_tail(sorted, first, alpha);
            if (!best || ks < best->ks_distance) best = PowerLawFit{alpha, xmin, n, ks};
        }
        while (first < sorted.size() && sorted[first] == xmin) ++first;
    }
    return best;
}

} // namespace websample
