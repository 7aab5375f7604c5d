#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace gss::metrics {

// Mean of est/true - 1 over (true, estimate) pairs. Entries with true <= 0
// are undefined and rejected.
double average_relative_error(std::span<const std::pair<double, double>> pairs);

// Mean of est - true.
double average_absolute_error(std::span<const std::pair<double, double>> pairs);

// Fraction of answers reporting "unreachable" over verified-unreachable pairs.
double true_negative_recall(const std::vector<bool>& answered_unreachable);

// Mean of |exact| / |reported| with exact-subset verification; both-empty
// counts as 1. The summarized structures have only false positives, so a
// reported set missing a true element is a correctness failure, not a metric.
template <typename T>
double average_precision(const std::vector<std::pair<std::vector<T>, std::vector<T>>>& sets) {
    if (sets.empty()) return 1.0;
    double sum = 0;
    for (const auto& [exact_in, reported_in] : sets) {
        auto exact = exact_in;
        auto reported = reported_in;
        std::sort(exact.begin(), exact.end());
        exact.erase(std::unique(exact.begin(), exact.end()), exact.end());
        std::sort(reported.begin(), reported.end());
        reported.erase(std::unique(reported.begin(), reported.end()), reported.end());
        if (!std::includes(reported.begin(), reported.end(), exact.begin(), exact.end()))
            throw std::invalid_argument(
                "precision: exact set not contained in reported set (false negative)");
        if (reported.empty())
            sum += 1.0;
        else
            sum += static_cast<double>(exact.size()) / static_cast<double>(reported.size());
    }
    return sum / static_cast<double>(sets.size());
}

// e^{-(E + (M-1) D) / M^2}: probability that an edge with D same-source /
// same-destination neighbours among E edges avoids every complete collision
// under a combined hash range of M.
double analytic_collision_rate(double edges, double adjacent, double combined_range);

// Upper bound on the probability that an insert becomes a left-over edge:
// P = (1 - Pr)^k with Pr the double binomial sum over bucket occupancies,
// evaluated in log space.
double analytic_insertion_failure(double n_edges, double adjacent, double m, double r,
                                  double l, double k);

}  // namespace gss::metrics
