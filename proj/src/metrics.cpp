#include "gss/metrics.hpp"

#include <cmath>
#include <string>

namespace gss::metrics {

double average_relative_error(std::span<const std::pair<double, double>> pairs) {
    if (pairs.empty()) return 0.0;
    double sum = 0;
    size_t i = 0;
    for (const auto& [truth, est] : pairs) {
        if (!(truth > 0))
            throw std::invalid_argument("relative error undefined for true value " +
                                        std::to_string(truth) + " at entry " +
                                        std::to_string(i));
        sum += est / truth - 1.0;
        ++i;
    }
    return sum / static_cast<double>(pairs.size());
}

double average_absolute_error(std::span<const std::pair<double, double>> pairs) {
    if (pairs.empty()) return 0.0;
    double sum = 0;
    for (const auto& [truth, est] : pairs) sum += est - truth;
    return sum / static_cast<double>(pairs.size());
}

double true_negative_recall(const std::vector<bool>& answered_unreachable) {
    if (answered_unreachable.empty()) return 1.0;
    size_t hits = 0;
    for (bool b : answered_unreachable) hits += b;
    return static_cast<double>(hits) / static_cast<double>(answered_unreachable.size());
}

double analytic_collision_rate(double edges, double adjacent, double combined_range) {
    if (!(combined_range >= 1) || !std::isfinite(combined_range))
        throw std::invalid_argument("combined range M must be >= 1");
    if (!(edges >= 0) || !(adjacent >= 0) || !std::isfinite(edges) || !std::isfinite(adjacent))
        throw std::invalid_argument("edge counts must be finite and non-negative");
    const double m2 = combined_range * combined_range;
    return std::exp(-(edges + (combined_range - 1.0) * adjacent) / m2);
}

namespace {

double log_choose(double n, double k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

double analytic_insertion_failure(double n_edges, double adjacent, double m, double r,
                                  double l, double k) {
    if (!std::isfinite(n_edges) || !std::isfinite(adjacent) || n_edges < 0 || adjacent < 0 ||
        adjacent > n_edges)
        throw std::invalid_argument("need 0 <= adjacent <= edges, finite");
    if (n_edges > 1e15)
        throw std::invalid_argument("edge count too large for stable evaluation");
    if (!(m >= 1) || !(r >= 1) || !(k >= 1))
        throw std::invalid_argument("m, r, k must be >= 1");
    if (l < 0 || l > 8 || l != std::floor(l))
        throw std::invalid_argument("l must be an integer in [0, 8]");
    if (l == 0) return 1.0;  // no rooms, every insert fails

    const double non_adjacent = n_edges - adjacent;
    const double log_m2 = std::log(m * m);
    const double log_rm = std::log(r * m);

    double pr = 0.0;
    for (int n = 0; n < static_cast<int>(l); ++n) {
        for (int a = 0; a <= n; ++a) {
            const int b = n - a;
            if (a > non_adjacent || b > adjacent) continue;
            const double lt = log_choose(non_adjacent, a) - a * log_m2 +
                              log_choose(adjacent, b) - b * log_rm -
                              (non_adjacent - a) / (m * m) - (adjacent - b) / (r * m);
            pr += std::exp(lt);
        }
    }
    pr = std::clamp(pr, 0.0, 1.0);
    return std::pow(1.0 - pr, k);
}

}  // namespace gss::metrics
