#include "orbdet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace orbdet {

double rmse(const std::vector<Vec3>& errors) {
    if (errors.empty()) throw Error(ErrorCode::EmptyInput, "rmse of an empty error sequence");
    double sum = 0.0;
    for (const Vec3& e : errors) sum += e.squaredNorm();
    return std::sqrt(sum / static_cast<double>(errors.size()));
}

double rmse(const std::vector<Vec3>& estimate, const std::vector<Vec3>& truth) {
    if (estimate.size() != truth.size()) {
        throw Error(ErrorCode::Alignment, "rmse over " + std::to_string(estimate.size()) +
                                              " estimates and " + std::to_string(truth.size()) +
                                              " truth samples");
    }
    std::vector<Vec3> errors(estimate.size());
    for (std::size_t k = 0; k < estimate.size(); ++k) errors[k] = estimate[k] - truth[k];
    return rmse(errors);
}

std::size_t top_quartile_count(std::size_t n) { return (n + 3) / 4; }

Aggregates aggregate(std::vector<double> values) {
    if (values.empty()) throw Error(ErrorCode::EmptyInput, "no values to aggregate");
    std::sort(values.begin(), values.end());
    const auto n = static_cast<double>(values.size());
    const std::size_t k = top_quartile_count(values.size());

    Aggregates out;
    out.average = std::accumulate(values.begin(), values.end(), 0.0) / n;
    out.best = values.front();
    out.top25 = std::accumulate(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k), 0.0) /
                static_cast<double>(k);
    // Pin best <= top25 <= average against rounding.
    out.top25 = std::clamp(out.top25, out.best, std::max(out.best, out.average));
    out.average = std::max(out.average, out.top25);
    return out;
}

}  // namespace orbdet
