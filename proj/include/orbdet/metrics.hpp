#pragma once

#include <cstddef>
#include <vector>

#include "orbdet/core.hpp"

namespace orbdet {

/// sqrt(mean |e_k|^2). Throws EmptyInput.
double rmse(const std::vector<Vec3>& errors);

/// RMSE of estimate - truth, paired by index. Throws Alignment on length mismatch.
double rmse(const std::vector<Vec3>& estimate, const std::vector<Vec3>& truth);

/// Number of runs averaged into the top-25% figure: ceil(n / 4).
std::size_t top_quartile_count(std::size_t n);

struct Aggregates {
    double average = 0.0;
    double best = 0.0;
    double top25 = 0.0;  // mean of the best ceil(n/4) values
};

/// Throws EmptyInput.
Aggregates aggregate(std::vector<double> values);

}  // namespace orbdet
