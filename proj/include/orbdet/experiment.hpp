#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "orbdet/report.hpp"
#include "orbdet/scenario.hpp"

namespace orbdet::harness {

/// Worker count from ORBDET_WORKERS, else the hardware concurrency.
std::size_t worker_count();

/// Calls fn(0..n-1) on up to `workers` threads. The first exception, by
/// index, is rethrown after all workers finish.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn);

/// Seed of run k: base seed + k. Sub-streams are split from it with mix_seed.
std::uint64_t run_seed(const Scenario& sc, std::size_t k);

/// Truth trajectory of run k, including its orbit jitter.
std::vector<StateVector> truth_trajectory(const Scenario& sc, std::size_t k);

/// Monte-Carlo over n_runs seeds. Every variant of a run shares one truth
/// trajectory, measurement sequence and initial estimate error. Errors are
/// ECI position errors at each filter step. Failed runs are kept in the
/// report and left out of the aggregates.
RunReport run_scenario(const Scenario& sc, std::size_t workers = worker_count());

/// Same protocol with the filter seeded by trilateration + Gibbs at the
/// middle of three epochs 0, s, 2s (s = iod_spacing). IOD failures are
/// recorded as InitializationFailure.
RunReport iod_then_filter(const Scenario& sc, std::size_t workers = worker_count());

/// One run_scenario per dropout length. The window opens where the
/// scenario's first window does (600 s if it has none) and the run ends when
/// it closes.
std::vector<SweepPoint> dropout_sweep(const Scenario& sc, const std::vector<double>& minutes,
                                      std::size_t workers = worker_count());

}  // namespace orbdet::harness
