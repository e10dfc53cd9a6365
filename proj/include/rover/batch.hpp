#pragma once

#include <vector>

#include "rover/scenario.hpp"

namespace rover {

enum class Execution { Serial, Parallel };

/// Runs independent scenarios. The parallel path distributes runs over
/// OpenMP threads; results are returned in input order and are bitwise
/// identical to the serial path.
std::vector<ScenarioResult> run_batch(const std::vector<ScenarioConfig>& configs,
                                      Execution exec = Execution::Parallel);

/// Serial reference, kept for testing the parallel path.
std::vector<ScenarioResult> run_batch_serial(const std::vector<ScenarioConfig>& configs);

/// Copies of `base` with seeds first_seed .. first_seed + count - 1.
std::vector<ScenarioConfig> seed_sweep(const ScenarioConfig& base, std::uint64_t first_seed, std::size_t count);

int parallel_threads();

} // namespace rover
