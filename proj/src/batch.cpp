#include "rover/batch.hpp"

#include <exception>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rover {

std::vector<ScenarioResult> run_batch_serial(const std::vector<ScenarioConfig>& configs)
{
    std::vector<ScenarioResult> out;
    out.reserve(configs.size());
    for (const auto& cfg : configs) {
        out.push_back(run_scenario(cfg));
    }
    return out;
}

std::vector<ScenarioResult> run_batch(const std::vector<ScenarioConfig>& configs, Execution exec)
{
    if (exec == Execution::Serial) {
        return run_batch_serial(configs);
    }

    std::vector<ScenarioResult> out(configs.size());
    std::vector<std::exception_ptr> errors(configs.size());
    const auto n = static_cast<long>(configs.size());

#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < n; ++i) {
        try {
            out[static_cast<std::size_t>(i)] = run_scenario(configs[static_cast<std::size_t>(i)]);
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }

    // exceptions cannot cross the parallel region; rethrow the first in input order
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return out;
}

std::vector<ScenarioConfig> seed_sweep(const ScenarioConfig& base, std::uint64_t first_seed, std::size_t count)
{
    std::vector<ScenarioConfig> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        ScenarioConfig c = base;
        c.noise.seed = first_seed + i;
        c.name = base.name + "_seed" + std::to_string(c.noise.seed);
        out.push_back(std::move(c));
    }
    return out;
}

int parallel_threads()
{
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace rover
