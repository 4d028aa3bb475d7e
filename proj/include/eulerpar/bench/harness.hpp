#pragma once

#include <eulerpar/bench/plan.hpp>
#include <eulerpar/errors.hpp>
#include <eulerpar/euler.hpp>
#include <eulerpar/strategies.hpp>

#include <algorithm>
#include <bit>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace eulerpar::bench {

//! One timed configuration. `factor` is baseline/wall for strong scaling
//! (speedup) and wall/baseline for weak scaling (normalized runtime).
struct BenchRecord {
    BenchMode mode = BenchMode::strong;
    StrategyId strategy = StrategyId::sequential;
    std::size_t workers = 1;
    std::size_t nx = 0;
    std::size_t ny = 0;
    std::size_t steps = 0;
    double dt = 0.0;
    std::size_t repetitions = 1;
    double wall_seconds = 0.0;
    double baseline_seconds = 0.0;
    double factor = 1.0;

    friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

inline double speedup(double baseline_seconds, double wall_seconds) { return baseline_seconds / wall_seconds; }
inline double normalized(double baseline_seconds, double wall_seconds) { return wall_seconds / baseline_seconds; }

inline double derived_factor(BenchMode mode, double baseline_seconds, double wall_seconds)
{
    return mode == BenchMode::strong ? speedup(baseline_seconds, wall_seconds)
                                     : normalized(baseline_seconds, wall_seconds);
}

struct RunRequest {
    StrategyId strategy;
    euler::GridSpec grid;
    std::size_t workers;
    euler::TimeControls time;
};

//! Returns the wall time of one run in seconds.
using Runner = std::function<double(const RunRequest&)>;

//! Blast problem with the default boundaries, timed by run_simulation.
inline double simulate_blast(const RunRequest& r)
{
    const euler::FieldState field = euler::init_sedov(r.grid);
    return strategies::run_simulation(r.strategy, field, r.time, euler::BoundarySpec{}, r.workers).wall_seconds;
}

inline double median(std::vector<double> xs)
{
    if (xs.empty())
        throw InvalidArgument("median of nothing");
    std::ranges::sort(xs);
    const std::size_t n = xs.size();
    return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

/*!
  Grid for w workers in weak scaling: w times the base cells, doubling ny,
  then nx, then ny, ... Only powers of two can be reached.
*/
inline euler::GridSpec weak_grid(std::size_t base_nx, std::size_t base_ny, std::size_t workers)
{
    if (workers < 1 || !std::has_single_bit(workers))
        throw NonSquareScaling(std::to_string(workers) +
                               " workers cannot be reached by doubling the grid one axis at a time");
    const std::size_t k = static_cast<std::size_t>(std::countr_zero(workers));
    return {base_nx << (k / 2), base_ny << ((k + 1) / 2)};
}

namespace detail {

inline euler::GridSpec grid_for(const BenchPlan& plan, std::size_t workers)
{
    return plan.mode == BenchMode::strong ? euler::GridSpec(plan.nx, plan.ny)
                                          : weak_grid(plan.nx, plan.ny, workers);
}

inline double timed(const Runner& run, const RunRequest& req, std::size_t reps)
{
    std::vector<double> walls;
    walls.reserve(reps);
    for (std::size_t r = 0; r < reps; ++r)
        walls.push_back(run(req));
    return median(std::move(walls));
}

inline std::vector<BenchRecord> run_plan(const BenchPlan& plan, const Runner& run)
{
    plan.validate();
    const euler::TimeControls tc(plan.dt, plan.t_final);

    // Check every configuration before the first run.
    for (std::size_t w : plan.worker_counts) {
        const euler::GridSpec g = grid_for(plan, w);
        for (StrategyId s : plan.strategies)
            if (s != StrategyId::sequential)
                strategies::decompose(g, w, strategies::decomposition_mode(s));
    }

    std::vector<BenchRecord> records;
    for (StrategyId s : plan.strategies) {
        double baseline = 0.0;
        if (plan.worker_counts.front() != 1)
            baseline = timed(run, {s, grid_for(plan, 1), 1, tc}, plan.repetitions);
        for (std::size_t w : plan.worker_counts) {
            const euler::GridSpec g = grid_for(plan, w);
            const double wall = timed(run, {s, g, w, tc}, plan.repetitions);
            if (w == 1)
                baseline = wall;
            records.push_back({plan.mode, s, w, g.nx(), g.ny(), tc.steps(), plan.dt, plan.repetitions, wall,
                               baseline, derived_factor(plan.mode, baseline, wall)});
        }
    }
    return records;
}

}  // namespace detail

//! Fixed grid for every worker count; speedup relative to one worker.
inline std::vector<BenchRecord> run_strong_scaling(BenchPlan plan, const Runner& run = simulate_blast)
{
    plan.mode = BenchMode::strong;
    return detail::run_plan(plan, run);
}

//! Grid grows with the worker count; runtime normalized to one worker.
inline std::vector<BenchRecord> run_weak_scaling(BenchPlan plan, const Runner& run = simulate_blast)
{
    plan.mode = BenchMode::weak;
    for (std::size_t w : plan.worker_counts)
        weak_grid(plan.nx, plan.ny, w);
    return detail::run_plan(plan, run);
}

}  // namespace eulerpar::bench
