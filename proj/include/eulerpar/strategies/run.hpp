#pragma once

#include <eulerpar/comm.hpp>
#include <eulerpar/errors.hpp>
#include <eulerpar/euler.hpp>
#include <eulerpar/strategies/decomposition.hpp>
#include <eulerpar/strategies/drivers.hpp>
#include <eulerpar/strategies/strategy_id.hpp>

#include <chrono>
#include <cstddef>
#include <exception>
#include <optional>
#include <string>
#include <vector>

namespace eulerpar::strategies {

struct RunStats {
    std::size_t steps = 0;
    //! Counters of the timed loop only, one entry per worker.
    std::vector<comm::WorkerStats> workers;

    std::size_t barriers_per_step() const noexcept
    {
        return workers.empty() || steps == 0 ? 0 : workers.front().barriers / steps;
    }
};

struct RunResult {
    euler::FieldState field;
    double wall_seconds = 0.0;
    std::size_t workers = 1;
    RunStats stats;
};

inline DecompositionMode decomposition_mode(StrategyId s) noexcept
{
    return uses_patches(s) ? DecompositionMode::patches : DecompositionMode::rows;
}

namespace detail {

inline RunResult run_sequential(const euler::FieldState& field0, const euler::TimeControls& tc,
                                const euler::BoundarySpec& bc)
{
    euler::FieldState field = field0;
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t s = 0; s < tc.steps(); ++s)
        field = euler::lie_step(field, tc.dt(), bc);
    const auto t1 = std::chrono::steady_clock::now();
    RunResult r{std::move(field), std::chrono::duration<double>(t1 - t0).count(), 1, {}};
    r.stats.steps = tc.steps();
    r.stats.workers.assign(1, comm::WorkerStats{});
    return r;
}

inline comm::SharedArray2D<PrimitiveState> shared_copy(const euler::FieldState& field,
                                                       const DecompositionPlan& plan)
{
    const euler::GridSpec& g = field.grid();
    auto a = comm::alloc_shared<PrimitiveState>(g.ny(), g.nx(), plan.distribution, plan.n_workers());
    for (std::size_t w = 0; w < plan.n_workers(); ++w) {
        auto view = a.local_view(w);
        const comm::BlockExtent e = view.extent();
        for (std::size_t li = 0; li < e.rows; ++li) {
            const auto src = field.row(e.row0 + li).subspan(e.col0, e.cols);
            std::ranges::copy(src, view.row(li).begin());
        }
    }
    return a;
}

}  // namespace detail

/*!
  Advance `field0` by tc.steps() Lie steps with the given strategy on
  `n_workers` workers (the sequential strategy always uses one). Every
  strategy except one_sided_patch_fused returns a field bitwise equal to the
  sequential one. `wall_seconds` covers the time loop only.
*/
inline RunResult run_simulation(StrategyId strategy, const euler::FieldState& field0,
                                const euler::TimeControls& tc, const euler::BoundarySpec& bc,
                                std::size_t n_workers)
{
    bc.validate();
    field0.validate();
    if (n_workers < 1)
        throw InvalidArgument("run_simulation: need at least one worker");
    const double cfl = euler::max_cfl(field0, tc.dt());
    if (cfl > 1.0)
        throw CflViolation("CFL number " + std::to_string(cfl) + " exceeds 1 for dt " +
                           std::to_string(tc.dt()));

    const euler::GridSpec& out_grid = field0.grid();
    const euler::FieldState initial = euler::extend_with_ghost_band(field0, bc.ghost_band_rows);

    if (strategy == StrategyId::sequential) {
        RunResult r = detail::run_sequential(initial, tc, bc);
        r.field = euler::strip_ghost_band(r.field, out_grid);
        return r;
    }

    const DecompositionPlan plan = decompose(initial.grid(), n_workers, decomposition_mode(strategy), bc.y_mode);
    euler::FieldState result(initial.grid(), initial.gas());
    const DriverContext ctx{plan, initial.grid(), initial.gas(), bc, tc.dt(), tc.steps(), initial, result};

    std::optional<comm::SharedArray2D<PrimitiveState>> state;
    std::optional<comm::SharedArray2D<ConservedState>> cons;
    std::optional<comm::SharedArray2D<Flux>> lower_flux;
    if (strategy != StrategyId::two_sided_row && strategy != StrategyId::two_sided_patch)
        state.emplace(detail::shared_copy(initial, plan));
    if (strategy == StrategyId::shared_barrier) {
        const euler::GridSpec& g = initial.grid();
        cons.emplace(comm::alloc_shared<ConservedState>(g.ny(), g.nx(), plan.distribution, n_workers));
        lower_flux.emplace(comm::alloc_shared<Flux>(g.ny(), g.nx(), plan.distribution, n_workers));
    }

    auto kernel = [&](comm::Worker& w) -> WorkerOutcome {
        switch (strategy) {
        case StrategyId::two_sided_row: return drive_two_sided_row(w, ctx);
        case StrategyId::two_sided_patch: return drive_two_sided_patch(w, ctx);
        case StrategyId::shared_naive: return drive_shared_naive(w, ctx, *state);
        case StrategyId::shared_pointer: return drive_shared_pointer(w, ctx, *state);
        case StrategyId::shared_barrier: return drive_shared_barrier(w, ctx, *state, *cons, *lower_flux);
        case StrategyId::one_sided_halo: return drive_one_sided_halo(w, ctx, *state);
        case StrategyId::one_sided_patch: return drive_one_sided_patch(w, ctx, *state);
        case StrategyId::one_sided_patch_fused: return drive_one_sided_patch_fused(w, ctx, *state);
        case StrategyId::sequential: break;
        }
        throw InvalidArgument("run_simulation: unhandled strategy");
    };

    std::vector<WorkerOutcome> outcomes;
    try {
        outcomes = comm::spawn_spmd(n_workers, kernel);
    } catch (const WorkerPanic& e) {
        std::rethrow_exception(e.original());
    }

    RunResult r{euler::strip_ghost_band(result, out_grid), outcomes.front().seconds, n_workers, {}};
    r.stats.steps = tc.steps();
    for (const WorkerOutcome& o : outcomes)
        r.stats.workers.push_back(o.loop);
    return r;
}

}  // namespace eulerpar::strategies
