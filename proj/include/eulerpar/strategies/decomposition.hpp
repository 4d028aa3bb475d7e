#pragma once

#include <eulerpar/comm/distribution.hpp>
#include <eulerpar/errors.hpp>
#include <eulerpar/euler/grid.hpp>

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace eulerpar::strategies {

enum class DecompositionMode { rows, patches };

//! "down" is the neighbour at lower row indices (towards the inflow).
struct Neighbors {
    std::optional<std::size_t> down;
    std::optional<std::size_t> up;
    std::optional<std::size_t> left;
    std::optional<std::size_t> right;

    friend bool operator==(const Neighbors&, const Neighbors&) = default;
};

struct WorkerPlan {
    comm::BlockExtent extent;
    Neighbors neighbors;
};

struct DecompositionPlan {
    comm::Distribution distribution;
    DecompositionMode mode = DecompositionMode::rows;
    std::vector<WorkerPlan> workers;
    std::size_t halo_width = 1;

    std::size_t n_workers() const noexcept { return workers.size(); }
};

//! Factor pair pr x pc of n closest to square, pr <= pc.
inline std::pair<std::size_t, std::size_t> patch_factors(std::size_t n)
{
    if (n == 0)
        throw InvalidArgument("patch_factors: n must be positive");
    std::size_t pr = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
    while (pr > 1 && n % pr != 0)
        --pr;
    while ((pr + 1) * (pr + 1) <= n && n % (pr + 1) == 0)
        ++pr;
    return {pr, n / pr};
}

/*!
  Split the grid over n workers. Rows mode gives each worker a band of whole
  rows, so x stays periodic inside the worker and it has no left/right
  neighbours. Patch mode wraps left/right across the periodic x boundary.
  Up/down neighbours wrap only when y is periodic.
*/
inline DecompositionPlan decompose(const euler::GridSpec& grid, std::size_t n, DecompositionMode mode,
                                   euler::YBoundary y_mode = euler::YBoundary::inflow_outflow)
{
    if (n < 1)
        throw InvalidArgument("decompose: need at least one worker");
    std::size_t pr = n, pc = 1;
    if (mode == DecompositionMode::patches)
        std::tie(pr, pc) = patch_factors(n);
    if (pr > grid.ny() || pc > grid.nx())
        throw TooManyWorkers(std::to_string(n) + " workers as " + std::to_string(pr) + "x" +
                             std::to_string(pc) + " do not fit a " + std::to_string(grid.nx()) +
                             "x" + std::to_string(grid.ny()) + " grid");

    DecompositionPlan plan{mode == DecompositionMode::rows
                               ? comm::Distribution::blocked_rows(grid.ny(), grid.nx(), n)
                               : comm::Distribution::blocked_patches(grid.ny(), grid.nx(), pr, pc),
                           mode,
                           {},
                           1};
    const comm::Distribution& d = plan.distribution;
    const bool y_wrap = y_mode == euler::YBoundary::periodic;
    plan.workers.reserve(n);
    for (std::size_t w = 0; w < n; ++w) {
        const std::size_t r = d.patch_row(w), c = d.patch_col(w);
        WorkerPlan wp{d.block(w), {}};
        if (r > 0)
            wp.neighbors.down = d.worker_at(r - 1, c);
        else if (y_wrap)
            wp.neighbors.down = d.worker_at(pr - 1, c);
        if (r + 1 < pr)
            wp.neighbors.up = d.worker_at(r + 1, c);
        else if (y_wrap)
            wp.neighbors.up = d.worker_at(0, c);
        if (mode == DecompositionMode::patches) {
            wp.neighbors.left = d.worker_at(r, (c + pc - 1) % pc);
            wp.neighbors.right = d.worker_at(r, (c + 1) % pc);
        }
        plan.workers.push_back(wp);
    }
    return plan;
}

}  // namespace eulerpar::strategies
