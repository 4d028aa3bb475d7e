#pragma once

/*!
  \file drivers.hpp
  \brief Per-worker time loops of the parallel strategies.

  Each driver runs inside one SPMD worker, advances its part of the field for
  the requested number of Lie steps and writes the part back into the shared
  result field. Only the time loop is timed; it starts and ends with an
  untimed barrier so all workers measure the same interval.
*/

#include <eulerpar/comm.hpp>
#include <eulerpar/euler.hpp>
#include <eulerpar/strategies/decomposition.hpp>
#include <eulerpar/strategies/kernels.hpp>

#include <chrono>
#include <cstddef>
#include <vector>

namespace eulerpar::strategies {

using euler::ConservedState;

//! Everything a worker needs to run its part of a simulation.
struct DriverContext {
    const DecompositionPlan& plan;
    euler::GridSpec grid;
    euler::GasModel gas;
    euler::BoundarySpec bc;
    double dt;
    std::size_t steps;
    const euler::FieldState& initial;
    euler::FieldState& result;

    bool y_periodic() const noexcept { return bc.y_mode == euler::YBoundary::periodic; }
    double ratio(Axis axis) const noexcept { return euler::update_ratio(grid, axis, dt); }
};

struct WorkerOutcome {
    double seconds = 0.0;
    comm::WorkerStats loop;
};

namespace detail {

inline comm::WorkerStats operator-(const comm::WorkerStats& a, const comm::WorkerStats& b)
{
    return {a.barriers - b.barriers, a.sends - b.sends, a.recvs - b.recvs, a.bytes_sent - b.bytes_sent};
}

template <class Step>
WorkerOutcome timed_loop(comm::Worker& w, std::size_t steps, Step&& step)
{
    w.barrier();
    const comm::WorkerStats before = w.stats();
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t s = 0; s < steps; ++s)
        step();
    const comm::WorkerStats after = w.stats();
    w.barrier();
    const auto t1 = std::chrono::steady_clock::now();
    return {std::chrono::duration<double>(t1 - t0).count(), after - before};
}

// Tags name the direction a message travels.
enum Tag : int { to_down = 0, to_up = 1, to_left = 2, to_right = 3 };

//! Ghost rows from the up/down neighbours, or from the y boundary condition.
inline void exchange_rows(comm::Worker& w, PaddedBlock& b, const Neighbors& nb, const DriverContext& ctx)
{
    std::vector<comm::Ticket> tickets;
    if (nb.down) {
        tickets.push_back(w.recv_async(*nb.down, to_up, b.row(0)));
        tickets.push_back(w.send_async(*nb.down, to_down, std::span<const PrimitiveState>(b.row(1))));
    } else {
        b.fill_bottom_inflow(ctx.bc.inflow_state);
    }
    if (nb.up) {
        tickets.push_back(w.recv_async(*nb.up, to_down, b.row(b.rows() + 1)));
        tickets.push_back(w.send_async(*nb.up, to_up, std::span<const PrimitiveState>(b.row(b.rows()))));
    } else {
        b.fill_top_outflow();
    }
    w.wait_all(tickets);
}

//! Ghost columns from the left/right neighbours (patch mode only).
inline void exchange_columns(comm::Worker& w, PaddedBlock& b, const Neighbors& nb,
                             std::vector<PrimitiveState>& buf)
{
    const std::size_t n = b.rows();
    buf.resize(4 * n);
    const std::span<PrimitiveState> out_left(buf.data(), n), out_right(buf.data() + n, n),
        in_left(buf.data() + 2 * n, n), in_right(buf.data() + 3 * n, n);
    b.copy_column(1, out_left);
    b.copy_column(b.cols(), out_right);
    std::vector<comm::Ticket> tickets;
    tickets.push_back(w.recv_async(*nb.left, to_right, in_left));
    tickets.push_back(w.recv_async(*nb.right, to_left, in_right));
    tickets.push_back(w.send_async(*nb.left, to_left, std::span<const PrimitiveState>(out_left)));
    tickets.push_back(w.send_async(*nb.right, to_right, std::span<const PrimitiveState>(out_right)));
    w.wait_all(tickets);
    b.set_column(0, in_left);
    b.set_column(b.cols() + 1, in_right);
}

// --- one-sided helpers -----------------------------------------------------

//! Copy the block's edge rows and columns into its own shared storage.
inline void publish_edges(comm::LocalView<PrimitiveState> view, const PaddedBlock& b)
{
    const std::size_t r = b.rows(), c = b.cols();
    std::ranges::copy(b.row(1), view.row(0).begin());
    std::ranges::copy(b.row(r), view.row(r - 1).begin());
    for (std::size_t li = 0; li < r; ++li) {
        view.at(li, 0) = b.at(li + 1, 1);
        view.at(li, c - 1) = b.at(li + 1, c);
    }
}

inline void fetch_rows(const comm::SharedArray2D<PrimitiveState>& a, PaddedBlock& b, const Neighbors& nb,
                       const DecompositionPlan& plan, const DriverContext& ctx)
{
    const comm::BlockExtent& e = b.extent();
    if (nb.down) {
        const comm::BlockExtent& d = plan.workers[*nb.down].extent;
        a.get_block(b.row(0), d.row0 + d.rows - 1, e.col0, e.cols);
    } else {
        b.fill_bottom_inflow(ctx.bc.inflow_state);
    }
    if (nb.up) {
        const comm::BlockExtent& u = plan.workers[*nb.up].extent;
        a.get_block(b.row(b.rows() + 1), u.row0, e.col0, e.cols);
    } else {
        b.fill_top_outflow();
    }
}

inline void fetch_columns(const comm::SharedArray2D<PrimitiveState>& a, PaddedBlock& b, const Neighbors& nb,
                          const DecompositionPlan& plan, std::vector<PrimitiveState>& buf)
{
    const comm::BlockExtent& e = b.extent();
    const std::size_t nx = a.cols();
    buf.resize(e.rows);
    const comm::BlockExtent& l = plan.workers[*nb.left].extent;
    a.get_strided(buf, e.row0, l.col0 + l.cols - 1, e.rows, nx);
    b.set_column(0, buf);
    const comm::BlockExtent& r = plan.workers[*nb.right].extent;
    a.get_strided(buf, e.row0, r.col0, e.rows, nx);
    b.set_column(b.cols() + 1, buf);
}

}  // namespace detail

// --- two-sided -------------------------------------------------------------

inline WorkerOutcome drive_two_sided_row(comm::Worker& w, const DriverContext& ctx)
{
    const WorkerPlan& me = ctx.plan.workers[w.id()];
    PaddedBlock b(me.extent);
    b.load(ctx.initial);
    std::vector<Flux> f1, f2;
    const double rx = ctx.ratio(Axis::X), ry = ctx.ratio(Axis::Y);

    const WorkerOutcome out = detail::timed_loop(w, ctx.steps, [&] {
        b.wrap_x();
        sweep_block_x(b, rx, ctx.gas, f1);
        detail::exchange_rows(w, b, me.neighbors, ctx);
        sweep_block_y(b, ry, ctx.gas, f1, f2);
    });
    b.store(ctx.result);
    return out;
}

//! All four sides are exchanged before each directional sweep.
inline WorkerOutcome drive_two_sided_patch(comm::Worker& w, const DriverContext& ctx)
{
    const WorkerPlan& me = ctx.plan.workers[w.id()];
    PaddedBlock b(me.extent);
    b.load(ctx.initial);
    std::vector<Flux> f1, f2;
    std::vector<PrimitiveState> buf;
    const double rx = ctx.ratio(Axis::X), ry = ctx.ratio(Axis::Y);

    const WorkerOutcome out = detail::timed_loop(w, ctx.steps, [&] {
        detail::exchange_columns(w, b, me.neighbors, buf);
        detail::exchange_rows(w, b, me.neighbors, ctx);
        sweep_block_x(b, rx, ctx.gas, f1);
        detail::exchange_columns(w, b, me.neighbors, buf);
        detail::exchange_rows(w, b, me.neighbors, ctx);
        sweep_block_y(b, ry, ctx.gas, f1, f2);
    });
    b.store(ctx.result);
    return out;
}

// --- shared array, row bands -----------------------------------------------

namespace detail {

//! y-neighbour lookup on a globally addressed field with boundary handling.
template <class Read>
auto y_accessor(Read read, const DriverContext& ctx)
{
    const std::ptrdiff_t ny = static_cast<std::ptrdiff_t>(ctx.grid.ny());
    return [read, ny, &ctx](std::ptrdiff_t i, std::size_t j) -> PrimitiveState {
        if (i < 0)
            return ctx.y_periodic() ? read(static_cast<std::size_t>(ny - 1), j) : ctx.bc.inflow_state;
        if (i >= ny)
            return ctx.y_periodic() ? read(0, j) : read(static_cast<std::size_t>(ny - 1), j);
        return read(static_cast<std::size_t>(i), j);
    };
}

/*!
  Shared-array sweeps with staging: barrier, compute new values of the own
  rows into private storage, barrier, write them back. The second barrier
  keeps neighbours from seeing a half-updated band.
*/
template <class Read, class Write>
WorkerOutcome staged_shared_loop(comm::Worker& w, const DriverContext& ctx, Read read, Write write)
{
    const comm::BlockExtent e = ctx.plan.workers[w.id()].extent;
    const std::size_t nx = ctx.grid.nx();
    std::vector<PrimitiveState> staging(e.rows * nx), ext(nx + 2);
    std::vector<Flux> f1, f2;
    const double rx = ctx.ratio(Axis::X), ry = ctx.ratio(Axis::Y);
    auto get = y_accessor(read, ctx);
    auto put = [&](std::ptrdiff_t i, std::size_t j, const PrimitiveState& s) {
        staging[(static_cast<std::size_t>(i) - e.row0) * nx + j] = s;
    };
    auto write_back = [&] {
        for (std::size_t li = 0; li < e.rows; ++li)
            for (std::size_t j = 0; j < nx; ++j)
                write(e.row0 + li, j, staging[li * nx + j]);
    };

    return timed_loop(w, ctx.steps, [&] {
        w.barrier();
        for (std::size_t li = 0; li < e.rows; ++li) {
            const std::size_t i = e.row0 + li;
            ext[0] = read(i, nx - 1);
            for (std::size_t j = 0; j < nx; ++j)
                ext[j + 1] = read(i, j);
            ext[nx + 1] = read(i, 0);
            sweep_line(ext, std::span(staging).subspan(li * nx, nx), Axis::X, rx, ctx.gas, f1);
        }
        w.barrier();
        write_back();

        w.barrier();
        sweep_rows_y(static_cast<std::ptrdiff_t>(e.row0), static_cast<std::ptrdiff_t>(e.row0 + e.rows), nx,
                     get, put, ry, ctx.gas, f1, f2);
        w.barrier();
        write_back();
    });
}

}  // namespace detail

//! Every access, local or remote, goes through global addressing.
inline WorkerOutcome drive_shared_naive(comm::Worker& w, const DriverContext& ctx,
                                        comm::SharedArray2D<PrimitiveState>& a)
{
    auto read = [&a](std::size_t i, std::size_t j) { return a.global_read(i, j); };
    auto write = [&a](std::size_t i, std::size_t j, const PrimitiveState& s) { a.global_write(i, j, s); };
    const WorkerOutcome out = detail::staged_shared_loop(w, ctx, read, write);
    auto view = a.local_view(w.id());
    const comm::BlockExtent e = view.extent();
    for (std::size_t li = 0; li < e.rows; ++li)
        std::ranges::copy(view.row(li), ctx.result.row(e.row0 + li).begin());
    return out;
}

//! Own rows through a local view; only the two neighbour rows are remote.
inline WorkerOutcome drive_shared_pointer(comm::Worker& w, const DriverContext& ctx,
                                          comm::SharedArray2D<PrimitiveState>& a)
{
    const auto view = a.local_view(w.id());
    const comm::BlockExtent e = view.extent();
    auto read = [&a, view, e](std::size_t i, std::size_t j) {
        if (i >= e.row0 && i < e.row0 + e.rows)
            return view.at(i - e.row0, j);
        return a.global_read(i, j);
    };
    auto write = [view, e](std::size_t i, std::size_t j, const PrimitiveState& s) {
        view.at(i - e.row0, j) = s;
    };
    const WorkerOutcome out = detail::staged_shared_loop(w, ctx, read, write);
    for (std::size_t li = 0; li < e.rows; ++li)
        std::ranges::copy(view.row(li), ctx.result.row(e.row0 + li).begin());
    return out;
}

/*!
  Two-phase sweeps. Phase one stores conserved variables and the flux through
  each cell's lower face in shared scratch arrays; phase two applies the
  update from those arrays. The x-sweep is local to a band and needs no
  barrier; the y-sweep needs one barrier to publish the x results and one
  between its phases.
*/
inline WorkerOutcome drive_shared_barrier(comm::Worker& w, const DriverContext& ctx,
                                          comm::SharedArray2D<PrimitiveState>& a,
                                          comm::SharedArray2D<ConservedState>& cons,
                                          comm::SharedArray2D<Flux>& lower_flux)
{
    const auto view = a.local_view(w.id());
    const auto cview = cons.local_view(w.id());
    const auto fview = lower_flux.local_view(w.id());
    const comm::BlockExtent e = view.extent();
    const std::size_t nx = ctx.grid.nx(), ny = ctx.grid.ny();
    const double rx = ctx.ratio(Axis::X), ry = ctx.ratio(Axis::Y);
    const euler::GasModel& gas = ctx.gas;
    std::vector<Flux> xflux(nx + 1);

    auto read = [&a, view, e](std::size_t i, std::size_t j) {
        if (i >= e.row0 && i < e.row0 + e.rows)
            return view.at(i - e.row0, j);
        return a.global_read(i, j);
    };
    auto get = detail::y_accessor(read, ctx);

    const WorkerOutcome out = detail::timed_loop(w, ctx.steps, [&] {
        for (std::size_t li = 0; li < e.rows; ++li) {
            for (std::size_t j = 0; j < nx; ++j)
                cview.at(li, j) = euler::prim_to_cons(view.at(li, j), gas);
            xflux[0] = euler::interface_flux(view.at(li, nx - 1), view.at(li, 0), Axis::X, gas);
            for (std::size_t j = 1; j < nx; ++j)
                xflux[j] = euler::interface_flux(view.at(li, j - 1), view.at(li, j), Axis::X, gas);
            xflux[nx] = euler::interface_flux(view.at(li, nx - 1), view.at(li, 0), Axis::X, gas);
            for (std::size_t j = 0; j < nx; ++j)
                view.at(li, j) =
                    euler::apply_update(view.at(li, j), cview.at(li, j), xflux[j], xflux[j + 1], rx, gas);
        }

        w.barrier();
        for (std::size_t li = 0; li < e.rows; ++li) {
            const std::ptrdiff_t i = static_cast<std::ptrdiff_t>(e.row0 + li);
            for (std::size_t j = 0; j < nx; ++j) {
                cview.at(li, j) = euler::prim_to_cons(view.at(li, j), gas);
                fview.at(li, j) = euler::interface_flux(get(i - 1, j), view.at(li, j), Axis::Y, gas);
            }
        }
        w.barrier();
        for (std::size_t li = 0; li < e.rows; ++li) {
            const std::size_t i = e.row0 + li;
            for (std::size_t j = 0; j < nx; ++j) {
                Flux upper;
                if (li + 1 < e.rows)
                    upper = fview.at(li + 1, j);
                else if (i + 1 < ny)
                    upper = lower_flux.global_read(i + 1, j);
                else if (ctx.y_periodic())
                    upper = lower_flux.global_read(0, j);
                else
                    upper = euler::interface_flux(view.at(li, j), view.at(li, j), Axis::Y, gas);
                view.at(li, j) = euler::apply_update(view.at(li, j), cview.at(li, j), fview.at(li, j),
                                                     upper, ry, gas);
            }
        }
    });
    for (std::size_t li = 0; li < e.rows; ++li)
        std::ranges::copy(view.row(li), ctx.result.row(e.row0 + li).begin());
    return out;
}

// --- one-sided halos -------------------------------------------------------

//! Local working block; the boundary rows travel through the shared array.
inline WorkerOutcome drive_one_sided_halo(comm::Worker& w, const DriverContext& ctx,
                                          comm::SharedArray2D<PrimitiveState>& a)
{
    const WorkerPlan& me = ctx.plan.workers[w.id()];
    const auto view = a.local_view(w.id());
    PaddedBlock b(me.extent);
    b.load(ctx.initial);
    std::vector<Flux> f1, f2;
    const double rx = ctx.ratio(Axis::X), ry = ctx.ratio(Axis::Y);

    const WorkerOutcome out = detail::timed_loop(w, ctx.steps, [&] {
        b.wrap_x();
        sweep_block_x(b, rx, ctx.gas, f1);
        std::ranges::copy(b.row(1), view.row(0).begin());
        std::ranges::copy(b.row(b.rows()), view.row(b.rows() - 1).begin());
        w.barrier();
        detail::fetch_rows(a, b, me.neighbors, ctx.plan, ctx);
        w.barrier();
        sweep_block_y(b, ry, ctx.gas, f1, f2);
    });
    b.store(ctx.result);
    return out;
}

inline WorkerOutcome drive_one_sided_patch(comm::Worker& w, const DriverContext& ctx,
                                           comm::SharedArray2D<PrimitiveState>& a)
{
    const WorkerPlan& me = ctx.plan.workers[w.id()];
    const auto view = a.local_view(w.id());
    PaddedBlock b(me.extent);
    b.load(ctx.initial);
    std::vector<Flux> f1, f2;
    std::vector<PrimitiveState> buf;
    const double rx = ctx.ratio(Axis::X), ry = ctx.ratio(Axis::Y);

    const WorkerOutcome out = detail::timed_loop(w, ctx.steps, [&] {
        detail::publish_edges(view, b);
        w.barrier();
        detail::fetch_columns(a, b, me.neighbors, ctx.plan, buf);
        w.barrier();
        sweep_block_x(b, rx, ctx.gas, f1);

        detail::publish_edges(view, b);
        w.barrier();
        detail::fetch_rows(a, b, me.neighbors, ctx.plan, ctx);
        w.barrier();
        sweep_block_y(b, ry, ctx.gas, f1, f2);
    });
    b.store(ctx.result);
    return out;
}

/*!
  Fetches x and y halos together before the x-sweep. The y-sweep then uses
  neighbour rows from before the x-sweep, a first-order approximation of the
  split step. Physical y boundaries are still applied to the current state.
*/
inline WorkerOutcome drive_one_sided_patch_fused(comm::Worker& w, const DriverContext& ctx,
                                                 comm::SharedArray2D<PrimitiveState>& a)
{
    const WorkerPlan& me = ctx.plan.workers[w.id()];
    const auto view = a.local_view(w.id());
    PaddedBlock b(me.extent);
    b.load(ctx.initial);
    std::vector<Flux> f1, f2;
    std::vector<PrimitiveState> buf;
    const double rx = ctx.ratio(Axis::X), ry = ctx.ratio(Axis::Y);

    const WorkerOutcome out = detail::timed_loop(w, ctx.steps, [&] {
        detail::publish_edges(view, b);
        w.barrier();
        detail::fetch_columns(a, b, me.neighbors, ctx.plan, buf);
        detail::fetch_rows(a, b, me.neighbors, ctx.plan, ctx);
        w.barrier();
        sweep_block_x(b, rx, ctx.gas, f1);
        if (!me.neighbors.down)
            b.fill_bottom_inflow(ctx.bc.inflow_state);
        if (!me.neighbors.up)
            b.fill_top_outflow();
        sweep_block_y(b, ry, ctx.gas, f1, f2);
    });
    b.store(ctx.result);
    return out;
}

}  // namespace eulerpar::strategies
