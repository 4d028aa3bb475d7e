#pragma once

/*!
  \file sweep.hpp
  \brief First-order Godunov sweeps, Lie splitting and field diagnostics.

  Every driver in the library, sequential or parallel, advances a cell with
  the same two calls: interface_flux() for each face and update_cell() for
  the cell. Parallel drivers only differ in how they obtain the neighbour
  states, which is why their results are bitwise comparable.
*/

#include <eulerpar/errors.hpp>
#include <eulerpar/euler/grid.hpp>
#include <eulerpar/euler/riemann.hpp>
#include <eulerpar/euler/state.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <vector>

namespace eulerpar::euler {

/*!
  Finite-volume update of one cell given the fluxes through its lower and
  upper faces. `conserved` must equal prim_to_cons(cell). A cell whose
  increment is exactly zero keeps its primitive state untouched, so uniform
  regions do not pick up conversion round-off.
*/
inline PrimitiveState apply_update(const PrimitiveState& cell, const ConservedState& conserved,
                                   const Flux& lower, const Flux& upper, double ratio,
                                   const GasModel& gas)
{
    const double d0 = ratio * (lower[0] - upper[0]);
    const double d1 = ratio * (lower[1] - upper[1]);
    const double d2 = ratio * (lower[2] - upper[2]);
    const double d3 = ratio * (lower[3] - upper[3]);
    if (d0 == 0.0 && d1 == 0.0 && d2 == 0.0 && d3 == 0.0)
        return cell;
    return cons_to_prim({conserved.rho + d0, conserved.mx + d1, conserved.my + d2, conserved.e + d3},
                        gas);
}

inline PrimitiveState update_cell(const PrimitiveState& cell, const Flux& lower, const Flux& upper,
                                  double ratio, const GasModel& gas)
{
    return apply_update(cell, prim_to_cons(cell, gas), lower, upper, ratio, gas);
}

//! Extend a line by one ghost cell per side: periodic wrap, or inflow at the
//! bottom and a repeated top cell for the y inflow/outflow mode.
inline std::vector<AxisState> fill_ghosts(std::span<const AxisState> line, const BoundarySpec& bc,
                                          Axis axis)
{
    if (line.empty())
        throw InvalidArgument("fill_ghosts: empty line");
    std::vector<AxisState> out;
    out.reserve(line.size() + 2);
    if (axis == Axis::X || bc.y_mode == YBoundary::periodic) {
        out.push_back(line.back());
        out.insert(out.end(), line.begin(), line.end());
        out.push_back(line.front());
    } else {
        out.push_back(to_axis(bc.inflow_state, Axis::Y));
        out.insert(out.end(), line.begin(), line.end());
        out.push_back(line.back());
    }
    return out;
}

//! dt over the cell width along `axis`; every driver uses this exact value.
inline double update_ratio(const GridSpec& grid, Axis axis, double dt) noexcept
{
    return dt / grid.width(axis);
}

//! One Godunov step of size dt along `axis`, lines updated independently.
inline FieldState sweep_axis(const FieldState& field, Axis axis, double dt, const BoundarySpec& bc)
{
    const GridSpec& grid = field.grid();
    const GasModel& gas = field.gas();
    const double ratio = update_ratio(grid, axis, dt);
    const std::size_t lines = axis == Axis::X ? grid.ny() : grid.nx();
    const std::size_t len = axis == Axis::X ? grid.nx() : grid.ny();

    FieldState out = field;
    std::vector<AxisState> line(len);
    std::vector<Flux> flux(len + 1);
    auto cell = [&](std::size_t l, std::size_t k) -> PrimitiveState& {
        return axis == Axis::X ? out.at(l, k) : out.at(k, l);
    };

    for (std::size_t l = 0; l < lines; ++l) {
        for (std::size_t k = 0; k < len; ++k)
            line[k] = to_axis(cell(l, k), axis);
        const std::vector<AxisState> ext = fill_ghosts(line, bc, axis);
        for (std::size_t f = 0; f <= len; ++f)
            flux[f] = godunov_interface_flux(ext[f], ext[f + 1], axis, gas);
        for (std::size_t k = 0; k < len; ++k)
            cell(l, k) = update_cell(cell(l, k), flux[k], flux[k + 1], ratio, gas);
    }
    return out;
}

//! x-sweep followed by y-sweep, each over the full dt.
inline FieldState lie_step(const FieldState& field, double dt, const BoundarySpec& bc)
{
    return sweep_axis(sweep_axis(field, Axis::X, dt, bc), Axis::Y, dt, bc);
}

//! max over cells and axes of dt * (|velocity component| + a) / width.
inline double max_cfl(const FieldState& field, double dt)
{
    const GridSpec& grid = field.grid();
    double worst = 0.0;
    for (const PrimitiveState& s : field.cells()) {
        const double a = sound_speed(s, field.gas());
        worst = std::max(worst, dt * (std::abs(s.u) + a) / grid.dx());
        worst = std::max(worst, dt * (std::abs(s.v) + a) / grid.dy());
    }
    return worst;
}

struct Invariants {
    double mass = 0.0;
    double momentum_x = 0.0;
    double momentum_y = 0.0;
    double energy = 0.0;

    friend constexpr bool operator==(const Invariants&, const Invariants&) = default;
};

//! Domain integrals of the conserved variables (cell sums times dx*dy).
inline Invariants total_invariants(const FieldState& field)
{
    Invariants sum;
    for (const PrimitiveState& s : field.cells()) {
        const ConservedState c = prim_to_cons(s, field.gas());
        sum.mass += c.rho;
        sum.momentum_x += c.mx;
        sum.momentum_y += c.my;
        sum.energy += c.e;
    }
    const double area = field.grid().dx() * field.grid().dy();
    return {sum.mass * area, sum.momentum_x * area, sum.momentum_y * area, sum.energy * area};
}

//! Append `rows` copies of the top row above the domain.
inline FieldState extend_with_ghost_band(const FieldState& field, std::size_t rows)
{
    if (rows == 0)
        return field;
    const GridSpec& g = field.grid();
    FieldState out(g.with_rows(g.ny() + rows), field.gas());
    for (std::size_t i = 0; i < out.grid().ny(); ++i) {
        const auto src = field.row(std::min(i, g.ny() - 1));
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
}

//! Inverse of extend_with_ghost_band: keep the bottom rows of `original`.
inline FieldState strip_ghost_band(const FieldState& field, const GridSpec& original)
{
    if (field.grid() == original)
        return field;
    const GridSpec& g = field.grid();
    if (g.nx() != original.nx() || g.ny() < original.ny())
        throw InvalidArgument("strip_ghost_band: field does not contain the original grid");
    FieldState out(original, field.gas());
    for (std::size_t i = 0; i < out.grid().ny(); ++i) {
        const auto src = field.row(i);
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
}

}  // namespace eulerpar::euler
