#pragma once

#include <eulerpar/errors.hpp>
#include <eulerpar/euler/state.hpp>

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace eulerpar::euler {

//! Uniform Cartesian grid. Row index i runs along y (bottom to top), column
//! index j along x.
class GridSpec {
  public:
    GridSpec(std::size_t nx, std::size_t ny, double lx = 1.0, double ly = 1.0)
        : nx_(nx), ny_(ny), lx_(lx), ly_(ly), dx_(lx / static_cast<double>(nx)),
          dy_(ly / static_cast<double>(ny))
    {
        if (nx < 2 || ny < 2)
            throw InvalidArgument("GridSpec: need at least 2 cells per axis, got " +
                                  std::to_string(nx) + "x" + std::to_string(ny));
        if (!(lx > 0.0) || !(ly > 0.0))
            throw InvalidArgument("GridSpec: domain lengths must be positive");
    }

    std::size_t nx() const noexcept { return nx_; }
    std::size_t ny() const noexcept { return ny_; }
    std::size_t cells() const noexcept { return nx_ * ny_; }
    double lx() const noexcept { return lx_; }
    double ly() const noexcept { return ly_; }
    double dx() const noexcept { return dx_; }
    double dy() const noexcept { return dy_; }
    double width(Axis axis) const noexcept { return axis == Axis::X ? dx() : dy(); }

    //! Cell-centre coordinates.
    double x_center(std::size_t j) const noexcept { return (static_cast<double>(j) + 0.5) * dx(); }
    double y_center(std::size_t i) const noexcept { return (static_cast<double>(i) + 0.5) * dy(); }

    //! Same spacing, `ny` rows. Keeps dy bitwise identical.
    GridSpec with_rows(std::size_t ny) const
    {
        GridSpec g(nx_, ny, lx_, dy_ * static_cast<double>(ny));
        g.dy_ = dy_;
        return g;
    }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;

  private:
    std::size_t nx_;
    std::size_t ny_;
    double lx_;
    double ly_;
    double dx_;
    double dy_;
};

//! Cell-averaged primitive states, row-major with x fastest.
class FieldState {
  public:
    FieldState(GridSpec grid, GasModel gas, PrimitiveState fill = {})
        : grid_(grid), gas_(gas), data_(grid.cells(), fill)
    {
    }

    const GridSpec& grid() const noexcept { return grid_; }
    const GasModel& gas() const noexcept { return gas_; }

    PrimitiveState& at(std::size_t i, std::size_t j) noexcept { return data_[i * grid_.nx() + j]; }
    const PrimitiveState& at(std::size_t i, std::size_t j) const noexcept
    {
        return data_[i * grid_.nx() + j];
    }

    std::span<PrimitiveState> row(std::size_t i) noexcept
    {
        return {data_.data() + i * grid_.nx(), grid_.nx()};
    }
    std::span<const PrimitiveState> row(std::size_t i) const noexcept
    {
        return {data_.data() + i * grid_.nx(), grid_.nx()};
    }

    std::span<PrimitiveState> cells() noexcept { return data_; }
    std::span<const PrimitiveState> cells() const noexcept { return data_; }

    //! Throws NonPhysicalState naming the first cell that violates rho>0, p>0.
    void validate() const
    {
        for (std::size_t k = 0; k < data_.size(); ++k) {
            if (!data_[k].valid())
                throw NonPhysicalState("cell (" + std::to_string(k / grid_.nx()) + "," +
                                       std::to_string(k % grid_.nx()) + ") " + to_string(data_[k]));
        }
    }

    friend bool operator==(const FieldState&, const FieldState&) = default;

  private:
    GridSpec grid_;
    GasModel gas_;
    std::vector<PrimitiveState> data_;
};

class TimeControls {
  public:
    TimeControls(double dt, double t_final) : dt_(dt), t_final_(t_final)
    {
        if (!(dt > 0.0))
            throw InvalidArgument("TimeControls: dt must be positive");
        if (!(t_final >= 0.0))
            throw InvalidArgument("TimeControls: t_final must be non-negative");
        const double n = std::round(t_final / dt);
        if (n < 1.0)
            throw InvalidArgument("TimeControls: t_final must cover at least one step");
        steps_ = static_cast<std::size_t>(n);
    }

    static TimeControls from_steps(double dt, std::size_t steps)
    {
        if (steps < 1)
            throw InvalidArgument("TimeControls: need at least one step");
        TimeControls tc(dt, dt);
        tc.steps_ = steps;
        tc.t_final_ = dt * static_cast<double>(steps);
        return tc;
    }

    double dt() const noexcept { return dt_; }
    double t_final() const noexcept { return t_final_; }
    std::size_t steps() const noexcept { return steps_; }

  private:
    double dt_;
    double t_final_;
    std::size_t steps_ = 1;
};

enum class YBoundary { inflow_outflow, periodic };

/*!
  Boundary handling. x is always periodic. In y the bottom ghost holds a
  fixed inflow state and the top ghost repeats the top interior cell, unless
  the fully periodic test mode is selected. `ghost_band_rows` extra rows are
  evolved above the top boundary and dropped from the result.
*/
struct BoundarySpec {
    YBoundary y_mode = YBoundary::inflow_outflow;
    PrimitiveState inflow_state{1.0, 0.0, 0.0, 1e-4};
    std::size_t ghost_band_rows = 0;

    static BoundarySpec periodic()
    {
        BoundarySpec bc;
        bc.y_mode = YBoundary::periodic;
        return bc;
    }

    void validate() const
    {
        if (y_mode == YBoundary::inflow_outflow && !inflow_state.valid())
            throw InvalidArgument("BoundarySpec: inflow state must have rho>0 and p>0");
    }

    friend bool operator==(const BoundarySpec&, const BoundarySpec&) = default;
};

}  // namespace eulerpar::euler
