#pragma once

/*!
  \file kernels.hpp
  \brief Per-worker compute kernels shared by the parallel drivers.

  All kernels evaluate a face flux with euler::interface_flux and a cell with
  euler::update_cell, exactly like euler::sweep_axis, so a cell's new value
  depends only on its neighbours' values and never on the decomposition.
*/

#include <eulerpar/comm/distribution.hpp>
#include <eulerpar/euler/grid.hpp>
#include <eulerpar/euler/riemann.hpp>
#include <eulerpar/euler/state.hpp>
#include <eulerpar/euler/sweep.hpp>

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace eulerpar::strategies {

using euler::Axis;
using euler::Flux;
using euler::GasModel;
using euler::PrimitiveState;

/*!
  Update a line of `out.size()` cells. `ext` holds the same cells with one
  ghost on each side. `out` may alias ext[1 .. n].
*/
inline void sweep_line(std::span<const PrimitiveState> ext, std::span<PrimitiveState> out, Axis axis,
                       double ratio, const GasModel& gas, std::vector<Flux>& flux)
{
    const std::size_t n = out.size();
    flux.resize(n + 1);
    for (std::size_t f = 0; f <= n; ++f)
        flux[f] = euler::interface_flux(ext[f], ext[f + 1], axis, gas);
    for (std::size_t k = 0; k < n; ++k)
        out[k] = euler::update_cell(ext[k + 1], flux[k], flux[k + 1], ratio, gas);
}

//! A worker's block with a one-cell ghost frame. Padded coordinates: the
//! interior is [1, rows] x [1, cols].
class PaddedBlock {
  public:
    PaddedBlock() = default;
    explicit PaddedBlock(const comm::BlockExtent& extent)
        : extent_(extent), stride_(extent.cols + 2), data_((extent.rows + 2) * (extent.cols + 2))
    {
    }

    const comm::BlockExtent& extent() const noexcept { return extent_; }
    std::size_t rows() const noexcept { return extent_.rows; }
    std::size_t cols() const noexcept { return extent_.cols; }

    PrimitiveState& at(std::size_t pi, std::size_t pj) noexcept { return data_[pi * stride_ + pj]; }
    const PrimitiveState& at(std::size_t pi, std::size_t pj) const noexcept
    {
        return data_[pi * stride_ + pj];
    }

    //! Full padded row, ghost columns included.
    std::span<PrimitiveState> padded_row(std::size_t pi) noexcept
    {
        return {data_.data() + pi * stride_, stride_};
    }
    //! Columns 1..cols of padded row pi.
    std::span<PrimitiveState> row(std::size_t pi) noexcept
    {
        return {data_.data() + pi * stride_ + 1, extent_.cols};
    }
    std::span<const PrimitiveState> row(std::size_t pi) const noexcept
    {
        return {data_.data() + pi * stride_ + 1, extent_.cols};
    }

    void load(const euler::FieldState& field)
    {
        for (std::size_t li = 0; li < rows(); ++li) {
            const auto src = field.row(extent_.row0 + li).subspan(extent_.col0, cols());
            std::copy(src.begin(), src.end(), row(li + 1).begin());
        }
    }

    void store(euler::FieldState& field) const
    {
        for (std::size_t li = 0; li < rows(); ++li) {
            const auto src = row(li + 1);
            std::copy(src.begin(), src.end(),
                      field.row(extent_.row0 + li).begin() + static_cast<std::ptrdiff_t>(extent_.col0));
        }
    }

    void copy_column(std::size_t pj, std::span<PrimitiveState> dest) const
    {
        for (std::size_t li = 0; li < rows(); ++li)
            dest[li] = at(li + 1, pj);
    }

    void set_column(std::size_t pj, std::span<const PrimitiveState> src)
    {
        for (std::size_t li = 0; li < rows(); ++li)
            at(li + 1, pj) = src[li];
    }

    //! Periodic x ghosts from the block's own edge columns.
    void wrap_x()
    {
        for (std::size_t pi = 1; pi <= rows(); ++pi) {
            at(pi, 0) = at(pi, cols());
            at(pi, cols() + 1) = at(pi, 1);
        }
    }

    //! Periodic y ghosts from the block's own edge rows.
    void wrap_y()
    {
        std::ranges::copy(row(rows()), row(0).begin());
        std::ranges::copy(row(1), row(rows() + 1).begin());
    }

    void fill_bottom_inflow(const PrimitiveState& inflow) { std::ranges::fill(row(0), inflow); }
    void fill_top_outflow() { std::ranges::copy(row(rows()), row(rows() + 1).begin()); }

  private:
    comm::BlockExtent extent_{};
    std::size_t stride_ = 0;
    std::vector<PrimitiveState> data_;
};

//! x-sweep of every interior row; ghost columns must be current.
inline void sweep_block_x(PaddedBlock& b, double ratio, const GasModel& gas, std::vector<Flux>& flux)
{
    for (std::size_t pi = 1; pi <= b.rows(); ++pi) {
        const auto line = b.padded_row(pi);
        sweep_line(line, line.subspan(1, b.cols()), Axis::X, ratio, gas, flux);
    }
}

//! y-sweep of every interior column, one row of faces at a time; ghost rows
//! must be current.
inline void sweep_block_y(PaddedBlock& b, double ratio, const GasModel& gas, std::vector<Flux>& lower,
                          std::vector<Flux>& upper)
{
    const std::size_t nc = b.cols();
    lower.resize(nc);
    upper.resize(nc);
    for (std::size_t j = 0; j < nc; ++j)
        lower[j] = euler::interface_flux(b.at(0, j + 1), b.at(1, j + 1), Axis::Y, gas);
    for (std::size_t pi = 1; pi <= b.rows(); ++pi) {
        for (std::size_t j = 0; j < nc; ++j)
            upper[j] = euler::interface_flux(b.at(pi, j + 1), b.at(pi + 1, j + 1), Axis::Y, gas);
        for (std::size_t j = 0; j < nc; ++j)
            b.at(pi, j + 1) = euler::update_cell(b.at(pi, j + 1), lower[j], upper[j], ratio, gas);
        std::swap(lower, upper);
    }
}

/*!
  y-sweep of global rows [r0, r1) of an ny x nx field reachable through
  `get(i, j)` (i may be -1 or ny; boundary handling is the accessor's job).
  New values go to `put(i, j, state)`, never back through `get`.
*/
template <class Get, class Put>
void sweep_rows_y(std::ptrdiff_t r0, std::ptrdiff_t r1, std::size_t nx, Get&& get, Put&& put,
                  double ratio, const GasModel& gas, std::vector<Flux>& lower, std::vector<Flux>& upper)
{
    lower.resize(nx);
    upper.resize(nx);
    for (std::size_t j = 0; j < nx; ++j)
        lower[j] = euler::interface_flux(get(r0 - 1, j), get(r0, j), Axis::Y, gas);
    for (std::ptrdiff_t i = r0; i < r1; ++i) {
        for (std::size_t j = 0; j < nx; ++j)
            upper[j] = euler::interface_flux(get(i, j), get(i + 1, j), Axis::Y, gas);
        for (std::size_t j = 0; j < nx; ++j)
            put(i, j, euler::update_cell(get(i, j), lower[j], upper[j], ratio, gas));
        std::swap(lower, upper);
    }
}

}  // namespace eulerpar::strategies
