#pragma once

/*!
  \file distribution.hpp
  \brief Blocked distributions of a 2D index space over SPMD workers.

  Extents follow the largest-remainder rule: when a length N is split into P
  parts, the first N % P parts get one extra element. Owners are computable in
  closed form, without communication.
*/

#include <eulerpar/errors.hpp>

#include <cstddef>
#include <string>

namespace eulerpar::comm {

//! Contiguous split of [0, n) into `parts` pieces.
class Split1D {
  public:
    Split1D() = default;
    Split1D(std::size_t n, std::size_t parts) : n_(n), parts_(parts)
    {
        if (parts == 0 || parts > n)
            throw IncompatibleDistribution("cannot split " + std::to_string(n) + " into " +
                                           std::to_string(parts) + " non-empty blocks");
        base_ = n / parts;
        rem_ = n % parts;
    }

    std::size_t length() const noexcept { return n_; }
    std::size_t parts() const noexcept { return parts_; }
    std::size_t start(std::size_t k) const noexcept { return k * base_ + (k < rem_ ? k : rem_); }
    std::size_t size(std::size_t k) const noexcept { return base_ + (k < rem_ ? 1 : 0); }

    std::size_t part_of(std::size_t i) const noexcept
    {
        const std::size_t big = rem_ * (base_ + 1);
        return i < big ? i / (base_ + 1) : rem_ + (i - big) / base_;
    }

    friend bool operator==(const Split1D&, const Split1D&) = default;

  private:
    std::size_t n_ = 0;
    std::size_t parts_ = 0;
    std::size_t base_ = 0;
    std::size_t rem_ = 0;
};

struct BlockExtent {
    std::size_t row0 = 0;
    std::size_t rows = 0;
    std::size_t col0 = 0;
    std::size_t cols = 0;

    std::size_t cells() const noexcept { return rows * cols; }
    bool contains(std::size_t i, std::size_t j) const noexcept
    {
        return i >= row0 && i < row0 + rows && j >= col0 && j < col0 + cols;
    }

    friend bool operator==(const BlockExtent&, const BlockExtent&) = default;
};

enum class DistributionMode { blocked_rows, blocked_patches };

/*!
  Ownership map of an ny x nx index space. Workers form a pr x pc grid in
  row-major order (worker w sits in patch row w / pc, patch column w % pc).
  Row distribution is the pc == 1 special case.
*/
class Distribution {
  public:
    static Distribution blocked_rows(std::size_t ny, std::size_t nx, std::size_t n_workers)
    {
        Distribution d(ny, nx, n_workers, 1);
        d.mode_ = DistributionMode::blocked_rows;
        return d;
    }

    static Distribution blocked_patches(std::size_t ny, std::size_t nx, std::size_t pr, std::size_t pc)
    {
        Distribution d(ny, nx, pr, pc);
        d.mode_ = DistributionMode::blocked_patches;
        return d;
    }

    DistributionMode mode() const noexcept { return mode_; }
    std::size_t rows() const noexcept { return row_split_.length(); }
    std::size_t cols() const noexcept { return col_split_.length(); }
    std::size_t pr() const noexcept { return row_split_.parts(); }
    std::size_t pc() const noexcept { return col_split_.parts(); }
    std::size_t n_workers() const noexcept { return pr() * pc(); }

    std::size_t patch_row(std::size_t worker) const noexcept { return worker / pc(); }
    std::size_t patch_col(std::size_t worker) const noexcept { return worker % pc(); }
    std::size_t worker_at(std::size_t patch_row, std::size_t patch_col) const noexcept
    {
        return patch_row * pc() + patch_col;
    }

    std::size_t owner(std::size_t i, std::size_t j) const noexcept
    {
        return worker_at(row_split_.part_of(i), col_split_.part_of(j));
    }

    BlockExtent block(std::size_t worker) const noexcept
    {
        const std::size_t r = patch_row(worker);
        const std::size_t c = patch_col(worker);
        return {row_split_.start(r), row_split_.size(r), col_split_.start(c), col_split_.size(c)};
    }

    friend bool operator==(const Distribution&, const Distribution&) = default;

  private:
    Distribution(std::size_t ny, std::size_t nx, std::size_t pr, std::size_t pc)
        : row_split_(ny, pr), col_split_(nx, pc)
    {
    }

    DistributionMode mode_ = DistributionMode::blocked_rows;
    Split1D row_split_;
    Split1D col_split_;
};

}  // namespace eulerpar::comm
