#pragma once

/*!
  \file shared_array.hpp
  \brief Globally addressable 2D array with blocked affinity.

  Each worker's block is stored contiguously (row-major inside the block), so
  "local" and "remote" cells differ in the address translation they need, as
  in a partitioned global address space. Gets are one-sided: the initiator
  copies straight out of the owner's storage and the owner runs no code.

  Ordering is the caller's job. Reads see the owner's writes once a barrier
  separates them, and concurrent writers must touch disjoint cells.
*/

#include <eulerpar/comm/distribution.hpp>
#include <eulerpar/errors.hpp>

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace eulerpar::comm {

//! Direct access to one worker's block, indexed relative to the block.
template <class T>
class LocalView {
  public:
    LocalView(std::span<T> data, BlockExtent extent) : data_(data), extent_(extent) {}

    const BlockExtent& extent() const noexcept { return extent_; }
    std::size_t rows() const noexcept { return extent_.rows; }
    std::size_t cols() const noexcept { return extent_.cols; }

    T& at(std::size_t li, std::size_t lj) const noexcept { return data_[li * extent_.cols + lj]; }
    std::span<T> row(std::size_t li) const noexcept { return data_.subspan(li * extent_.cols, extent_.cols); }
    std::span<T> data() const noexcept { return data_; }

  private:
    std::span<T> data_;
    BlockExtent extent_;
};

template <class T>
class SharedArray2D {
  public:
    explicit SharedArray2D(Distribution dist, const T& fill = T{}) : dist_(dist)
    {
        blocks_.reserve(dist_.n_workers());
        for (std::size_t w = 0; w < dist_.n_workers(); ++w)
            blocks_.emplace_back(dist_.block(w).cells(), fill);
    }

    const Distribution& distribution() const noexcept { return dist_; }
    std::size_t rows() const noexcept { return dist_.rows(); }
    std::size_t cols() const noexcept { return dist_.cols(); }

    //! Affinity of cell (i, j).
    std::size_t owner(std::size_t i, std::size_t j) const
    {
        check_index(i, j);
        return dist_.owner(i, j);
    }

    T global_read(std::size_t i, std::size_t j) const
    {
        const auto [w, off] = locate(i, j);
        return blocks_[w][off];
    }

    void global_write(std::size_t i, std::size_t j, const T& value)
    {
        const auto [w, off] = locate(i, j);
        blocks_[w][off] = value;
    }

    //! The owner's block without affinity translation. Only the owner may ask.
    LocalView<T> local_view(std::size_t caller, std::size_t block_owner)
    {
        if (block_owner >= blocks_.size())
            throw IndexOutOfRange("no worker " + std::to_string(block_owner));
        if (caller != block_owner)
            throw NotOwner("worker " + std::to_string(caller) + " asked for the block of worker " +
                           std::to_string(block_owner));
        return {std::span<T>(blocks_[block_owner]), dist_.block(block_owner)};
    }

    LocalView<T> local_view(std::size_t caller) { return local_view(caller, caller); }

    /*!
      Copy `len` cells that are consecutive in global row-major order starting
      at (i, j). The range must sit inside one owner's contiguous storage.
    */
    void get_block(std::span<T> dest, std::size_t i, std::size_t j, std::size_t len) const
    {
        if (len == 0)
            return;
        if (dest.size() < len)
            throw InvalidArgument("get_block: destination holds " + std::to_string(dest.size()) +
                                  " cells, need " + std::to_string(len));
        check_index(i, j);
        const std::size_t first = i * cols() + j;
        const std::size_t last = first + len - 1;
        if (last >= rows() * cols())
            throw IndexOutOfRange("get_block: range runs past the end of the array");
        const std::size_t li = last / cols();
        const std::size_t lj = last % cols();
        const std::size_t w = dist_.owner(i, j);
        if (dist_.owner(li, lj) != w || (dist_.pc() > 1 && li != i))
            throw SpansOwners("get_block: cells (" + std::to_string(i) + "," + std::to_string(j) +
                              ") to (" + std::to_string(li) + "," + std::to_string(lj) +
                              ") are not stored contiguously by one owner");
        const std::size_t off = local_offset(w, i, j);
        std::copy_n(blocks_[w].begin() + static_cast<std::ptrdiff_t>(off), len, dest.begin());
    }

    //! dest[k] = cell at global linear index (i * cols + j) + k * stride.
    void get_strided(std::span<T> dest, std::size_t i, std::size_t j, std::size_t count,
                     std::size_t stride) const
    {
        if (count == 0)
            return;
        if (dest.size() < count)
            throw InvalidArgument("get_strided: destination too small");
        if (stride == 0)
            throw InvalidArgument("get_strided: zero stride");
        check_index(i, j);
        const std::size_t first = i * cols() + j;
        const std::size_t last = first + (count - 1) * stride;
        if (last >= rows() * cols())
            throw IndexOutOfRange("get_strided: range runs past the end of the array");
        const std::size_t w = dist_.owner(i, j);
        for (std::size_t k = 0; k < count; ++k) {
            const std::size_t g = first + k * stride;
            if (dist_.owner(g / cols(), g % cols()) != w)
                throw SpansOwners("get_strided: cells belong to more than one owner");
        }
        const std::vector<T>& block = blocks_[w];
        for (std::size_t k = 0; k < count; ++k) {
            const std::size_t g = first + k * stride;
            dest[k] = block[local_offset(w, g / cols(), g % cols())];
        }
    }

  private:
    void check_index(std::size_t i, std::size_t j) const
    {
        if (i >= rows() || j >= cols())
            throw IndexOutOfRange("index (" + std::to_string(i) + "," + std::to_string(j) +
                                  ") outside " + std::to_string(rows()) + "x" +
                                  std::to_string(cols()));
    }

    std::size_t local_offset(std::size_t w, std::size_t i, std::size_t j) const noexcept
    {
        const BlockExtent b = dist_.block(w);
        return (i - b.row0) * b.cols + (j - b.col0);
    }

    std::pair<std::size_t, std::size_t> locate(std::size_t i, std::size_t j) const
    {
        check_index(i, j);
        const std::size_t w = dist_.owner(i, j);
        return {w, local_offset(w, i, j)};
    }

    Distribution dist_;
    std::vector<std::vector<T>> blocks_;
};

//! Collective allocation for a group of `group_size` workers.
template <class T>
SharedArray2D<T> alloc_shared(std::size_t rows, std::size_t cols, const Distribution& dist,
                              std::size_t group_size, const T& fill = T{})
{
    if (dist.rows() != rows || dist.cols() != cols)
        throw IncompatibleDistribution("shape " + std::to_string(rows) + "x" + std::to_string(cols) +
                                       " does not match the distribution");
    if (dist.n_workers() != group_size)
        throw IncompatibleDistribution("distribution is for " + std::to_string(dist.n_workers()) +
                                       " workers, group has " + std::to_string(group_size));
    return SharedArray2D<T>(dist, fill);
}

}  // namespace eulerpar::comm
