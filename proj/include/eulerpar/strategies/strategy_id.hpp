#pragma once

#include <eulerpar/errors.hpp>

#include <array>
#include <string>
#include <string_view>

namespace eulerpar::strategies {

enum class StrategyId {
    sequential,
    two_sided_row,
    two_sided_patch,
    shared_naive,
    shared_pointer,
    shared_barrier,
    one_sided_halo,
    one_sided_patch,
    one_sided_patch_fused,
};

inline constexpr std::array<StrategyId, 9> all_strategies{
    StrategyId::sequential,     StrategyId::two_sided_row,  StrategyId::two_sided_patch,
    StrategyId::shared_naive,   StrategyId::shared_pointer, StrategyId::shared_barrier,
    StrategyId::one_sided_halo, StrategyId::one_sided_patch, StrategyId::one_sided_patch_fused,
};

inline constexpr std::string_view name(StrategyId s) noexcept
{
    switch (s) {
    case StrategyId::sequential: return "sequential";
    case StrategyId::two_sided_row: return "two_sided_row";
    case StrategyId::two_sided_patch: return "two_sided_patch";
    case StrategyId::shared_naive: return "shared_naive";
    case StrategyId::shared_pointer: return "shared_pointer";
    case StrategyId::shared_barrier: return "shared_barrier";
    case StrategyId::one_sided_halo: return "one_sided_halo";
    case StrategyId::one_sided_patch: return "one_sided_patch";
    case StrategyId::one_sided_patch_fused: return "one_sided_patch_fused";
    }
    return "?";
}

inline StrategyId parse_strategy(std::string_view text)
{
    for (StrategyId s : all_strategies)
        if (name(s) == text)
            return s;
    throw InvalidArgument("unknown strategy '" + std::string(text) + "'");
}

//! Results equal the sequential driver bit for bit.
inline constexpr bool is_exact(StrategyId s) noexcept
{
    return s != StrategyId::one_sided_patch_fused;
}

inline constexpr bool uses_patches(StrategyId s) noexcept
{
    return s == StrategyId::two_sided_patch || s == StrategyId::one_sided_patch ||
           s == StrategyId::one_sided_patch_fused;
}

//! Barriers each worker executes per Lie step.
inline constexpr std::size_t barrier_count(StrategyId s) noexcept
{
    switch (s) {
    case StrategyId::sequential:
    case StrategyId::two_sided_row:
    case StrategyId::two_sided_patch: return 0;
    case StrategyId::shared_naive:
    case StrategyId::shared_pointer: return 4;
    case StrategyId::shared_barrier: return 2;
    case StrategyId::one_sided_halo: return 2;
    case StrategyId::one_sided_patch: return 4;
    case StrategyId::one_sided_patch_fused: return 2;
    }
    return 0;
}

}  // namespace eulerpar::strategies
