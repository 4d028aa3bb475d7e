#pragma once

#include <eulerpar/errors.hpp>
#include <eulerpar/strategies/strategy_id.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace eulerpar::bench {

using strategies::StrategyId;

enum class BenchMode { strong, weak };

inline std::string_view mode_name(BenchMode m) noexcept { return m == BenchMode::strong ? "strong" : "weak"; }

inline BenchMode parse_mode(std::string_view text)
{
    if (text == "strong")
        return BenchMode::strong;
    if (text == "weak")
        return BenchMode::weak;
    throw InvalidArgument("unknown bench mode '" + std::string(text) + "'");
}

/*!
  One scaling experiment. For strong scaling (nx, ny) is the fixed grid; for
  weak scaling it is the one-worker grid that grows with the worker count.
*/
struct BenchPlan {
    BenchMode mode = BenchMode::strong;
    std::vector<StrategyId> strategies{strategies::all_strategies.begin(), strategies::all_strategies.end()};
    std::vector<std::size_t> worker_counts{1, 2, 4, 8};
    std::size_t nx = 512;
    std::size_t ny = 1024;
    double dt = 1e-5;
    double t_final = 0.005;
    std::size_t repetitions = 3;

    static BenchPlan strong_default() { return {}; }

    static BenchPlan weak_default()
    {
        BenchPlan p;
        p.mode = BenchMode::weak;
        p.worker_counts = {1, 4, 16};
        p.nx = 64;
        p.ny = 128;
        p.t_final = 0.001;
        return p;
    }

    std::size_t steps() const { return static_cast<std::size_t>(std::round(t_final / dt)); }

    void validate() const
    {
        if (strategies.empty())
            throw InvalidArgument("bench plan: no strategies");
        if (worker_counts.empty() || worker_counts.front() < 1)
            throw InvalidArgument("bench plan: worker counts must be positive");
        if (!std::ranges::is_sorted(worker_counts) ||
            std::ranges::adjacent_find(worker_counts) != worker_counts.end())
            throw InvalidArgument("bench plan: worker counts must be strictly ascending");
        if (repetitions < 1)
            throw InvalidArgument("bench plan: need at least one repetition");
        if (!(dt > 0.0) || steps() < 1)
            throw InvalidArgument("bench plan: t_final must cover at least one step of dt");
        if (nx < 2 || ny < 2)
            throw InvalidArgument("bench plan: grid needs at least 2 cells per axis");
    }

    friend bool operator==(const BenchPlan&, const BenchPlan&) = default;
};

inline nlohmann::json to_json(const BenchPlan& p)
{
    nlohmann::json strategies = nlohmann::json::array();
    for (StrategyId s : p.strategies)
        strategies.push_back(std::string(strategies::name(s)));
    return {
        {"mode", std::string(mode_name(p.mode))},
        {"strategies", strategies},
        {"workers", p.worker_counts},
        {"grid", {{"nx", p.nx}, {"ny", p.ny}}},
        {"dt", p.dt},
        {"t_final", p.t_final},
        {"steps", p.steps()},
        {"repetitions", p.repetitions},
        {"reduction", "median"},
    };
}

inline BenchPlan plan_from_json(const nlohmann::json& j)
{
    try {
        BenchPlan p;
        p.mode = parse_mode(j.at("mode").get<std::string>());
        p.strategies.clear();
        for (const auto& s : j.at("strategies"))
            p.strategies.push_back(strategies::parse_strategy(s.get<std::string>()));
        p.worker_counts = j.at("workers").get<std::vector<std::size_t>>();
        p.nx = j.at("grid").at("nx").get<std::size_t>();
        p.ny = j.at("grid").at("ny").get<std::size_t>();
        p.dt = j.at("dt").get<double>();
        p.t_final = j.at("t_final").get<double>();
        p.repetitions = j.at("repetitions").get<std::size_t>();
        p.validate();
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("bench plan: ") + e.what());
    }
}

}  // namespace eulerpar::bench
