#pragma once

/*!
  \file checks.hpp
  \brief Self-checks run by `eulerpar verify`.

  quick: reduced sample counts and grids, well under a minute.
  full: the 1000-sample solver checks, the 500-step conservation run on
  128x128, and all exact strategies on 64x128 for 1, 2, 4 and 8 workers.
*/

#include <eulerpar/euler.hpp>
#include <eulerpar/strategies.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace eulerpar::verify {

using euler::AxisState;
using euler::BoundarySpec;
using euler::FieldState;
using euler::GasModel;
using euler::TimeControls;
using strategies::StrategyId;

enum class Level { quick, full };

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

//! Produces the final field of a run; replaceable to exercise the checks.
using FieldRunner = std::function<FieldState(StrategyId, const FieldState&, const TimeControls&,
                                             const BoundarySpec&, std::size_t)>;

inline FieldState run_field(StrategyId s, const FieldState& f, const TimeControls& tc, const BoundarySpec& bc,
                            std::size_t workers)
{
    return strategies::run_simulation(s, f, tc, bc, workers).field;
}

namespace detail {

inline std::string sci(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

// Bisection reference for the star pressure, written against the textbook
// pressure function rather than the solver's helpers.
inline double side_f(double p, const AxisState& s, double g)
{
    if (p <= s.p) {
        const double a = std::sqrt(g * s.p / s.rho);
        return 2.0 * a / (g - 1.0) * (std::pow(p / s.p, (g - 1.0) / (2.0 * g)) - 1.0);
    }
    const double A = 2.0 / ((g + 1.0) * s.rho), B = (g - 1.0) / (g + 1.0) * s.p;
    return (p - s.p) * std::sqrt(A / (p + B));
}

inline double bisect_p_star(const AxisState& l, const AxisState& r, double g)
{
    auto f = [&](double p) { return side_f(p, l, g) + side_f(p, r, g) + (r.un - l.un); };
    double lo = 1e-12, hi = 10.0;
    while (f(hi) < 0.0)
        hi *= 2.0;
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 4000; ++it) {
        mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (std::abs(fm) <= 1e-12 || mid <= lo || mid >= hi)
            break;
        (fm < 0.0 ? lo : hi) = mid;
    }
    return mid;
}

inline double log_uniform(std::mt19937_64& rng, double lo, double hi)
{
    return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(rng));
}

inline euler::PrimitiveState random_state(std::mt19937_64& rng, double g)
{
    const double rho = log_uniform(rng, 1e-2, 1e2), p = log_uniform(rng, 1e-4, 1e3);
    const double a = std::sqrt(g * p / rho);
    std::uniform_real_distribution<double> mach(-3.0, 3.0);
    return {rho, mach(rng) * a, mach(rng) * a, p};
}

inline double max_rel(double a, double b)
{
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

template <class Body>
CheckResult timed_check(std::string name, Body&& body)
{
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r{std::move(name), false, {}, 0.0};
    try {
        body(r);
    } catch (const std::exception& e) {
        r.passed = false;
        r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace detail

//! solve_star against bisection on Sod and `samples` random pairs.
inline CheckResult check_riemann_oracle(std::size_t samples, unsigned seed = 2016)
{
    return detail::timed_check("riemann-oracle", [&](CheckResult& r) {
        const GasModel gas{1.4};
        const double g = gas.gamma();
        const AxisState sod_l{1.0, 0.0, 0.0, 1.0}, sod_r{0.125, 0.0, 0.0, 0.1};
        const auto sod = euler::solve_star(sod_l, sod_r, gas);
        const bool sod_ok = std::abs(sod.p_star - 0.30313) < 5e-6 && std::abs(sod.u_star - 0.92745) < 5e-6;

        std::mt19937_64 rng(seed);
        double worst = detail::max_rel(sod.p_star, detail::bisect_p_star(sod_l, sod_r, g));
        for (std::size_t k = 0; k < samples;) {
            const auto a = detail::random_state(rng, g), b = detail::random_state(rng, g);
            const AxisState l{a.rho, a.u, a.v, a.p}, rr{b.rho, b.u, b.v, b.p};
            const double al = std::sqrt(g * a.p / a.rho), ar = std::sqrt(g * b.p / b.rho);
            if (!(2.0 / (g - 1.0) * (al + ar) > 1.01 * (rr.un - l.un)))
                continue;
            worst = std::max(worst, detail::max_rel(euler::solve_star(l, rr, gas).p_star,
                                                    detail::bisect_p_star(l, rr, g)));
            ++k;
        }
        r.passed = sod_ok && worst <= 1e-8;
        r.detail = "Sod p*=" + std::to_string(sod.p_star) + " u*=" + std::to_string(sod.u_star) +
                   ", max rel p* error " + detail::sci(worst) + " over " + std::to_string(samples) +
                   " pairs (limit 1e-8)";
    });
}

//! Godunov flux of two equal states against the physical flux.
inline CheckResult check_flux_consistency(std::size_t samples, unsigned seed = 7)
{
    return detail::timed_check("flux-consistency", [&](CheckResult& r) {
        const GasModel gas{1.4};
        std::mt19937_64 rng(seed);
        double worst = 0.0;
        for (std::size_t k = 0; k < samples; ++k) {
            const auto w = detail::random_state(rng, gas.gamma());
            for (auto axis : {euler::Axis::X, euler::Axis::Y}) {
                const auto num = euler::interface_flux(w, w, axis, gas);
                const auto phys = euler::physical_flux(euler::prim_to_cons(w, gas), axis, gas);
                for (std::size_t c = 0; c < 4; ++c)
                    worst = std::max(worst, detail::max_rel(num[c], phys[c]));
            }
        }
        r.passed = worst <= 1e-14;
        r.detail = "max rel component error " + detail::sci(worst) + " (limit 1e-14)";
    });
}

//! Smooth pressure pulse with a uniform drift on a fully periodic grid.
inline FieldState conservation_ic(std::size_t n)
{
    euler::SedovParams p = euler::SedovParams::pulse_only();
    p.sigma = 0.05;
    p.peak_p = 10.0;
    p.background_p = 1.0;
    p.drift_u = 0.3;
    p.drift_v = -0.2;
    return euler::init_sedov(euler::GridSpec(n, n), p);
}

inline double invariant_drift(const euler::Invariants& a, const euler::Invariants& b)
{
    return std::max({detail::max_rel(a.mass, b.mass), detail::max_rel(a.momentum_x, b.momentum_x),
                     detail::max_rel(a.momentum_y, b.momentum_y), detail::max_rel(a.energy, b.energy)});
}

inline CheckResult check_conservation(std::size_t n, std::size_t steps, const FieldRunner& run = run_field)
{
    return detail::timed_check("conservation", [&](CheckResult& r) {
        const FieldState f0 = conservation_ic(n);
        const auto tc = TimeControls::from_steps(1e-5, steps);
        const FieldState f = run(StrategyId::sequential, f0, tc, BoundarySpec::periodic(), 1);
        const double drift = invariant_drift(euler::total_invariants(f0), euler::total_invariants(f));
        r.passed = drift <= 1e-11;
        r.detail = std::to_string(n) + "x" + std::to_string(n) + ", " + std::to_string(steps) +
                   " steps: max relative drift " + detail::sci(drift) + " (limit 1e-11)";
    });
}

//! Every exact strategy against sequential on the blast problem, bitwise.
inline CheckResult check_equivalence(std::size_t nx, std::size_t ny, std::size_t steps,
                                     const std::vector<std::size_t>& workers, const FieldRunner& run = run_field)
{
    return detail::timed_check("strategy-equivalence", [&](CheckResult& r) {
        const FieldState f0 = euler::init_sedov(euler::GridSpec(nx, ny));
        const auto tc = TimeControls::from_steps(1e-5, steps);
        const BoundarySpec bc;
        const FieldState ref = run(StrategyId::sequential, f0, tc, bc, 1);
        std::string failures;
        std::size_t runs = 0;
        for (StrategyId s : strategies::all_strategies) {
            if (s == StrategyId::sequential || !strategies::is_exact(s))
                continue;
            for (std::size_t w : workers) {
                ++runs;
                if (!(run(s, f0, tc, bc, w) == ref))
                    failures += " " + std::string(strategies::name(s)) + "/" + std::to_string(w);
            }
        }
        r.passed = failures.empty();
        r.detail = std::to_string(runs) + " runs on " + std::to_string(nx) + "x" + std::to_string(ny) + ", " +
                   std::to_string(steps) + " steps" + (failures.empty() ? ", all bitwise equal" : "; differ:" + failures);
    });
}

inline std::vector<CheckResult> run_checks(Level level, const FieldRunner& run = run_field)
{
    std::vector<CheckResult> out;
    if (level == Level::quick) {
        out.push_back(check_riemann_oracle(200));
        out.push_back(check_flux_consistency(200));
        out.push_back(check_conservation(48, 100, run));
        out.push_back(check_equivalence(32, 48, 20, {1, 2, 4}, run));
    } else {
        out.push_back(check_riemann_oracle(1000));
        out.push_back(check_flux_consistency(1000));
        out.push_back(check_conservation(128, 500, run));
        out.push_back(check_equivalence(64, 128, 100, {1, 2, 4, 8}, run));
    }
    return out;
}

}  // namespace eulerpar::verify
