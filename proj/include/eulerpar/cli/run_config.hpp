#pragma once

/*!
  \file run_config.hpp
  \brief Flag parsing for the `simulate` and `bench` subcommands.

  Every value is checked when the flags are parsed, so a config that comes
  out of parse_run_config can be run without further validation. Doubles are
  written back by to_flags with 17 significant digits, which makes
  parse_run_config(to_flags(c)) == c for every valid config.
*/

#include <eulerpar/bench.hpp>
#include <eulerpar/errors.hpp>
#include <eulerpar/euler.hpp>
#include <eulerpar/strategies.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace eulerpar::cli {

using euler::PrimitiveState;
using euler::YBoundary;
using strategies::StrategyId;

//! Bad flags or values; the CLI exits with status 2.
class UsageError : public InvalidArgument {
  public:
    using InvalidArgument::InvalidArgument;
};

//! --help was given; what() is the help text.
class HelpRequested : public Error {
  public:
    using Error::Error;
};

inline const std::vector<double> default_snapshots{0.005, 0.025, 0.075, 0.15};

struct RunConfig {
    StrategyId strategy = StrategyId::sequential;
    std::size_t nx = 512;
    std::size_t ny = 512;
    double dt = 1e-5;
    double t_final = 0.15;
    std::size_t workers = 1;
    YBoundary bc_y = YBoundary::inflow_outflow;
    std::size_t ghost_band = 0;
    PrimitiveState inflow{1.0, 0.0, 0.0, 1e-4};
    double peak_p = 1200.0;
    double sigma = 20.48 / 1024.0;
    double background_rho = 1.0;
    double background_p = 1e-4;
    //! Dense hill and light basin of the blast problem.
    bool features = true;
    std::vector<double> snapshots = default_snapshots;
    std::string out = ".";

    euler::GridSpec grid() const { return {nx, ny}; }

    euler::BoundarySpec boundary() const { return {bc_y, inflow, ghost_band}; }

    euler::SedovParams sedov() const
    {
        euler::SedovParams p = features ? euler::SedovParams{} : euler::SedovParams::pulse_only();
        p.peak_p = peak_p;
        p.sigma = sigma;
        p.background_rho = background_rho;
        p.background_p = background_p;
        return p;
    }

    std::size_t steps_until(double t) const { return static_cast<std::size_t>(std::llround(t / dt)); }

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct BenchConfig {
    bench::BenchPlan plan;
    std::string out = ".";

    friend bool operator==(const BenchConfig&, const BenchConfig&) = default;
};

// --- value helpers -------------------------------------------------------------

inline std::string format_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline double parse_double(std::string_view text, std::string_view flag)
{
    double x = 0.0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, x);
    if (ec != std::errc{} || ptr != end || !std::isfinite(x))
        throw UsageError(std::string(flag) + ": '" + std::string(text) + "' is not a finite number");
    return x;
}

inline std::size_t parse_count(std::string_view text, std::string_view flag)
{
    std::size_t n = 0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, n);
    if (ec != std::errc{} || ptr != end || text.empty())
        throw UsageError(std::string(flag) + ": '" + std::string(text) + "' is not a non-negative integer");
    return n;
}

inline std::vector<std::string> split(std::string_view text, char sep)
{
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t k = text.find(sep, start);
        parts.emplace_back(text.substr(start, k - start));
        if (k == std::string_view::npos)
            return parts;
        start = k + 1;
    }
}

inline std::vector<double> parse_double_list(std::string_view text, std::string_view flag)
{
    std::vector<double> out;
    for (const std::string& s : split(text, ','))
        out.push_back(parse_double(s, flag));
    return out;
}

inline std::vector<std::size_t> parse_count_list(std::string_view text, std::string_view flag)
{
    std::vector<std::size_t> out;
    for (const std::string& s : split(text, ','))
        out.push_back(parse_count(s, flag));
    return out;
}

inline std::string join_doubles(const std::vector<double>& xs)
{
    std::string out;
    for (std::size_t k = 0; k < xs.size(); ++k)
        out += (k ? "," : "") + format_double(xs[k]);
    return out;
}

//! "NXxNY", e.g. 512x1024.
inline std::pair<std::size_t, std::size_t> parse_grid(std::string_view text)
{
    const std::size_t k = text.find('x');
    if (k == std::string_view::npos)
        throw UsageError("--grid: expected NXxNY, got '" + std::string(text) + "'");
    return {parse_count(text.substr(0, k), "--grid"), parse_count(text.substr(k + 1), "--grid")};
}

inline YBoundary parse_bc_y(std::string_view text)
{
    if (text == "inflow-outflow")
        return YBoundary::inflow_outflow;
    if (text == "periodic")
        return YBoundary::periodic;
    throw UsageError("--bc-y: expected inflow-outflow or periodic, got '" + std::string(text) + "'");
}

inline std::string_view bc_y_name(YBoundary y) { return y == YBoundary::periodic ? "periodic" : "inflow-outflow"; }

inline StrategyId parse_strategy_flag(std::string_view text)
{
    try {
        return strategies::parse_strategy(text);
    } catch (const InvalidArgument& e) {
        throw UsageError(std::string("--strategy: ") + e.what());
    }
}

namespace detail {

// CLI11 consumes its argument vector back to front.
template <class Setup>
void parse_with(std::string name, std::string description, const std::vector<std::string>& args, Setup&& setup)
{
    CLI::App app(std::move(description), std::move(name));
    setup(app);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested(app.help());
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }
}

//! Steps covered by t, which must be a whole number of dt.
inline std::size_t whole_steps(double t, double dt, std::string_view what)
{
    const double n = std::round(t / dt);
    if (std::abs(n * dt - t) > 1e-9 * std::max(dt, std::abs(t)))
        throw UsageError(std::string(what) + " " + format_double(t) + " is not a multiple of dt " +
                         format_double(dt));
    return static_cast<std::size_t>(n);
}

}  // namespace detail

/*!
  Check a RunConfig against every precondition of the run it describes:
  grid size, time step, snapshot times, inflow state, blast parameters, the
  CFL limit of the initial field and the worker decomposition.
*/
inline void validate(const RunConfig& c)
{
    try {
        const euler::GridSpec grid = c.grid();
        if (!(c.dt > 0.0))
            throw UsageError("--dt must be positive");
        if (!(c.t_final >= 0.0))
            throw UsageError("--t-final must be non-negative");
        detail::whole_steps(c.t_final, c.dt, "--t-final");
        if (c.workers < 1)
            throw UsageError("--workers must be at least 1");
        if (c.snapshots.empty())
            throw UsageError("--snapshots: need at least one time");
        for (std::size_t k = 0; k < c.snapshots.size(); ++k) {
            const double t = c.snapshots[k];
            if (t < 0.0 || t > c.t_final)
                throw UsageError("--snapshots: " + format_double(t) + " lies outside [0, t_final]");
            detail::whole_steps(t, c.dt, "--snapshots:");
            if (k > 0 && c.steps_until(t) <= c.steps_until(c.snapshots[k - 1]))
                throw UsageError("--snapshots must be strictly increasing");
        }
        if (c.bc_y == YBoundary::inflow_outflow && !c.inflow.valid())
            throw UsageError("--inflow: need rho > 0 and p > 0");
        if (!(c.sigma > 0.0) || !(c.background_rho > 0.0) || !(c.background_p > 0.0) || c.peak_p < 0.0)
            throw UsageError("blast parameters: sigma, background rho and p must be positive, peak p >= 0");
        if (c.bc_y == YBoundary::periodic && c.ghost_band > 0)
            throw UsageError("--ghost-band only applies to --bc-y inflow-outflow");

        const euler::FieldState field = euler::init_sedov(grid, c.sedov());
        const double cfl = euler::max_cfl(field, c.dt);
        if (cfl > 1.0)
            throw UsageError("--dt " + format_double(c.dt) + " gives CFL number " + format_double(cfl) +
                             " on the initial field");
        if (c.strategy != StrategyId::sequential)
            strategies::decompose(grid.with_rows(c.ny + c.ghost_band), c.workers,
                                  strategies::decomposition_mode(c.strategy), c.bc_y);
    } catch (const UsageError&) {
        throw;
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
}

inline RunConfig parse_run_config(const std::vector<std::string>& args)
{
    RunConfig c;
    std::string strategy{strategies::name(c.strategy)}, grid, dt, t_final, bc_y, inflow, peak_p, sigma, bg_rho,
        bg_p, snapshots;
    bool no_features = false;
    detail::parse_with("eulerpar simulate", "Run the blast problem and write snapshots.", args, [&](CLI::App& app) {
        app.add_option("--strategy", strategy, "parallelization strategy")->capture_default_str();
        app.add_option("--grid", grid, "grid size NXxNY (default 512x512)");
        app.add_option("--dt", dt, "time step (default 1e-5)");
        app.add_option("--t-final", t_final, "end time (default 0.15)");
        app.add_option("--workers", c.workers, "number of workers")->capture_default_str();
        app.add_option("--bc-y", bc_y, "y boundary: inflow-outflow or periodic");
        app.add_option("--ghost-band", c.ghost_band, "extra rows evolved above the top boundary")
            ->capture_default_str();
        app.add_option("--inflow", inflow, "inflow state rho,u,v,p (default 1,0,0,1e-4)");
        app.add_option("--peak-p", peak_p, "peak pressure of the blast (default 1200)");
        app.add_option("--sigma", sigma, "width of the pressure pulse in domain units (default 0.02)");
        app.add_option("--background-rho", bg_rho, "background density (default 1)");
        app.add_option("--background-p", bg_p, "background pressure (default 1e-4)");
        app.add_flag("--no-features", no_features, "drop the dense hill and light basin");
        app.add_option("--snapshots", snapshots, "snapshot times t1,t2,... (default 0.005,0.025,0.075,0.15)");
        app.add_option("--out", c.out, "output directory")->capture_default_str();
    });

    c.strategy = parse_strategy_flag(strategy);
    if (!grid.empty())
        std::tie(c.nx, c.ny) = parse_grid(grid);
    if (!dt.empty())
        c.dt = parse_double(dt, "--dt");
    if (!t_final.empty())
        c.t_final = parse_double(t_final, "--t-final");
    if (!bc_y.empty())
        c.bc_y = parse_bc_y(bc_y);
    if (!inflow.empty()) {
        const auto v = parse_double_list(inflow, "--inflow");
        if (v.size() != 4)
            throw UsageError("--inflow: expected rho,u,v,p");
        c.inflow = {v[0], v[1], v[2], v[3]};
    }
    if (!peak_p.empty())
        c.peak_p = parse_double(peak_p, "--peak-p");
    if (!sigma.empty())
        c.sigma = parse_double(sigma, "--sigma");
    if (!bg_rho.empty())
        c.background_rho = parse_double(bg_rho, "--background-rho");
    if (!bg_p.empty())
        c.background_p = parse_double(bg_p, "--background-p");
    c.features = !no_features;
    if (!snapshots.empty()) {
        c.snapshots = parse_double_list(snapshots, "--snapshots");
    } else {
        // Default times up to t_final, closed by t_final itself.
        c.snapshots.clear();
        for (double t : default_snapshots)
            if (t <= c.t_final)
                c.snapshots.push_back(t);
        if (c.snapshots.empty() || c.snapshots.back() != c.t_final)
            c.snapshots.push_back(c.t_final);
    }
    validate(c);
    return c;
}

inline std::vector<std::string> to_flags(const RunConfig& c)
{
    std::vector<std::string> f{
        "--strategy", std::string(strategies::name(c.strategy)),
        "--grid", std::to_string(c.nx) + "x" + std::to_string(c.ny),
        "--dt", format_double(c.dt),
        "--t-final", format_double(c.t_final),
        "--workers", std::to_string(c.workers),
        "--bc-y", std::string(bc_y_name(c.bc_y)),
        "--ghost-band", std::to_string(c.ghost_band),
        "--inflow", join_doubles({c.inflow.rho, c.inflow.u, c.inflow.v, c.inflow.p}),
        "--peak-p", format_double(c.peak_p),
        "--sigma", format_double(c.sigma),
        "--background-rho", format_double(c.background_rho),
        "--background-p", format_double(c.background_p),
        "--snapshots", join_doubles(c.snapshots),
        "--out", c.out,
    };
    if (!c.features)
        f.push_back("--no-features");
    return f;
}

/*!
  Bench flags. The plan starts from the strong or weak default of --mode and
  every other flag overrides one field; --grid is the fixed grid for strong
  scaling and the one-worker grid for weak scaling.
*/
inline BenchConfig parse_bench_config(const std::vector<std::string>& args)
{
    BenchConfig c;
    std::string mode = "strong", strategy_list, workers, grid, dt, t_final;
    std::optional<std::size_t> reps;
    detail::parse_with("eulerpar bench", "Run a strong or weak scaling plan.", args, [&](CLI::App& app) {
        app.add_option("--mode", mode, "strong or weak")->capture_default_str();
        app.add_option("--strategy", strategy_list, "comma-separated strategies (default all)");
        app.add_option("--workers", workers, "comma-separated worker counts");
        app.add_option("--grid", grid, "grid NXxNY (one-worker grid in weak mode)");
        app.add_option("--dt", dt, "time step");
        app.add_option("--t-final", t_final, "end time");
        app.add_option("--reps", reps, "repetitions per configuration (median is reported)");
        app.add_option("--out", c.out, "output directory")->capture_default_str();
    });

    bench::BenchMode m;
    try {
        m = bench::parse_mode(mode);
    } catch (const InvalidArgument& e) {
        throw UsageError(std::string("--mode: ") + e.what());
    }
    c.plan = m == bench::BenchMode::strong ? bench::BenchPlan::strong_default() : bench::BenchPlan::weak_default();
    if (!strategy_list.empty() && strategy_list != "all") {
        c.plan.strategies.clear();
        for (const std::string& s : split(strategy_list, ','))
            c.plan.strategies.push_back(parse_strategy_flag(s));
    }
    if (!workers.empty())
        c.plan.worker_counts = parse_count_list(workers, "--workers");
    if (!grid.empty())
        std::tie(c.plan.nx, c.plan.ny) = parse_grid(grid);
    if (!dt.empty())
        c.plan.dt = parse_double(dt, "--dt");
    if (!t_final.empty())
        c.plan.t_final = parse_double(t_final, "--t-final");
    if (reps)
        c.plan.repetitions = *reps;
    try {
        c.plan.validate();
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    return c;
}

}  // namespace eulerpar::cli
