#pragma once

/*!
  \file commands.hpp
  \brief The three subcommands of the `eulerpar` executable.

  Exit status: 0 on success, 1 when a run or a check fails, 2 on bad usage.
*/

#include <eulerpar/bench.hpp>
#include <eulerpar/cli/run_config.hpp>
#include <eulerpar/euler.hpp>
#include <eulerpar/strategies.hpp>
#include <eulerpar/verify/checks.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace eulerpar::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_usage = 2;

namespace fs = std::filesystem;

//! Snapshot time as it appears in file names, e.g. 0.005 -> "0.005".
inline std::string time_label(double t)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", t);
    return buf;
}

//! Row-major CSV grid, bottom row first, one value per cell.
inline std::string grid_csv(const euler::FieldState& f, const std::function<double(const PrimitiveState&)>& value)
{
    std::string out;
    out.reserve(f.grid().cells() * 24);
    char buf[40];
    for (std::size_t i = 0; i < f.grid().ny(); ++i) {
        const auto row = f.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", value(row[j]));
            if (j)
                out += ',';
            out += buf;
        }
        out += '\n';
    }
    return out;
}

//! rho, u, v, p and log10(rho) at time t; returns the written paths.
inline std::vector<fs::path> write_snapshot(const euler::FieldState& f, double t, const fs::path& dir)
{
    const std::string suffix = "_t" + time_label(t) + ".csv";
    const std::vector<std::pair<std::string, std::function<double(const PrimitiveState&)>>> vars{
        {"rho", [](const PrimitiveState& s) { return s.rho; }},
        {"u", [](const PrimitiveState& s) { return s.u; }},
        {"v", [](const PrimitiveState& s) { return s.v; }},
        {"p", [](const PrimitiveState& s) { return s.p; }},
        {"log10_rho", [](const PrimitiveState& s) { return std::log10(s.rho); }},
    };
    std::vector<fs::path> written;
    for (const auto& [name, value] : vars) {
        const fs::path path = dir / (name + suffix);
        bench::detail::write_file(path, grid_csv(f, value));
        written.push_back(path);
    }
    return written;
}

/*!
  Run `c` and write one snapshot per requested time. The run is split at
  the snapshot steps; a ghost band is carried across the segments so the
  result matches an uninterrupted run.
*/
inline int cmd_simulate(const RunConfig& c, std::ostream& log)
{
    fs::create_directories(c.out);
    const euler::GridSpec grid = c.grid();
    const euler::FieldState ic = euler::init_sedov(grid, c.sedov());
    euler::BoundarySpec bc = c.boundary();
    euler::FieldState field = euler::extend_with_ghost_band(ic, bc.ghost_band_rows);
    bc.ghost_band_rows = 0;

    std::size_t done = 0;
    double wall = 0.0;
    for (double t : c.snapshots) {
        const std::size_t target = c.steps_until(t);
        if (target > done) {
            const auto tc = euler::TimeControls::from_steps(c.dt, target - done);
            auto r = strategies::run_simulation(c.strategy, field, tc, bc, c.workers);
            field = std::move(r.field);
            wall += r.wall_seconds;
            done = target;
        }
        write_snapshot(euler::strip_ghost_band(field, grid), t, c.out);
        log << "t=" << time_label(t) << " step " << done << " written to " << c.out << "\n";
    }
    log << strategies::name(c.strategy) << " on " << c.workers << " worker(s): " << done << " steps, "
        << bench::format_fixed(wall, 3) << " s\n";
    return exit_ok;
}

inline int cmd_bench(const BenchConfig& c, std::ostream& log, const bench::Runner& run = bench::simulate_blast)
{
    const auto records = c.plan.mode == bench::BenchMode::strong ? bench::run_strong_scaling(c.plan, run)
                                                                 : bench::run_weak_scaling(c.plan, run);
    const bench::Summary summary = bench::summarize(records);
    log << bench::format_table(summary);
    fs::create_directories(c.out);
    const std::string stem(bench::mode_name(c.plan.mode));
    const fs::path csv = fs::path(c.out) / (stem + "_scaling.csv");
    const fs::path gp = fs::path(c.out) / (stem + "_scaling.gp");
    bench::export_report(summary, bench::ReportFormat::csv, csv);
    bench::export_report(summary, bench::ReportFormat::plotscript, gp);
    log << "wrote " << csv.string() << " and " << gp.string() << "\n";
    return exit_ok;
}

inline int cmd_verify(verify::Level level, std::ostream& log, const verify::FieldRunner& run = verify::run_field)
{
    bool all = true;
    for (const verify::CheckResult& r : verify::run_checks(level, run)) {
        log << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << " ["
            << bench::format_fixed(r.seconds, 2) << " s]\n";
        all = all && r.passed;
    }
    return all ? exit_ok : exit_failure;
}

inline verify::Level parse_level(const std::vector<std::string>& args)
{
    std::string level = "quick";
    detail::parse_with("eulerpar verify", "Run the self-checks.", args, [&](CLI::App& app) {
        app.add_option("level", level, "quick or full")->capture_default_str();
    });
    if (level == "quick")
        return verify::Level::quick;
    if (level == "full")
        return verify::Level::full;
    throw UsageError("verify: level must be quick or full, got '" + level + "'");
}

/*!
  Dispatch `args` (without the program name). Errors are reported on `err`
  and mapped to exit codes.
*/
inline int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    const std::string usage = "usage: eulerpar {simulate|bench|verify} [flags]   (--help for details)\n";
    if (args.empty()) {
        err << usage;
        return exit_usage;
    }
    const std::string& cmd = args.front();
    const std::vector<std::string> rest(args.begin() + 1, args.end());
    try {
        if (cmd == "simulate")
            return cmd_simulate(parse_run_config(rest), out);
        if (cmd == "bench")
            return cmd_bench(parse_bench_config(rest), out);
        if (cmd == "verify")
            return cmd_verify(parse_level(rest), out);
        if (cmd == "--help" || cmd == "-h") {
            out << usage;
            return exit_ok;
        }
        err << "unknown subcommand '" << cmd << "'\n" << usage;
        return exit_usage;
    } catch (const HelpRequested& h) {
        out << h.what();
        return exit_ok;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_failure;
    }
}

}  // namespace eulerpar::cli
