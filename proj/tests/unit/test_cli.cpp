#include <eulerpar/cli/commands.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace {

using namespace eulerpar;
using cli::RunConfig;
using cli::UsageError;
namespace fs = std::filesystem;

std::string slurp(const fs::path& p)
{
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name)
{
    const fs::path d = fs::temp_directory_path() / ("eulerpar_cli_" + name);
    fs::remove_all(d);
    return d;
}

RunConfig parse(std::vector<std::string> args) { return cli::parse_run_config(args); }

std::vector<std::vector<double>> read_grid(const fs::path& p)
{
    std::vector<std::vector<double>> rows;
    std::istringstream is(slurp(p));
    std::string line;
    while (std::getline(is, line)) {
        rows.emplace_back();
        for (const std::string& v : cli::split(line, ','))
            rows.back().push_back(std::stod(v));
    }
    return rows;
}

// --- parsing -----------------------------------------------------------------

TEST(RunConfigParse, DefaultsAreTheBlastDemo)
{
    const RunConfig c = parse({});
    EXPECT_EQ(c.strategy, strategies::StrategyId::sequential);
    EXPECT_EQ(c.nx, 512u);
    EXPECT_EQ(c.ny, 512u);
    EXPECT_EQ(c.dt, 1e-5);
    EXPECT_EQ(c.t_final, 0.15);
    EXPECT_EQ(c.snapshots, (std::vector<double>{0.005, 0.025, 0.075, 0.15}));
    EXPECT_EQ(c.boundary(), euler::BoundarySpec{});
    EXPECT_EQ(c.sedov(), euler::SedovParams{});
}

TEST(RunConfigParse, ShortRunKeepsDefaultTimesUpToTFinal)
{
    EXPECT_EQ(parse({"--t-final", "0.03"}).snapshots, (std::vector<double>{0.005, 0.025, 0.03}));
    EXPECT_EQ(parse({"--t-final", "0.025"}).snapshots, (std::vector<double>{0.005, 0.025}));
    EXPECT_EQ(parse({"--t-final", "0"}).snapshots, (std::vector<double>{0.0}));
}

TEST(RunConfigParse, ReadsEveryFlag)
{
    const RunConfig c = parse({"--strategy", "one_sided_halo", "--grid", "64x32", "--dt", "2e-5", "--t-final",
                               "0.001", "--workers", "4", "--bc-y", "inflow-outflow", "--ghost-band", "3",
                               "--inflow", "2,0.1,0.5,0.001", "--peak-p", "50", "--sigma", "0.05",
                               "--background-rho", "0.5", "--background-p", "0.01", "--no-features",
                               "--snapshots", "0,0.0004,0.001", "--out", "somewhere"});
    EXPECT_EQ(c.strategy, strategies::StrategyId::one_sided_halo);
    EXPECT_EQ(c.nx, 64u);
    EXPECT_EQ(c.ny, 32u);
    EXPECT_EQ(c.workers, 4u);
    EXPECT_EQ(c.ghost_band, 3u);
    EXPECT_EQ(c.inflow, (euler::PrimitiveState{2, 0.1, 0.5, 0.001}));
    EXPECT_FALSE(c.features);
    EXPECT_FALSE(c.sedov().hill.enabled);
    EXPECT_EQ(c.sedov().peak_p, 50.0);
    EXPECT_EQ(c.snapshots, (std::vector<double>{0.0, 0.0004, 0.001}));
    EXPECT_EQ(c.out, "somewhere");
}

TEST(RunConfigParse, RejectsBadValuesAtParseTime)
{
    const std::vector<std::vector<std::string>> bad{
        {"--grid", "1x64"},
        {"--grid", "64"},
        {"--grid", "64xabc"},
        {"--strategy", "mpi_everything"},
        {"--dt", "0"},
        {"--dt", "fast"},
        {"--t-final", "-1"},
        {"--t-final", "0.000015"},
        {"--workers", "0"},
        {"--bc-y", "reflective"},
        {"--snapshots", "0.2"},
        {"--snapshots", "0.01,0.005"},
        {"--snapshots", "0.005,0.005"},
        {"--inflow", "1,0,0"},
        {"--inflow", "0,0,0,1"},
        {"--sigma", "0"},
        {"--dt", "0.1"},
        {"--strategy", "two_sided_row", "--grid", "8x4", "--workers", "8"},
        {"--bc-y", "periodic", "--ghost-band", "2"},
        {"--no-such-flag"},
    };
    for (const auto& args : bad)
        EXPECT_THROW(parse(args), UsageError) << ::testing::PrintToString(args);
}

TEST(RunConfigParse, FlagRoundTripDefaults)
{
    const RunConfig c = parse({});
    EXPECT_EQ(parse(cli::to_flags(c)), c);
}

TEST(RunConfigParse, FlagRoundTripRandomConfigs)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto all = strategies::all_strategies;
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        RunConfig c;
        c.strategy = all[rng() % all.size()];
        c.nx = 8 + rng() % 57;
        c.ny = 8 + rng() % 57;
        c.workers = 1 + rng() % 4;
        c.bc_y = rng() % 2 ? euler::YBoundary::periodic : euler::YBoundary::inflow_outflow;
        c.ghost_band = c.bc_y == euler::YBoundary::periodic ? 0 : rng() % 4;
        c.dt = 1e-6 * (1.0 + std::floor(9.0 * unit(rng)));
        const std::size_t steps = rng() % 50;
        c.t_final = c.dt * static_cast<double>(steps);
        c.snapshots = {c.t_final};
        if (steps > 2)
            c.snapshots.insert(c.snapshots.begin(), c.dt * static_cast<double>(steps / 2));
        c.inflow = {0.5 + unit(rng), unit(rng) - 0.5, unit(rng) - 0.5, 1e-4 + unit(rng)};
        c.peak_p = 10.0 * unit(rng);
        c.sigma = 0.01 + 0.1 * unit(rng);
        c.background_rho = 0.1 + unit(rng);
        c.background_p = 1e-4 + unit(rng);
        c.features = rng() % 2;
        c.out = "dir with space/" + std::to_string(trial);
        try {
            cli::validate(c);
        } catch (const UsageError&) {
            continue;
        }
        EXPECT_EQ(parse(cli::to_flags(c)), c) << ::testing::PrintToString(cli::to_flags(c));
        ++checked;
    }
    EXPECT_GT(checked, 100);
}

TEST(BenchConfigParse, StrongDefaults)
{
    const auto c = cli::parse_bench_config({"--mode", "strong"});
    EXPECT_EQ(c.plan, bench::BenchPlan::strong_default());
    EXPECT_EQ(c.plan.worker_counts, (std::vector<std::size_t>{1, 2, 4, 8}));
    EXPECT_EQ(c.plan.nx, 512u);
    EXPECT_EQ(c.plan.ny, 1024u);
}

TEST(BenchConfigParse, Overrides)
{
    const auto c = cli::parse_bench_config(
        {"--mode", "weak", "--workers", "1,4", "--strategy", "two_sided_row,one_sided_halo", "--reps", "1"});
    EXPECT_EQ(c.plan.mode, bench::BenchMode::weak);
    EXPECT_EQ(c.plan.worker_counts, (std::vector<std::size_t>{1, 4}));
    EXPECT_EQ(c.plan.strategies,
              (std::vector{strategies::StrategyId::two_sided_row, strategies::StrategyId::one_sided_halo}));
    EXPECT_EQ(c.plan.repetitions, 1u);
    EXPECT_EQ(c.plan.nx, 64u);
    EXPECT_EQ(c.plan.ny, 128u);
}

TEST(BenchConfigParse, UsageErrors)
{
    EXPECT_THROW(cli::parse_bench_config({"--strategy", "nope"}), UsageError);
    EXPECT_THROW(cli::parse_bench_config({"--mode", "medium"}), UsageError);
    EXPECT_THROW(cli::parse_bench_config({"--workers", "4,2"}), UsageError);
    EXPECT_THROW(cli::parse_bench_config({"--reps", "0"}), UsageError);
}

// --- exit codes --------------------------------------------------------------

int run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    return cli::run_main(args, out, err);
}

TEST(RunMain, ExitCodes)
{
    EXPECT_EQ(run({}), cli::exit_usage);
    EXPECT_EQ(run({"explode"}), cli::exit_usage);
    EXPECT_EQ(run({"simulate", "--grid", "1x64"}), cli::exit_usage);
    EXPECT_EQ(run({"bench", "--strategy", "nope"}), cli::exit_usage);
    EXPECT_EQ(run({"verify", "thorough"}), cli::exit_usage);
    EXPECT_EQ(run({"simulate", "--help"}), cli::exit_ok);
}

TEST(RunMain, InfeasibleBenchIsARunFailure)
{
    const fs::path dir = fresh_dir("infeasible");
    EXPECT_EQ(run({"bench", "--grid", "4x4", "--workers", "1,8", "--strategy", "two_sided_row", "--t-final",
                   "0.00001", "--reps", "1", "--out", dir.string()}),
              cli::exit_failure);
    EXPECT_EQ(run({"bench", "--mode", "weak", "--workers", "1,3", "--strategy", "two_sided_row", "--out",
                   dir.string()}),
              cli::exit_failure);
    EXPECT_FALSE(fs::exists(dir / "strong_scaling.csv"));
}

// --- simulate ----------------------------------------------------------------

TEST(Simulate, ZeroTimeSnapshotIsTheInitialField)
{
    const fs::path dir = fresh_dir("ic");
    const RunConfig c = parse({"--grid", "24x16", "--t-final", "0", "--out", dir.string()});
    std::ostringstream log;
    ASSERT_EQ(cli::cmd_simulate(c, log), cli::exit_ok);
    const euler::FieldState ic = euler::init_sedov(euler::GridSpec(24, 16));
    const auto rho = read_grid(dir / "rho_t0.csv");
    const auto p = read_grid(dir / "p_t0.csv");
    const auto lrho = read_grid(dir / "log10_rho_t0.csv");
    ASSERT_EQ(rho.size(), 16u);
    for (std::size_t i = 0; i < 16; ++i) {
        ASSERT_EQ(rho[i].size(), 24u);
        for (std::size_t j = 0; j < 24; ++j) {
            EXPECT_EQ(rho[i][j], ic.at(i, j).rho);
            EXPECT_EQ(p[i][j], ic.at(i, j).p);
            EXPECT_EQ(lrho[i][j], std::log10(ic.at(i, j).rho));
        }
    }
    EXPECT_TRUE(fs::exists(dir / "u_t0.csv"));
    EXPECT_TRUE(fs::exists(dir / "v_t0.csv"));
}

TEST(Simulate, DefaultRunWritesFourSnapshotTimes)
{
    const RunConfig c = parse({});
    std::vector<std::string> labels;
    for (double t : c.snapshots)
        labels.push_back(cli::time_label(t));
    EXPECT_EQ(labels, (std::vector<std::string>{"0.005", "0.025", "0.075", "0.15"}));
}

TEST(Simulate, IdenticalConfigsGiveIdenticalFiles)
{
    const fs::path a = fresh_dir("det_a"), b = fresh_dir("det_b");
    const std::vector<std::string> base{"--strategy", "one_sided_patch", "--workers", "4", "--grid", "32x32",
                                        "--t-final", "0.0002", "--snapshots", "0.0001,0.0002"};
    auto with_out = [&](const fs::path& d) {
        auto args = base;
        args.insert(args.end(), {"--out", d.string()});
        return parse(args);
    };
    std::ostringstream log;
    ASSERT_EQ(cli::cmd_simulate(with_out(a), log), 0);
    ASSERT_EQ(cli::cmd_simulate(with_out(b), log), 0);
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
        ++files;
        EXPECT_EQ(slurp(entry.path()), slurp(b / entry.path().filename())) << entry.path();
    }
    EXPECT_EQ(files, 10u);
}

TEST(Simulate, SegmentedRunMatchesUninterruptedRun)
{
    const fs::path dir = fresh_dir("segments");
    const RunConfig c = parse({"--strategy", "two_sided_row", "--workers", "2", "--grid", "16x24", "--t-final",
                               "0.0003", "--snapshots", "0.0001,0.00015,0.0003", "--ghost-band", "4", "--out",
                               dir.string()});
    std::ostringstream log;
    ASSERT_EQ(cli::cmd_simulate(c, log), 0);
    const auto whole = strategies::run_simulation(strategies::StrategyId::sequential,
                                                  euler::init_sedov(c.grid()),
                                                  euler::TimeControls::from_steps(1e-5, 30), c.boundary(), 1);
    EXPECT_EQ(slurp(dir / "rho_t0.0003.csv"),
              cli::grid_csv(whole.field, [](const euler::PrimitiveState& s) { return s.rho; }));
    EXPECT_EQ(slurp(dir / "v_t0.0003.csv"),
              cli::grid_csv(whole.field, [](const euler::PrimitiveState& s) { return s.v; }));
}

// --- bench -------------------------------------------------------------------

TEST(BenchCommand, WeakWorkersOneAndFourUseDoubledGrids)
{
    const fs::path dir = fresh_dir("bench_weak");
    auto c = cli::parse_bench_config({"--mode", "weak", "--workers", "1,4", "--strategy", "one_sided_halo",
                                      "--reps", "1", "--out", dir.string()});
    std::vector<std::pair<std::size_t, std::size_t>> grids;
    const bench::Runner fake = [&](const bench::RunRequest& r) {
        grids.emplace_back(r.grid.nx(), r.grid.ny());
        return 1.0;
    };
    std::ostringstream log;
    ASSERT_EQ(cli::cmd_bench(c, log, fake), 0);
    EXPECT_EQ(grids, (std::vector<std::pair<std::size_t, std::size_t>>{{64, 128}, {128, 256}}));
    const auto rows = bench::read_csv(dir / "weak_scaling.csv");
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[1].nx, 128u);
    EXPECT_EQ(rows[1].ny, 256u);
    EXPECT_TRUE(fs::exists(dir / "weak_scaling.gp"));
    EXPECT_TRUE(fs::exists(dir / "weak_scaling_one_sided_halo.dat"));
}

TEST(BenchCommand, StrongDefaultsCoverWorkersOneToEight)
{
    const fs::path dir = fresh_dir("bench_strong");
    auto c = cli::parse_bench_config({"--strategy", "shared_barrier", "--out", dir.string()});
    std::vector<std::size_t> workers;
    const bench::Runner fake = [&](const bench::RunRequest& r) {
        EXPECT_EQ(r.grid, euler::GridSpec(512, 1024));
        workers.push_back(r.workers);
        return 8.0 / static_cast<double>(r.workers);
    };
    std::ostringstream log;
    ASSERT_EQ(cli::cmd_bench(c, log, fake), 0);
    EXPECT_EQ(workers, (std::vector<std::size_t>{1, 1, 1, 2, 2, 2, 4, 4, 4, 8, 8, 8}));
    const auto rows = bench::read_csv(dir / "strong_scaling.csv");
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[3].factor, 8.0);
}

// --- verify ------------------------------------------------------------------

// x-sweep with the sign of the mass flux flipped.
euler::FieldState flipped_mass_flux_step(const euler::FieldState& f, double dt, const euler::BoundarySpec& bc)
{
    using namespace euler;
    const GridSpec& g = f.grid();
    FieldState out = f;
    const double ratio = update_ratio(g, Axis::X, dt);
    for (std::size_t i = 0; i < g.ny(); ++i) {
        std::vector<AxisState> line;
        for (const PrimitiveState& s : f.row(i))
            line.push_back(to_axis(s, Axis::X));
        const auto ext = fill_ghosts(line, bc, Axis::X);
        std::vector<Flux> flux;
        for (std::size_t k = 0; k + 1 < ext.size(); ++k) {
            flux.push_back(godunov_interface_flux(ext[k], ext[k + 1], Axis::X, f.gas()));
            flux.back()[0] = -flux.back()[0];
        }
        for (std::size_t j = 0; j < g.nx(); ++j)
            out.at(i, j) = update_cell(f.at(i, j), flux[j], flux[j + 1], ratio, f.gas());
    }
    return sweep_axis(out, Axis::Y, dt, bc);
}

TEST(Verify, QuickPassesOnTheRealSolver)
{
    std::ostringstream log;
    EXPECT_EQ(cli::cmd_verify(verify::Level::quick, log), 0) << log.str();
    const std::string text = log.str();
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
}

TEST(Verify, EquivalenceCatchesAFluxSignError)
{
    const verify::FieldRunner mutant = [](strategies::StrategyId s, const euler::FieldState& f,
                                          const euler::TimeControls& tc, const euler::BoundarySpec& bc,
                                          std::size_t n) {
        if (s == strategies::StrategyId::sequential || s == strategies::StrategyId::one_sided_halo)
            return verify::run_field(s, f, tc, bc, n);
        euler::FieldState x = f;
        for (std::size_t k = 0; k < tc.steps(); ++k)
            x = flipped_mass_flux_step(x, tc.dt(), bc);
        return x;
    };
    const auto r = verify::check_equivalence(32, 48, 5, {1, 2}, mutant);
    EXPECT_FALSE(r.passed);
    EXPECT_NE(r.detail.find("two_sided_row/1"), std::string::npos) << r.detail;
    EXPECT_EQ(r.detail.find("one_sided_halo"), std::string::npos) << r.detail;

    std::ostringstream log;
    EXPECT_EQ(cli::cmd_verify(verify::Level::quick, log, mutant), cli::exit_failure);
    EXPECT_NE(log.str().find("FAIL strategy-equivalence"), std::string::npos) << log.str();
}

TEST(Verify, ChecksReportFailuresInsteadOfThrowing)
{
    const verify::FieldRunner broken = [](auto, const euler::FieldState&, const euler::TimeControls&,
                                          const euler::BoundarySpec&, std::size_t) -> euler::FieldState {
        throw NonPhysicalState("broken runner");
    };
    const auto r = verify::check_conservation(16, 2, broken);
    EXPECT_FALSE(r.passed);
    EXPECT_NE(r.detail.find("broken runner"), std::string::npos);
}

}  // namespace
