#include <eulerpar/strategies.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace eulerpar;
using namespace eulerpar::euler;
using namespace eulerpar::strategies;

namespace {

FieldState blast(std::size_t nx, std::size_t ny)
{
    return init_sedov(GridSpec(nx, ny));
}

FieldState random_smooth(std::size_t nx, std::size_t ny, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(0.1, 0.3), phase(0.0, 6.283185307179586);
    const double a1 = amp(rng), a2 = amp(rng), p1 = phase(rng), p2 = phase(rng);
    const GridSpec g(nx, ny);
    FieldState f(g, GasModel{});
    for (std::size_t i = 0; i < ny; ++i)
        for (std::size_t j = 0; j < nx; ++j) {
            const double x = g.x_center(j), y = g.y_center(i);
            f.at(i, j) = {1.0 + a1 * std::sin(6.283185307179586 * x + p1),
                          0.2 * std::cos(6.283185307179586 * y + p2), 0.1 * std::sin(6.283185307179586 * (x + y)),
                          1.0 + a2 * std::cos(6.283185307179586 * y + p1)};
        }
    return f;
}

FieldState reference(const FieldState& f, const TimeControls& tc, const BoundarySpec& bc)
{
    return run_simulation(StrategyId::sequential, f, tc, bc, 1).field;
}

double max_abs_diff(const FieldState& a, const FieldState& b)
{
    double m = 0.0;
    for (std::size_t k = 0; k < a.cells().size(); ++k) {
        const PrimitiveState &x = a.cells()[k], &y = b.cells()[k];
        m = std::max({m, std::abs(x.rho - y.rho), std::abs(x.u - y.u), std::abs(x.v - y.v),
                      std::abs(x.p - y.p)});
    }
    return m;
}

}  // namespace

TEST(StrategyId, NamesRoundTrip)
{
    for (StrategyId s : all_strategies)
        EXPECT_EQ(parse_strategy(name(s)), s);
    EXPECT_THROW(parse_strategy("mpi_row"), InvalidArgument);
}

TEST(StrategyId, BarrierBudget)
{
    EXPECT_EQ(barrier_count(StrategyId::sequential), 0u);
    EXPECT_EQ(barrier_count(StrategyId::two_sided_row), 0u);
    EXPECT_EQ(barrier_count(StrategyId::two_sided_patch), 0u);
    EXPECT_EQ(barrier_count(StrategyId::shared_barrier) + 2, barrier_count(StrategyId::shared_pointer));
    EXPECT_LT(barrier_count(StrategyId::one_sided_patch_fused), barrier_count(StrategyId::one_sided_patch));
}

TEST(Decompose, PatchFactorsClosestToSquare)
{
    using P = std::pair<std::size_t, std::size_t>;
    EXPECT_EQ(patch_factors(1), P(1, 1));
    EXPECT_EQ(patch_factors(2), P(1, 2));
    EXPECT_EQ(patch_factors(8), P(2, 4));
    EXPECT_EQ(patch_factors(12), P(3, 4));
    EXPECT_EQ(patch_factors(16), P(4, 4));
    EXPECT_EQ(patch_factors(7), P(1, 7));
}

TEST(Decompose, RowBandsWithUpDownNeighbours)
{
    const auto plan = decompose(GridSpec(512, 1024), 4, DecompositionMode::rows);
    ASSERT_EQ(plan.n_workers(), 4u);
    for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_EQ(plan.workers[k].extent.row0, 256 * k);
        EXPECT_EQ(plan.workers[k].extent.rows, 256u);
        EXPECT_FALSE(plan.workers[k].neighbors.left);
        EXPECT_FALSE(plan.workers[k].neighbors.right);
    }
    EXPECT_FALSE(plan.workers[0].neighbors.down);
    EXPECT_EQ(plan.workers[0].neighbors.up, 1u);
    EXPECT_EQ(plan.workers[2].neighbors.down, 1u);
    EXPECT_EQ(plan.workers[2].neighbors.up, 3u);
    EXPECT_FALSE(plan.workers[3].neighbors.up);
}

TEST(Decompose, SixteenPatchesFormFourByFour)
{
    const auto plan = decompose(GridSpec(64, 64), 16, DecompositionMode::patches);
    EXPECT_EQ(plan.distribution.pr(), 4u);
    EXPECT_EQ(plan.distribution.pc(), 4u);
    const Neighbors& c5 = plan.workers[5].neighbors;
    EXPECT_EQ(c5.left, 4u);
    EXPECT_EQ(c5.right, 6u);
    EXPECT_EQ(c5.down, 1u);
    EXPECT_EQ(c5.up, 9u);
    EXPECT_EQ(plan.workers[4].neighbors.left, 7u);  // periodic x
}

TEST(Decompose, TooManyWorkers)
{
    EXPECT_THROW(decompose(GridSpec(8, 8), 16, DecompositionMode::rows), TooManyWorkers);
    EXPECT_NO_THROW(decompose(GridSpec(8, 8), 16, DecompositionMode::patches));
    EXPECT_THROW(decompose(GridSpec(8, 2), 9, DecompositionMode::patches), TooManyWorkers);
}

TEST(Decompose, NeighbourRelationIsSymmetricAndCoversGrid)
{
    for (auto mode : {DecompositionMode::rows, DecompositionMode::patches})
        for (auto ymode : {YBoundary::inflow_outflow, YBoundary::periodic})
            for (std::size_t n : {1, 2, 3, 4, 6, 8, 9, 12}) {
                const GridSpec g(13, 17);
                const auto plan = decompose(g, n, mode, ymode);
                std::vector<int> hits(g.cells(), 0);
                for (std::size_t w = 0; w < n; ++w) {
                    const auto& e = plan.workers[w].extent;
                    for (std::size_t i = e.row0; i < e.row0 + e.rows; ++i)
                        for (std::size_t j = e.col0; j < e.col0 + e.cols; ++j)
                            ++hits[i * g.nx() + j];
                    const Neighbors& nb = plan.workers[w].neighbors;
                    if (nb.up) {
                        EXPECT_EQ(plan.workers[*nb.up].neighbors.down, w);
                    }
                    if (nb.down) {
                        EXPECT_EQ(plan.workers[*nb.down].neighbors.up, w);
                    }
                    if (nb.left) {
                        EXPECT_EQ(plan.workers[*nb.left].neighbors.right, w);
                    }
                    if (nb.right) {
                        EXPECT_EQ(plan.workers[*nb.right].neighbors.left, w);
                    }
                    if (ymode == YBoundary::periodic) {
                        EXPECT_TRUE(nb.up && nb.down);
                    }
                }
                EXPECT_TRUE(std::ranges::all_of(hits, [](int h) { return h == 1; }));
            }
}

TEST(RunSimulation, UniformFieldUnchangedByEveryStrategy)
{
    const FieldState f(GridSpec(12, 16), GasModel{}, {1.0, 0.3, -0.2, 1.0});
    const auto tc = TimeControls::from_steps(1e-3, 10);
    for (StrategyId s : all_strategies)
        for (std::size_t n : {1, 4}) {
            const auto r = run_simulation(s, f, tc, BoundarySpec::periodic(), n);
            EXPECT_EQ(r.field, f) << name(s) << " n=" << n;
        }
}

class Equivalence : public ::testing::TestWithParam<StrategyId> {};

TEST_P(Equivalence, BitwiseEqualToSequential)
{
    const StrategyId s = GetParam();
    const auto tc = TimeControls::from_steps(1e-5, 20);
    BoundarySpec with_band;
    with_band.ghost_band_rows = 3;
    struct Case {
        FieldState field;
        BoundarySpec bc;
    };
    const std::vector<Case> cases{{blast(24, 40), BoundarySpec{}},
                                  {blast(24, 40), with_band},
                                  {random_smooth(20, 18, 3), BoundarySpec::periodic()}};
    for (const Case& c : cases) {
        const FieldState ref = reference(c.field, tc, c.bc);
        for (std::size_t n : {1, 2, 3, 4, 8}) {
            const auto r = run_simulation(s, c.field, tc, c.bc, n);
            ASSERT_EQ(r.field.grid(), c.field.grid());
            EXPECT_TRUE(r.field == ref) << name(s) << " n=" << n << " diff " << max_abs_diff(r.field, ref);
        }
    }
}

INSTANTIATE_TEST_SUITE_P(ExactStrategies, Equivalence,
                         ::testing::Values(StrategyId::two_sided_row, StrategyId::two_sided_patch,
                                           StrategyId::shared_naive, StrategyId::shared_pointer,
                                           StrategyId::shared_barrier, StrategyId::one_sided_halo,
                                           StrategyId::one_sided_patch),
                         [](const auto& info) { return std::string(name(info.param)); });

TEST(RunSimulation, MeasuredBarriersMatchBudget)
{
    const FieldState f = blast(16, 24);
    const auto tc = TimeControls::from_steps(1e-5, 5);
    for (StrategyId s : all_strategies) {
        const auto r = run_simulation(s, f, tc, BoundarySpec{}, 4);
        for (const auto& w : r.stats.workers)
            EXPECT_EQ(w.barriers, barrier_count(s) * tc.steps()) << name(s);
    }
}

TEST(RunSimulation, TwoSidedRowMessageCounts)
{
    const auto tc = TimeControls::from_steps(1e-5, 7);
    const auto r = run_simulation(StrategyId::two_sided_row, blast(16, 32), tc, BoundarySpec{}, 4);
    ASSERT_EQ(r.stats.workers.size(), 4u);
    EXPECT_EQ(r.stats.workers[0].sends, 7u);
    EXPECT_EQ(r.stats.workers[3].recvs, 7u);
    for (std::size_t w : {1, 2}) {
        EXPECT_EQ(r.stats.workers[w].sends, 2u * 7);
        EXPECT_EQ(r.stats.workers[w].recvs, 2u * 7);
    }
}

TEST(RunSimulation, TwoSidedPatchMessageCounts)
{
    const auto tc = TimeControls::from_steps(1e-5, 3);
    const auto r = run_simulation(StrategyId::two_sided_patch, blast(16, 16), tc, BoundarySpec{}, 16);
    for (std::size_t w : {5, 6, 9, 10}) {
        EXPECT_EQ(r.stats.workers[w].sends, 8u * 3);
        EXPECT_EQ(r.stats.workers[w].recvs, 8u * 3);
    }
    const auto p = run_simulation(StrategyId::two_sided_patch, blast(16, 16), tc, BoundarySpec::periodic(), 16);
    for (const auto& w : p.stats.workers)
        EXPECT_EQ(w.sends, 8u * 3);
}

TEST(RunSimulation, OneSidedStrategiesSendNoMessages)
{
    const auto tc = TimeControls::from_steps(1e-5, 2);
    for (StrategyId s : {StrategyId::shared_naive, StrategyId::shared_barrier, StrategyId::one_sided_halo,
                         StrategyId::one_sided_patch_fused}) {
        const auto r = run_simulation(s, blast(16, 16), tc, BoundarySpec{}, 4);
        for (const auto& w : r.stats.workers)
            EXPECT_EQ(w.sends + w.recvs, 0u) << name(s);
    }
}

namespace {

//! Cell value that identifies its global position.
PrimitiveState tagged(std::size_t i, std::size_t j)
{
    return {1.0 + static_cast<double>(i), 1.0 + static_cast<double>(j), 0.0, 1.0};
}

FieldState tagged_field(std::size_t nx, std::size_t ny)
{
    FieldState f(GridSpec(nx, ny), GasModel{});
    for (std::size_t i = 0; i < ny; ++i)
        for (std::size_t j = 0; j < nx; ++j)
            f.at(i, j) = tagged(i, j);
    return f;
}

//! Ghost frame (without corners) of a padded block must hold the periodic
//! neighbours' cells of the global field.
std::size_t ghost_errors(const PaddedBlock& b, std::size_t nx, std::size_t ny, bool rows, bool cols)
{
    const auto& e = b.extent();
    std::size_t bad = 0;
    for (std::size_t lj = 0; lj < e.cols && rows; ++lj) {
        const std::size_t j = e.col0 + lj;
        bad += !(b.at(0, lj + 1) == tagged((e.row0 + ny - 1) % ny, j));
        bad += !(b.at(e.rows + 1, lj + 1) == tagged((e.row0 + e.rows) % ny, j));
    }
    for (std::size_t li = 0; li < e.rows && cols; ++li) {
        const std::size_t i = e.row0 + li;
        bad += !(b.at(li + 1, 0) == tagged(i, (e.col0 + nx - 1) % nx));
        bad += !(b.at(li + 1, e.cols + 1) == tagged(i, (e.col0 + e.cols) % nx));
    }
    return bad;
}

}  // namespace

TEST(Halo, TwoSidedExchangeCopiesNeighbourCells)
{
    const std::size_t nx = 12, ny = 10;
    const FieldState f = tagged_field(nx, ny);
    FieldState sink = f;
    for (std::size_t n : {1, 2, 4, 6}) {
        const auto plan = decompose(f.grid(), n, DecompositionMode::patches, YBoundary::periodic);
        const DriverContext ctx{plan, f.grid(), f.gas(), BoundarySpec::periodic(), 1e-5, 1, f, sink};
        const auto errors = comm::spawn_spmd(n, [&](comm::Worker& w) {
            PaddedBlock b(plan.workers[w.id()].extent);
            b.load(f);
            std::vector<PrimitiveState> buf;
            strategies::detail::exchange_columns(w, b, plan.workers[w.id()].neighbors, buf);
            strategies::detail::exchange_rows(w, b, plan.workers[w.id()].neighbors, ctx);
            return ghost_errors(b, nx, ny, true, true);
        });
        for (std::size_t e : errors)
            EXPECT_EQ(e, 0u) << "n=" << n;
    }
}

TEST(Halo, OneSidedFetchCopiesNeighbourCells)
{
    const std::size_t nx = 12, ny = 10;
    const FieldState f = tagged_field(nx, ny);
    FieldState sink = f;
    for (std::size_t n : {1, 2, 4, 6}) {
        const auto plan = decompose(f.grid(), n, DecompositionMode::patches, YBoundary::periodic);
        const DriverContext ctx{plan, f.grid(), f.gas(), BoundarySpec::periodic(), 1e-5, 1, f, sink};
        comm::SharedArray2D<PrimitiveState> a(plan.distribution);
        const auto errors = comm::spawn_spmd(n, [&](comm::Worker& w) {
            PaddedBlock b(plan.workers[w.id()].extent);
            b.load(f);
            strategies::detail::publish_edges(a.local_view(w.id()), b);
            w.barrier();
            std::vector<PrimitiveState> buf;
            strategies::detail::fetch_columns(a, b, plan.workers[w.id()].neighbors, plan, buf);
            strategies::detail::fetch_rows(a, b, plan.workers[w.id()].neighbors, plan, ctx);
            return ghost_errors(b, nx, ny, true, true);
        });
        for (std::size_t e : errors)
            EXPECT_EQ(e, 0u) << "n=" << n;
    }
}

TEST(Fused, SingleWorkerIsExact)
{
    const FieldState f = blast(16, 24);
    const auto tc = TimeControls::from_steps(1e-5, 10);
    const auto r = run_simulation(StrategyId::one_sided_patch_fused, f, tc, BoundarySpec{}, 1);
    EXPECT_EQ(r.field, reference(f, tc, BoundarySpec{}));
}

TEST(Fused, DiffersFromSequentialButConvergesWithDt)
{
    const FieldState f = random_smooth(32, 32, 11);
    const BoundarySpec bc = BoundarySpec::periodic();
    std::vector<double> gaps;
    for (double dt : {4e-4, 2e-4, 1e-4}) {
        const TimeControls tc(dt, 4e-3);
        const auto fused = run_simulation(StrategyId::one_sided_patch_fused, f, tc, bc, 4);
        gaps.push_back(max_abs_diff(fused.field, reference(f, tc, bc)));
    }
    EXPECT_GT(gaps[0], 0.0);
    for (std::size_t k = 1; k < gaps.size(); ++k) {
        EXPECT_LT(gaps[k], gaps[k - 1] * 1.1 / 1.0);
        EXPECT_GT(gaps[k - 1] / gaps[k], 1.5);
    }
}

TEST(RunSimulation, RejectsCflViolation)
{
    const FieldState f(GridSpec(8, 8), GasModel{}, {1.0, 0.0, 0.0, 1.0});
    EXPECT_THROW(run_simulation(StrategyId::one_sided_halo, f, TimeControls::from_steps(0.2, 1),
                                BoundarySpec::periodic(), 2),
                 CflViolation);
}

TEST(RunSimulation, WorkerErrorsSurfaceAsTheOriginalError)
{
    FieldState f(GridSpec(8, 8), GasModel{}, {1.0, 0.0, 0.0, 1.0});
    for (std::size_t i = 0; i < 8; ++i) {
        f.at(i, 3) = {1.0, -20.0, 0.0, 1.0};
        f.at(i, 4) = {1.0, 20.0, 0.0, 1.0};
    }
    const auto tc = TimeControls::from_steps(1e-4, 1);
    for (StrategyId s : {StrategyId::two_sided_row, StrategyId::shared_barrier, StrategyId::one_sided_patch})
        EXPECT_THROW(run_simulation(s, f, tc, BoundarySpec::periodic(), 4), VacuumGenerated) << name(s);
}

TEST(RunSimulation, TooManyWorkersForGrid)
{
    const FieldState f(GridSpec(8, 8), GasModel{}, {1.0, 0.0, 0.0, 1.0});
    EXPECT_THROW(run_simulation(StrategyId::two_sided_row, f, TimeControls::from_steps(1e-4, 1),
                                BoundarySpec{}, 16),
                 TooManyWorkers);
}

TEST(RunSimulation, SequentialIgnoresWorkerCount)
{
    const FieldState f = blast(8, 8);
    const auto r = run_simulation(StrategyId::sequential, f, TimeControls::from_steps(1e-5, 2), BoundarySpec{}, 8);
    EXPECT_EQ(r.workers, 1u);
    EXPECT_GT(r.wall_seconds, 0.0);
}
