#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "morphocell/figures.hpp"
#include "morphocell/geometry.hpp"

namespace {

using namespace morphocell;
using namespace morphocell::geometry;

CellSpec unit_ball() {
    CellSpec cell;
    cell.kind = CellKind::ImplicitRegion;
    cell.expr = dsl::parse("x^2 + y^2 + z^2");
    cell.domain = Box{-2, 2, -2, 2, -2, 2};
    return cell;
}

CellSpec surface(const char* expr) {
    CellSpec cell;
    cell.kind = CellKind::HeightField;
    cell.expr = dsl::parse(expr);
    cell.domain = SquareDomain{4.0, true};
    return cell;
}

CellSpec fig4() { return surface("abs(x*y)^(1/t)"); }
CellSpec fig12a() { return surface("exp(-(x^2 + y^2)^(1/t))"); }

TEST(Membership, UnitBall) {
    const auto cell = unit_ball();
    EXPECT_TRUE(membership(cell, {0, 0, 0}, 1.0).inside);
    EXPECT_FALSE(membership(cell, {2, 0, 0}, 1.0).inside);
    EXPECT_TRUE(membership(cell, {1, 0, 0}, 1.0).inside);
    EXPECT_TRUE(membership(cell, {0, 0, -1}, 7.0).inside);
    EXPECT_FALSE(membership(cell, {1, 1e-7, 0}, 1.0).inside);
}

TEST(Membership, OutsideDomainIsNeverMember) {
    auto cell = unit_ball();
    cell.iso = 1000;
    EXPECT_TRUE(membership(cell, {2, 2, 2}, 1.0).inside);
    EXPECT_FALSE(membership(cell, {2.5, 0, 0}, 1.0).inside);
}

TEST(Membership, DomainErrorIsFlaggedNonMembership) {
    CellSpec cell = unit_ball();
    cell.expr = dsl::parse("ln(x)");
    const auto m = membership(cell, {-1, 0, 0}, 1.0);
    EXPECT_FALSE(m.inside);
    EXPECT_TRUE(m.domain_error);
    EXPECT_FALSE(m.diagnostic.empty());
}

TEST(Membership, HeightFieldIsTheSolidBelow) {
    const auto cell = fig4();
    EXPECT_TRUE(membership(cell, {1, 1, 1}, 2.0).inside);
    EXPECT_FALSE(membership(cell, {1, 1, 1.0000001}, 2.0).inside);
    EXPECT_THROW(membership(cell, {1, 1, 0}, 0.0), TimeError);
}

TEST(Validation, Domains) {
    EXPECT_THROW(validate(SpatialDomain{Box{1, 1, 0, 1, 0, 1}}), ValidationError);
    EXPECT_THROW(validate(SpatialDomain{Disc{0, 0, 0}}), ValidationError);
    EXPECT_THROW(validate(SpatialDomain{SquareDomain{-1, true}}), ValidationError);
    EXPECT_NO_THROW(validate(SpatialDomain{Disc{0, 0, 10}}));
}

TEST(Validation, HeightFieldMayNotUseZ) {
    auto cell = surface("x + z");
    EXPECT_THROW(validate(cell), ValidationError);
}

TEST(SampleHeightfield, ThreeByThree) {
    const auto grid = sample_heightfield(fig4(), 1.0, 3, 3);
    ASSERT_EQ(grid.values.size(), 9u);
    for (std::size_t i : {0u, 2u})
        for (std::size_t j : {0u, 2u}) EXPECT_EQ(grid.at(i, j), 4.0);
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_EQ(grid.at(1, k), 0.0);
        EXPECT_EQ(grid.at(k, 1), 0.0);
    }
    EXPECT_EQ(grid.hole_count(), 0u);
}

TEST(SampleHeightfield, CoordinatesAreAffineAndHitTheBounds) {
    const auto grid = sample_heightfield(fig4(), 1.0, 129, 129);
    EXPECT_EQ(grid.coordinate(0, 0), -2.0);
    EXPECT_EQ(grid.coordinate(0, 128), 2.0);
    EXPECT_EQ(grid.coordinate(0, 64), 0.0);
    EXPECT_EQ(grid.coordinate(1, 32), -1.0);
}

TEST(SampleHeightfield, ParaboloidOverDisc) {
    const auto cell = figures::surface_cell("eq1", {{"H", 10}, {"b", 0.1}});
    const auto& disc = std::get<Disc>(cell.domain);
    EXPECT_EQ(disc.radius, 10.0);
    const auto grid = sample_heightfield(cell, 1.0, 129, 129);
    EXPECT_EQ(grid.at(64, 64), 10.0);
    EXPECT_NEAR(grid.at(128, 64), 0.0, 1e-12);
    EXPECT_NEAR(grid.at(64, 0), 0.0, 1e-12);
    EXPECT_TRUE(ScalarGrid::is_hole(grid.at(0, 0)));
    EXPECT_TRUE(ScalarGrid::is_hole(grid.at(128, 128)));
    // Every non-hole node lies inside the closed disc, every hole outside it.
    for (std::size_t j = 0; j < 129; ++j)
        for (std::size_t i = 0; i < 129; ++i) {
            const double x = grid.coordinate(0, i), y = grid.coordinate(1, j);
            EXPECT_EQ(ScalarGrid::is_hole(grid.at(i, j)), x * x + y * y > 100.0);
        }
}

TEST(SampleHeightfield, SteadySingularFormSqueeze) {
    const auto cell = figures::surface_cell("fig12c", {});
    EXPECT_EQ(field_value(cell, 0, 0, 0, 1), 0.0);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> angle(0, 2 * std::numbers::pi);
    for (int e = 1; e <= 6; ++e) {
        const double r = std::pow(10.0, -e);
        for (int k = 0; k < 50; ++k) {
            const double a = angle(rng);
            const double x = r * std::cos(a), y = r * std::sin(a);
            const double g = field_value(cell, x, y, 0, 1);
            EXPECT_LE(std::fabs(g), x * x + y * y) << r;
        }
    }
    const auto grid = sample_heightfield(cell, 1.0, 129, 129);
    EXPECT_EQ(grid.at(64, 64), 0.0);
    EXPECT_EQ(grid.hole_count(), 0u);
}

TEST(SampleHeightfield, DomainErrorsBecomeHoles) {
    const auto grid = sample_heightfield(surface("ln(x)"), 1.0, 5, 5);
    EXPECT_EQ(grid.domain_error_count, 15u);
    EXPECT_EQ(grid.hole_count(), 15u);
    EXPECT_EQ(grid.at(4, 0), std::log(2.0));
}

TEST(SampleHeightfield, TimeMustBePositive) {
    EXPECT_THROW(sample_heightfield(fig4(), 0.0, 5, 5), TimeError);
    EXPECT_THROW(sample_heightfield(fig4(), -1.0, 5, 5), TimeError);
    EXPECT_NO_THROW(sample_heightfield(surface("x*y"), -1.0, 5, 5));
}

TEST(SampleHeightfield, RejectsTooFewSamples) {
    EXPECT_THROW(sample_heightfield(fig4(), 1.0, 1, 5), ValidationError);
}

TEST(SampleVolume, BallValues) {
    const auto grid = sample_volume(unit_ball(), 1.0, 5, 5, 5);
    ASSERT_EQ(grid.values.size(), 125u);
    for (std::size_t i : {0u, 4u})
        for (std::size_t j : {0u, 4u})
            for (std::size_t k : {0u, 4u}) EXPECT_EQ(grid.at(i, j, k), 12.0);
    EXPECT_EQ(grid.at(2, 2, 2), 0.0);
    EXPECT_EQ(grid.at(3, 2, 2), 1.0);
}

TEST(SampleVolume, UnboundParameter) {
    auto cell = unit_ball();
    cell.expr = dsl::parse("x^2 + k*y^2");
    EXPECT_THROW(sample_volume(cell, 1.0, 5, 5, 5), UnboundParam);
    cell.params["k"] = 2;
    EXPECT_NO_THROW(sample_volume(cell, 1.0, 5, 5, 5));
}

TEST(SampleVolume, RowMajorXFastest) {
    auto cell = unit_ball();
    cell.expr = dsl::parse("x + 10*y + 100*z");
    cell.domain = Box{0, 2, 0, 2, 0, 2};
    const auto grid = sample_volume(cell, 1.0, 3, 3, 3);
    for (std::size_t n = 0; n < 27; ++n) {
        const double expected = double(n % 3) + 10.0 * double((n / 3) % 3) + 100.0 * double(n / 9);
        EXPECT_EQ(grid.values[n], expected);
    }
}

TEST(TimeSweep, MatchesSingleShots) {
    const double instants[] = {1, 2, 4};
    const auto sweep = time_sweep(fig4(), instants, {33, 33, 1});
    ASSERT_EQ(sweep.size(), 3u);
    for (std::size_t s = 0; s < 3; ++s) {
        const auto single = sample_heightfield(fig4(), instants[s], 33, 33);
        EXPECT_EQ(sweep[s].t, instants[s]);
        for (std::size_t n = 0; n < single.values.size(); ++n)
            EXPECT_EQ(std::bit_cast<std::uint64_t>(sweep[s].values[n]),
                      std::bit_cast<std::uint64_t>(single.values[n]));
    }
}

TEST(TimeSweep, LinearSpacing) {
    const auto one = time_sweep(fig4(), 1.5, 3.0, 1, {9, 9, 1});
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0].t, 1.5);
    const auto four = time_sweep(fig4(), 1.0, 4.0, 4, {9, 9, 1});
    ASSERT_EQ(four.size(), 4u);
    EXPECT_EQ(four[0].t, 1.0);
    EXPECT_EQ(four[1].t, 2.0);
    EXPECT_EQ(four[3].t, 4.0);
    EXPECT_THROW(time_sweep(fig4(), 0.0, 1.0, 3, {9, 9, 1}), TimeError);
    EXPECT_THROW(time_sweep(fig4(), 2.0, 1.0, 3, {9, 9, 1}), ValidationError);
    EXPECT_THROW(time_sweep(fig4(), 1.0, 2.0, 0, {9, 9, 1}), ValidationError);
}

TEST(Properties, FourthFigureMonotoneInTime) {
    const double instants[] = {1, 2, 4};
    const auto sweep = time_sweep(fig4(), instants, {129, 129, 1});
    std::size_t checked = 0;
    for (std::size_t j = 0; j < 129; ++j)
        for (std::size_t i = 0; i < 129; ++i) {
            const double u = std::fabs(sweep[0].coordinate(0, i) * sweep[0].coordinate(1, j));
            const auto n = sweep[0].index(i, j);
            if (u > 0 && u < 1) {
                EXPECT_LT(sweep[0].values[n], sweep[1].values[n]);
                EXPECT_LT(sweep[1].values[n], sweep[2].values[n]);
                ++checked;
            } else if (u == 1) {
                for (const auto& g : sweep) EXPECT_EQ(g.values[n], 1.0);
            }
        }
    EXPECT_GT(checked, 5000u);
}

TEST(Properties, FourthFigureSymmetry) {
    for (double t : {1.0, 2.0, 4.0}) {
        const auto g = sample_heightfield(fig4(), t, 129, 129);
        for (std::size_t j = 0; j < 129; ++j)
            for (std::size_t i = 0; i < 129; ++i) {
                const double v = g.at(i, j);
                EXPECT_EQ(v, g.at(j, i));
                EXPECT_EQ(v, g.at(128 - i, j));
                EXPECT_EQ(v, g.at(i, 128 - j));
            }
    }
}

TEST(Properties, GridMatchesPointEvaluation) {
    std::mt19937_64 rng(8);
    for (const auto& cell : {fig4(), fig12a(), figures::surface_cell("fig12c", {})}) {
        const auto g = sample_heightfield(cell, 1.5, 129, 97);
        for (int k = 0; k < 500; ++k) {
            const std::size_t i = rng() % 129, j = rng() % 97;
            const double direct = field_value(cell, g.coordinate(0, i), g.coordinate(1, j), 0, 1.5);
            EXPECT_EQ(std::bit_cast<std::uint64_t>(direct), std::bit_cast<std::uint64_t>(g.at(i, j)));
        }
    }
}

double max_change(const CellSpec& cell, double t, double delta) {
    const auto a = sample_heightfield(cell, t, 129, 129);
    const auto b = sample_heightfield(cell, t + delta, 129, 129);
    double m = 0;
    for (std::size_t n = 0; n < a.values.size(); ++n) m = std::max(m, std::fabs(a.values[n] - b.values[n]));
    return m;
}

TEST(Properties, TimeContinuity) {
    for (const auto& cell : {fig4(), fig12a()}) {
        const double coarse = max_change(cell, 1.0, 1e-3);
        const double fine = max_change(cell, 1.0, 1e-6);
        EXPECT_GT(coarse, 0.0);
        EXPECT_GE(coarse / fine, 100.0);
    }
}

TEST(Properties, GaussianPeakIsOneForEveryInstant) {
    for (double t : {0.1, 0.5, 1.0, 2.0, 3.7, 50.0}) {
        const auto g = sample_heightfield(fig12a(), t, 129, 129);
        EXPECT_EQ(g.at(64, 64), 1.0);
        for (double v : g.values) EXPECT_LE(v, 1.0);
    }
}

}  // namespace
