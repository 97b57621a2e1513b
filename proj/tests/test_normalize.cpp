#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "taxodev/normalize.hpp"

using namespace taxodev;
using namespace taxodev::testing;

namespace {

IndicatorPanel single_variable(const std::vector<Observation>& obs, Direction direction = Direction::Stimulant) {
    return IndicatorPanel::build({{"x", direction, "", ""}}, obs);
}

// Applies a*x + b to one variable of a panel.
IndicatorPanel affine(const IndicatorPanel& panel, const std::string& variable, double a, double b) {
    auto obs = panel.observations();
    for (auto& o : obs)
        if (o.variable == variable) o.value = a * o.value + b;
    return IndicatorPanel::build(panel.catalog(), obs);
}

}  // namespace

TEST_CASE("pooled z-scores of {1,2,3}") {
    const auto z = pooled_standardize(single_variable({{"A", 2004, "x", 1}, {"B", 2004, "x", 2}, {"C", 2004, "x", 3}}));
    // population sd = sqrt(2/3), so z = -+1/sqrt(2/3) = -+1.224745
    CHECK(*z.z(0, 0, 0) == doctest::Approx(-1.224744871391589).epsilon(1e-12));
    CHECK(*z.z(1, 0, 0) == doctest::Approx(0.0));
    CHECK(*z.z(2, 0, 0) == doctest::Approx(1.224744871391589).epsilon(1e-12));
    CHECK(z.means[0] == doctest::Approx(2.0));
    CHECK(z.sds[0] == doctest::Approx(std::sqrt(2.0 / 3.0)));
    CHECK_FALSE(z.oriented);
}

TEST_CASE("standardization pools across periods") {
    // {1,3} in 2004 and {3,5} in 2005: pooled mean 3, sd sqrt(2)
    const auto z = pooled_standardize(
        single_variable({{"A", 2004, "x", 1}, {"B", 2004, "x", 3}, {"A", 2005, "x", 3}, {"B", 2005, "x", 5}}));
    CHECK(z.means[0] == doctest::Approx(3.0));
    CHECK(z.sds[0] == doctest::Approx(std::sqrt(2.0)));
    CHECK(*z.z(0, 0, 0) == doctest::Approx(-1.41421356).epsilon(1e-8));
    CHECK(*z.z(1, 0, 0) == doctest::Approx(0.0));
    CHECK(*z.z(0, 1, 0) == doctest::Approx(0.0));
    CHECK(*z.z(1, 1, 0) == doctest::Approx(1.41421356).epsilon(1e-8));
}

TEST_CASE("constant variable is degenerate") {
    const auto panel = single_variable({{"A", 2004, "x", 7}, {"B", 2004, "x", 7}, {"C", 2004, "x", 7}});
    try {
        pooled_standardize(panel);
        FAIL("expected DegenerateVariable");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DegenerateVariable);
        CHECK(std::string(e.what()).find("`x`") != std::string::npos);
    }
}

TEST_CASE("orient negates destimulants only, once") {
    const std::vector<Observation> obs{{"A", 2004, "x", 1}, {"B", 2004, "x", 3}};
    const auto des = pooled_standardize(single_variable(obs, Direction::Destimulant));
    const auto oriented = orient(des, {{"x", Direction::Destimulant, "", ""}});
    CHECK(*oriented.z(0, 0, 0) == doctest::Approx(1.0));
    CHECK(*oriented.z(1, 0, 0) == doctest::Approx(-1.0));
    CHECK(oriented.oriented);

    const auto stim = orient(pooled_standardize(single_variable(obs)), {{"x", Direction::Stimulant, "", ""}});
    CHECK(*stim.z(0, 0, 0) == doctest::Approx(-1.0));
    CHECK(*stim.z(1, 0, 0) == doctest::Approx(1.0));

    CHECK(error_kind([&] { orient(oriented, {{"x", Direction::Destimulant, "", ""}}); }) == ErrorKind::DoubleOrientation);
    CHECK(error_kind([&] { orient(des, {{"y", Direction::Destimulant, "", ""}}); }) == ErrorKind::UnknownVariable);
}

TEST_CASE("pooled z-scores have mean 0 and population sd 1") {
    const auto panel = synthetic_panel(10, 2004, 6, 5);
    const auto z = pooled_standardize(panel);
    for (std::size_t v = 0; v < z.variables.size(); ++v) {
        double sum = 0.0, ss = 0.0;
        std::size_t n = 0;
        for (std::size_t e = 0; e < z.entities.size(); ++e)
            for (std::size_t p = 0; p < z.periods.size(); ++p)
                if (auto cell = z.z(e, p, v)) {
                    sum += *cell;
                    ss += *cell * *cell;
                    ++n;
                }
        CHECK(std::abs(sum / n) < 1e-9);
        CHECK(std::abs(std::sqrt(ss / n) - 1.0) < 1e-9);
    }
}

TEST_CASE("standardization is invariant to positive affine maps") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> scale(0.01, 100.0), shift(-1000.0, 1000.0);
    const auto panel = synthetic_panel(8, 2004, 4, 17);
    const auto base = pooled_standardize(panel);
    for (int trial = 0; trial < 20; ++trial) {
        const auto& meta = panel.catalog()[static_cast<std::size_t>(trial) % panel.catalog().size()];
        const auto moved = pooled_standardize(affine(panel, meta.name, scale(rng), shift(rng)));
        for (std::size_t i = 0; i < base.values.size(); ++i) CHECK(std::abs(*moved.values[i] - *base.values[i]) < 1e-9);
    }
}

TEST_CASE("negative affine map of a destimulant matches the oriented negation") {
    // a*x + b with a < 0, oriented as a destimulant, equals x oriented as a stimulant.
    const auto panel = synthetic_panel(8, 2004, 4, 23);
    const std::string target = "top5_share_life";
    const auto catalog = panel.catalog();
    const auto oriented = orient(pooled_standardize(affine(panel, target, -3.5, 12.0)), catalog);

    auto stimulant_catalog = catalog;
    for (auto& meta : stimulant_catalog)
        if (meta.name == target) meta.direction = Direction::Stimulant;
    const auto reference =
        orient(pooled_standardize(IndicatorPanel::build(stimulant_catalog, panel.observations())), stimulant_catalog);

    const auto v = *panel.variable_index(target);
    for (std::size_t e = 0; e < oriented.entities.size(); ++e)
        for (std::size_t p = 0; p < oriented.periods.size(); ++p)
            CHECK(std::abs(*oriented.z(e, p, v) - *reference.z(e, p, v)) < 1e-9);
}

TEST_CASE("undoing the destimulant negation recovers the unoriented panel") {
    const auto panel = synthetic_panel(5, 2004, 3, 31);
    const auto z = pooled_standardize(panel);
    auto back = orient(z, panel.catalog());
    for (std::size_t v = 0; v < back.variables.size(); ++v) {
        if (back.variables[v].direction != Direction::Destimulant) continue;
        for (std::size_t e = 0; e < back.entities.size(); ++e)
            for (std::size_t p = 0; p < back.periods.size(); ++p)
                if (auto& cell = back.z(e, p, v)) *cell = -*cell;
    }
    back.oriented = false;
    CHECK(back.values == z.values);
    CHECK(back.means == z.means);
}

TEST_CASE("standardize_columns gives per-column z-scores") {
    auto points = points_1d({0, 1, 10, 11});
    const auto z = standardize_columns(points, {"x"});
    double sum = 0.0, ss = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        sum += z.coords(i, 0);
        ss += z.coords(i, 0) * z.coords(i, 0);
    }
    CHECK(std::abs(sum) < 1e-12);
    CHECK(ss / 4 == doctest::Approx(1.0));
    CHECK(error_kind([&] { standardize_columns(points_1d({2, 2, 2}), {"x"}); }) == ErrorKind::DegenerateVariable);
}
