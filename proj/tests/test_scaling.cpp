#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "gaincond/model_io.hpp"
#include "gaincond/rga.hpp"
#include "gaincond/scaling.hpp"
#include "oracles.hpp"

using namespace gaincond;
using testing_oracles::fixture_path;
using testing_oracles::read_file;

namespace {

GainModel eq3_model() {
    GainModel m;
    m.mvs = {{"TC-REBOIL-SP", 2.0, ""}, {"FC-REFLUX-SP", 10.0, ""}};
    m.cvs = {{"AI-RVP-PV", ""}, {"AI-DIST-C5", ""}};
    m.gains = Matrix{{-0.1942, -0.0029}, {0.1843, -0.0288}};
    return m;
}

}  // namespace

TEST_CASE("worked 2x2 scaling") {
    const auto scaled = typical_move_scale(eq3_model());
    CHECK(scaled.values(0, 0) == -1.0);
    CHECK(scaled.values(1, 0) == 1.0);
    // reference values printed from unrounded source gains
    CHECK(std::abs(scaled.values(0, 1) - (-0.0754)) <= 1e-3);
    CHECK(std::abs(scaled.values(1, 1) - (-0.7813)) <= 1e-3);
    // frozen full-precision values
    CHECK(scaled.values(0, 1) == doctest::Approx(-0.0746652935).epsilon(1e-9));
    CHECK(scaled.values(1, 1) == doctest::Approx(-0.7813347802).epsilon(1e-9));
    CHECK(scaled.row_scales[0] == doctest::Approx(1.0 / 0.3884).epsilon(1e-12));
    CHECK(scaled.col_scales == std::vector<double>{2.0, 10.0});
}

TEST_CASE("single element always scales to unity") {
    GainModel m;
    m.mvs = {{"M", 3.0, ""}};
    m.cvs = {{"C", ""}};
    m.gains = Matrix{{5.0}};
    const auto scaled = typical_move_scale(m);
    CHECK(scaled.values(0, 0) == 1.0);
    CHECK(scaled.row_scales[0] == doctest::Approx(1.0 / 15.0).epsilon(1e-15));
}

TEST_CASE("all-zero row keeps scale 1 and stays zero") {
    GainModel m;
    m.mvs = {{"M1", 2.0, ""}, {"M2", 1.0, ""}};
    m.cvs = {{"C1", ""}, {"C2", ""}};
    m.gains = Matrix{{0.0, 0.0}, {1.0, 2.0}};
    const auto scaled = typical_move_scale(m);
    CHECK(scaled.values(0, 0) == 0.0);
    CHECK(scaled.values(0, 1) == 0.0);
    CHECK(scaled.row_scales[0] == 1.0);
    REQUIRE(scaled.zero_rows.size() == 1);
    CHECK(scaled.zero_rows[0] == 0);
}

TEST_CASE("fixture reproduces the reference scaled table") {
    const GainModel model = parse_model(read_file(fixture_path("debutanizer.json")),
                                        Format::json);
    const auto scaled = typical_move_scale(model);
    // spot cells; the full table is covered by the acceptance suite
    const double expected[][2] = {{1, 0}, {3, 4}, {6, 2}};
    const double values[] = {0.9666, 0.5129, -0.3219};
    for (int k = 0; k < 3; ++k) {
        const auto i = static_cast<std::size_t>(expected[k][0]);
        const auto j = static_cast<std::size_t>(expected[k][1]);
        CHECK(std::abs(scaled.values(i, j) - values[k]) <= 1e-3);
    }
}

TEST_CASE("row-max property and bounds on random models") {
    std::mt19937 rng(20240813);
    for (int trial = 0; trial < 100; ++trial) {
        const GainModel model = testing_oracles::random_model(rng, 5, 4, 0.15);
        const auto scaled = typical_move_scale(model);
        for (std::size_t i = 0; i < 5; ++i) {
            double row_max = 0.0;
            for (std::size_t j = 0; j < 4; ++j) {
                CHECK(std::abs(scaled.values(i, j)) <= 1.0);
                row_max = std::max(row_max, std::abs(scaled.values(i, j)));
            }
            const bool zero_row = std::find(scaled.zero_rows.begin(), scaled.zero_rows.end(),
                                            i) != scaled.zero_rows.end();
            if (!zero_row) CHECK(row_max == 1.0);

            // recompute from the retained factors
            for (std::size_t j = 0; j < 4; ++j) {
                const double recomputed =
                    model.gains(i, j) * scaled.col_scales[j] * scaled.row_scales[i];
                CHECK(std::abs(recomputed - scaled.values(i, j)) <= 1e-14);
            }
        }
    }
}

TEST_CASE("unscale inverts the scaling") {
    const GainModel model = parse_model(read_file(fixture_path("debutanizer.json")),
                                        Format::json);
    const auto scaled = typical_move_scale(model);
    const Matrix back = unscale(scaled, scaled.values);
    for (std::size_t i = 0; i < back.rows(); ++i)
        for (std::size_t j = 0; j < back.cols(); ++j)
            CHECK(std::abs(back(i, j) - model.gains(i, j)) <=
                  1e-12 * std::max(1.0, std::abs(model.gains(i, j))));

    const Matrix zeros(back.rows(), back.cols(), 0.0);
    const Matrix z = unscale(scaled, zeros);
    for (std::size_t i = 0; i < z.rows(); ++i)
        for (std::size_t j = 0; j < z.cols(); ++j) CHECK(z(i, j) == 0.0);

    CHECK_THROWS_AS(unscale(scaled, Matrix(2, 2, 1.0)), std::invalid_argument);
}

TEST_CASE("idempotent on an already-scaled model") {
    GainModel m;
    m.mvs = {{"M1", 1.0, ""}, {"M2", 1.0, ""}};
    m.cvs = {{"C1", ""}, {"C2", ""}};
    m.gains = Matrix{{1.0, -0.25}, {-0.5, 1.0}};  // unit deltas, unit row maxima
    const auto scaled = typical_move_scale(m);
    CHECK(scaled.values == m.gains);
    CHECK(scaled.row_scales == std::vector<double>{1.0, 1.0});
}

TEST_CASE("rga number is invariant under typical-move scaling") {
    const GainModel model = parse_model(read_file(fixture_path("debutanizer.json")),
                                        Format::json);
    const auto scaled = typical_move_scale(model);
    const auto& g = model.gains;
    const auto& v = scaled.values;
    for (std::size_t j1 = 0; j1 + 1 < g.cols(); ++j1)
        for (std::size_t j2 = j1 + 1; j2 < g.cols(); ++j2)
            for (std::size_t i1 = 0; i1 + 1 < g.rows(); ++i1)
                for (std::size_t i2 = i1 + 1; i2 < g.rows(); ++i2) {
                    const bool nonzero =
                        g(i1, j1) != 0.0 && g(i1, j2) != 0.0 && g(i2, j1) != 0.0 &&
                        g(i2, j2) != 0.0;
                    if (!nonzero) continue;
                    const double before =
                        rga_number(g(i1, j1), g(i1, j2), g(i2, j1), g(i2, j2));
                    const double after =
                        rga_number(v(i1, j1), v(i1, j2), v(i2, j1), v(i2, j2));
                    CHECK(after == doctest::Approx(before).epsilon(1e-10));
                }
}

TEST_CASE("invalid model is rejected") {
    GainModel m;
    m.mvs = {{"M", -1.0, ""}};
    m.cvs = {{"C", ""}};
    m.gains = Matrix{{1.0}};
    CHECK_THROWS_AS(typical_move_scale(m), std::invalid_argument);
}
