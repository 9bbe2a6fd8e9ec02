#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gaincond/binning.hpp"
#include "gaincond/model_io.hpp"
#include "oracles.hpp"

using namespace gaincond;
using testing_oracles::fixture_path;
using testing_oracles::read_file;

namespace {

GainModel load_fixture() {
    return parse_model(read_file(fixture_path("debutanizer.json")), Format::json);
}

GainModel eq3_model() {
    GainModel m;
    m.mvs = {{"TC-REBOIL-SP", 2.0, ""}, {"FC-REFLUX-SP", 10.0, ""}};
    m.cvs = {{"AI-RVP-PV", ""}, {"AI-DIST-C5", ""}};
    m.gains = Matrix{{-0.1942, -0.0029}, {0.1843, -0.0288}};
    return m;
}

bool near4(double x, double printed) { return std::round(x * 1e4) == std::round(printed * 1e4); }

}  // namespace

TEST_CASE("grid construction") {
    const BinGrid g = build_grid(12.0, 0.5);
    REQUIRE(g.boundaries.size() >= 8);
    CHECK(g.boundaries[0] == 1.0);
    CHECK(near4(g.boundaries[1], 0.9167));
    CHECK(near4(g.boundaries[2], 0.8403));
    CHECK(near4(g.boundaries[3], 0.7703));
    CHECK(near4(g.boundaries[7], 0.5439));
    CHECK(g.ratio == doctest::Approx(11.0 / 12.0).epsilon(1e-15));

    // halving sequence at threshold 2
    const BinGrid h = build_grid(2.0, 0.2);
    CHECK(h.boundaries[0] == 1.0);
    CHECK(h.boundaries[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(h.boundaries[2] == doctest::Approx(0.25).epsilon(1e-15));

    // coverage contract: smallest n with k^n <= min_magnitude
    const BinGrid c = build_grid(12.0, 0.0337);
    CHECK(c.bin_count() == 39);
    CHECK(c.boundaries.back() <= 0.0337);
    CHECK(c.boundaries[c.boundaries.size() - 2] > 0.0337);

    CHECK_THROWS_AS(build_grid(1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(0.5, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(12.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(12.0, 1.5), std::invalid_argument);
}

TEST_CASE("grid geometry invariants") {
    for (double t : {2.0, 6.0, 12.0, 20.0}) {
        const BinGrid g = build_grid(t, 0.05);
        const double k = 1.0 - 1.0 / t;
        for (std::size_t i = 0; i + 1 < g.boundaries.size(); ++i) {
            CHECK(g.boundaries[i + 1] < g.boundaries[i]);
            CHECK(std::abs(g.boundaries[i + 1] / g.boundaries[i] - k) <= 1e-14);
            CHECK(std::abs(g.boundaries[i] - std::pow(k, double(i))) <= 1e-14);
            if (i + 2 < g.boundaries.size()) {
                const double w0 = g.boundaries[i] - g.boundaries[i + 1];
                const double w1 = g.boundaries[i + 1] - g.boundaries[i + 2];
                CHECK(w1 < w0);
            }
        }
    }
}

TEST_CASE("snap worked examples") {
    const BinGrid g = build_grid(12.0, 0.07);

    const SnapResult a = snap(-0.0754, g);
    CHECK(std::round(a.binned * 1e5) == -7351);  // -0.07351 at 5 dp
    CHECK(a.bin_index == 30);
    CHECK(std::abs(a.change_pct - (-2.5074)) <= 0.01);

    const SnapResult b = snap(0.9666, g);
    CHECK(b.binned == 1.0);
    CHECK(b.bin_index == 0);
    CHECK(std::abs(b.change_pct - 3.46) <= 0.02);

    // boundary values are fixed points
    const double b3 = g.boundaries[3];
    const SnapResult fixed = snap(b3, g);
    CHECK(fixed.binned == b3);
    CHECK(fixed.bin_index == 3);
    CHECK(fixed.change_pct == 0.0);

    // exact midpoint of [B_1, B_0] goes to the lower boundary, and the
    // change magnitude equals the worst-case bound
    const double mid = (g.boundaries[0] + g.boundaries[1]) / 2.0;
    const SnapResult tie = snap(mid, g);
    CHECK(tie.bin_index == 1);
    CHECK(std::abs(tie.change_pct) ==
          doctest::Approx(max_relative_change(12.0)).epsilon(1e-9));

    CHECK_THROWS_AS(snap(0.0, g), std::invalid_argument);
    CHECK_THROWS_AS(snap(1.5, g), std::invalid_argument);
    CHECK_THROWS_AS(snap(1e-6, g), std::out_of_range);
}

TEST_CASE("max relative change") {
    CHECK(std::abs(max_relative_change(12.0) - 4.35) <= 0.01);
    CHECK(std::abs(max_relative_change(6.0) - 9.09) <= 0.01);
    CHECK(max_relative_change(2.0) == doctest::Approx(100.0 / 3.0).epsilon(1e-12));
    CHECK_THROWS_AS(max_relative_change(1.0), std::invalid_argument);
}

TEST_CASE("snap change bound over dense sweeps") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> mag(0.01, 1.0);
    for (double t : {2.0, 6.0, 12.0, 20.0}) {
        const BinGrid g = build_grid(t, 0.01);
        const double bound = max_relative_change(t);
        for (double x = 0.01; x <= 1.0; x += 1e-3) {
            const SnapResult s = snap(x, g);
            CHECK(std::abs(s.change_pct) <= bound + 1e-9);
        }
        for (int i = 0; i < 500; ++i) {
            const double x = mag(rng);
            const SnapResult s = snap(-x, g);
            CHECK(std::abs(s.change_pct) <= bound + 1e-9);
        }
    }
}

TEST_CASE("target selection on the fixture") {
    const GainModel model = load_fixture();
    const auto scaled = typical_move_scale(model);
    const auto pairs = enumerate_pairs(scaled, Thresholds{});

    ConditioningPolicy policy;
    const CellSet cells = select_targets(scaled, pairs, policy);
    CHECK(cells.size() == 20);  // union of the 11 rga-flagged pairs

    const auto cv = [&](const char* n) { return *model.cv_index(n); };
    const auto mv = [&](const char* n) { return *model.mv_index(n); };
    CHECK(cells.count({cv("AI-DIST-C5"), mv("TC-REBOIL-SP")}) == 1);
    CHECK(cells.count({cv("LI-ACCUM-PF"), mv("FI-FEED-PV")}) == 0);
    for (std::size_t j = 0; j < 5; ++j)
        CHECK(cells.count({cv("AI-RVP-PV"), j}) == 0);

    SUBCASE("include and exclude lists") {
        policy.include = {{"DP-DEBUT-PV", "FI-FEED-PV"}};
        CHECK(select_targets(scaled, pairs, policy).size() == 21);

        policy.exclude = {{"AI-DIST-C5", "TC-REBOIL-SP"}};
        CHECK(select_targets(scaled, pairs, policy).size() == 20);

        policy.exclude = {{"DP-DEBUT-PV", "FI-FEED-PV"}};
        CHECK_THROWS_AS(select_targets(scaled, pairs, policy), std::invalid_argument);

        policy.exclude.clear();
        policy.include = {{"NOPE", "TC-REBOIL-SP"}};
        CHECK_THROWS_AS(select_targets(scaled, pairs, policy), std::invalid_argument);
    }

    SUBCASE("zero cells are never selected, even via include") {
        policy.include = {{"FC-REFLUX-OP", "TC-REBOIL-SP"}};  // scaled value is 0
        CHECK(select_targets(scaled, pairs, policy).size() == 20);
    }

    SUBCASE("other modes") {
        policy.mode = SelectionMode::rga_or_cn_flagged;
        CHECK(select_targets(scaled, pairs, policy).size() == 23);

        policy.mode = SelectionMode::all_nonzero;
        CHECK(select_targets(scaled, pairs, policy).size() == 29);

        policy.mode = SelectionMode::explicit_list;
        policy.include = {{"AI-RVP-PV", "TC-REBOIL-SP"}};
        CHECK(select_targets(scaled, pairs, policy).size() == 1);
        policy.include.clear();
        CHECK(select_targets(scaled, pairs, policy).empty());
    }

    SUBCASE("empty pairs list, empty include list") {
        CHECK(select_targets(scaled, {}, policy).empty());
    }
}

TEST_CASE("worked 2x2 conditioning") {
    ConditioningPolicy policy;
    policy.mode = SelectionMode::all_nonzero;
    const ConditioningResult res = condition_matrix(eq3_model(), policy);

    CHECK(res.binned(0, 0) == -1.0);
    CHECK(res.binned(1, 0) == 1.0);
    CHECK(std::round(res.binned(0, 1) * 1e5) == -7351);
    CHECK(std::round(res.binned(1, 1) * 1e5) == -77025);

    // signs preserved, bound respected
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            CHECK(std::signbit(res.binned(i, j)) == std::signbit(res.scaled.values(i, j)));
            CHECK(std::abs(res.change_pct(i, j)) <= max_relative_change(12.0) + 1e-9);
            CHECK(res.bin_index[i][j] >= 0);
        }
}

TEST_CASE("fixture conditioning matches the reference binned table") {
    ConditioningPolicy policy;
    policy.include = {{"DP-DEBUT-PV", "FI-FEED-PV"}};
    const ConditioningResult res = condition_matrix(load_fixture(), policy);

    // spot cells of the reference binned matrix
    CHECK(near4(res.binned(1, 0), 1.0));       // AI-DIST-C5 / TC-REBOIL-SP
    CHECK(near4(res.binned(1, 1), -0.7703));
    CHECK(near4(res.binned(3, 0), 0.5439));
    CHECK(near4(res.binned(4, 1), 0.4189));
    CHECK(near4(res.binned(6, 4), 0.2958));
    CHECK(near4(res.binned(0, 1), -0.0754));   // untouched

    // engineering-unit spot check: binned AI-DIST-C5/TC-REBOIL-SP maps to
    // the row denominator over the column move size
    CHECK(std::abs(res.engineering(1, 0) - 0.1907) <= 1e-4);

    // zero gains stay zero everywhere
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 5; ++j)
            if (res.scaled.values(i, j) == 0.0) {
                CHECK(res.binned(i, j) == 0.0);
                CHECK(res.bin_index[i][j] == -1);
            }

    // flags: nothing rga-flagged survives
    CHECK(res.before.rga_flagged_count() == 11);
    CHECK(res.after.rga_flagged_count() == 0);
    CHECK(res.after.collinear.pairs.size() == 10);
}

TEST_CASE("conditioning a model already on grid boundaries changes nothing") {
    const BinGrid g = build_grid(12.0, 0.5);
    GainModel m;
    m.mvs = {{"M1", 1.0, ""}, {"M2", 1.0, ""}};
    m.cvs = {{"C1", ""}, {"C2", ""}};
    // unit deltas and a unit max per row, every magnitude on a boundary
    m.gains = Matrix{{g.boundaries[0], -g.boundaries[2]},
                     {g.boundaries[3], -g.boundaries[0]}};
    ConditioningPolicy policy;
    policy.mode = SelectionMode::all_nonzero;
    const ConditioningResult res = condition_matrix(m, policy);
    CHECK(res.binned == m.gains);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) CHECK(res.change_pct(i, j) == 0.0);
}

TEST_CASE("bin-index arithmetic detects collinear pairs on the binned fixture") {
    ConditioningPolicy policy;
    policy.include = {{"DP-DEBUT-PV", "FI-FEED-PV"}};
    const ConditioningResult res = condition_matrix(load_fixture(), policy);

    // independent oracle: a fully-snapped 2x2 is singular exactly when the
    // boundary-index sums of its diagonals match and the sign pattern
    // makes the determinant cancel
    const auto scan = collinear_pairs(res.binned, 1e-12);
    for (std::size_t j1 = 0; j1 + 1 < 5; ++j1)
        for (std::size_t j2 = j1 + 1; j2 < 5; ++j2)
            for (std::size_t i1 = 0; i1 + 1 < 8; ++i1)
                for (std::size_t i2 = i1 + 1; i2 < 8; ++i2) {
                    const int b11 = res.bin_index[i1][j1], b12 = res.bin_index[i1][j2];
                    const int b21 = res.bin_index[i2][j1], b22 = res.bin_index[i2][j2];
                    if (b11 < 0 || b12 < 0 || b21 < 0 || b22 < 0) continue;
                    const double prod_diag = res.binned(i1, j1) * res.binned(i2, j2);
                    const double prod_off = res.binned(i1, j2) * res.binned(i2, j1);
                    const bool oracle_collinear =
                        (b11 + b22 == b12 + b21) &&
                        std::signbit(prod_diag) == std::signbit(prod_off);
                    const bool found =
                        std::find(scan.pairs.begin(), scan.pairs.end(),
                                  PairKey{j1, j2, i1, i2}) != scan.pairs.end();
                    CHECK(found == oracle_collinear);
                }
}

TEST_CASE("conditioning is idempotent") {
    ConditioningPolicy policy;
    policy.include = {{"DP-DEBUT-PV", "FI-FEED-PV"}};
    const GainModel model = load_fixture();
    const ConditioningResult first = condition_matrix(model, policy);

    GainModel conditioned = model;
    conditioned.gains = first.engineering;
    ConditioningPolicy second_policy;  // same defaults; selection re-derived
    second_policy.include = policy.include;
    const ConditioningResult second = condition_matrix(conditioned, second_policy);

    double max_change = 0.0, max_dev = 0.0;
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 5; ++j) {
            max_change = std::max(max_change, std::abs(second.change_pct(i, j)));
            max_dev = std::max(max_dev, std::abs(second.binned(i, j) - first.binned(i, j)));
        }
    CHECK(max_change <= 1e-9);
    CHECK(max_dev <= 1e-12);
}
