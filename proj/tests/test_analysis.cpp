#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gaincond/analysis.hpp"
#include "gaincond/model_io.hpp"
#include "oracles.hpp"

using namespace gaincond;
using testing_oracles::fixture_path;
using testing_oracles::read_file;

namespace {

ScaledGainMatrix fixture_scaled() {
    const GainModel model = parse_model(read_file(fixture_path("debutanizer.json")),
                                        Format::json);
    return typical_move_scale(model);
}

ScaledGainMatrix wrap(const Matrix& values) {
    ScaledGainMatrix s;
    s.values = values;
    s.col_scales.assign(values.cols(), 1.0);
    s.row_scales.assign(values.rows(), 1.0);
    for (std::size_t j = 0; j < values.cols(); ++j)
        s.mv_names.push_back("MV" + std::to_string(j));
    for (std::size_t i = 0; i < values.rows(); ++i)
        s.cv_names.push_back("CV" + std::to_string(i));
    return s;
}

}  // namespace

TEST_CASE("identity model yields one clean record") {
    const auto pairs = enumerate_pairs(wrap(Matrix{{1.0, 0.0}, {0.0, 1.0}}), Thresholds{});
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].cond == 1.0);
    CHECK(pairs[0].rga_number == 1.0);
    CHECK_FALSE(pairs[0].rga_flagged);
    CHECK_FALSE(pairs[0].cn_flagged);
    CHECK(pairs[0].degenerate == Degenerate::decoupled_zero);
}

TEST_CASE("too-small matrices give an empty list") {
    CHECK(enumerate_pairs(wrap(Matrix{{1.0, 2.0}}), Thresholds{}).empty());
    CHECK(enumerate_pairs(wrap(Matrix{{1.0}, {2.0}}), Thresholds{}).empty());
}

TEST_CASE("fixture pair scan reproduces the reference counts") {
    const auto scaled = fixture_scaled();
    const auto pairs = enumerate_pairs(scaled, Thresholds{});
    CHECK(pairs.size() == 280);  // C(5,2) * C(8,2)

    std::size_t rga_count = 0, cn_count = 0;
    for (const auto& p : pairs) {
        rga_count += p.rga_flagged;
        cn_count += p.cn_flagged;
        if (p.cn_flagged) CHECK(std::isfinite(p.cond));
        if (p.rga_flagged) {
            CHECK(p.degenerate == Degenerate::none);
            CHECK(p.rga_number >= 12.0);
        }
    }
    CHECK(rga_count == 11);
    CHECK(cn_count == 13);

    // worst pair of the table: (TC-REBOIL-SP, PC-TOP-SP) x (AI-DIST-C5, TOP-PCT)
    for (const auto& p : pairs) {
        if (p.mv1 == 0 && p.mv2 == 2 && p.cv1 == 1 && p.cv2 == 2) {
            CHECK(std::abs(p.cond - 472.37) <= 0.03 * 472.37);
            CHECK(std::abs(p.rga_number - 118.54) <= 0.03 * 118.54);
        }
    }
}

TEST_CASE("enumeration order is lexicographic and metrics match extraction") {
    const auto scaled = fixture_scaled();
    const auto pairs = enumerate_pairs(scaled, Thresholds{});

    std::size_t idx = 0;
    for (std::size_t j1 = 0; j1 + 1 < 5; ++j1)
        for (std::size_t j2 = j1 + 1; j2 < 5; ++j2)
            for (std::size_t i1 = 0; i1 + 1 < 8; ++i1)
                for (std::size_t i2 = i1 + 1; i2 < 8; ++i2, ++idx) {
                    REQUIRE(idx < pairs.size());
                    const auto& p = pairs[idx];
                    CHECK(p.mv1 == j1);
                    CHECK(p.mv2 == j2);
                    CHECK(p.cv1 == i1);
                    CHECK(p.cv2 == i2);

                    const std::size_t rows[] = {i1, i2};
                    const std::size_t cols[] = {j1, j2};
                    const auto cn = condition_number(scaled.values.select(rows, cols));
                    if (std::isfinite(cn.value))
                        CHECK(p.cond == doctest::Approx(cn.value).epsilon(1e-12));
                    else
                        CHECK(std::isinf(p.cond));
                }
    CHECK(idx == pairs.size());
}

TEST_CASE("collinear pair detection") {
    SUBCASE("trivial rank-1") {
        const auto scan = collinear_pairs(Matrix{{1.0, 1.0}, {1.0, 1.0}});
        CHECK(scan.pairs.size() == 1);
        CHECK(scan.structural.empty());
    }
    SUBCASE("zero column is structural, not collinear") {
        const auto scan = collinear_pairs(Matrix{{1.0, 0.0}, {1.0, 0.0}});
        CHECK(scan.pairs.empty());
        REQUIRE(scan.structural.size() == 1);
        CHECK(scan.structural[0] == PairKey{0, 1, 0, 1});
    }
    SUBCASE("raw scaled fixture has none") {
        const auto scan = collinear_pairs(fixture_scaled().values);
        CHECK(scan.pairs.empty());
    }
}

TEST_CASE("higher-order scan bookkeeping") {
    const auto scaled = fixture_scaled();

    CHECK_THROWS_AS(higher_order_scan(scaled.values, 2, 100.0, 1e-12),
                    std::invalid_argument);
    CHECK_THROWS_AS(higher_order_scan(scaled.values, 6, 100.0, 1e-12),
                    std::invalid_argument);

    const auto scan3 = higher_order_scan(scaled.values, 3, 100.0, 1e-12);
    CHECK(scan3.total() == 560);  // C(5,3) * C(8,3)
    CHECK(scan3.flagged.size() == 34);

    const auto scan4 = higher_order_scan(scaled.values, 4, 100.0, 1e-12);
    CHECK(scan4.total() == 350);  // C(5,4) * C(8,4)
    CHECK(scan4.flagged.size() == 36);

    for (const auto& sm : scan3.flagged) {
        CHECK(sm.mv_set.size() == 3);
        CHECK(sm.cv_set.size() == 3);
        CHECK(std::isfinite(sm.cond));
        CHECK(sm.cond > 100.0);
    }
}

TEST_CASE("degenerate pairs keep a condition number but never an rga flag") {
    // zero column inside the pair: infinite cond, structural
    Matrix m{{1.0, 0.0}, {0.5, 0.0}};
    const auto pairs = enumerate_pairs(wrap(m), Thresholds{});
    REQUIRE(pairs.size() == 1);
    CHECK(std::isinf(pairs[0].cond));
    CHECK_FALSE(pairs[0].cn_flagged);   // infinite cond is never cn-flagged
    CHECK_FALSE(pairs[0].rga_flagged);
    CHECK(pairs[0].degenerate == Degenerate::singular_zero);
}

TEST_CASE("snapshot counts are consistent") {
    const auto scaled = fixture_scaled();
    const auto snap = analyze_matrix(scaled, Thresholds{});
    CHECK(snap.pairs.size() == 280);
    CHECK(snap.rga_flagged_count() == 11);
    CHECK(snap.cn_flagged_count() == 13);
    REQUIRE(snap.higher.size() == 2);
    CHECK(snap.higher[0].k == 3);
    CHECK(snap.higher[1].k == 4);
    CHECK(snap.higher[0].flagged.size() + snap.higher[0].singular_count +
              snap.higher[0].below_count == 560);
    CHECK(snap.higher[1].total() == 350);
}
