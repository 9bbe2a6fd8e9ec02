#pragma once

#include <compare>
#include <cstddef>
#include <vector>

#include "gaincond/numerics.hpp"
#include "gaincond/rga.hpp"
#include "gaincond/scaling.hpp"

namespace gaincond {

struct Thresholds {
    double rga_threshold = 12.0;
    double cn_threshold = 59.0;
    double cn_higher_threshold = 100.0;
    double singular_tol = kDefaultSingularTol;

    void validate() const;  // throws std::invalid_argument
};

// Metrics for one (MV pair, CV pair) 2x2 submatrix. Flagging uses >= at
// the pair thresholds; collinear (infinite-cond) pairs are never
// cn-flagged, degenerate pairs never rga-flagged.
struct PairMetrics {
    std::size_t mv1, mv2;  // column indices, mv1 < mv2
    std::size_t cv1, cv2;  // row indices, cv1 < cv2
    double cond;           // +inf when sigma_min is below tolerance
    double rga_number;
    bool rga_flagged = false;
    bool cn_flagged = false;
    Degenerate degenerate = Degenerate::none;
};

// One record per C(n_mv,2)*C(n_cv,2) combination, lexicographic by
// (mv indices, cv indices). Fewer than 2 MVs or CVs yields an empty list.
std::vector<PairMetrics> enumerate_pairs(const ScaledGainMatrix& scaled,
                                         const Thresholds& th);

struct PairKey {
    std::size_t mv1, mv2, cv1, cv2;
    auto operator<=>(const PairKey&) const = default;
};

struct CollinearScan {
    std::vector<PairKey> pairs;       // |det| below tolerance, no zero row/column
    std::vector<PairKey> structural;  // zero row or column inside the 2x2
};

// All 2x2 submatrices whose determinant magnitude falls below
// singular_tol times the product of the two largest entry magnitudes.
CollinearScan collinear_pairs(const Matrix& values,
                              double singular_tol = kDefaultSingularTol);

struct SubmatrixMetrics {
    std::vector<std::size_t> mv_set;
    std::vector<std::size_t> cv_set;
    double cond;
};

struct ScanResult {
    std::size_t k = 0;
    std::vector<SubmatrixMetrics> flagged;  // finite cond strictly above threshold
    std::size_t singular_count = 0;         // sigma_min below tolerance
    std::size_t below_count = 0;            // finite cond at or below threshold

    std::size_t total() const { return flagged.size() + singular_count + below_count; }
};

// Exhaustive k x k condition-number scan, k >= 3. Submatrices singular
// to tolerance are excluded from the flagged list and counted apart.
ScanResult higher_order_scan(const Matrix& values, std::size_t k,
                             double cn_threshold, double singular_tol);

// Everything the pair/collinear/higher-order scans say about one matrix.
struct AnalysisSnapshot {
    Thresholds thresholds;
    std::vector<PairMetrics> pairs;
    CollinearScan collinear;
    std::vector<ScanResult> higher;  // k = 3 and 4 where the shape allows

    std::size_t rga_flagged_count() const;
    std::size_t cn_flagged_count() const;
};

AnalysisSnapshot analyze_matrix(const ScaledGainMatrix& scaled, const Thresholds& th,
                                bool with_higher_order = true);

}  // namespace gaincond
