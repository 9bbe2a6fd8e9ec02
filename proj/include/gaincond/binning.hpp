#pragma once

#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gaincond/analysis.hpp"

namespace gaincond {

// Geometric grid of admissible scaled-gain magnitudes for an RGA
// threshold t: B_i = (1 - 1/t)^i, strictly decreasing from B_0 = 1.
// Snapping every member of a 2x2 onto the grid caps its RGA number at t
// (adjacent boundary ratios) or makes it exactly collinear (equal ones).
struct BinGrid {
    double rga_threshold = 0.0;
    double ratio = 0.0;               // 1 - 1/rga_threshold
    std::vector<double> boundaries;   // B_0 = 1 > B_1 > ... > B_n

    std::size_t bin_count() const { return boundaries.empty() ? 0 : boundaries.size() - 1; }
};

// Smallest grid whose last boundary covers min_magnitude
// (B_n <= min_magnitude), boundaries by the closed form.
BinGrid build_grid(double rga_threshold, double min_magnitude);

// Grid with a fixed number of bins (n + 1 boundaries).
BinGrid build_grid_n(double rga_threshold, std::size_t bins);

struct SnapResult {
    double binned;          // sign(g) * B_bin_index
    std::size_t bin_index;
    double change_pct;      // (binned - g) / g * 100; 0 on a boundary
};

// Moves a non-zero gain with B_n <= |g| <= 1 to the nearest boundary;
// the exact midpoint of an interval goes to the lower one.
SnapResult snap(double gain, const BinGrid& grid);

// Worst-case relative change (%) the snap can introduce:
// (1/t) / (2 - 1/t) * 100, attained at interval midpoints.
double max_relative_change(double rga_threshold);

enum class SelectionMode {
    rga_flagged,         // cells of RGA-flagged pairs only (default)
    rga_or_cn_flagged,   // also cells of condition-number-flagged pairs
    all_nonzero,
    explicit_list,       // include list only
};

struct ConditioningPolicy {
    Thresholds thresholds;
    SelectionMode mode = SelectionMode::rga_flagged;
    std::vector<std::pair<std::string, std::string>> include;  // (cv, mv)
    std::vector<std::pair<std::string, std::string>> exclude;  // (cv, mv)
};

SelectionMode parse_selection_mode(const std::string& name);
const char* to_string(SelectionMode m);

using CellSet = std::set<std::pair<std::size_t, std::size_t>>;  // (cv, mv)

// Cells to snap. Includes are always added, excludes always removed,
// zero cells never selected. Unknown names throw.
CellSet select_targets(const ScaledGainMatrix& scaled,
                       std::span<const PairMetrics> pairs,
                       const ConditioningPolicy& policy);

struct ConditioningResult {
    ScaledGainMatrix scaled;
    BinGrid grid;
    Matrix binned;                          // scaled domain, on-grid where adjusted
    std::vector<std::vector<int>> bin_index;  // boundary index per gain, -1 untouched
    Matrix change_pct;                      // 0 for untouched gains
    Matrix engineering;                     // binned gains mapped back via unscale
    AnalysisSnapshot before;
    AnalysisSnapshot after;
};

// Full pipeline: scale, flag pairs, select targets, build the grid over
// the smallest selected magnitude, snap, unscale, re-analyze.
ConditioningResult condition_matrix(const GainModel& model,
                                    const ConditioningPolicy& policy);

}  // namespace gaincond
