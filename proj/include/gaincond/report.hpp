#pragma once

#include <span>
#include <string>

#include "gaincond/binning.hpp"
#include "gaincond/format.hpp"
#include "gaincond/model.hpp"

namespace gaincond {

// All report serialization is deterministic: same input, same bytes.
// json output re-parses losslessly (infinite values appear as "inf").

std::string serialize_report(const ValidationReport& report, Format format);

// Pair list; csv header is "mv1,mv2,cv1,cv2,cond,rga".
std::string serialize_report(std::span<const PairMetrics> pairs,
                             std::span<const std::string> mv_names,
                             std::span<const std::string> cv_names,
                             Format format);

std::string serialize_report(const BinGrid& grid, Format format);

// Full analysis: flagged pairs sorted by condition number, collinear and
// higher-order summaries (table/json; csv carries the pair rows only).
std::string serialize_report(const AnalysisSnapshot& snapshot,
                             std::span<const std::string> mv_names,
                             std::span<const std::string> cv_names,
                             Format format);

// Conditioning diff (binned values with per-gain change percentages).
std::string serialize_report(const ConditioningResult& result, Format format);

// Scaled gain table with flag markers per cell: '#' marks members of an
// RGA-flagged pair, '*' members of a condition-number-flagged pair.
std::string render_scaled_table(const ScaledGainMatrix& scaled,
                                std::span<const PairMetrics> pairs);
std::string serialize_scaled(const ScaledGainMatrix& scaled,
                             std::span<const PairMetrics> pairs, Format format);

// Cell-by-cell diff of two models of identical shape and naming.
struct ModelDiff {
    struct Cell {
        std::size_t cv, mv;
        double left, right;
        double change_pct;  // (right - left) / left * 100; inf when left == 0
    };
    std::vector<Cell> cells;  // differing cells only, row-major order
    std::size_t total_cells = 0;
};

ModelDiff diff_models(const GainModel& left, const GainModel& right);
std::string serialize_report(const ModelDiff& diff,
                             std::span<const std::string> mv_names,
                             std::span<const std::string> cv_names,
                             Format format);

}  // namespace gaincond
