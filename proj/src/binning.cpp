#include "gaincond/binning.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gaincond/model_io.hpp"

namespace gaincond {

namespace {

double checked_ratio(double rga_threshold) {
    if (!(rga_threshold > 1.0))
        throw std::invalid_argument("rga_threshold must exceed 1");
    return 1.0 - 1.0 / rga_threshold;
}

std::vector<double> closed_form_boundaries(double ratio, std::size_t n) {
    std::vector<double> b(n + 1);
    for (std::size_t i = 0; i <= n; ++i) b[i] = std::pow(ratio, double(i));
    return b;
}

}  // namespace

BinGrid build_grid(double rga_threshold, double min_magnitude) {
    const double k = checked_ratio(rga_threshold);
    if (!(min_magnitude > 0.0) || !(min_magnitude <= 1.0))
        throw std::invalid_argument("min_magnitude must lie in (0, 1]");

    // smallest n with k^n <= min_magnitude; the log estimate is fixed up
    // against pow so the coverage contract holds exactly
    std::size_t n = 0;
    if (min_magnitude < 1.0) {
        const double est = std::log(min_magnitude) / std::log(k);
        n = static_cast<std::size_t>(std::max(0.0, std::ceil(est - 1e-9)));
        while (std::pow(k, double(n)) > min_magnitude) ++n;
        while (n > 0 && std::pow(k, double(n - 1)) <= min_magnitude) --n;
    }
    return BinGrid{rga_threshold, k, closed_form_boundaries(k, n)};
}

BinGrid build_grid_n(double rga_threshold, std::size_t bins) {
    const double k = checked_ratio(rga_threshold);
    return BinGrid{rga_threshold, k, closed_form_boundaries(k, bins)};
}

SnapResult snap(double gain, const BinGrid& grid) {
    if (gain == 0.0) throw std::invalid_argument("snap: zero gains are never snapped");
    if (grid.boundaries.empty()) throw std::invalid_argument("snap: empty grid");
    const double mag = std::abs(gain);
    if (mag > grid.boundaries.front())
        throw std::invalid_argument("snap: |gain| exceeds B_0");

    const auto& b = grid.boundaries;
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (mag == b[i])  // boundary values are fixed points
            return {std::copysign(b[i], gain), i, 0.0};
        if (b[i] < mag) {
            // interval B_i <= |g| < B_{i-1}; ties go to the lower boundary
            const std::size_t upper = i - 1;
            const std::size_t chosen = mag > (b[upper] + b[i]) / 2.0 ? upper : i;
            const double binned = std::copysign(b[chosen], gain);
            return {binned, chosen, (binned - gain) / gain * 100.0};
        }
    }
    throw std::out_of_range("snap: |gain| falls below the last boundary B_n");
}

double max_relative_change(double rga_threshold) {
    checked_ratio(rga_threshold);
    const double inv = 1.0 / rga_threshold;
    return 100.0 * inv / (2.0 - inv);
}

SelectionMode parse_selection_mode(const std::string& name) {
    if (name == "rga_flagged") return SelectionMode::rga_flagged;
    if (name == "rga_or_cn_flagged") return SelectionMode::rga_or_cn_flagged;
    if (name == "all_nonzero") return SelectionMode::all_nonzero;
    if (name == "explicit") return SelectionMode::explicit_list;
    throw std::invalid_argument("unknown selection mode '" + name + "'");
}

const char* to_string(SelectionMode m) {
    switch (m) {
        case SelectionMode::rga_flagged: return "rga_flagged";
        case SelectionMode::rga_or_cn_flagged: return "rga_or_cn_flagged";
        case SelectionMode::all_nonzero: return "all_nonzero";
        case SelectionMode::explicit_list: return "explicit";
    }
    return "?";
}

namespace {

std::size_t resolve(const std::vector<std::string>& names, const std::string& name,
                    const char* axis) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end())
        throw std::invalid_argument(std::string("unknown ") + axis + " name '" + name + "'");
    return static_cast<std::size_t>(it - names.begin());
}

}  // namespace

CellSet select_targets(const ScaledGainMatrix& scaled,
                       std::span<const PairMetrics> pairs,
                       const ConditioningPolicy& policy) {
    const Matrix& v = scaled.values;
    auto nonzero = [&](std::size_t i, std::size_t j) {
        return std::abs(v(i, j)) >= kZeroGainTol;
    };

    CellSet cells;
    auto add_pair_cells = [&](const PairMetrics& p) {
        for (auto [i, j] : {std::pair{p.cv1, p.mv1}, std::pair{p.cv1, p.mv2},
                            std::pair{p.cv2, p.mv1}, std::pair{p.cv2, p.mv2}})
            if (nonzero(i, j)) cells.insert({i, j});
    };

    switch (policy.mode) {
        case SelectionMode::rga_flagged:
            for (const auto& p : pairs)
                if (p.rga_flagged) add_pair_cells(p);
            break;
        case SelectionMode::rga_or_cn_flagged:
            for (const auto& p : pairs)
                if (p.rga_flagged || p.cn_flagged) add_pair_cells(p);
            break;
        case SelectionMode::all_nonzero:
            for (std::size_t i = 0; i < v.rows(); ++i)
                for (std::size_t j = 0; j < v.cols(); ++j)
                    if (nonzero(i, j)) cells.insert({i, j});
            break;
        case SelectionMode::explicit_list:
            break;
    }

    std::set<std::pair<std::size_t, std::size_t>> included, excluded;
    for (const auto& [cv, mv] : policy.include) {
        const auto cell = std::pair{resolve(scaled.cv_names, cv, "CV"),
                                    resolve(scaled.mv_names, mv, "MV")};
        included.insert(cell);
        if (nonzero(cell.first, cell.second)) cells.insert(cell);
    }
    for (const auto& [cv, mv] : policy.exclude) {
        const auto cell = std::pair{resolve(scaled.cv_names, cv, "CV"),
                                    resolve(scaled.mv_names, mv, "MV")};
        if (included.count(cell))
            throw std::invalid_argument("cell (" + cv + ", " + mv +
                                        ") appears in both include and exclude lists");
        cells.erase(cell);
    }
    return cells;
}

ConditioningResult condition_matrix(const GainModel& model,
                                    const ConditioningPolicy& policy) {
    policy.thresholds.validate();
    const ValidationReport report = validate_model(model);
    if (report.has_errors())
        throw std::invalid_argument("condition_matrix: invalid model: " +
                                    report.violations.front().message);

    ConditioningResult res;
    res.scaled = typical_move_scale(model);
    res.before = analyze_matrix(res.scaled, policy.thresholds);

    const CellSet targets = select_targets(res.scaled, res.before.pairs, policy);

    const std::size_t n_cv = res.scaled.values.rows();
    const std::size_t n_mv = res.scaled.values.cols();
    res.binned = res.scaled.values;
    res.change_pct = Matrix(n_cv, n_mv, 0.0);
    res.bin_index.assign(n_cv, std::vector<int>(n_mv, -1));

    double min_mag = 1.0;
    for (const auto& [i, j] : targets)
        min_mag = std::min(min_mag, std::abs(res.scaled.values(i, j)));
    res.grid = build_grid(policy.thresholds.rga_threshold, min_mag);

    for (const auto& [i, j] : targets) {
        const SnapResult s = snap(res.scaled.values(i, j), res.grid);
        res.binned(i, j) = s.binned;
        res.bin_index[i][j] = static_cast<int>(s.bin_index);
        res.change_pct(i, j) = s.change_pct;
    }

    res.engineering = unscale(res.scaled, res.binned);

    ScaledGainMatrix after_view = res.scaled;
    after_view.values = res.binned;
    res.after = analyze_matrix(after_view, policy.thresholds);
    return res;
}

}  // namespace gaincond
