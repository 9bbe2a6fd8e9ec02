#include "gaincond/scaling.hpp"

#include <cmath>
#include <stdexcept>

namespace gaincond {

ScaledGainMatrix typical_move_scale(const GainModel& model) {
    const ValidationReport report = validate_model(model);
    if (report.has_errors())
        throw std::invalid_argument("typical_move_scale: invalid model: " +
                                    report.violations.front().message);

    const std::size_t n_cv = model.cvs.size();
    const std::size_t n_mv = model.mvs.size();

    ScaledGainMatrix out;
    out.values = Matrix(n_cv, n_mv);
    out.mv_names = model.mv_names();
    out.cv_names = model.cv_names();
    out.col_scales.reserve(n_mv);
    for (const auto& mv : model.mvs) out.col_scales.push_back(mv.delta_move);
    out.row_scales.assign(n_cv, 1.0);

    for (std::size_t i = 0; i < n_cv; ++i) {
        double row_max = 0.0;
        for (std::size_t j = 0; j < n_mv; ++j)
            row_max = std::max(row_max, std::abs(model.gains(i, j) * out.col_scales[j]));
        if (row_max == 0.0) {
            out.zero_rows.push_back(i);  // values stay zero, scale stays 1
            continue;
        }
        out.row_scales[i] = 1.0 / row_max;
        // divide by the max rather than multiply by its reciprocal so the
        // attaining cell lands on exactly +-1
        for (std::size_t j = 0; j < n_mv; ++j)
            out.values(i, j) = model.gains(i, j) * out.col_scales[j] / row_max;
    }
    return out;
}

Matrix unscale(const ScaledGainMatrix& scaled, const Matrix& replacement) {
    if (replacement.rows() != scaled.values.rows() ||
        replacement.cols() != scaled.values.cols())
        throw std::invalid_argument("unscale: replacement shape mismatch");

    Matrix out(replacement.rows(), replacement.cols());
    for (std::size_t i = 0; i < out.rows(); ++i)
        for (std::size_t j = 0; j < out.cols(); ++j)
            out(i, j) = replacement(i, j) / (scaled.row_scales[i] * scaled.col_scales[j]);
    return out;
}

}  // namespace gaincond
