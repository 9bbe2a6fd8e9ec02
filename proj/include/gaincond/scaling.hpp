#pragma once

#include <string>
#include <vector>

#include "gaincond/model.hpp"

namespace gaincond {

// Typical-move scaled gains. The scale factors are retained rather than
// recomputed so the inverse map stays exact even after the values have
// been replaced (e.g. by binned gains).
struct ScaledGainMatrix {
    Matrix values;                        // |value| <= 1; every non-zero row attains 1
    std::vector<double> col_scales;       // S_a diagonal, = delta_move per MV
    std::vector<double> row_scales;       // S_b diagonal, = 1 / max |row| of G*S_a
    std::vector<std::string> mv_names;
    std::vector<std::string> cv_names;
    std::vector<std::size_t> zero_rows;   // all-zero CV rows (scale left at 1)
};

// G' = S_b * G * S_a: each MV column scaled by its delta_move, each CV
// row then divided by its largest resulting magnitude. All-zero rows
// keep scale 1 and stay zero.
ScaledGainMatrix typical_move_scale(const GainModel& model);

// Inverse map S_b^-1 * replacement * S_a^-1 back to engineering units.
// unscale(s, s.values) reproduces the original gains.
Matrix unscale(const ScaledGainMatrix& scaled, const Matrix& replacement);

}  // namespace gaincond
