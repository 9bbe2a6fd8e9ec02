#pragma once

#include <vector>

#include "gaincond/matrix.hpp"

namespace gaincond {

// sigma_min below singular_tol * sigma_max counts as structurally
// collinear. Binned matrices produce exact-zero determinants up to
// rounding; 1e-12 separates those cleanly from merely ill-conditioned
// pairs (condition numbers in the hundreds).
inline constexpr double kDefaultSingularTol = 1e-12;

// Singular values sorted descending.
struct SingularSpectrum {
    std::vector<double> values;

    double largest() const { return values.front(); }
    double smallest() const { return values.back(); }
};

// Singular values of a finite, non-empty matrix; min(rows, cols) values,
// accurate to ~1e-12 relative for the matrix sizes this library handles.
// U/V factors are not computed.
SingularSpectrum singular_values(const Matrix& m);

struct ConditionNumber {
    double value = 1.0;       // +inf when singular to tolerance
    bool zero_matrix = false; // annotation for the all-zero matrix
};

ConditionNumber condition_number(const Matrix& m,
                                 double singular_tol = kDefaultSingularTol);

}  // namespace gaincond
