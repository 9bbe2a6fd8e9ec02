#pragma once

#include "gaincond/matrix.hpp"

namespace gaincond {

// Entries below this magnitude are treated as exact zeros when
// classifying scaled 2x2 submatrices.
inline constexpr double kZeroGainTol = 1e-12;

// Magnitude ratios within this distance of exact equality classify as
// collinear. Binned matrices produce ratio products that are equal up
// to rounding; past this point the relative gain exceeds 1e12 and
// carries no information anyway.
inline constexpr double kCollinearRatioTol = 1e-12;

enum class Degenerate {
    none,
    decoupled_zero,  // one of the diagonal products vanishes: missing interaction
    singular_zero,   // zero row or column: no independent degree of freedom
    collinear,       // gain ratios equal: relative gain is infinite
};

// 2x2 relative-gain analysis.
//
// `lambda` and the flagging scalar `rga_number = max(|lambda|, |1-lambda|)`
// use the magnitude ratio r = |g12*g21| / |g11*g22|, the convention the
// flagging reports and reference fixtures follow. `lambda_signed` keeps
// the plain signed ratio and is the one the gain-ratio identities
// (g12/g22 = (1 - 1/lambda_signed) * g11/g21, ...) hold for.
struct Rga2x2 {
    double lambda = 1.0;
    double lambda_signed = 1.0;
    double rga_number = 1.0;
    Degenerate degenerate = Degenerate::none;
};

Rga2x2 analyze_2x2(double g11, double g12, double g21, double g22);

double lambda_2x2(double g11, double g12, double g21, double g22);
double rga_number(double g11, double g12, double g21, double g22);

// Rescales a non-zero 2x2 so three gains are exactly 1 and the fourth is
// k = (g12*g21)/(g11*g22) = 1 - 1/lambda_signed:
//   diag(1/g11, 1/g21) * G * diag(1, g21/g22) = [[1, k], [1, 1]]
struct UnityScale {
    Matrix k_matrix;  // [[1, k], [1, 1]]
    double k = 0.0;
};

UnityScale unity_scale(double g11, double g12, double g21, double g22);

const char* to_string(Degenerate d);

}  // namespace gaincond
