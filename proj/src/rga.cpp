#include "gaincond/rga.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "gaincond/numerics.hpp"

namespace gaincond {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}  // namespace

Rga2x2 analyze_2x2(double g11, double g12, double g21, double g22) {
    Rga2x2 out;
    const double diag = g11 * g22;
    const double off = g12 * g21;
    const bool diag_zero = std::abs(g11) < kZeroGainTol || std::abs(g22) < kZeroGainTol;
    const bool off_zero = std::abs(g12) < kZeroGainTol || std::abs(g21) < kZeroGainTol;

    if (diag_zero && off_zero) {
        // zero entries on both diagonals: singular when a whole row or
        // column vanishes, a plain decoupled pattern otherwise
        const Matrix m{{g11, g12}, {g21, g22}};
        if (std::isinf(condition_number(m).value)) {
            out.lambda = kNaN;  // 0/0 ratio, relative gain undefined
            out.lambda_signed = kNaN;
            out.rga_number = kInf;
            out.degenerate = Degenerate::singular_zero;
        } else {
            out.lambda = off_zero ? 1.0 : 0.0;
            out.lambda_signed = out.lambda;
            out.rga_number = 1.0;
            out.degenerate = Degenerate::decoupled_zero;
        }
        return out;
    }
    if (off_zero) {  // g12*g21 = 0: the pairing is already decoupled
        out.lambda = 1.0;
        out.lambda_signed = 1.0;
        out.rga_number = 1.0;
        out.degenerate = Degenerate::decoupled_zero;
        return out;
    }
    if (diag_zero) {  // g11*g22 = 0: decoupled under the swapped pairing
        out.lambda = 0.0;
        out.lambda_signed = 0.0;
        out.rga_number = 1.0;
        out.degenerate = Degenerate::decoupled_zero;
        return out;
    }

    const double ratio_signed = off / diag;
    out.lambda_signed = ratio_signed == 1.0 ? kInf : 1.0 / (1.0 - ratio_signed);

    const double r = std::abs(off) / std::abs(diag);
    if (std::abs(r - 1.0) <= kCollinearRatioTol) {
        out.lambda = kInf;
        out.rga_number = kInf;
        out.degenerate = Degenerate::collinear;
        return out;
    }
    out.lambda = 1.0 / (1.0 - r);
    out.rga_number = std::max(std::abs(out.lambda), std::abs(1.0 - out.lambda));
    return out;
}

double lambda_2x2(double g11, double g12, double g21, double g22) {
    return analyze_2x2(g11, g12, g21, g22).lambda;
}

double rga_number(double g11, double g12, double g21, double g22) {
    return analyze_2x2(g11, g12, g21, g22).rga_number;
}

UnityScale unity_scale(double g11, double g12, double g21, double g22) {
    for (double g : {g11, g12, g21, g22})
        if (std::abs(g) < kZeroGainTol)
            throw std::invalid_argument("unity_scale: zero gain");

    // diag(1/g11, 1/g21) * G * diag(1, g21/g22), evaluated literally so
    // the reconstruction identity holds to rounding
    const double col2 = g21 / g22;
    UnityScale out;
    out.k_matrix = Matrix{{g11 / g11, g12 * col2 / g11}, {g21 / g21, g22 * col2 / g21}};
    out.k = (g12 * g21) / (g11 * g22);
    return out;
}

const char* to_string(Degenerate d) {
    switch (d) {
        case Degenerate::none: return "none";
        case Degenerate::decoupled_zero: return "decoupled_zero";
        case Degenerate::singular_zero: return "singular_zero";
        case Degenerate::collinear: return "collinear";
    }
    return "?";
}

}  // namespace gaincond
