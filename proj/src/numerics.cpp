#include "gaincond/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gaincond {

namespace {

// One-sided Jacobi on the columns of the tall orientation: plane
// rotations make all column pairs orthogonal, after which the singular
// values are the column norms. No Gram matrix is formed, so the small
// singular values keep high relative accuracy — that is what lets a
// 1e-12 tolerance separate exactly-singular submatrices from merely
// ill-conditioned ones.
std::vector<double> jacobi_singular_values(std::vector<std::vector<double>> cols) {
    const std::size_t n = cols.size();
    const std::size_t m = n == 0 ? 0 : cols[0].size();
    constexpr int kMaxSweeps = 60;
    constexpr double kOrthTol = 1e-15;

    for (int sweep = 0; sweep < kMaxSweeps && n > 1; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    alpha += cols[p][i] * cols[p][i];
                    beta += cols[q][i] * cols[q][i];
                    gamma += cols[p][i] * cols[q][i];
                }
                if (gamma == 0.0 ||
                    std::abs(gamma) <= kOrthTol * std::sqrt(alpha) * std::sqrt(beta))
                    continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t =
                    std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < m; ++i) {
                    const double vp = cols[p][i];
                    const double vq = cols[q][i];
                    cols[p][i] = c * vp - s * vq;
                    cols[q][i] = s * vp + c * vq;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<double> sv(n);
    for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < m; ++i) acc += cols[j][i] * cols[j][i];
        sv[j] = std::sqrt(acc);
    }
    std::sort(sv.begin(), sv.end(), std::greater<>());
    return sv;
}

}  // namespace

SingularSpectrum singular_values(const Matrix& m) {
    if (m.empty()) throw std::invalid_argument("singular_values: empty matrix");
    if (!m.all_finite()) throw std::invalid_argument("singular_values: non-finite entry");

    // work on the tall orientation; the spectrum is transpose-invariant
    const bool flip = m.rows() < m.cols();
    const std::size_t nr = flip ? m.cols() : m.rows();
    const std::size_t nc = flip ? m.rows() : m.cols();
    std::vector<std::vector<double>> cols(nc, std::vector<double>(nr));
    for (std::size_t j = 0; j < nc; ++j)
        for (std::size_t i = 0; i < nr; ++i)
            cols[j][i] = flip ? m(j, i) : m(i, j);

    return SingularSpectrum{jacobi_singular_values(std::move(cols))};
}

ConditionNumber condition_number(const Matrix& m, double singular_tol) {
    const SingularSpectrum sp = singular_values(m);
    const double hi = sp.largest();
    const double lo = sp.smallest();
    ConditionNumber out;
    if (hi == 0.0) {
        out.value = std::numeric_limits<double>::infinity();
        out.zero_matrix = true;
        return out;
    }
    if (lo < singular_tol * hi) {
        out.value = std::numeric_limits<double>::infinity();
        return out;
    }
    out.value = hi / lo;  // exactly 1 when hi == lo
    return out;
}

}  // namespace gaincond
