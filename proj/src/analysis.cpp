#include "gaincond/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gaincond {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Snapping designs pairs to sit exactly ON the RGA threshold (adjacent
// boundary ratios give rga_number == threshold in exact arithmetic), so
// the flag comparison carries a tiny relative margin: values within it
// count as conditioned instead of flagged by the last rounding ulp.
constexpr double kFlagSlack = 1e-9;

// advance idx to the lexicographically next k-combination of {0..n-1}
bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
    const std::size_t k = idx.size();
    for (std::size_t i = k; i-- > 0;) {
        if (idx[i] != i + n - k) {
            ++idx[i];
            for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

std::vector<std::size_t> first_combination(std::size_t k) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    return idx;
}

}  // namespace

void Thresholds::validate() const {
    if (!(rga_threshold > 1.0) || !(cn_threshold > 1.0) || !(cn_higher_threshold > 1.0))
        throw std::invalid_argument("thresholds must all exceed 1");
    if (!(singular_tol > 0.0) || !(singular_tol < 1e-6))
        throw std::invalid_argument("singular_tol must lie in (0, 1e-6)");
}

std::vector<PairMetrics> enumerate_pairs(const ScaledGainMatrix& scaled,
                                         const Thresholds& th) {
    th.validate();
    const Matrix& v = scaled.values;
    std::vector<PairMetrics> out;
    if (v.rows() < 2 || v.cols() < 2) return out;
    out.reserve(v.cols() * (v.cols() - 1) / 2 * v.rows() * (v.rows() - 1) / 2);

    for (std::size_t j1 = 0; j1 + 1 < v.cols(); ++j1)
        for (std::size_t j2 = j1 + 1; j2 < v.cols(); ++j2)
            for (std::size_t i1 = 0; i1 + 1 < v.rows(); ++i1)
                for (std::size_t i2 = i1 + 1; i2 < v.rows(); ++i2) {
                    const Matrix sub{{v(i1, j1), v(i1, j2)}, {v(i2, j1), v(i2, j2)}};
                    const ConditionNumber cn = condition_number(sub, th.singular_tol);
                    Rga2x2 rga = analyze_2x2(sub(0, 0), sub(0, 1), sub(1, 0), sub(1, 1));
                    if (std::isinf(cn.value) && rga.degenerate == Degenerate::none) {
                        // sigma_min says collinear; a relative gain computed
                        // from a ratio 1 +- rounding could read as huge but
                        // finite, so the sigma test wins
                        rga.degenerate = Degenerate::collinear;
                        rga.rga_number = kInf;
                    }
                    PairMetrics p{j1, j2, i1, i2, cn.value, rga.rga_number,
                                  false, false, rga.degenerate};
                    p.rga_flagged = rga.degenerate == Degenerate::none &&
                                    std::isfinite(p.rga_number) &&
                                    p.rga_number >= th.rga_threshold * (1.0 + kFlagSlack);
                    p.cn_flagged = std::isfinite(p.cond) && p.cond >= th.cn_threshold;
                    out.push_back(p);
                }
    return out;
}

CollinearScan collinear_pairs(const Matrix& values, double singular_tol) {
    CollinearScan out;
    if (values.rows() < 2 || values.cols() < 2) return out;

    for (std::size_t j1 = 0; j1 + 1 < values.cols(); ++j1)
        for (std::size_t j2 = j1 + 1; j2 < values.cols(); ++j2)
            for (std::size_t i1 = 0; i1 + 1 < values.rows(); ++i1)
                for (std::size_t i2 = i1 + 1; i2 < values.rows(); ++i2) {
                    const double a = values(i1, j1), b = values(i1, j2);
                    const double c = values(i2, j1), d = values(i2, j2);
                    const bool za = std::abs(a) < kZeroGainTol;
                    const bool zb = std::abs(b) < kZeroGainTol;
                    const bool zc = std::abs(c) < kZeroGainTol;
                    const bool zd = std::abs(d) < kZeroGainTol;
                    const PairKey key{j1, j2, i1, i2};
                    if ((za && zb) || (zc && zd) || (za && zc) || (zb && zd)) {
                        out.structural.push_back(key);  // zero row or column
                        continue;
                    }
                    double mags[4] = {std::abs(a), std::abs(b), std::abs(c), std::abs(d)};
                    std::sort(std::begin(mags), std::end(mags), std::greater<>());
                    if (std::abs(a * d - b * c) < singular_tol * mags[0] * mags[1])
                        out.pairs.push_back(key);
                }
    return out;
}

ScanResult higher_order_scan(const Matrix& values, std::size_t k, double cn_threshold,
                             double singular_tol) {
    if (k < 3) throw std::invalid_argument("higher_order_scan: k must be at least 3");
    if (k > std::min(values.rows(), values.cols()))
        throw std::invalid_argument("higher_order_scan: k exceeds the matrix dimensions");

    ScanResult out;
    out.k = k;
    auto cols = first_combination(k);
    do {
        auto rows = first_combination(k);
        do {
            const Matrix sub = values.select(rows, cols);
            const SingularSpectrum sp = singular_values(sub);
            const double hi = sp.largest();
            const double lo = sp.smallest();
            if (hi == 0.0 || lo < singular_tol * hi) {
                ++out.singular_count;
            } else if (hi / lo > cn_threshold) {
                out.flagged.push_back({{cols}, {rows}, hi / lo});
            } else {
                ++out.below_count;
            }
        } while (next_combination(rows, values.rows()));
    } while (next_combination(cols, values.cols()));
    return out;
}

std::size_t AnalysisSnapshot::rga_flagged_count() const {
    std::size_t n = 0;
    for (const auto& p : pairs) n += p.rga_flagged;
    return n;
}

std::size_t AnalysisSnapshot::cn_flagged_count() const {
    std::size_t n = 0;
    for (const auto& p : pairs) n += p.cn_flagged;
    return n;
}

AnalysisSnapshot analyze_matrix(const ScaledGainMatrix& scaled, const Thresholds& th,
                                bool with_higher_order) {
    AnalysisSnapshot snap;
    snap.thresholds = th;
    snap.pairs = enumerate_pairs(scaled, th);
    snap.collinear = collinear_pairs(scaled.values, th.singular_tol);
    if (with_higher_order) {
        const std::size_t dim = std::min(scaled.values.rows(), scaled.values.cols());
        for (std::size_t k : {std::size_t{3}, std::size_t{4}})
            if (k <= dim)
                snap.higher.push_back(higher_order_scan(scaled.values, k,
                                                        th.cn_higher_threshold,
                                                        th.singular_tol));
    }
    return snap;
}

}  // namespace gaincond
