#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace gaincond {

// Dense row-major matrix of doubles. Sized for controller gain models
// (tens of rows and columns), not for large-scale linear algebra.
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    Matrix(std::initializer_list<std::initializer_list<double>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_)
                throw std::invalid_argument("Matrix: ragged initializer");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool all_finite() const {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    // Submatrix restricted to the given row/column index sets (kept in order).
    Matrix select(std::span<const std::size_t> row_idx,
                  std::span<const std::size_t> col_idx) const {
        Matrix out(row_idx.size(), col_idx.size());
        for (std::size_t i = 0; i < row_idx.size(); ++i)
            for (std::size_t j = 0; j < col_idx.size(); ++j)
                out(i, j) = (*this)(row_idx[i], col_idx[j]);
        return out;
    }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

}  // namespace gaincond
