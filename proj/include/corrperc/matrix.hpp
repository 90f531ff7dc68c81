#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace corrperc {

// Dense row-major matrix of doubles. Indices are 0-based here; degree-indexed
// callers translate at the call site.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
        if (rows < 0 || cols < 0)
            throw std::invalid_argument("Matrix: negative dimension");
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double &operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    double operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

    double *row(int r) { return data_.data() + static_cast<std::size_t>(r) * cols_; }
    const double *row(int r) const { return data_.data() + static_cast<std::size_t>(r) * cols_; }

    double *data() { return data_.data(); }
    const double *data() const { return data_.data(); }
    std::size_t size() const { return data_.size(); }

    bool operator==(const Matrix &other) const = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

} // namespace corrperc
