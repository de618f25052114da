#include "eotf/common/matrix.hpp"

#include <stdexcept>

namespace eotf {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw std::invalid_argument("Matrix: data size does not match shape");
    }
}

std::vector<double> Matrix::transposed() const {
    std::vector<double> out(data_.size());
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            out[c * rows_ + r] = data_[r * cols_ + c];
        }
    }
    return out;
}

}  // namespace eotf
