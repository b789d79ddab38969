#pragma once
#include <cstddef>
#include <cstdint>
#include <vector>

namespace rfvlc {

// Dense row-major containers used for the channel / allocation tensors.
template <typename T>
class Grid2 {
public:
    Grid2() : rows_(0), cols_(0) {}
    Grid2(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

    bool operator==(const Grid2&) const = default;

private:
    std::size_t rows_, cols_;
    std::vector<T> data_;
};

template <typename T>
class Grid3 {
public:
    Grid3() : d0_(0), d1_(0), d2_(0) {}
    Grid3(std::size_t d0, std::size_t d1, std::size_t d2, T fill = T{})
        : d0_(d0), d1_(d1), d2_(d2), data_(d0 * d1 * d2, fill) {}

    T& operator()(std::size_t i, std::size_t j, std::size_t k) {
        return data_[(i * d1_ + j) * d2_ + k];
    }
    const T& operator()(std::size_t i, std::size_t j, std::size_t k) const {
        return data_[(i * d1_ + j) * d2_ + k];
    }

    std::size_t dim0() const { return d0_; }
    std::size_t dim1() const { return d1_; }
    std::size_t dim2() const { return d2_; }
    std::size_t size() const { return data_.size(); }
    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

    bool operator==(const Grid3&) const = default;

private:
    std::size_t d0_, d1_, d2_;
    std::vector<T> data_;
};

using Mat = Grid2<double>;
using Ten3 = Grid3<double>;
using BinMat = Grid2<std::uint8_t>;
using BinTen3 = Grid3<std::uint8_t>;

} // namespace rfvlc
