#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dmdcp {

using Cx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Shape, format or contract violation (bad input data).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical failure (defective matrix, solver breakdown).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dense third-order complex tensor. Storage is a flat array with the
/// first index fastest-varying and the third slowest, so the frontal
/// slice j (third index fixed to j) is a contiguous column-major
/// I1 x I2 block at offset I1*I2*j.
class Tensor3 {
public:
    Tensor3() = default;

    Tensor3(Index i1, Index i2, Index i3) : dims_{i1, i2, i3} {
        if (i1 < 1 || i2 < 1 || i3 < 1)
            throw DataError("Tensor3: all dimensions must be >= 1, got (" +
                            std::to_string(i1) + ", " + std::to_string(i2) +
                            ", " + std::to_string(i3) + ")");
        data_.assign(static_cast<std::size_t>(i1 * i2 * i3), Cx(0.0, 0.0));
    }

    const std::array<Index, 3>& dims() const { return dims_; }
    Index dim(int k) const { return dims_[static_cast<std::size_t>(k)]; }
    Index size() const { return dims_[0] * dims_[1] * dims_[2]; }

    Cx& operator()(Index i1, Index i2, Index i3) {
        return data_[static_cast<std::size_t>(i1 + dims_[0] * (i2 + dims_[1] * i3))];
    }
    const Cx& operator()(Index i1, Index i2, Index i3) const {
        return data_[static_cast<std::size_t>(i1 + dims_[0] * (i2 + dims_[1] * i3))];
    }

    Cx* data() { return data_.data(); }
    const Cx* data() const { return data_.data(); }

    /// Frontal slice j as an I1 x I2 matrix view (no copy).
    Eigen::Map<const Matrix> slice(Index j) const {
        return Eigen::Map<const Matrix>(data_.data() + dims_[0] * dims_[1] * j,
                                        dims_[0], dims_[1]);
    }
    Eigen::Map<Matrix> slice(Index j) {
        return Eigen::Map<Matrix>(data_.data() + dims_[0] * dims_[1] * j,
                                  dims_[0], dims_[1]);
    }

    bool same_dims(const Tensor3& other) const { return dims_ == other.dims_; }

    friend bool operator==(const Tensor3& a, const Tensor3& b) {
        return a.dims_ == b.dims_ && a.data_ == b.data_;
    }

private:
    std::array<Index, 3> dims_{0, 0, 0};
    std::vector<Cx> data_;
};

/// Factor matrices of a CP decomposition; column r of A, B, C holds the
/// r-th component triplet. All three must share the column count R.
struct CPFactors {
    Matrix A;  // I1 x R
    Matrix B;  // I2 x R
    Matrix C;  // I3 x R

    Index rank() const { return A.cols(); }
};

inline void check_factors(const CPFactors& f, const char* where) {
    if (f.A.cols() != f.B.cols() || f.A.cols() != f.C.cols())
        throw DataError(std::string(where) + ": factor column counts differ (" +
                        std::to_string(f.A.cols()) + ", " +
                        std::to_string(f.B.cols()) + ", " +
                        std::to_string(f.C.cols()) + ")");
}

}  // namespace dmdcp
