#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "rtc/error.hpp"

namespace rtc {

using Index = Eigen::Index;
using Complex = std::complex<double>;

/// Extents of a third-order tensor: n1 x n2 grid of tubes of length n3.
struct Dims {
    Index n1 = 0;
    Index n2 = 0;
    Index n3 = 0;

    Index size() const { return n1 * n2 * n3; }
    Index tubes() const { return n1 * n2; }
    friend bool operator==(const Dims&, const Dims&) = default;
};

/// Dense third-order tensor with slice-major storage.
///
/// Entry (i, j, k) lives at offset i + n1 * (j + n2 * k): every frontal
/// slice is a contiguous column-major n1 x n2 matrix and tubes are strided
/// by n1 * n2. Indices are 0-based throughout the project.
template <typename Scalar>
class BasicTensor3 {
public:
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    using SliceMap = Eigen::Map<Matrix>;
    using ConstSliceMap = Eigen::Map<const Matrix>;
    using TubeMap = Eigen::Map<Vector, 0, Eigen::InnerStride<>>;
    using ConstTubeMap = Eigen::Map<const Vector, 0, Eigen::InnerStride<>>;

    BasicTensor3() = default;

    BasicTensor3(Index n1, Index n2, Index n3)
        : dims_{n1, n2, n3} {
        if (n1 < 1 || n2 < 1 || n3 < 1)
            throw InvalidArgument("tensor dimensions must be positive");
        data_.assign(static_cast<std::size_t>(dims_.size()), Scalar(0));
    }

    explicit BasicTensor3(Dims d) : BasicTensor3(d.n1, d.n2, d.n3) {}

    BasicTensor3(Dims d, std::vector<Scalar> values) : dims_{d} {
        if (d.n1 < 1 || d.n2 < 1 || d.n3 < 1)
            throw InvalidArgument("tensor dimensions must be positive");
        if (static_cast<Index>(values.size()) != d.size())
            throw ShapeMismatch("value count does not match tensor dimensions");
        data_ = std::move(values);
    }

    static BasicTensor3 constant(Dims d, Scalar c) {
        BasicTensor3 t(d);
        std::fill(t.data_.begin(), t.data_.end(), c);
        return t;
    }

    const Dims& dims() const { return dims_; }
    Index n1() const { return dims_.n1; }
    Index n2() const { return dims_.n2; }
    Index n3() const { return dims_.n3; }
    Index size() const { return dims_.size(); }
    bool empty() const { return data_.empty(); }

    Index offset(Index i, Index j, Index k) const {
        return i + dims_.n1 * (j + dims_.n2 * k);
    }

    Scalar& operator()(Index i, Index j, Index k) { return data_[static_cast<std::size_t>(offset(i, j, k))]; }
    const Scalar& operator()(Index i, Index j, Index k) const {
        return data_[static_cast<std::size_t>(offset(i, j, k))];
    }

    SliceMap slice(Index k) { return SliceMap(data_.data() + k * dims_.tubes(), dims_.n1, dims_.n2); }
    ConstSliceMap slice(Index k) const {
        return ConstSliceMap(data_.data() + k * dims_.tubes(), dims_.n1, dims_.n2);
    }

    TubeMap tube(Index i, Index j) {
        return TubeMap(data_.data() + offset(i, j, 0), dims_.n3, Eigen::InnerStride<>(dims_.tubes()));
    }
    ConstTubeMap tube(Index i, Index j) const {
        return ConstTubeMap(data_.data() + offset(i, j, 0), dims_.n3, Eigen::InnerStride<>(dims_.tubes()));
    }

    Eigen::Map<Vector> flat() { return Eigen::Map<Vector>(data_.data(), size()); }
    Eigen::Map<const Vector> flat() const { return Eigen::Map<const Vector>(data_.data(), size()); }

    std::span<Scalar> values() { return data_; }
    std::span<const Scalar> values() const { return data_; }

    bool same_shape(const BasicTensor3& other) const { return dims_ == other.dims_; }

    bool all_finite() const { return flat().allFinite(); }

    double frobenius_norm() const { return flat().norm(); }

    BasicTensor3& operator+=(const BasicTensor3& rhs) {
        require_same_shape(rhs);
        flat() += rhs.flat();
        return *this;
    }
    BasicTensor3& operator-=(const BasicTensor3& rhs) {
        require_same_shape(rhs);
        flat() -= rhs.flat();
        return *this;
    }
    BasicTensor3& operator*=(Scalar s) {
        flat() *= s;
        return *this;
    }

    friend BasicTensor3 operator+(BasicTensor3 lhs, const BasicTensor3& rhs) { return lhs += rhs; }
    friend BasicTensor3 operator-(BasicTensor3 lhs, const BasicTensor3& rhs) { return lhs -= rhs; }
    friend BasicTensor3 operator*(BasicTensor3 lhs, Scalar s) { return lhs *= s; }
    friend BasicTensor3 operator*(Scalar s, BasicTensor3 rhs) { return rhs *= s; }

    friend bool operator==(const BasicTensor3&, const BasicTensor3&) = default;

private:
    void require_same_shape(const BasicTensor3& rhs) const {
        if (!same_shape(rhs))
            throw ShapeMismatch("tensor operands have different dimensions");
    }

    Dims dims_{};
    std::vector<Scalar> data_;
};

/// Real tensor: radio maps, iterates, factors.
using Tensor3 = BasicTensor3<double>;

/// Complex tensor whose k-th frontal slice is the k-th Fourier slice of a
/// real tensor (DFT taken along the tubes).
using SpectralTensor = BasicTensor3<Complex>;

/// Largest |a - b| over all entries.
inline double max_abs_diff(const Tensor3& a, const Tensor3& b) {
    if (!a.same_shape(b))
        throw ShapeMismatch("max_abs_diff: dimension mismatch");
    return (a.flat() - b.flat()).cwiseAbs().maxCoeff();
}

/// ||a - b||_F / ||b||_F, or the absolute difference when b is zero.
inline double relative_error(const Tensor3& a, const Tensor3& b) {
    if (!a.same_shape(b))
        throw ShapeMismatch("relative_error: dimension mismatch");
    const double diff = (a.flat() - b.flat()).norm();
    const double ref = b.frobenius_norm();
    return ref > 0 ? diff / ref : diff;
}

} // namespace rtc
