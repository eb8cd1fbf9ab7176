#pragma once

#include <optional>

#include "rtc/tensor.hpp"

namespace rtc {

/// Unnormalized DFT of every tube: S(i,j,:) = fft(T(i,j,:)).
SpectralTensor dft_mode3(const Tensor3& t);

/// Inverse of dft_mode3 (1/n3-scaled). Throws NonRealResult when the largest
/// imaginary residue exceeds 1e-6; smaller residues are discarded.
Tensor3 idft_mode3(const SpectralTensor& s);

/// t-product: tube-wise circular convolution in place of scalar products.
/// a is n1 x n2 x n3, b is n2 x n4 x n3; result is n1 x n4 x n3.
Tensor3 t_product(const Tensor3& a, const Tensor3& b);

/// Transpose every frontal slice and reverse the order of slices 2..n3.
Tensor3 t_transpose(const Tensor3& t);

/// First frontal slice is the n x n identity, all other slices are zero.
Tensor3 identity_tensor(Index n, Index n3);

struct TSvdFactors {
    Tensor3 u;     // n1 x n1 x n3, orthogonal
    Tensor3 theta; // n1 x n2 x n3, f-diagonal
    Tensor3 v;     // n2 x n2 x n3, orthogonal
    /// Singular values of the Fourier slices: column k holds the
    /// non-increasing singular values of slice k (min(n1,n2) rows).
    Eigen::MatrixXd spectral_singular_values;
};

/// t-SVD: t = u * theta * v^T (t-products).
TSvdFactors t_svd(const Tensor3& t);

/// Number of diagonal tubes theta(i,i,:) with Euclidean norm above tol.
/// Without tol the threshold is 1e-8 times the largest Fourier-slice
/// singular value.
Index tubal_rank(const Tensor3& t, std::optional<double> tol = std::nullopt);

/// Tensor nuclear norm: sum of singular values over all n3 Fourier slices.
double tnn(const Tensor3& t);

/// Sum over (i,j) of the Euclidean norm of tube (i,j).
double norm_112(const Tensor3& t);

namespace spectral {

/// Number of Fourier slices that have to be processed for a real tensor;
/// slice k > n3/2 is the complex conjugate of slice n3 - k.
inline Index independent_slices(Index n3) { return n3 / 2 + 1; }

/// Slice k of a real tensor's spectrum is real (k = 0, and k = n3/2 for even n3).
inline bool is_self_conjugate(Index k, Index n3) { return k == 0 || 2 * k == n3; }

/// Fill slices k > n3/2 with the conjugates of their mirror slices.
void mirror_conjugate_slices(SpectralTensor& s);

/// Singular values of one Fourier slice, and optionally its factors. For
/// self-conjugate slices the decomposition runs on the real part so the
/// factors stay real.
struct SliceSvd {
    Eigen::MatrixXcd u;
    Eigen::VectorXd sigma;
    Eigen::MatrixXcd v;
};

enum class SvdFactors { none, thin, full };

SliceSvd slice_svd(const Eigen::MatrixXcd& slice, bool self_conjugate, SvdFactors factors);

} // namespace spectral

} // namespace rtc
