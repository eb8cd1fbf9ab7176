#include "rtc/t_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <unsupported/Eigen/FFT>

#define LAPACK_COMPLEX_CPP
#include <lapacke.h>

namespace rtc {

namespace {

constexpr double kNonRealLimit = 1e-6;

Eigen::MatrixXcd slice_product(const SpectralTensor& a, const SpectralTensor& b, Index k) {
    return a.slice(k) * b.slice(k);
}

} // namespace

SpectralTensor dft_mode3(const Tensor3& t) {
    const Dims d = t.dims();
    SpectralTensor out(d);
    if (d.n3 == 1) {
        out.flat() = t.flat().cast<Complex>();
        return out;
    }
    Eigen::FFT<double> fft;
    std::vector<double> tube(static_cast<std::size_t>(d.n3));
    std::vector<Complex> spectrum;
    for (Index j = 0; j < d.n2; ++j) {
        for (Index i = 0; i < d.n1; ++i) {
            for (Index k = 0; k < d.n3; ++k)
                tube[static_cast<std::size_t>(k)] = t(i, j, k);
            fft.fwd(spectrum, tube);
            for (Index k = 0; k < d.n3; ++k)
                out(i, j, k) = spectrum[static_cast<std::size_t>(k)];
        }
    }
    return out;
}

Tensor3 idft_mode3(const SpectralTensor& s) {
    const Dims d = s.dims();
    Tensor3 out(d);
    double worst_imag = 0.0;
    if (d.n3 == 1) {
        worst_imag = s.flat().imag().cwiseAbs().maxCoeff();
        out.flat() = s.flat().real();
    } else {
        Eigen::FFT<double> fft;
        std::vector<Complex> spectrum(static_cast<std::size_t>(d.n3));
        std::vector<Complex> tube;
        for (Index j = 0; j < d.n2; ++j) {
            for (Index i = 0; i < d.n1; ++i) {
                for (Index k = 0; k < d.n3; ++k)
                    spectrum[static_cast<std::size_t>(k)] = s(i, j, k);
                fft.inv(tube, spectrum);
                for (Index k = 0; k < d.n3; ++k) {
                    const Complex& v = tube[static_cast<std::size_t>(k)];
                    worst_imag = std::max(worst_imag, std::abs(v.imag()));
                    out(i, j, k) = v.real();
                }
            }
        }
    }
    if (!(worst_imag <= kNonRealLimit))
        throw NonRealResult("inverse DFT has imaginary residue " + std::to_string(worst_imag));
    return out;
}

namespace spectral {

void mirror_conjugate_slices(SpectralTensor& s) {
    const Index n3 = s.n3();
    for (Index k = independent_slices(n3); k < n3; ++k)
        s.slice(k) = s.slice(n3 - k).conjugate();
}

SliceSvd slice_svd(const Eigen::MatrixXcd& slice, bool self_conjugate, SvdFactors factors) {
    const Index rows = slice.rows();
    const Index cols = slice.cols();
    const Index r = std::min(rows, cols);
    const char job = factors == SvdFactors::none ? 'N' : (factors == SvdFactors::thin ? 'S' : 'A');
    const Index ucols = factors == SvdFactors::full ? rows : r;
    const Index vrows = factors == SvdFactors::full ? cols : r;
    const bool want = factors != SvdFactors::none;

    SliceSvd out;
    out.sigma.resize(r);
    lapack_int info = 0;
    if (self_conjugate) {
        Eigen::MatrixXd work = slice.real();
        Eigen::MatrixXd u(want ? rows : 1, want ? ucols : 1);
        Eigen::MatrixXd vt(want ? vrows : 1, want ? cols : 1);
        info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, job, static_cast<lapack_int>(rows), static_cast<lapack_int>(cols),
                              work.data(), static_cast<lapack_int>(rows), out.sigma.data(), u.data(),
                              static_cast<lapack_int>(u.rows()), vt.data(), static_cast<lapack_int>(vt.rows()));
        if (want) {
            out.u = u.cast<Complex>();
            out.v = vt.transpose().cast<Complex>();
        }
    } else {
        Eigen::MatrixXcd work = slice;
        Eigen::MatrixXcd u(want ? rows : 1, want ? ucols : 1);
        Eigen::MatrixXcd vt(want ? vrows : 1, want ? cols : 1);
        info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, job, static_cast<lapack_int>(rows), static_cast<lapack_int>(cols),
                              reinterpret_cast<lapack_complex_double*>(work.data()), static_cast<lapack_int>(rows),
                              out.sigma.data(), reinterpret_cast<lapack_complex_double*>(u.data()),
                              static_cast<lapack_int>(u.rows()),
                              reinterpret_cast<lapack_complex_double*>(vt.data()),
                              static_cast<lapack_int>(vt.rows()));
        if (want) {
            out.u = std::move(u);
            out.v = vt.adjoint();
        }
    }
    if (info != 0)
        throw Error("slice SVD failed to converge (gesdd info " + std::to_string(info) + ")");
    return out;
}

} // namespace spectral

Tensor3 t_product(const Tensor3& a, const Tensor3& b) {
    if (a.n2() != b.n1() || a.n3() != b.n3())
        throw ShapeMismatch("t_product: inner dimension or tube length differs");
    const SpectralTensor fa = dft_mode3(a);
    const SpectralTensor fb = dft_mode3(b);
    SpectralTensor fc(a.n1(), b.n2(), a.n3());
    for (Index k = 0; k < spectral::independent_slices(a.n3()); ++k)
        fc.slice(k) = slice_product(fa, fb, k);
    spectral::mirror_conjugate_slices(fc);
    return idft_mode3(fc);
}

Tensor3 t_transpose(const Tensor3& t) {
    const Index n3 = t.n3();
    Tensor3 out(t.n2(), t.n1(), n3);
    out.slice(0) = t.slice(0).transpose();
    for (Index m = 1; m < n3; ++m)
        out.slice(m) = t.slice(n3 - m).transpose();
    return out;
}

Tensor3 identity_tensor(Index n, Index n3) {
    Tensor3 out(n, n, n3);
    out.slice(0).setIdentity();
    return out;
}

TSvdFactors t_svd(const Tensor3& t) {
    const Dims d = t.dims();
    const Index r = std::min(d.n1, d.n2);
    const SpectralTensor ft = dft_mode3(t);

    SpectralTensor fu(d.n1, d.n1, d.n3);
    SpectralTensor ftheta(d.n1, d.n2, d.n3);
    SpectralTensor fv(d.n2, d.n2, d.n3);
    Eigen::MatrixXd sigma(r, d.n3);

    for (Index k = 0; k < spectral::independent_slices(d.n3); ++k) {
        const auto svd = spectral::slice_svd(ft.slice(k), spectral::is_self_conjugate(k, d.n3),
                                             spectral::SvdFactors::full);
        fu.slice(k) = svd.u;
        fv.slice(k) = svd.v;
        for (Index m = 0; m < r; ++m)
            ftheta(m, m, k) = svd.sigma(m);
        sigma.col(k) = svd.sigma;
    }
    for (Index k = spectral::independent_slices(d.n3); k < d.n3; ++k)
        sigma.col(k) = sigma.col(d.n3 - k);
    spectral::mirror_conjugate_slices(fu);
    spectral::mirror_conjugate_slices(ftheta);
    spectral::mirror_conjugate_slices(fv);

    return TSvdFactors{idft_mode3(fu), idft_mode3(ftheta), idft_mode3(fv), std::move(sigma)};
}

Index tubal_rank(const Tensor3& t, std::optional<double> tol) {
    if (tol && *tol < 0)
        throw InvalidArgument("tubal_rank: tolerance must be non-negative");
    const TSvdFactors f = t_svd(t);
    const double threshold = tol ? *tol : 1e-8 * f.spectral_singular_values.maxCoeff();
    const Index r = std::min(t.n1(), t.n2());
    Index rank = 0;
    for (Index i = 0; i < r; ++i) {
        if (f.theta.tube(i, i).norm() > threshold)
            ++rank;
    }
    return rank;
}

double tnn(const Tensor3& t) {
    const SpectralTensor ft = dft_mode3(t);
    const Index n3 = t.n3();
    double total = 0.0;
    for (Index k = 0; k < spectral::independent_slices(n3); ++k) {
        const auto svd = spectral::slice_svd(ft.slice(k), spectral::is_self_conjugate(k, n3),
                                             spectral::SvdFactors::none);
        // Slice k and its conjugate mirror share singular values.
        const double weight = (spectral::is_self_conjugate(k, n3) ? 1.0 : 2.0);
        total += weight * svd.sigma.sum();
    }
    return total;
}

double norm_112(const Tensor3& t) {
    double total = 0.0;
    for (Index j = 0; j < t.n2(); ++j)
        for (Index i = 0; i < t.n1(); ++i)
            total += t.tube(i, j).norm();
    return total;
}

} // namespace rtc
