#include "qjump/simd.hpp"

namespace qjump::simd {
namespace {

void s_axpy(std::size_t n, cx a, const cx* x, cx* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void s_xpay(std::size_t n, const cx* x, cx a, const cx* k, cx* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + a * k[i];
}

void s_scale_real(std::size_t n, double a, cx* x) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void s_vmuladd(std::size_t n, const cx* a, const cx* x, cx* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a[i] * x[i];
}

void s_wmuladd(std::size_t n, cx s, const double* w, const cx* x, cx* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] += s * w[i] * x[i];
}

cx s_dotc(std::size_t n, const cx* x, const cx* y) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
        im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
    }
    return {re, im};
}

cx s_dotu(std::size_t n, const cx* x, const cx* y) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        re += x[i].real() * y[i].real() - x[i].imag() * y[i].imag();
        im += x[i].real() * y[i].imag() + x[i].imag() * y[i].real();
    }
    return {re, im};
}

double s_nrm2(std::size_t n, const cx* x) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    return s;
}

double s_wnrm2(std::size_t n, const double* w, const cx* x) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        s += w[i] * (x[i].real() * x[i].real() + x[i].imag() * x[i].imag());
    return s;
}

}  // namespace

const Kernels& scalar_kernels() {
    static const Kernels k{s_axpy, s_xpay, s_scale_real, s_vmuladd,
                           s_wmuladd, s_dotc, s_dotu, s_nrm2, s_wnrm2};
    return k;
}

}  // namespace qjump::simd
