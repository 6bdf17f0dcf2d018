#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

// Data-parallel complex kernels for the simulation inner loops.
// A scalar reference implementation always exists; on x86-64 an AVX2+FMA
// variant is selected at runtime when the CPU supports it. The active set
// can be forced with the environment variable QJUMP_SIMD=scalar|avx2.

namespace qjump::simd {

using cx = std::complex<double>;

struct Kernels {
    // y[i] += a * x[i]
    void (*axpy)(std::size_t n, cx a, const cx* x, cx* y);
    // y[i] = x[i] + a * k[i]
    void (*xpay)(std::size_t n, const cx* x, cx a, const cx* k, cx* y);
    // x[i] *= a  (real a)
    void (*scale_real)(std::size_t n, double a, cx* x);
    // y[i] += a[i] * x[i]  (elementwise complex weights)
    void (*vmuladd)(std::size_t n, const cx* a, const cx* x, cx* y);
    // y[i] += s * w[i] * x[i]  (real weight vector, complex scalar)
    void (*wmuladd)(std::size_t n, cx s, const double* w, const cx* x, cx* y);
    // sum_i conj(x[i]) * y[i]
    cx (*dotc)(std::size_t n, const cx* x, const cx* y);
    // sum_i x[i] * y[i]
    cx (*dotu)(std::size_t n, const cx* x, const cx* y);
    // sum_i |x[i]|^2
    double (*nrm2)(std::size_t n, const cx* x);
    // sum_i w[i] * |x[i]|^2
    double (*wnrm2)(std::size_t n, const double* w, const cx* x);
};

const Kernels& scalar_kernels();
#if defined(__x86_64__) || defined(_M_X64)
const Kernels& avx2_kernels();
bool avx2_available();
#endif

// Active set, chosen once at first use.
const Kernels& active();
std::string_view active_name();

}  // namespace qjump::simd
