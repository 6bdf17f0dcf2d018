#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "qjump/simd.hpp"

// std::complex<double> arrays are interleaved [re, im]; one __m256d holds two
// complex values. Complex multiply uses the fmaddsub/fmsubadd lane parity:
// even lanes carry real parts, odd lanes imaginary parts.

namespace qjump::simd {
namespace {

inline __m256d cmul_vs(__m256d v, __m256d ar, __m256d ai) {
    // (ar + i*ai) * v for broadcast scalar parts ar, ai
    __m256d vswap = _mm256_permute_pd(v, 0x5);
    return _mm256_fmaddsub_pd(v, ar, _mm256_mul_pd(vswap, ai));
}

void a_axpy(std::size_t n, cx a, const cx* x, cx* y) {
    const double* xp = reinterpret_cast<const double*>(x);
    double* yp = reinterpret_cast<double*>(y);
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_set1_pd(a.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d v = _mm256_loadu_pd(xp + 2 * i);
        __m256d w = _mm256_loadu_pd(yp + 2 * i);
        _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(w, cmul_vs(v, ar, ai)));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void a_xpay(std::size_t n, const cx* x, cx a, const cx* k, cx* y) {
    const double* xp = reinterpret_cast<const double*>(x);
    const double* kp = reinterpret_cast<const double*>(k);
    double* yp = reinterpret_cast<double*>(y);
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_set1_pd(a.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d v = _mm256_loadu_pd(kp + 2 * i);
        __m256d b = _mm256_loadu_pd(xp + 2 * i);
        _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(b, cmul_vs(v, ar, ai)));
    }
    for (; i < n; ++i) y[i] = x[i] + a * k[i];
}

void a_scale_real(std::size_t n, double a, cx* x) {
    double* xp = reinterpret_cast<double*>(x);
    const __m256d av = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d v = _mm256_loadu_pd(xp + 2 * i);
        _mm256_storeu_pd(xp + 2 * i, _mm256_mul_pd(v, av));
    }
    for (; i < n; ++i) x[i] *= a;
}

void a_vmuladd(std::size_t n, const cx* a, const cx* x, cx* y) {
    const double* ap = reinterpret_cast<const double*>(a);
    const double* xp = reinterpret_cast<const double*>(x);
    double* yp = reinterpret_cast<double*>(y);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d av = _mm256_loadu_pd(ap + 2 * i);
        __m256d ar = _mm256_movedup_pd(av);
        __m256d ai = _mm256_permute_pd(av, 0xF);
        __m256d v = _mm256_loadu_pd(xp + 2 * i);
        __m256d w = _mm256_loadu_pd(yp + 2 * i);
        _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(w, cmul_vs(v, ar, ai)));
    }
    for (; i < n; ++i) y[i] += a[i] * x[i];
}

void a_wmuladd(std::size_t n, cx s, const double* w, const cx* x, cx* y) {
    const double* xp = reinterpret_cast<const double*>(x);
    double* yp = reinterpret_cast<double*>(y);
    const __m256d sr = _mm256_set1_pd(s.real());
    const __m256d si = _mm256_set1_pd(s.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m128d wp = _mm_loadu_pd(w + i);
        __m256d we = _mm256_permute4x64_pd(_mm256_castpd128_pd256(wp), 0x50);
        __m256d v = _mm256_mul_pd(_mm256_loadu_pd(xp + 2 * i), we);
        __m256d acc = _mm256_loadu_pd(yp + 2 * i);
        _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(acc, cmul_vs(v, sr, si)));
    }
    for (; i < n; ++i) y[i] += s * w[i] * x[i];
}

cx a_dotc(std::size_t n, const cx* x, const cx* y) {
    const double* xp = reinterpret_cast<const double*>(x);
    const double* yp = reinterpret_cast<const double*>(y);
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d xv = _mm256_loadu_pd(xp + 2 * i);
        __m256d yv = _mm256_loadu_pd(yp + 2 * i);
        __m256d t = _mm256_mul_pd(_mm256_permute_pd(yv, 0x5), _mm256_permute_pd(xv, 0xF));
        acc0 = _mm256_add_pd(acc0, _mm256_fmsubadd_pd(yv, _mm256_movedup_pd(xv), t));
        __m256d xv1 = _mm256_loadu_pd(xp + 2 * i + 4);
        __m256d yv1 = _mm256_loadu_pd(yp + 2 * i + 4);
        __m256d t1 = _mm256_mul_pd(_mm256_permute_pd(yv1, 0x5), _mm256_permute_pd(xv1, 0xF));
        acc1 = _mm256_add_pd(acc1, _mm256_fmsubadd_pd(yv1, _mm256_movedup_pd(xv1), t1));
    }
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xp + 2 * i);
        __m256d yv = _mm256_loadu_pd(yp + 2 * i);
        __m256d t = _mm256_mul_pd(_mm256_permute_pd(yv, 0x5), _mm256_permute_pd(xv, 0xF));
        acc0 = _mm256_add_pd(acc0, _mm256_fmsubadd_pd(yv, _mm256_movedup_pd(xv), t));
    }
    acc0 = _mm256_add_pd(acc0, acc1);
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc0);
    cx out{lanes[0] + lanes[2], lanes[1] + lanes[3]};
    for (; i < n; ++i) {
        out += cx{x[i].real() * y[i].real() + x[i].imag() * y[i].imag(),
                  x[i].real() * y[i].imag() - x[i].imag() * y[i].real()};
    }
    return out;
}

cx a_dotu(std::size_t n, const cx* x, const cx* y) {
    const double* xp = reinterpret_cast<const double*>(x);
    const double* yp = reinterpret_cast<const double*>(y);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xp + 2 * i);
        __m256d yv = _mm256_loadu_pd(yp + 2 * i);
        __m256d t = _mm256_mul_pd(_mm256_permute_pd(yv, 0x5), _mm256_permute_pd(xv, 0xF));
        acc = _mm256_add_pd(acc, _mm256_fmaddsub_pd(yv, _mm256_movedup_pd(xv), t));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    cx out{lanes[0] + lanes[2], lanes[1] + lanes[3]};
    for (; i < n; ++i) out += x[i] * y[i];
    return out;
}

double a_nrm2(std::size_t n, const cx* x) {
    const double* xp = reinterpret_cast<const double*>(x);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d v = _mm256_loadu_pd(xp + 2 * i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double s = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; i < n; ++i) s += std::norm(x[i]);
    return s;
}

double a_wnrm2(std::size_t n, const double* w, const cx* x) {
    const double* xp = reinterpret_cast<const double*>(x);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m128d wp = _mm_loadu_pd(w + i);
        __m256d we = _mm256_permute4x64_pd(_mm256_castpd128_pd256(wp), 0x50);
        __m256d v = _mm256_loadu_pd(xp + 2 * i);
        acc = _mm256_fmadd_pd(_mm256_mul_pd(v, v), we, acc);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double s = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; i < n; ++i) s += w[i] * std::norm(x[i]);
    return s;
}

}  // namespace

const Kernels& avx2_kernels() {
    static const Kernels k{a_axpy, a_xpay, a_scale_real, a_vmuladd,
                           a_wmuladd, a_dotc, a_dotu, a_nrm2, a_wnrm2};
    return k;
}

bool avx2_available() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

}  // namespace qjump::simd

#endif
