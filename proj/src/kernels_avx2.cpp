// AVX2 + FMA kernel variants. Compiled with -mavx2 -mfma in its own TU;
// only reached at runtime when CPUID reports support.

#if defined(__x86_64__)

#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "hoops/kernels.hpp"

namespace hoops::kernels::detail {

namespace {

// exp() after Cephes cmath, vectorized. Accurate to ~1 ulp for
// x in [-707.5, 709.4]; inputs below that underflow to 0.
const __m256d kExpP0 = _mm256_set1_pd(1.26177193074810590878e-4);
const __m256d kExpP1 = _mm256_set1_pd(3.02994407707441961300e-2);
const __m256d kExpP2 = _mm256_set1_pd(9.99999999999999999910e-1);
const __m256d kExpQ0 = _mm256_set1_pd(3.00198505138664455042e-6);
const __m256d kExpQ1 = _mm256_set1_pd(2.52448340349684104192e-3);
const __m256d kExpQ2 = _mm256_set1_pd(2.27265548208155028766e-1);
const __m256d kExpQ3 = _mm256_set1_pd(2.00000000000000000005e0);
const __m256d kLog2E = _mm256_set1_pd(1.4426950408889634073599);
const __m256d kLn2Hi = _mm256_set1_pd(6.93145751953125e-1);
const __m256d kLn2Lo = _mm256_set1_pd(1.42860682030941723212e-6);

inline __m256d exp4(__m256d x) {
    const __m256d lo = _mm256_set1_pd(-707.5);
    const __m256d hi = _mm256_set1_pd(709.43);
    __m256d underflow = _mm256_cmp_pd(x, _mm256_set1_pd(-745.0), _CMP_LT_OQ);
    x = _mm256_max_pd(_mm256_min_pd(x, hi), lo);

    __m256d n = _mm256_round_pd(_mm256_mul_pd(x, kLog2E),
                                _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(n, kLn2Hi, x);
    r = _mm256_fnmadd_pd(n, kLn2Lo, r);

    __m256d rr = _mm256_mul_pd(r, r);
    __m256d px = _mm256_fmadd_pd(kExpP0, rr, kExpP1);
    px = _mm256_fmadd_pd(px, rr, kExpP2);
    px = _mm256_mul_pd(px, r);
    __m256d qx = _mm256_fmadd_pd(kExpQ0, rr, kExpQ1);
    qx = _mm256_fmadd_pd(qx, rr, kExpQ2);
    qx = _mm256_fmadd_pd(qx, rr, kExpQ3);
    __m256d e = _mm256_div_pd(px, _mm256_sub_pd(qx, px));
    e = _mm256_fmadd_pd(e, _mm256_set1_pd(2.0), _mm256_set1_pd(1.0));

    // scale by 2^n through the exponent bits
    __m128i n32 = _mm256_cvtpd_epi32(n);
    __m256i n64 = _mm256_cvtepi32_epi64(n32);
    __m256i bits = _mm256_castpd_si256(e);
    bits = _mm256_add_epi64(bits, _mm256_slli_epi64(n64, 52));
    e = _mm256_castsi256_pd(bits);

    return _mm256_andnot_pd(underflow, e);
}

// log(u) for u in (0.5, 3), after Cephes cmath; used via the log1p
// compensation below so only u = 1 + t with t in [0, 1] occurs.
const __m256d kLogP0 = _mm256_set1_pd(1.01875663804580931796e-4);
const __m256d kLogP1 = _mm256_set1_pd(4.97494994976747001425e-1);
const __m256d kLogP2 = _mm256_set1_pd(4.70579119878881725854e0);
const __m256d kLogP3 = _mm256_set1_pd(1.44989225341610930846e1);
const __m256d kLogP4 = _mm256_set1_pd(1.79368678507819816313e1);
const __m256d kLogP5 = _mm256_set1_pd(7.70838733755885391666e0);
const __m256d kLogQ0 = _mm256_set1_pd(1.12873587189167450590e1);
const __m256d kLogQ1 = _mm256_set1_pd(4.52279145837532221105e1);
const __m256d kLogQ2 = _mm256_set1_pd(8.29875266912776603211e1);
const __m256d kLogQ3 = _mm256_set1_pd(7.11544750618563894466e1);
const __m256d kLogQ4 = _mm256_set1_pd(2.31251620126765340583e1);

// log1p(t) for t in [0, 1].
inline __m256d log1p4(__m256d t) {
    const __m256d one = _mm256_set1_pd(1.0);
    __m256d u = _mm256_add_pd(one, t);

    // u in (1, 2]: exponent is 0 below sqrt(2), else 1 with mantissa u/2.
    const __m256d sqrt2 = _mm256_set1_pd(1.41421356237309504880);
    __m256d big = _mm256_cmp_pd(u, sqrt2, _CMP_GT_OQ);
    __m256d x = _mm256_blendv_pd(_mm256_sub_pd(u, one),
                                 _mm256_fmsub_pd(u, _mm256_set1_pd(0.5), one), big);
    __m256d e = _mm256_and_pd(big, one);

    __m256d y = _mm256_mul_pd(x, x);
    __m256d p = _mm256_fmadd_pd(kLogP0, x, kLogP1);
    p = _mm256_fmadd_pd(p, x, kLogP2);
    p = _mm256_fmadd_pd(p, x, kLogP3);
    p = _mm256_fmadd_pd(p, x, kLogP4);
    p = _mm256_fmadd_pd(p, x, kLogP5);
    __m256d q = _mm256_add_pd(x, kLogQ0);
    q = _mm256_fmadd_pd(q, x, kLogQ1);
    q = _mm256_fmadd_pd(q, x, kLogQ2);
    q = _mm256_fmadd_pd(q, x, kLogQ3);
    q = _mm256_fmadd_pd(q, x, kLogQ4);

    __m256d z = _mm256_div_pd(_mm256_mul_pd(_mm256_mul_pd(x, y), p), q);
    z = _mm256_fnmadd_pd(e, _mm256_set1_pd(2.121944400546905827679e-4), z);
    z = _mm256_fnmadd_pd(_mm256_set1_pd(0.5), y, z);
    z = _mm256_add_pd(z, x);
    z = _mm256_fmadd_pd(e, _mm256_set1_pd(0.693359375), z);

    // compensate the rounding of 1 + t; exact when t underflows into u = 1
    __m256d c = _mm256_div_pd(_mm256_sub_pd(t, _mm256_sub_pd(u, one)), u);
    return _mm256_add_pd(z, c);
}

inline __m256d log1pexp4(__m256d v) {
    const __m256d zero = _mm256_setzero_pd();
    __m256d m = _mm256_max_pd(v, zero);
    __m256d negabs = _mm256_min_pd(v, _mm256_sub_pd(zero, v));  // -|v|
    __m256d t = exp4(negabs);
    return _mm256_add_pd(m, log1p4(t));
}

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

}  // namespace

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void exp_avx2(const double* x, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, exp4(_mm256_loadu_pd(x + i)));
    for (; i < n; ++i) out[i] = std::exp(x[i]);
}

void sigmoid_avx2(const double* eta, double* p, std::size_t n) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(eta + i);
        // e = exp(-|v|); sigma = e/(1+e) for v<0, 1/(1+e) for v>=0
        __m256d negabs = _mm256_min_pd(v, _mm256_sub_pd(zero, v));
        __m256d e = exp4(negabs);
        __m256d denom = _mm256_add_pd(one, e);
        __m256d neg = _mm256_cmp_pd(v, zero, _CMP_LT_OQ);
        __m256d num = _mm256_blendv_pd(one, e, neg);
        _mm256_storeu_pd(p + i, _mm256_div_pd(num, denom));
    }
    sigmoid_scalar(eta + i, p + i, n - i);
}

void log1pexp_avx2(const double* x, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, log1pexp4(_mm256_loadu_pd(x + i)));
    log1pexp_scalar(x + i, out + i, n - i);
}

double bernoulli_negloglik_avx2(const double* eta, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(eta + i);
        __m256d term = _mm256_fnmadd_pd(_mm256_loadu_pd(y + i), v, log1pexp4(v));
        acc = _mm256_add_pd(acc, term);
    }
    double s = hsum(acc);
    if (i < n) s += bernoulli_negloglik_scalar(eta + i, y + i, n - i);
    return s;
}

void logistic_weights_avx2(const double* p, double* w, std::size_t n) {
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vp = _mm256_loadu_pd(p + i);
        _mm256_storeu_pd(w + i, _mm256_mul_pd(vp, _mm256_sub_pd(one, vp)));
    }
    for (; i < n; ++i) w[i] = p[i] * (1.0 - p[i]);
}

}  // namespace hoops::kernels::detail

#endif  // __x86_64__
