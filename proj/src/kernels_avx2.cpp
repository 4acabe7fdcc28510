// Compiled with -mavx2 -mfma. Keep this file free of standard library
// headers so no AVX2-encoded inline template leaks into other objects.
#include <immintrin.h>

#include <cstddef>

#include "fracmus/kernels.hpp"

namespace fracmus::kernels {

namespace {

inline __m256d vabs(__m256d x) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x); }

// Lane-wise Neumaier step.
inline void vneumaier(__m256d& s, __m256d& c, __m256d x) {
    __m256d t = _mm256_add_pd(s, x);
    __m256d big_s = _mm256_cmp_pd(vabs(s), vabs(x), _CMP_GE_OQ);
    __m256d a = _mm256_add_pd(_mm256_sub_pd(s, t), x);
    __m256d b = _mm256_add_pd(_mm256_sub_pd(x, t), s);
    c = _mm256_add_pd(c, _mm256_blendv_pd(b, a, big_s));
    s = t;
}

inline void sneumaier(double& s, double& c, double x) {
    double t = s + x;
    double as = s < 0 ? -s : s, ax = x < 0 ? -x : x;
    if (as >= ax)
        c += (s - t) + x;
    else
        c += (x - t) + s;
    s = t;
}

// Folds the four lanes and the scalar tail into one compensated value.
inline double finish(__m256d s, __m256d c, double ts, double tc) {
    alignas(32) double ls[4], lc[4];
    _mm256_store_pd(ls, s);
    _mm256_store_pd(lc, c);
    double S = 0.0, C = 0.0;
    for (int k = 0; k < 4; ++k) {
        sneumaier(S, C, ls[k]);
        sneumaier(S, C, lc[k]);
    }
    sneumaier(S, C, ts);
    sneumaier(S, C, tc);
    return S + C;
}

double wsq_diff_avx2(double ui, const double* u, const double* w, const double* T, std::size_t n) {
    __m256d s = _mm256_setzero_pd(), c = _mm256_setzero_pd();
    const __m256d vu = _mm256_set1_pd(ui);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d d = _mm256_sub_pd(vu, _mm256_loadu_pd(u + k));
        __m256d wt = _mm256_mul_pd(_mm256_loadu_pd(w + k), _mm256_loadu_pd(T + k));
        vneumaier(s, c, _mm256_mul_pd(wt, _mm256_mul_pd(d, d)));
    }
    double ts = 0.0, tc = 0.0;
    for (; k < n; ++k) {
        double d = ui - u[k];
        sneumaier(ts, tc, w[k] * T[k] * (d * d));
    }
    return finish(s, c, ts, tc);
}

double w_diff_avx2(double ui, const double* u, const double* w, const double* T, std::size_t n) {
    __m256d s = _mm256_setzero_pd(), c = _mm256_setzero_pd();
    const __m256d vu = _mm256_set1_pd(ui);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d d = _mm256_sub_pd(vu, _mm256_loadu_pd(u + k));
        __m256d wt = _mm256_mul_pd(_mm256_loadu_pd(w + k), _mm256_loadu_pd(T + k));
        vneumaier(s, c, _mm256_mul_pd(wt, d));
    }
    double ts = 0.0, tc = 0.0;
    for (; k < n; ++k) sneumaier(ts, tc, w[k] * T[k] * (ui - u[k]));
    return finish(s, c, ts, tc);
}

double wdiff_prod_avx2(double ui, double vi, const double* u, const double* v, const double* w, const double* T,
                       std::size_t n) {
    __m256d s = _mm256_setzero_pd(), c = _mm256_setzero_pd();
    const __m256d vu = _mm256_set1_pd(ui);
    const __m256d vv = _mm256_set1_pd(vi);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d du = _mm256_sub_pd(vu, _mm256_loadu_pd(u + k));
        __m256d dv = _mm256_sub_pd(vv, _mm256_loadu_pd(v + k));
        __m256d wt = _mm256_mul_pd(_mm256_loadu_pd(w + k), _mm256_loadu_pd(T + k));
        vneumaier(s, c, _mm256_mul_pd(wt, _mm256_mul_pd(du, dv)));
    }
    double ts = 0.0, tc = 0.0;
    for (; k < n; ++k) sneumaier(ts, tc, w[k] * T[k] * ((ui - u[k]) * (vi - v[k])));
    return finish(s, c, ts, tc);
}

const Table kAvx2{"avx2", wsq_diff_avx2, w_diff_avx2, wdiff_prod_avx2};

}  // namespace

const Table& avx2_impl() { return kAvx2; }

}  // namespace fracmus::kernels
