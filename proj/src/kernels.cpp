#include "fracmus/kernels.hpp"

#include <atomic>
#include <cmath>

namespace fracmus::kernels {

#if defined(FRACMUS_HAVE_AVX2)
// Defined in kernels_avx2.cpp, compiled with -mavx2 -mfma.
const Table& avx2_impl();
#endif

namespace {

inline void neumaier(double& s, double& c, double x) {
    double t = s + x;
    if (std::fabs(s) >= std::fabs(x))
        c += (s - t) + x;
    else
        c += (x - t) + s;
    s = t;
}

double wsq_diff_ref(double ui, const double* u, const double* w, const double* T, std::size_t n) {
    double s = 0.0, c = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double d = ui - u[k];
        neumaier(s, c, w[k] * T[k] * (d * d));
    }
    return s + c;
}

double w_diff_ref(double ui, const double* u, const double* w, const double* T, std::size_t n) {
    double s = 0.0, c = 0.0;
    for (std::size_t k = 0; k < n; ++k) neumaier(s, c, w[k] * T[k] * (ui - u[k]));
    return s + c;
}

double wdiff_prod_ref(double ui, double vi, const double* u, const double* v, const double* w, const double* T,
                      std::size_t n) {
    double s = 0.0, c = 0.0;
    for (std::size_t k = 0; k < n; ++k) neumaier(s, c, w[k] * T[k] * ((ui - u[k]) * (vi - v[k])));
    return s + c;
}

const Table kScalar{"scalar", wsq_diff_ref, w_diff_ref, wdiff_prod_ref};

bool cpu_has_avx2() {
#if defined(FRACMUS_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

std::atomic<bool> g_force_scalar{false};

}  // namespace

const Table& scalar_table() { return kScalar; }

const Table* avx2_table() {
#if defined(FRACMUS_HAVE_AVX2)
    static const bool ok = cpu_has_avx2();
    return ok ? &avx2_impl() : nullptr;
#else
    return nullptr;
#endif
}

const Table& active() {
    if (g_force_scalar.load(std::memory_order_relaxed)) return kScalar;
    const Table* t = avx2_table();
    return t ? *t : kScalar;
}

void force_scalar(bool on) { g_force_scalar = on; }

}  // namespace fracmus::kernels
