#pragma once

#include <cstddef>

// Dense inner loops of the pair quadrature. Every kernel has a scalar
// reference version and an AVX2 version; the active table is chosen once at
// startup from the CPU features and can be pinned to scalar for testing.
// All kernels accumulate with Neumaier compensation.
namespace fracmus::kernels {

struct Table {
    const char* name;
    // sum_k w[k] * T[k] * (ui - u[k])^2
    double (*wsq_diff)(double ui, const double* u, const double* w, const double* T, std::size_t n);
    // sum_k w[k] * T[k] * (ui - u[k])
    double (*w_diff)(double ui, const double* u, const double* w, const double* T, std::size_t n);
    // sum_k w[k] * T[k] * (ui - u[k]) * (vi - v[k])
    double (*wdiff_prod)(double ui, double vi, const double* u, const double* v, const double* w,
                         const double* T, std::size_t n);
};

const Table& scalar_table();
// nullptr when the CPU or the build lacks AVX2.
const Table* avx2_table();
const Table& active();
// Pins the active table to the scalar reference (true) or restores the
// automatic choice (false).
void force_scalar(bool on);

}  // namespace fracmus::kernels
