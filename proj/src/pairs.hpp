#pragma once

// Internal pair-quadrature fabric shared by the norm, operator and solver
// code. A uniform grid makes every pair weight a function of the index
// offset, so per-offset tables replace per-pair distance computations.

#include <cmath>
#include <cstddef>
#include <vector>

#include "fracmus/family.hpp"
#include "fracmus/grid.hpp"

namespace fracmus::detail {

class PairGeometry {
public:
    explicit PairGeometry(const BoxDomain& d);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int dim() const { return dim_; }
    std::size_t stride() const { return static_cast<std::size_t>(2 * cols_ - 1); }

    // Table of d^{-exponent} per offset, zero on excluded offsets.
    std::vector<double> power_table(double exponent) const;
    const std::vector<double>& distances() const { return dist_; }

    // Start of the slice for a node in row/column (r0, c0) against row r1 of
    // the same layout; slice[c1] is the entry for column c1.
    const double* slice(const std::vector<double>& table, int r0, int c0, int r1) const {
        int dr = r0 > r1 ? r0 - r1 : r1 - r0;
        return table.data() + static_cast<std::size_t>(dr) * stride() + (cols_ - 1 - c0);
    }

private:
    int dim_, rows_, cols_;
    std::vector<double> dist_;
    std::vector<char> excluded_;
};

// Everything needed to evaluate Gagliardo-type double sums on one grid at
// one fractional order s.
struct PairContext {
    PairContext(const MusielakFamily& fam, const BoxDomain& d, double s, const QuadSpec& spec);

    const MusielakFamily* fam;
    BoxDomain domain;
    double s;
    PairGeometry geo;
    std::vector<double> wr, wc, w;      // row, column and nodal weights
    std::vector<Point> x;                // node coordinates
    std::vector<double> inv_dN;          // d^{-N}
    std::vector<double> inv_ds;          // d^{-s}
    std::vector<double> inv_dN2s;        // d^{-N-2s}, quadratic fast path
    std::vector<double> inv_dNs;         // d^{-N-s}
    bool quadratic;

    // Gagliardo modular of u / lambda over the grid.
    double modular(const std::vector<double>& u, double lambda = 1.0) const;
    // Nodal gradient (L2 Riesz representative) of the modular at u.
    std::vector<double> gradient(const std::vector<double>& u) const;
    // Directional derivative of the modular at u along v.
    double directional(const std::vector<double>& u, const std::vector<double>& v) const;
};

void check_pair_budget(std::size_t a, std::size_t b, const QuadSpec& spec);

}  // namespace fracmus::detail
