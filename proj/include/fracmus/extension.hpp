#pragma once

#include <map>
#include <string>
#include <vector>

#include "fracmus/family.hpp"
#include "fracmus/grid.hpp"

namespace fracmus {

// Lipschitz cutoff with values in [0, 1].
struct CutoffFunction {
    GridFunction values;
    double lipschitz = 1.0;

    // Throws PreconditionError when a value leaves [0, 1] or a neighbour
    // difference quotient exceeds lipschitz * (1 + 1e-6).
    void validate() const;
};

struct ExtensionResult {
    GridFunction extended;
    // Gagliardo modular of the extension over its grid divided by that of the
    // input (1 when both vanish).
    double modular_ratio = 1.0;
    // Lebesgue modular ratio (reflection only; 1 otherwise).
    double lebesgue_ratio = 1.0;
    // Empirical norm constant (full extension) or lemma constant.
    double norm_bound = 1.0;
    std::map<std::string, double> details;
};

struct CutoffResult {
    GridFunction product;
    double norm_product = 0.0;      // Lebesgue norm of psi u
    double norm_u = 0.0;            // Lebesgue norm of u
    double seminorm_product = 0.0;  // seminorm of psi u
    double seminorm_u = 0.0;
    double constant_C = 0.0;        // kernel constant of the cutoff estimate
    bool contraction_ok = true;
};

// Zero extension of u (vanishing on the boundary nodes) to the truncation box.
ExtensionResult zero_extend(const MusielakFamily& fam, const GridFunction& u, double s, const QuadSpec& spec);

// Even reflection across the face x_N = 0 of a half box {x_N >= 0}.
ExtensionResult reflect_extend(const MusielakFamily& fam, const GridFunction& u, double s, const QuadSpec& spec);

CutoffResult cutoff_multiply(const MusielakFamily& fam, const GridFunction& u, const CutoffFunction& psi, double s,
                             const QuadSpec& spec, double tol = 1e-8);

// Smoothstep partition of unity {psi_0, psi_1, ..., psi_2N} on the box:
// psi_0 is interior, psi_j belongs to face j. Collars have width
// collar_fraction times the shortest side.
struct Partition {
    std::vector<GridFunction> members;
    double collar = 0.0;
};
Partition build_partition(const BoxDomain& omega, double collar_fraction = 0.25);

// Values of the extension on the truncation box (no norms computed).
GridFunction extension_values(const GridFunction& u, double truncation_factor, double collar_fraction = 0.25);

// Partition-of-unity extension with the empirical norm constant
// ||ext u||_{s,Lambda} / ||u||_{s,Omega}.
ExtensionResult extend(const MusielakFamily& fam, const GridFunction& u, double s, const QuadSpec& spec,
                       double collar_fraction = 0.25);

// Restriction of a function on a larger aligned grid to omega.
GridFunction trace(const GridFunction& U, const BoxDomain& omega);

// U = kernel_part + image_part with image_part = extension of the trace of U.
// kernel_residual holds the rounding error of the subtraction, so that
// image + kernel + residual equals U exactly in real arithmetic.
struct Decomposition {
    GridFunction kernel_part;
    GridFunction image_part;
    std::vector<double> kernel_residual;
    bool trace_of_kernel_zero = false;
    bool reconstruction_exact = false;
    // Nodes where the double sum kernel + image already rounds to U.
    std::size_t plain_sum_matches = 0;
};
Decomposition decompose(const GridFunction& U, const BoxDomain& omega, double truncation_factor,
                        double collar_fraction = 0.25);

}  // namespace fracmus
