#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fracmus/errors.hpp"
#include "fracmus/family.hpp"
#include "fracmus/grid.hpp"
#include "fracmus/report.hpp"

namespace fracmus {

// Right-hand side f(x, t) with primitive F and the growth data used by the
// structural checks: |f| <= c0 (1 + g_x(|t|)), G_x = integral of g_x,
// t f >= theta F >= 0 for |t| >= r.
struct Nonlinearity {
    std::string name = "zero";
    std::function<double(const Point&, double)> f;
    std::function<double(const Point&, double)> F;
    std::function<double(const Point&, double)> g;
    std::function<double(const Point&, double)> G;
    double g_minus = 0.0, g_plus = 0.0;
    double theta = 0.0;
    double r = 0.0;
    double c0 = 1.0;
    bool trivial = true;
    ExponentExpr q;    // PowerSource only
    double q_lo = 0.0; // range of q over the box
    double q_hi = 0.0;

    // f(x, t) = |t|^{q(x) - 2} t, F = |t|^{q(x)} / q(x).
    static Nonlinearity power_source(const ExponentExpr& q, const Region& box);
    static Nonlinearity zero();
};

struct MountainPassParams {
    int path_nodes = 21;
    double step_factor = 0.1;  // initial step = step_factor * h
    int max_backtracks = 30;
    int max_iterations = 5000;
    double residual_tol = 1e-5;
    int random_directions = 50;
    double scan_limit = 1e6;   // largest t tried for J(t u0) < 0
};

struct SolveConfig {
    MusielakFamily family = MusielakFamily::power_constant(2.0, 0.5);
    double s1 = 0.5;
    double s2 = 0.5;
    Nonlinearity nonlinearity = Nonlinearity::zero();
    BoxDomain domain = BoxDomain::interval(0.0, 1.0, 65);
    QuadSpec quad;
    MountainPassParams mp;
    std::uint64_t seed = 1;

    // Order of s1, s2, grid, and theta = q- > phi+ for power sources.
    void validate() const;
};

struct GeometryCertificate {
    double rho = 0.0;      // sphere radius in the s1 norm
    double r = 0.0;        // min of J over the sampled sphere
    int sphere_samples = 0;
    double T = 0.0;        // e = T u0
    double J_e = 0.0;
    GridFunction e;
};

struct SolveResult {
    GridFunction u;
    double energy = 0.0;
    double residual = 0.0;
    double norm_s1 = 0.0;
    int iterations = 0;
    std::vector<double> trace_energy;    // path maximum per accepted iterate
    std::vector<double> trace_residual;
    GeometryCertificate geometry;
    bool nontrivial = false;
    bool converged = false;
    // Bounded Palais-Smale surrogate along the trace:
    // (1 - phi+/theta) Psi_{s1}(u_n) <= J(u_n) - <J'(u_n), u_n>/theta + C.
    double ps_constant = 0.0;
    int ps_violations = 0;
    std::vector<std::string> warnings;
};

class SolverNonConvergence : public NonConvergenceError {
public:
    SolverNonConvergence(const std::string& what, SolveResult partial)
        : NonConvergenceError(what), result(std::move(partial)) {}
    SolveResult result;
};

// J(u) = Psi_{s1}(u) + Psi_{s2}(u) - integral F(x, u).
double energy(const SolveConfig& cfg, const GridFunction& u);
// Nodal L2 Riesz representative of J'(u).
GridFunction energy_gradient(const SolveConfig& cfg, const GridFunction& u);

GeometryCertificate check_geometry(const SolveConfig& cfg);

// Ray-path mountain pass: the path is the segment from 0 through the current
// iterate; its maximum is located by scanning and golden section and moved
// by backtracked gradient steps that never raise the path maximum.
SolveResult solve_mountain_pass(const SolveConfig& cfg);

// max over v of |<J'(u), v>| / ||v||_{s1}.
double weak_residual(const SolveConfig& cfg, const GridFunction& u, const std::vector<GridFunction>& tests);

// Sampled checks of the growth bound on f, the superlinearity condition and
// the smallness of F / Phi near 0 (against 1 / lambda1).
VerificationReport check_nonlinearity(const SolveConfig& cfg, double lambda1, int samples, std::uint64_t seed,
                                      double tol = 1e-9);
// Nodal |F(x, u)| <= c0 (|u| + G_x(|u|)).
VerificationReport check_primitive_bound(const SolveConfig& cfg, const GridFunction& u, double tol = 1e-12);
// Ratios G_x(k t) / hatPhi*_{x,s2}(t) for t up to 1e6 and k in {0.5, 1, 2};
// returns warnings for tails that do not decrease.
std::vector<std::string> probe_growth_tail(const SolveConfig& cfg);

}  // namespace fracmus
