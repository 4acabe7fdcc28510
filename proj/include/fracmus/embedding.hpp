#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fracmus/family.hpp"
#include "fracmus/grid.hpp"
#include "fracmus/report.hpp"

namespace fracmus {

// Inverse of t -> hat Phi_x(t) on [0, inf).
double inverse_hat_Phi(const MusielakFamily& fam, const Point& x, double tau);

// Inverse of the Sobolev conjugate,
//   G(t) = integral_0^t hatPhi_x^{-1}(tau) tau^{-(N+s)/N} dtau.
// Throws DivergenceError when the integral diverges at 0.
double conjugate_sobolev_inverse(const MusielakFamily& fam, const Point& x, double s, double t);
// hatPhi*_{x,s}(u) = G^{-1}(u); +inf when u exceeds the range of G.
double conjugate_sobolev(const MusielakFamily& fam, const Point& x, double s, double u);

// Partial integrals of hatPhi^{-1}(tau) tau^{-(N+s)/N} over [1, T] for
// T = 10, 100, ..., t_max.
struct DivergenceProbe {
    std::vector<double> upper;
    std::vector<double> partial;
    std::string verdict;  // "diverging", "converging" or "inconclusive"
};
DivergenceProbe probe_divergence_at_infinity(const MusielakFamily& fam, const Point& x, double s,
                                             double t_max = 1e8);

// N phi- / (N - s' phi-), or +inf when N <= s' phi-.
double critical_exponent(int dim, double phi_minus, double s_prime);

struct EmbeddingSample {
    int id = 0;
    double source = 0.0;
    double target = 0.0;
    double ratio = 0.0;
    std::map<std::string, double> constants;
};

struct EmbeddingOptions {
    BoxDomain domain = BoxDomain::interval(0.0, 1.0, 33);
    int samples = 100;
    std::uint64_t seed = 1;
    QuadSpec quad;
    double tol = 1e-6;
    // Allowed relative drift of empirical constants under h -> h/2.
    double stability = 0.2;
};

// Same box with every cell halved.
BoxDomain refined(const BoxDomain& d);

// [u]_{s2} <= (c1 + d^{p (s1 - s2)}) [u]_{s1} per random sample, with c1 by
// quadrature over the pairs where |D^{s1} u| <= [u]_{s1}.
VerificationReport check_order_embedding(const MusielakFamily& fam, double s1, double s2,
                                         const EmbeddingOptions& opt,
                                         std::vector<EmbeddingSample>* samples_out = nullptr);

struct PoincareResult {
    double gamma_emp = 0.0;
    double gamma_refined = 0.0;
    double lambda1_emp = 0.0;
    double lambda1_refined = 0.0;
    VerificationReport report;
};
PoincareResult check_poincare(const MusielakFamily& fam, double s, const EmbeddingOptions& opt);

// Pointwise |t|^{hat phi-} <= c hatPhi_x(t) for t in (1, 1e6].
VerificationReport check_si_inequality(const MusielakFamily& fam, int samples, std::uint64_t seed,
                                       double tol = 1e-6);

// Sub-suites: pointwise power bound, L^q stability for
// q in {1, phi-, phi*_{s'} - margin}, sup-norm stability when s' phi- > N.
VerificationReport check_lebesgue_embeddings(const MusielakFamily& fam, double s, double s_prime,
                                             const EmbeddingOptions& opt);

// sigma(t) = hatPhi*(t)^{(N - s')/N} increasing and convex on sampled t, and
// fitted K_eps for eps in {0.5, 1, 2} reported as constants.
VerificationReport check_conjugate_sobolev_lemma(const MusielakFamily& fam, double s, double s_prime,
                                                 double tol = 1e-6);

}  // namespace fracmus
