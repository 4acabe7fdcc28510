#pragma once

#include <functional>
#include <utility>

#include "fracmus/family.hpp"
#include "fracmus/grid.hpp"
#include "fracmus/report.hpp"

namespace fracmus {

struct ModularReport {
    double modular = 0.0;        // modular at lambda = 1
    double norm = 0.0;           // Luxemburg value
    int iterations = 0;          // modular evaluations spent
    double bracket_width = 0.0;  // final relative bracket width
};

struct LuxemburgOptions {
    double tol = 1e-10;       // relative bracket width
    double initial_lo = 1e-8;
    double initial_hi = 1.0;
    double factor = 4.0;
    int max_expansions = 200;
};

// inf{lambda > 0 : m(lambda) <= 1} for a non-increasing m(lambda), where the
// caller supplies m(lambda) = modular(u / lambda). `zero` short-circuits the
// identically-zero function.
ModularReport luxemburg_norm(const std::function<double(double)>& modular_of_scaled, bool zero,
                             const LuxemburgOptions& opt = {});

// Lebesgue modular of the hat family: integral of Phi_x(|u(x)|).
double modular_lebesgue(const MusielakFamily& fam, const GridFunction& u, double lambda = 1.0);
// Same for the conjugate hat family.
double modular_lebesgue_conjugate(const MusielakFamily& fam, const GridFunction& u, double lambda = 1.0);
// Gagliardo modular over the grid of u (Omega x Omega).
double modular_gagliardo(const MusielakFamily& fam, const GridFunction& u, double s, const QuadSpec& spec,
                         double lambda = 1.0);
// Full modular: Gagliardo plus Lebesgue.
double modular_psi(const MusielakFamily& fam, const GridFunction& u, double s, const QuadSpec& spec,
                   double lambda = 1.0);

ModularReport norm_lebesgue(const MusielakFamily& fam, const GridFunction& u, const LuxemburgOptions& opt = {});
ModularReport norm_lebesgue_conjugate(const MusielakFamily& fam, const GridFunction& u,
                                      const LuxemburgOptions& opt = {});
ModularReport seminorm(const MusielakFamily& fam, const GridFunction& u, double s, const QuadSpec& spec,
                       const LuxemburgOptions& opt = {});
// Luxemburg norm of the full modular.
ModularReport norm_psi(const MusielakFamily& fam, const GridFunction& u, double s, const QuadSpec& spec,
                       const LuxemburgOptions& opt = {});

// Lebesgue norm plus seminorm.
double full_norm(const MusielakFamily& fam, const GridFunction& u, double s, const QuadSpec& spec,
                 double tol = 1e-10);

struct NormSummary {
    double norm_lebesgue = 0.0;
    double seminorm = 0.0;
    double norm_full = 0.0;
    double modular_lebesgue = 0.0;
    double modular_gagliardo = 0.0;
    double modular_psi = 0.0;
    double norm_psi = 0.0;
    int iterations = 0;
    double bracket_width = 0.0;
};
NormSummary compute_norms(const MusielakFamily& fam, const GridFunction& u, double s, const QuadSpec& spec,
                          const LuxemburgOptions& opt = {});

// (|integral u v|, 2 ||u|| ||v||_conjugate).
std::pair<double, double> holder_pairing(const MusielakFamily& fam, const GridFunction& u, const GridFunction& v);

// Norm / modular power sandwich for the Lebesgue, Gagliardo and full pairs.
// Values of the norm within 1e-6 of 1, and zero norms, are skipped.
VerificationReport check_norm_modular_sandwich(const MusielakFamily& fam, const GridFunction& u, double s,
                                               const QuadSpec& spec, double tol = 1e-6);

}  // namespace fracmus
