#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fracmus/embedding.hpp"
#include "fracmus/family.hpp"
#include "fracmus/report.hpp"

namespace fracmus {

struct SuiteOptions {
    int samples = 1000;
    std::uint64_t seed = 42;
    double tol = 1e-6;
    // Orders used by the embedding suites.
    double s = 0.5;
    double s2 = 0.25;
    double s_prime = 0.2;
    EmbeddingOptions embed;
};

// growth, conjugate, si, sandwich, holder, order-embedding, poincare,
// lebesgue, sobolev-conjugate.
const std::vector<std::string>& suite_names();
VerificationReport run_suite(const std::string& name, const MusielakFamily& fam, const SuiteOptions& opt);

// Randomized norm/modular sandwich on small random grids inside the family
// region, with random orders s and random amplitudes over six decades.
VerificationReport check_sandwich_suite(const MusielakFamily& fam, int samples, std::uint64_t seed, double tol);
// |integral u v| <= 2 ||u|| ||v||_conjugate on small random grids.
VerificationReport check_holder_suite(const MusielakFamily& fam, int samples, std::uint64_t seed, double tol);

}  // namespace fracmus
