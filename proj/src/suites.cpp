#include "fracmus/suites.hpp"

#include <cmath>

#include "fracmus/errors.hpp"
#include "fracmus/norms.hpp"
#include "fracmus/random.hpp"

namespace fracmus {

namespace {

BoxDomain small_grid(Rng& rng, const Region& r, int lo, int hi) {
    if (r.dim == 1) return BoxDomain::interval(r.lower[0], r.upper[0], rng.integer(lo, hi));
    int n0 = rng.integer(3, 4), n1 = rng.integer(3, 4);
    return BoxDomain::rectangle(r.lower, r.upper, n0, n1);
}

GridFunction random_values(Rng& rng, const BoxDomain& d) {
    double amp = rng.log_uniform(1e-3, 1e3);
    std::vector<double> v(d.size());
    for (double& x : v) x = amp * rng.normal();
    return make_grid_function(d, v, false);
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"growth",          "conjugate", "si",       "sandwich",
                                                "holder",          "order-embedding", "poincare", "lebesgue",
                                                "sobolev-conjugate"};
    return names;
}

VerificationReport check_sandwich_suite(const MusielakFamily& fam, int samples, std::uint64_t seed, double tol) {
    VerificationReport rep;
    rep.suite = "sandwich";
    rep.family = fam.describe();
    Rng rng(seed);
    QuadSpec spec;
    for (int k = 0; k < samples; ++k) {
        BoxDomain d = small_grid(rng, fam.region(), 8, 14);
        GridFunction u = random_values(rng, d);
        double s = rng.uniform(0.1, 0.9);
        rep.merge(check_norm_modular_sandwich(fam, u, s, spec, tol));
    }
    rep.suite = "sandwich";
    rep.family = fam.describe();
    return rep;
}

VerificationReport check_holder_suite(const MusielakFamily& fam, int samples, std::uint64_t seed, double tol) {
    VerificationReport rep;
    rep.suite = "holder";
    rep.family = fam.describe();
    Rng rng(seed);
    for (int k = 0; k < samples; ++k) {
        BoxDomain d = small_grid(rng, fam.region(), 4, 8);
        GridFunction u = random_values(rng, d);
        GridFunction v = random_values(rng, d);
        auto [lhs, rhs] = holder_pairing(fam, u, v);
        ++rep.samples;
        rep.check_le(lhs, rhs, tol);
    }
    return rep;
}

VerificationReport run_suite(const std::string& name, const MusielakFamily& fam, const SuiteOptions& opt) {
    EmbeddingOptions eo = opt.embed;
    eo.samples = opt.samples;
    eo.seed = opt.seed;
    eo.tol = opt.tol;
    if (name == "growth") return check_growth_lemma(fam, opt.samples, opt.seed, opt.tol);
    if (name == "conjugate") return check_conjugate_bound(fam, opt.samples, opt.seed, opt.tol);
    if (name == "si") return check_si_inequality(fam, opt.samples, opt.seed, opt.tol);
    if (name == "sandwich") return check_sandwich_suite(fam, opt.samples, opt.seed, opt.tol);
    if (name == "holder") return check_holder_suite(fam, opt.samples, opt.seed, opt.tol);
    if (name == "order-embedding") return check_order_embedding(fam, opt.s, opt.s2, eo);
    if (name == "poincare") return check_poincare(fam, opt.s, eo).report;
    if (name == "lebesgue") return check_lebesgue_embeddings(fam, opt.s, opt.s_prime, eo);
    if (name == "sobolev-conjugate") return check_conjugate_sobolev_lemma(fam, opt.s, opt.s_prime, opt.tol);
    throw InputError("unknown suite '" + name + "'");
}

}  // namespace fracmus
