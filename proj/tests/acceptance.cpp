// Acceptance checks: one pass/fail line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracmus/embedding.hpp"
#include "fracmus/extension.hpp"
#include "fracmus/family.hpp"
#include "fracmus/norms.hpp"
#include "fracmus/random.hpp"
#include "fracmus/sampling.hpp"
#include "fracmus/solver.hpp"
#include "fracmus/suites.hpp"

using namespace fracmus;
using json = nlohmann::ordered_json;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
    json report;     // deterministic content only
    double seconds = 0.0;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

ExponentExpr affine(double a, double b) {
    ExponentExpr e;
    e.kind = ExponentExpr::Kind::Affine;
    e.a = a;
    e.b = b;
    return e;
}

// 1. Luxemburg norm of t^p against the L^p norm.
Outcome lp_oracle() {
    Outcome o;
    auto d = BoxDomain::interval(0.0, 1.0, 256);
    Rng rng(101);
    double worst = 0.0;
    json per = json::object();
    for (double p : {1.5, 2.0, 3.0}) {
        auto fam = MusielakFamily::power_constant(p);
        double w = 0.0;
        for (int i = 0; i < 100; ++i) {
            auto u = random_grid_function(rng, d, rng.log_uniform(1e-3, 1e3));
            std::vector<double> g(u.size());
            for (std::size_t k = 0; k < g.size(); ++k) g[k] = std::pow(std::fabs(u[k]), p);
            double oracle = std::pow(integrate(d, g), 1.0 / p);
            w = std::max(w, std::fabs(norm_lebesgue(fam, u).norm / oracle - 1.0));
        }
        per[fmt("p=%g", p)] = w;
        worst = std::max(worst, w);
    }
    o.report["max_rel_error"] = per;
    o.pass = worst <= 1e-8;
    o.detail = "max relative error " + fmt("%.2e", worst) + " (tol 1e-8)";
    return o;
}

// 2. Seminorm of u(x) = x on [0, 1] for Phi = t^2.
Outcome gagliardo_closed_form() {
    Outcome o;
    auto fam = MusielakFamily::power_constant(2.0);
    bool ok = true;
    double worst = 0.0;
    for (double s : {0.25, 0.5, 0.75}) {
        double exact = 1.0 / std::sqrt((1.0 - s) * (3.0 - 2.0 * s));
        std::vector<double> errs;
        for (int n : {33, 65, 129, 257}) {
            auto d = BoxDomain::interval(0.0, 1.0, n);
            auto u = make_grid_function(d, [](const Point& x) { return x[0]; });
            errs.push_back(std::fabs(seminorm(fam, u, s, QuadSpec{}).norm / exact - 1.0));
        }
        bool mono = true;
        for (std::size_t k = 1; k < errs.size(); ++k) mono = mono && errs[k] < errs[k - 1];
        ok = ok && mono && errs.back() <= 0.05;
        worst = std::max(worst, errs.back());
        o.report[fmt("s=%g", s)] = {{"rel_errors_h32_to_h256", errs}, {"monotone", mono}};
    }
    o.pass = ok;
    o.detail = "worst relative error at h=1/256 " + fmt("%.4f", worst) + " (tol 0.05), refinement monotone";
    if (!ok) o.detail += " FAILED";
    return o;
}

// 3. Inequality suites, 10^4 instances per suite per family.
Outcome inequality_suites() {
    Outcome o;
    std::vector<std::pair<std::string, MusielakFamily>> fams{
        {"power-constant", MusielakFamily::power_constant(2.0)},
        {"power-variable", MusielakFamily::power_variable(affine(1.6, 0.5), Region{})},
        {"orlicz-log", MusielakFamily::orlicz_log(2.0)}};
    SuiteOptions opt;
    opt.samples = 10000;
    opt.seed = 42;
    opt.tol = 1e-6;
    long long viol = 0, checks = 0;
    for (const auto& [name, fam] : fams) {
        for (const char* suite : {"growth", "sandwich", "holder", "conjugate", "si"}) {
            auto rep = run_suite(suite, fam, opt);
            viol += rep.violations;
            checks += rep.checks;
            o.report[name][suite] = {{"samples", rep.samples}, {"checks", rep.checks}, {"violations", rep.violations}};
        }
    }
    o.pass = viol == 0;
    o.detail = std::to_string(checks) + " checks over 5 suites x 3 families, " + std::to_string(viol) + " violations";
    return o;
}

// 4. Energy gradient against central differences.
Outcome gradient_check() {
    Outcome o;
    std::vector<std::pair<std::string, SolveConfig>> cfgs(2);
    for (auto& [name, c] : cfgs) {
        c.domain = BoxDomain::interval(0.0, 1.0, 33);
        ExponentExpr q;
        q.a = 4.0;
        c.nonlinearity = Nonlinearity::power_source(q, c.domain.region());
    }
    cfgs[0].first = "quadratic";
    cfgs[0].second.family = MusielakFamily::power_constant(2.0, 0.5);
    cfgs[1].first = "orlicz-log";
    cfgs[1].second.family = MusielakFamily::orlicz_log(2.0);
    cfgs[1].second.s2 = 0.3;
    Rng rng(404);
    double worst = 0.0;
    for (const auto& [name, c] : cfgs) {
        double w = 0.0;
        auto weights = c.domain.weights();
        for (int k = 0; k < 20; ++k) {
            auto u = sample_on(random_sample_function(rng, c.domain.region()), c.domain);
            auto v = sample_on(random_sample_function(rng, c.domain.region()), c.domain);
            const double tau = 1e-5;
            double fd = (energy(c, linear_combination(1, u, tau, v)) - energy(c, linear_combination(1, u, -tau, v))) /
                        (2 * tau);
            auto g = energy_gradient(c, u);
            double pair = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i) pair += weights[i] * g[i] * v[i];
            w = std::max(w, std::fabs(pair - fd) / std::max(std::fabs(fd), 1e-300));
        }
        o.report[name] = w;
        worst = std::max(worst, w);
    }
    o.pass = worst <= 1e-4;
    o.detail = "max relative deviation " + fmt("%.2e", worst) + " over 2 x 20 pairs (tol 1e-4)";
    return o;
}

// 5. Extension identities.
Outcome extension_identities() {
    Outcome o;
    Rng rng(505);
    auto line = BoxDomain::interval(0.0, 1.0, 33);
    auto square = BoxDomain::rectangle({0, 0}, {1, 1}, 9, 9);
    int trace_fail = 0, leb_fail = 0, gag_fail = 0, dec_fail = 0;
    double gag_max = 0.0;
    auto quad = MusielakFamily::power_constant(2.0);
    auto olog = MusielakFamily::orlicz_log(2.0);
    for (int i = 0; i < 50; ++i) {
        const BoxDomain& d = i % 2 ? square : line;
        auto u = random_grid_function(rng, d, rng.log_uniform(1e-2, 1e2));
        if (trace(extension_values(u, 3.0), d).values != u.values) ++trace_fail;
        auto r = reflect_extend(i % 3 ? quad : olog, u, 0.5, QuadSpec{});
        if (r.lebesgue_ratio != 2.0) ++leb_fail;
        gag_max = std::max(gag_max, r.modular_ratio);
        if (!(r.modular_ratio <= 4.0 * (1.0 + 1e-6))) ++gag_fail;
        auto U = random_grid_function(rng, d.truncated(3.0), rng.log_uniform(1e-2, 1e2));
        auto dec = decompose(U, d, 3.0);
        if (!dec.trace_of_kernel_zero || !dec.reconstruction_exact) ++dec_fail;
    }
    o.report = {{"trace_extend_mismatches", trace_fail},
                {"lebesgue_ratio_not_2", leb_fail},
                {"gagliardo_ratio_max", gag_max},
                {"gagliardo_ratio_above_4", gag_fail},
                {"decomposition_failures", dec_fail}};
    o.pass = trace_fail == 0 && leb_fail == 0 && gag_fail == 0 && dec_fail == 0;
    o.detail = "50 functions: trace mismatches " + std::to_string(trace_fail) + ", Lebesgue ratio != 2: " +
               std::to_string(leb_fail) + ", max Gagliardo ratio " + fmt("%.4f", gag_max) +
               ", decomposition failures " + std::to_string(dec_fail);
    return o;
}

// 6. Embedding constants.
Outcome embedding_constants() {
    Outcome o;
    EmbeddingOptions opt;
    opt.samples = 100;
    opt.seed = 606;
    opt.stability = 0.2;
    bool ok = true;
    std::vector<std::pair<std::string, MusielakFamily>> fams{{"power-constant", MusielakFamily::power_constant(2.0)},
                                                             {"orlicz-log", MusielakFamily::orlicz_log(2.0)}};
    std::string detail;
    for (const auto& [name, fam] : fams) {
        auto order = check_order_embedding(fam, 0.5, 0.25, opt);
        auto poin = check_poincare(fam, 0.5, opt);
        auto leb = check_lebesgue_embeddings(fam, 0.5, 0.4, opt);
        double drift = std::fabs(poin.gamma_refined / poin.gamma_emp - 1.0);
        bool fam_ok = order.violations == 0 && poin.report.violations == 0 && leb.violations == 0 && drift <= 0.2;
        ok = ok && fam_ok;
        o.report[name] = {{"order_violations", order.violations},
                          {"order_samples", order.samples},
                          {"gamma", poin.gamma_emp},
                          {"gamma_refined", poin.gamma_refined},
                          {"poincare_violations", poin.report.violations},
                          {"lebesgue_violations", leb.violations},
                          {"lebesgue_checks", leb.checks},
                          {"lebesgue_constants", leb.constants}};
        detail += name + ": order viol " + std::to_string(order.violations) + ", gamma drift " + fmt("%.3f", drift) +
                  ", L^q viol " + std::to_string(leb.violations) + "; ";
    }
    o.pass = ok;
    o.detail = detail.substr(0, detail.size() - 2);
    return o;
}

// 7. End-to-end mountain-pass solve.
Outcome end_to_end_solve() {
    Outcome o;
    SolveConfig c;
    c.family = MusielakFamily::power_constant(2.0, 0.5);
    c.domain = BoxDomain::interval(0.0, 1.0, 65);
    c.s1 = c.s2 = 0.5;
    ExponentExpr q;
    q.a = 4.0;
    c.nonlinearity = Nonlinearity::power_source(q, c.domain.region());
    c.seed = 7;
    SolveResult r;
    bool converged = true;
    try {
        r = solve_mountain_pass(c);
    } catch (const SolverNonConvergence& e) {
        r = e.result;
        converged = false;
    }
    auto held = random_sample_functions(20, 70707, c.domain.region());
    std::vector<GridFunction> vs;
    for (const auto& f : held) vs.push_back(sample_on(f, c.domain));
    double wr = weak_residual(c, r.u, vs);
    bool mono = true;
    for (std::size_t k = 1; k < r.trace_energy.size(); ++k) mono = mono && r.trace_energy[k] <= r.trace_energy[k - 1];
    o.report = {{"converged", converged}, {"iterations", r.iterations}, {"energy", r.energy},
                {"residual", r.residual},  {"held_out_residual", wr},     {"norm_s1", r.norm_s1},
                {"trace_monotone", mono},  {"trace_length", r.trace_energy.size()}};
    o.pass = converged && r.iterations <= 5000 && wr <= 1e-4 && r.energy > 0.0 && r.norm_s1 > 0.01 && mono;
    o.detail = std::to_string(r.iterations) + " iterations, held-out residual " + fmt("%.2e", wr) + ", J(u) " +
               fmt("%.4f", r.energy) + ", norm " + fmt("%.4f", r.norm_s1) + (mono ? ", trace nonincreasing" :
               ", trace NOT monotone");
    return o;
}

Outcome timed(const std::function<Outcome()>& f) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o = f();
    o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
        double budget;  // seconds, 0 for none
    };
    std::vector<Criterion> cs{{"L^p oracle", lp_oracle, 10.0},
                              {"Gagliardo closed form", gagliardo_closed_form, 0.0},
                              {"inequality suites", inequality_suites, 120.0},
                              {"gradient check", gradient_check, 0.0},
                              {"extension identities", extension_identities, 0.0},
                              {"embedding constants", embedding_constants, 0.0},
                              {"end-to-end solve", end_to_end_solve, 300.0}};
    int failed = 0;
    std::vector<std::string> first;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        Outcome o = timed(cs[i].run);
        bool in_time = cs[i].budget == 0.0 || o.seconds < cs[i].budget;
        bool pass = o.pass && in_time;
        failed += !pass;
        std::string t = fmt("%.1fs", o.seconds);
        if (cs[i].budget > 0.0) t += fmt(" of %.0fs budget", cs[i].budget);
        std::printf("criterion %zu [%s]: %s: %s (%s)\n", i + 1, cs[i].name, pass ? "PASS" : "FAIL", o.detail.c_str(),
                    t.c_str());
        std::fflush(stdout);
        first.push_back(o.report.dump());
    }
    // 8. Rerun 1-7 and compare reports byte for byte.
    int differing = 0;
    for (std::size_t i = 0; i < cs.size(); ++i)
        if (cs[i].run().report.dump() != first[i]) ++differing;
    bool det = differing == 0;
    failed += !det;
    std::printf("criterion 8 [determinism]: %s: %d of 7 reports differ on rerun\n", det ? "PASS" : "FAIL", differing);
    return failed == 0 ? 0 : 1;
}
