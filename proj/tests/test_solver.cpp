#include <doctest.h>

#include <cmath>

#include "fracmus/errors.hpp"
#include "fracmus/norms.hpp"
#include "fracmus/random.hpp"
#include "fracmus/sampling.hpp"
#include "fracmus/solver.hpp"

using namespace fracmus;

namespace {

ExponentExpr constant_q(double q) {
    ExponentExpr e;
    e.a = q;
    return e;
}

SolveConfig cubic(int nodes = 33) {
    SolveConfig c;
    c.family = MusielakFamily::power_constant(2.0, 0.5);
    c.domain = BoxDomain::interval(0.0, 1.0, nodes);
    c.s1 = c.s2 = 0.5;
    c.nonlinearity = Nonlinearity::power_source(constant_q(4.0), c.domain.region());
    return c;
}

double pairing(const GridFunction& g, const GridFunction& v) {
    auto w = g.domain.weights();
    double acc = 0;
    for (std::size_t i = 0; i < g.size(); ++i) acc += w[i] * g[i] * v[i];
    return acc;
}

}  // namespace

TEST_CASE("energy splits into modulars and the source primitive") {
    auto c = cubic();
    c.s2 = 0.3;
    Rng rng(1);
    auto u = sample_on(random_sample_function(rng, c.domain.region()), c.domain);
    double psi1 = modular_gagliardo(c.family, u, c.s1, c.quad);
    double psi2 = modular_gagliardo(c.family, u, c.s2, c.quad);
    std::vector<double> F(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) F[i] = std::pow(std::fabs(u[i]), 4.0) / 4.0;
    CHECK(energy(c, u) == doctest::Approx(psi1 + psi2 - integrate(c.domain, F)).epsilon(1e-12));
}

TEST_CASE("gradient matches central differences") {
    Rng rng(20);
    std::vector<SolveConfig> cfgs{cubic(), cubic()};
    cfgs[1].family = MusielakFamily::orlicz_log(2.0);
    cfgs[1].s2 = 0.35;
    cfgs[1].nonlinearity = Nonlinearity::power_source(constant_q(4.5), cfgs[1].domain.region());
    for (const auto& c : cfgs) {
        for (int k = 0; k < 10; ++k) {
            auto u = sample_on(random_sample_function(rng, c.domain.region()), c.domain);
            auto v = sample_on(random_sample_function(rng, c.domain.region()), c.domain);
            const double tau = 1e-5;
            double fd = (energy(c, linear_combination(1, u, tau, v)) - energy(c, linear_combination(1, u, -tau, v))) /
                        (2 * tau);
            CHECK(pairing(energy_gradient(c, u), v) == doctest::Approx(fd).epsilon(1e-4));
        }
    }
}

TEST_CASE("gradient of the source term is -u^3") {
    auto c = cubic();
    auto z = c;
    z.nonlinearity = Nonlinearity::zero();
    Rng rng(3);
    auto u = sample_on(random_sample_function(rng, c.domain.region()), c.domain);
    auto g = energy_gradient(c, u), g0 = energy_gradient(z, u);
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (c.domain.on_boundary(i)) continue;
        CHECK(std::fabs(g[i] - g0[i] + u[i] * u[i] * u[i]) <= 1e-12 * (1.0 + std::fabs(g0[i])));
    }
    auto zero = u.scaled(0.0);
    for (double x : energy_gradient(c, zero).values) CHECK(x == 0.0);
}

TEST_CASE("gradient needs a Dirichlet function") {
    auto c = cubic();
    auto u = make_grid_function(c.domain, std::vector<double>(c.domain.size(), 0.0), false);
    CHECK_THROWS_AS(energy_gradient(c, u), PreconditionError);
}

TEST_CASE("configuration validation") {
    auto c = cubic();
    c.nonlinearity = Nonlinearity::power_source(constant_q(2.0), c.domain.region());
    try {
        c.validate();
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("theta") != std::string::npos);
    }
    auto d = cubic();
    d.s2 = 0.7;
    CHECK_THROWS_AS(d.validate(), InputError);
    CHECK_NOTHROW(cubic().validate());
}

TEST_CASE("geometry certificate") {
    auto c = cubic();
    auto g = check_geometry(c);
    CHECK(g.r > 0.0);
    CHECK(g.rho > 0.0);
    CHECK(g.J_e < 0.0);
    CHECK(g.T > 1.0);
    CHECK(energy(c, g.e) == doctest::Approx(g.J_e));
    auto z = cubic();
    z.nonlinearity = Nonlinearity::zero();
    CHECK_THROWS_AS(check_geometry(z), GeometryError);
}

TEST_CASE("mountain pass on the cubic problem") {
    auto c = cubic(33);
    auto r = solve_mountain_pass(c);
    CHECK(r.converged);
    CHECK(r.residual <= c.mp.residual_tol);
    CHECK(r.energy > 0.0);
    CHECK(r.norm_s1 > 0.01);
    CHECK(r.nontrivial);
    CHECK(r.ps_violations == 0);
    for (std::size_t k = 1; k < r.trace_energy.size(); ++k) CHECK(r.trace_energy[k] <= r.trace_energy[k - 1]);
    // critical point: symmetric under x -> 1 - x up to the residual
    double asym = 0, peak = 0;
    for (std::size_t i = 0; i < r.u.size(); ++i) {
        asym = std::max(asym, std::fabs(std::fabs(r.u[i]) - std::fabs(r.u[r.u.size() - 1 - i])));
        peak = std::max(peak, std::fabs(r.u[i]));
    }
    CHECK(asym <= 1e-3 * peak);
    auto tests = random_sample_functions(10, 999, c.domain.region());
    std::vector<GridFunction> vs;
    for (const auto& f : tests) vs.push_back(sample_on(f, c.domain));
    CHECK(weak_residual(c, r.u, vs) <= 10 * c.mp.residual_tol);
    // the critical point is a zero of the gradient
    CHECK(check_primitive_bound(c, r.u).violations == 0);
}

TEST_CASE("weak residual") {
    auto c = cubic();
    auto tests = random_sample_functions(5, 1, c.domain.region());
    std::vector<GridFunction> vs;
    for (const auto& f : tests) vs.push_back(sample_on(f, c.domain));
    auto zero = vs[0].scaled(0.0);
    CHECK(weak_residual(c, zero, vs) == 0.0);
    CHECK(weak_residual(c, vs[1], vs) > 0.0);
}

TEST_CASE("non-convergence carries the partial result") {
    auto c = cubic();
    c.mp.max_iterations = 3;
    try {
        solve_mountain_pass(c);
        FAIL("expected SolverNonConvergence");
    } catch (const SolverNonConvergence& e) {
        CHECK_FALSE(e.result.converged);
        CHECK(e.result.iterations == 3);
        CHECK_FALSE(e.result.trace_energy.empty());
    }
}

TEST_CASE("nonlinearity checks") {
    auto c = cubic();
    CHECK(check_nonlinearity(c, 1.0, 200, 5).violations == 0);
}
