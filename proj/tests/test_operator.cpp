#include <doctest.h>

#include <cmath>

#include "fracmus/errors.hpp"
#include "fracmus/norms.hpp"
#include "fracmus/operator.hpp"
#include "fracmus/random.hpp"
#include "fracmus/sampling.hpp"

using namespace fracmus;

TEST_CASE("operator on zero and constants") {
    auto d = BoxDomain::interval(0.0, 1.0, 33);
    auto fam = MusielakFamily::orlicz_log(2.0);
    QuadSpec q;
    auto z = make_grid_function(d, std::vector<double>(d.size(), 0.0), true);
    for (double v : apply_operator(OperatorSpec{&fam, 0.5, q}, z).values) CHECK(v == 0.0);
    // constant on Omega without Dirichlet zeroing, restricted to Omega
    QuadSpec inside;
    inside.truncation_factor = 0.0;
    auto c = make_grid_function(d, std::vector<double>(d.size(), 1.7));
    for (double v : apply_operator(OperatorSpec{&fam, 0.5, inside}, c).values) CHECK(v == 0.0);
}

TEST_CASE("operator on the parabola matches the principal value integral") {
    // Phi = t^2 / 2 gives a = 1; u = x (1 - x) on [0, 1], zero outside, s = 1/2.
    const int n = 65;
    const double h = 1.0 / (n - 1);
    auto d = BoxDomain::interval(0.0, 1.0, n);
    auto fam = MusielakFamily::power_constant(2.0, 0.5);
    auto u = make_grid_function(d, [](const Point& x) { return x[0] * (1.0 - x[0]); }, true);
    QuadSpec q;  // truncation box [-1, 2]
    auto Lu = apply_operator(OperatorSpec{&fam, 0.5, q}, u);
    // At x = 1/2 the integrand is 1 on Omega and u(x) / r^2 outside; the node
    // sum realizes the excluded ball of radius h / 2.
    double inside = 1.0 - h;
    double outside = 2.0 * 0.25 * (1.0 / 0.5 - 1.0 / 1.5);
    double oracle = 2.0 * (inside + outside);
    CHECK(Lu[(n - 1) / 2] == doctest::Approx(oracle).epsilon(1e-3));
}

TEST_CASE("operator is homogeneous of degree p - 1 for powers") {
    auto d = BoxDomain::interval(0.0, 1.0, 33);
    auto fam = MusielakFamily::power_constant(3.0);
    Rng rng(4);
    auto u = sample_on(random_sample_function(rng, d.region()), d);
    OperatorSpec spec{&fam, 0.3, QuadSpec{}};
    auto a = apply_operator(spec, u);
    auto b = apply_operator(spec, u.scaled(2.5));
    double scale = 0;
    for (double v : a.values) scale = std::max(scale, std::fabs(v));
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::fabs(b[i] - 6.25 * a[i]) <= 1e-8 * 6.25 * scale);
}

TEST_CASE("weak form is the derivative of the modular") {
    auto d = BoxDomain::interval(0.0, 1.0, 33);
    Rng rng(12);
    ExponentExpr e;
    e.kind = ExponentExpr::Kind::Affine;
    e.a = 1.8;
    e.b = 0.5;
    std::vector<MusielakFamily> fams{MusielakFamily::power_constant(2.0, 0.5), MusielakFamily::orlicz_log(2.0),
                                     MusielakFamily::power_variable(e, d.region())};
    for (const auto& fam : fams) {
        for (int i = 0; i < 7; ++i) {
            auto u = sample_on(random_sample_function(rng, d.region()), d);
            auto v = sample_on(random_sample_function(rng, d.region()), d);
            OperatorSpec spec{&fam, 0.5, QuadSpec{}};
            const double tau = 1e-5;
            double fd = (modular_gagliardo(fam, linear_combination(1, u, tau, v), 0.5, spec.quad) -
                         modular_gagliardo(fam, linear_combination(1, u, -tau, v), 0.5, spec.quad)) /
                        (2 * tau);
            double w = weak_form_term(spec, u, v);
            CHECK(w == doctest::Approx(fd).epsilon(1e-4));
            CHECK(weak_form(spec, spec, u, v) == doctest::Approx(2 * w).epsilon(1e-14));
        }
    }
}

TEST_CASE("weak form for the quadratic family is four times the modular") {
    auto d = BoxDomain::interval(0.0, 1.0, 33);
    auto fam = MusielakFamily::power_constant(2.0, 0.5);
    Rng rng(6);
    auto u = sample_on(random_sample_function(rng, d.region()), d);
    OperatorSpec spec{&fam, 0.5, QuadSpec{}};
    CHECK(weak_form(spec, spec, u, u) == doctest::Approx(4.0 * modular_gagliardo(fam, u, 0.5, spec.quad)).epsilon(1e-12));
    auto zero = u.scaled(0.0);
    CHECK(weak_form(spec, spec, u, zero) == 0.0);
}

TEST_CASE("operator pairing equals the weak form on Omega") {
    auto d = BoxDomain::interval(0.0, 1.0, 33);
    auto fam = MusielakFamily::orlicz_log(1.8);
    QuadSpec inside;
    inside.truncation_factor = 0.0;
    Rng rng(14);
    for (int i = 0; i < 5; ++i) {
        auto u = sample_on(random_sample_function(rng, d.region()), d);
        auto v = sample_on(random_sample_function(rng, d.region()), d);
        OperatorSpec spec{&fam, 0.4, inside};
        auto Lu = apply_operator(spec, u);
        auto w = d.weights();
        double pair = 0;
        for (std::size_t k = 0; k < u.size(); ++k) pair += Lu[k] * v[k] * w[k];
        CHECK(pair == doctest::Approx(weak_form_term(spec, u, v)).epsilon(1e-10));
    }
}

TEST_CASE("operator rejects invalid orders") {
    auto d = BoxDomain::interval(0.0, 1.0, 9);
    auto fam = MusielakFamily::power_constant(2.0);
    auto u = make_grid_function(d, std::vector<double>(9, 0.0), true);
    CHECK_THROWS_AS(apply_operator(OperatorSpec{&fam, 1.0, QuadSpec{}}, u), InputError);
    CHECK_THROWS_AS(apply_operator(OperatorSpec{nullptr, 0.5, QuadSpec{}}, u), InputError);
}
