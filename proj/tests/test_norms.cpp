#include <doctest.h>

#include <cmath>

#include "fracmus/errors.hpp"
#include "fracmus/norms.hpp"
#include "fracmus/random.hpp"
#include "fracmus/sampling.hpp"

using namespace fracmus;

TEST_CASE("Luxemburg norm of t^p is the L^p norm") {
    auto d = BoxDomain::interval(0.0, 1.0, 129);
    Rng rng(21);
    for (double p : {1.5, 2.0, 3.0}) {
        auto fam = MusielakFamily::power_constant(p);
        for (int i = 0; i < 10; ++i) {
            auto u = random_grid_function(rng, d, rng.log_uniform(1e-2, 1e2));
            std::vector<double> g(u.size());
            for (std::size_t k = 0; k < g.size(); ++k) g[k] = std::pow(std::fabs(u[k]), p);
            double oracle = std::pow(integrate(d, g), 1.0 / p);
            auto r = norm_lebesgue(fam, u);
            CHECK(r.norm == doctest::Approx(oracle).epsilon(1e-9));
            CHECK(r.bracket_width <= 1e-10);
        }
    }
}

TEST_CASE("Luxemburg norm of the zero function") {
    auto d = BoxDomain::interval(0.0, 1.0, 9);
    auto u = make_grid_function(d, std::vector<double>(9, 0.0));
    auto fam = MusielakFamily::orlicz_log(2.0);
    CHECK(norm_lebesgue(fam, u).norm == 0.0);
    CHECK(seminorm(fam, u, 0.5, QuadSpec{}).norm == 0.0);
}

TEST_CASE("norm is homogeneous and modular is not") {
    auto d = BoxDomain::interval(0.0, 1.0, 33);
    Rng rng(2);
    auto u = sample_on(random_sample_function(rng, d.region()), d);
    auto fam = MusielakFamily::orlicz_log(2.0);
    QuadSpec q;
    double n1 = seminorm(fam, u, 0.5, q).norm;
    double n2 = seminorm(fam, u.scaled(-3.0), 0.5, q).norm;
    CHECK(n2 == doctest::Approx(3.0 * n1).epsilon(1e-9));
    double m1 = modular_gagliardo(fam, u, 0.5, q);
    double m3 = modular_gagliardo(fam, u.scaled(3.0), 0.5, q);
    CHECK(m3 > 9.0 * m1);
    // modular at lambda equals modular of u / lambda
    CHECK(modular_gagliardo(fam, u, 0.5, q, 2.0) == doctest::Approx(modular_gagliardo(fam, u.scaled(0.5), 0.5, q)));
}

TEST_CASE("unit norm means unit modular") {
    auto d = BoxDomain::interval(0.0, 1.0, 33);
    Rng rng(4);
    auto u = sample_on(random_sample_function(rng, d.region()), d);
    auto fam = MusielakFamily::orlicz_log(1.7);
    QuadSpec q;
    double n = norm_psi(fam, u, 0.3, q).norm;
    CHECK(modular_psi(fam, u, 0.3, q, n) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("Gagliardo seminorm of the identity converges to the closed form") {
    auto fam = MusielakFamily::power_constant(2.0);
    QuadSpec q;
    for (double s : {0.25, 0.5, 0.75}) {
        double exact = 1.0 / std::sqrt((1.0 - s) * (3.0 - 2.0 * s));
        double prev = INFINITY;
        for (int n : {33, 65, 129}) {
            auto d = BoxDomain::interval(0.0, 1.0, n);
            auto u = make_grid_function(d, [](const Point& x) { return x[0]; });
            double err = std::fabs(seminorm(fam, u, s, q).norm / exact - 1.0);
            CHECK(err < prev);
            prev = err;
        }
        CHECK(prev < 0.1);
    }
}

TEST_CASE("seminorm vanishes on constants only") {
    auto d = BoxDomain::rectangle({0, 0}, {1, 1}, 7, 7);
    auto c = make_grid_function(d, [](const Point&) { return 2.5; });
    auto fam = MusielakFamily::power_constant(2.0);
    CHECK(modular_gagliardo(fam, c, 0.5, QuadSpec{}) == 0.0);
    auto x = make_grid_function(d, [](const Point& p) { return p[0] * p[1]; });
    CHECK(modular_gagliardo(fam, x, 0.5, QuadSpec{}) > 0.0);
}

TEST_CASE("sandwich and Hoelder inequalities on samples") {
    auto d = BoxDomain::interval(0.0, 1.0, 17);
    Rng rng(8);
    ExponentExpr e;
    e.kind = ExponentExpr::Kind::Distance;
    e.a = 1.8;
    e.b = 0.6;
    std::vector<MusielakFamily> fams{MusielakFamily::power_constant(3.0), MusielakFamily::orlicz_log(2.0),
                                     MusielakFamily::power_variable(e, d.region())};
    for (const auto& fam : fams) {
        for (int i = 0; i < 5; ++i) {
            auto u = random_grid_function(rng, d, rng.log_uniform(1e-2, 1e2));
            CHECK(check_norm_modular_sandwich(fam, u, 0.4, QuadSpec{}).violations == 0);
            auto v = random_grid_function(rng, d);
            auto [lhs, rhs] = holder_pairing(fam, u, v);
            CHECK(lhs <= rhs * (1 + 1e-9));
        }
    }
}

TEST_CASE("full norm is Lebesgue plus seminorm") {
    auto d = BoxDomain::interval(0.0, 1.0, 17);
    Rng rng(1);
    auto u = random_grid_function(rng, d);
    auto fam = MusielakFamily::power_constant(2.0);
    QuadSpec q;
    auto s = compute_norms(fam, u, 0.5, q);
    CHECK(s.norm_full == doctest::Approx(s.norm_lebesgue + s.seminorm).epsilon(1e-9));
    CHECK(s.norm_psi <= s.norm_full * (1 + 1e-9));
}
