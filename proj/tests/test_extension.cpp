#include <doctest.h>

#include <cmath>

#include "fracmus/errors.hpp"
#include "fracmus/extension.hpp"
#include "fracmus/norms.hpp"
#include "fracmus/random.hpp"
#include "fracmus/sampling.hpp"

using namespace fracmus;

namespace {

GridFunction constant(const BoxDomain& d, double c) { return make_grid_function(d, [c](const Point&) { return c; }); }

}  // namespace

TEST_CASE("partition of unity sums to one") {
    for (auto d : {BoxDomain::interval(0.0, 1.0, 33), BoxDomain::rectangle({0, 0}, {2, 1}, 17, 9)}) {
        auto P = build_partition(d);
        CHECK(P.members.size() == static_cast<std::size_t>(2 * d.dim + 1));
        CHECK(P.collar == doctest::Approx(0.25 * (d.dim == 1 ? 1.0 : 1.0)));
        for (std::size_t i = 0; i < d.size(); ++i) {
            double s = 0;
            for (const auto& m : P.members) {
                CHECK(m[i] >= 0.0);
                CHECK(m[i] <= 1.0);
                s += m[i];
            }
            CHECK(std::fabs(s - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("trace of the extension is the identity bit for bit") {
    Rng rng(50);
    for (auto d : {BoxDomain::interval(0.0, 1.0, 33), BoxDomain::rectangle({0, 0}, {1, 1}, 9, 11)}) {
        for (int i = 0; i < 10; ++i) {
            auto u = random_grid_function(rng, d, rng.log_uniform(1e-3, 1e3));
            auto U = extension_values(u, 3.0);
            CHECK(trace(U, d).values == u.values);
        }
    }
}

TEST_CASE("extension of constants is continuous across the boundary") {
    double prev_jump = INFINITY;
    for (int n : {65, 129}) {
        auto d = BoxDomain::interval(0.0, 1.0, n);
        const double h = d.h(0), delta = 0.25;
        auto U = extension_values(constant(d, 1.0), 3.0);
        auto off = d.truncation_offset(3.0)[1];
        CHECK(trace(U, d).values == std::vector<double>(d.size(), 1.0));
        double jump = std::max(1.0 - U[off - 1], 1.0 - U[off + d.size()]);
        CHECK(jump >= 0.0);
        CHECK(jump < 0.6 * prev_jump);
        prev_jump = jump;
        // vanishes one collar away from the box
        CHECK(U[0] == 0.0);
        CHECK(U[U.size() - 1] == 0.0);
        // two smoothstep factors of slope at most 1.5 / delta
        for (std::size_t k = 1; k < U.size(); ++k) CHECK(std::fabs(U[k] - U[k - 1]) <= 3.0 * h / delta);
    }
}

TEST_CASE("full extension reports an empirical constant") {
    auto d = BoxDomain::interval(0.0, 1.0, 33);
    auto fam = MusielakFamily::power_constant(2.0);
    auto z = extend(fam, constant(d, 0.0), 0.5, QuadSpec{});
    CHECK(z.norm_bound == 1.0);
    CHECK(z.extended.is_zero());
    Rng rng(3);
    auto u = sample_on(random_sample_function(rng, d.region()), d);
    auto r = extend(fam, u, 0.5, QuadSpec{});
    CHECK(std::isfinite(r.norm_bound));
    CHECK(r.norm_bound >= 1.0 - 1e-12);
    CHECK(r.details.count("C_emp") == 1);
}

TEST_CASE("zero extension") {
    auto d = BoxDomain::interval(0.0, 1.0, 33);
    auto fam = MusielakFamily::power_constant(2.0);
    auto z = zero_extend(fam, make_grid_function(d, std::vector<double>(d.size(), 0.0), true), 0.5, QuadSpec{});
    CHECK(z.modular_ratio == 1.0);
    auto u = make_grid_function(
        d, [](const Point& x) { return x[0] > 0.25 && x[0] < 0.75 ? std::sin(M_PI * 2 * (x[0] - 0.25)) : 0.0; }, true);
    auto r = zero_extend(fam, u, 0.5, QuadSpec{});
    CHECK(trace(r.extended, d).values == u.values);
    CHECK(r.modular_ratio >= 1.0);
    CHECK(std::isfinite(r.modular_ratio));
    CHECK(std::isfinite(r.norm_bound));
    auto bad = constant(d, 1.0);
    bad.zero_outside = true;
    CHECK_THROWS_AS(zero_extend(fam, bad, 0.5, QuadSpec{}), PreconditionError);
}

TEST_CASE("reflection doubles the Lebesgue modular and at most quadruples the Gagliardo one") {
    auto d = BoxDomain::interval(0.0, 1.0, 33);
    auto fam = MusielakFamily::power_constant(2.0);
    auto x = make_grid_function(d, [](const Point& p) { return p[0]; });
    auto r = reflect_extend(fam, x, 0.5, QuadSpec{});
    CHECK(r.lebesgue_ratio == 2.0);
    CHECK(r.modular_ratio <= 4.0 * (1 + 1e-6));
    CHECK(r.extended.domain.lower[0] == -1.0);
    CHECK(r.extended.size() == 65);
    auto one = reflect_extend(fam, constant(d, 1.0), 0.5, QuadSpec{});
    CHECK(one.modular_ratio == 1.0);
    for (double v : one.extended.values) CHECK(v == 1.0);

    Rng rng(19);
    auto log = MusielakFamily::orlicz_log(2.0);
    auto sq = BoxDomain::rectangle({0, 0}, {1, 1}, 7, 7);
    for (int i = 0; i < 10; ++i) {
        auto u = random_grid_function(rng, i % 2 ? d : sq, rng.log_uniform(0.1, 10));
        auto e = reflect_extend(log, u, 0.4, QuadSpec{});
        CHECK(e.lebesgue_ratio == 2.0);
        CHECK(e.modular_ratio <= 4.0 * (1 + 1e-6));
    }
    auto shifted = BoxDomain::interval(0.5, 1.0, 9);
    CHECK_THROWS_AS(reflect_extend(fam, constant(shifted, 1.0), 0.5, QuadSpec{}), PreconditionError);
}

TEST_CASE("cutoff multiplication") {
    auto d = BoxDomain::interval(0.0, 1.0, 33);
    auto fam = MusielakFamily::power_constant(2.0);
    Rng rng(23);
    auto u = random_grid_function(rng, d);
    CutoffFunction one{constant(d, 1.0), 0.0};
    auto r = cutoff_multiply(fam, u, one, 0.5, QuadSpec{});
    CHECK(r.product.values == u.values);
    CutoffFunction zero{constant(d, 0.0), 0.0};
    auto z = cutoff_multiply(fam, u, zero, 0.5, QuadSpec{});
    CHECK(z.product.is_zero());
    CHECK(z.norm_product == 0.0);
    CHECK(z.seminorm_product == 0.0);
    // tent cutoff times 1 is the tent
    CutoffFunction tent{make_grid_function(d, [](const Point& x) { return 1.0 - std::fabs(2 * x[0] - 1); }), 2.0};
    auto t = cutoff_multiply(fam, constant(d, 1.0), tent, 0.5, QuadSpec{});
    CHECK(t.seminorm_product == doctest::Approx(seminorm(fam, tent.values, 0.5, QuadSpec{}).norm).epsilon(1e-12));
    CHECK(t.contraction_ok);
    CHECK(t.constant_C > 0.0);
    for (int i = 0; i < 10; ++i) {
        auto v = random_grid_function(rng, d, 5.0);
        auto c = cutoff_multiply(fam, v, tent, 0.5, QuadSpec{});
        CHECK(c.contraction_ok);
        CHECK(c.norm_product <= c.norm_u * (1 + 1e-8));
    }
    CutoffFunction bad{constant(d, 1.5), 1.0};
    CHECK_THROWS_AS(cutoff_multiply(fam, u, bad, 0.5, QuadSpec{}), PreconditionError);
    CutoffFunction steep{tent.values, 0.5};
    CHECK_THROWS_AS(steep.validate(), PreconditionError);
}

TEST_CASE("decomposition into kernel and image is exact") {
    auto d = BoxDomain::interval(0.0, 1.0, 17);
    auto big = d.truncated(3.0);
    Rng rng(31);
    for (int i = 0; i < 20; ++i) {
        auto U = random_grid_function(rng, big, rng.log_uniform(1e-3, 1e3));
        auto dec = decompose(U, d, 3.0);
        CHECK(dec.trace_of_kernel_zero);
        CHECK(dec.reconstruction_exact);
        for (double v : trace(dec.kernel_part, d).values) CHECK(v == 0.0);
        auto fam = MusielakFamily::power_constant(2.0);
        CHECK(std::isfinite(full_norm(fam, dec.kernel_part, 0.5, QuadSpec{})));
    }
    // U = extension of u gives an empty kernel part
    auto u = random_grid_function(rng, d);
    auto dec = decompose(extension_values(u, 3.0), d, 3.0);
    CHECK(dec.kernel_part.is_zero());
    CHECK(dec.plain_sum_matches == big.size());
    // U vanishing on Omega is its own kernel part
    auto V = extension_values(u, 3.0);
    auto off = d.truncation_offset(3.0)[1];
    for (std::size_t k = 0; k < d.size(); ++k) V[off + k] = 0.0;
    auto dv = decompose(V, d, 3.0);
    CHECK(dv.image_part.is_zero());
    CHECK(dv.kernel_part.values == V.values);
}
