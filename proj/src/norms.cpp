#include "fracmus/norms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fracmus/errors.hpp"
#include "fracmus/summation.hpp"
#include "pairs.hpp"

namespace fracmus {

ModularReport luxemburg_norm(const std::function<double(double)>& m, bool zero, const LuxemburgOptions& opt) {
    ModularReport rep;
    if (zero) return rep;
    int evals = 0;
    auto eval = [&](double lam) {
        ++evals;
        double v = m(lam);
        if (std::isnan(v)) throw InvalidModularError("modular evaluated to NaN");
        return v;
    };
    // For lam_a < lam_b the modular must satisfy m(lam_a) >= m(lam_b).
    auto not_monotone = [](double, double ma, double, double mb) { return mb > ma * (1.0 + 1e-9) + 1e-300; };
    double lo = opt.initial_lo, hi = opt.initial_hi;
    double mhi = eval(hi);
    double mlo = 0.0;
    int expansions = 0;
    if (mhi > 1.0) {
        while (mhi > 1.0) {
            if (++expansions > opt.max_expansions)
                throw DivergenceError("Luxemburg bracket not found within " + std::to_string(opt.max_expansions) +
                                      " expansions");
            lo = hi;
            mlo = mhi;
            hi = lo * opt.factor;
            mhi = eval(hi);
            if (not_monotone(lo, mlo, hi, mhi)) throw InvalidModularError("modular increases with lambda");
        }
    } else {
        mlo = eval(lo);
        if (not_monotone(lo, mlo, hi, mhi)) throw InvalidModularError("modular increases with lambda");
        while (mlo <= 1.0) {
            if (++expansions > opt.max_expansions)
                throw DivergenceError("Luxemburg bracket not found within " + std::to_string(opt.max_expansions) +
                                      " shrinks");
            double next = lo / opt.factor;
            double mn = eval(next);
            if (not_monotone(next, mn, lo, mlo)) throw InvalidModularError("modular increases with lambda");
            hi = lo;
            mhi = mlo;
            lo = next;
            mlo = mn;
        }
    }
    // Invariant: m(lo) > 1 >= m(hi).
    while ((hi - lo) > opt.tol * hi) {
        double mid = (hi > 2.0 * lo) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        double mm = eval(mid);
        if (not_monotone(lo, mlo, mid, mm) || not_monotone(mid, mm, hi, mhi))
            throw InvalidModularError("non-monotone modular during bisection");
        if (mm > 1.0) {
            lo = mid;
            mlo = mm;
        } else {
            hi = mid;
            mhi = mm;
        }
    }
    rep.norm = hi;
    rep.iterations = evals;
    rep.bracket_width = (hi - lo) / hi;
    return rep;
}

double modular_lebesgue(const MusielakFamily& fam, const GridFunction& u, double lambda) {
    const BoxDomain& d = u.domain;
    std::vector<double> g(u.size());
    const double inv = 1.0 / lambda;
    for (std::size_t i = 0; i < g.size(); ++i) {
        Point x = d.node(i);
        g[i] = fam.Phi_fast(x, x, std::fabs(u[i]) * inv);
    }
    return integrate(d, g);
}

namespace {
double hat_conjugate(const MusielakFamily& fam, const Point& x, double t) {
    if (t == 0.0) return 0.0;
    if (fam.kind() == FamilyKind::PowerConstant || fam.kind() == FamilyKind::PowerVariable)
        return conjugate_phi(fam, x, x, t);
    return conjugate_phi_legendre(fam, x, x, t);
}
}  // namespace

double modular_lebesgue_conjugate(const MusielakFamily& fam, const GridFunction& u, double lambda) {
    const BoxDomain& d = u.domain;
    std::vector<double> g(u.size());
    const double inv = 1.0 / lambda;
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = hat_conjugate(fam, d.node(i), std::fabs(u[i]) * inv);
    return integrate(d, g);
}

double modular_gagliardo(const MusielakFamily& fam, const GridFunction& u, double s, const QuadSpec& spec,
                         double lambda) {
    detail::PairContext ctx(fam, u.domain, s, spec);
    return ctx.modular(u.values, lambda);
}

double modular_psi(const MusielakFamily& fam, const GridFunction& u, double s, const QuadSpec& spec,
                   double lambda) {
    return modular_gagliardo(fam, u, s, spec, lambda) + modular_lebesgue(fam, u, lambda);
}

ModularReport norm_lebesgue(const MusielakFamily& fam, const GridFunction& u, const LuxemburgOptions& opt) {
    auto rep = luxemburg_norm([&](double lam) { return modular_lebesgue(fam, u, lam); }, u.is_zero(), opt);
    rep.modular = modular_lebesgue(fam, u);
    return rep;
}

ModularReport norm_lebesgue_conjugate(const MusielakFamily& fam, const GridFunction& u,
                                      const LuxemburgOptions& opt) {
    auto rep =
        luxemburg_norm([&](double lam) { return modular_lebesgue_conjugate(fam, u, lam); }, u.is_zero(), opt);
    rep.modular = modular_lebesgue_conjugate(fam, u);
    return rep;
}

namespace {
bool is_constant(const GridFunction& u) {
    for (double v : u.values)
        if (v != u.values.front()) return false;
    return true;
}
}  // namespace

ModularReport seminorm(const MusielakFamily& fam, const GridFunction& u, double s, const QuadSpec& spec,
                       const LuxemburgOptions& opt) {
    detail::PairContext ctx(fam, u.domain, s, spec);
    auto rep = luxemburg_norm([&](double lam) { return ctx.modular(u.values, lam); }, is_constant(u), opt);
    rep.modular = ctx.modular(u.values, 1.0);
    return rep;
}

ModularReport norm_psi(const MusielakFamily& fam, const GridFunction& u, double s, const QuadSpec& spec,
                       const LuxemburgOptions& opt) {
    detail::PairContext ctx(fam, u.domain, s, spec);
    auto psi = [&](double lam) { return ctx.modular(u.values, lam) + modular_lebesgue(fam, u, lam); };
    auto rep = luxemburg_norm(psi, u.is_zero(), opt);
    rep.modular = psi(1.0);
    return rep;
}

double full_norm(const MusielakFamily& fam, const GridFunction& u, double s, const QuadSpec& spec, double tol) {
    LuxemburgOptions opt;
    opt.tol = tol;
    return norm_lebesgue(fam, u, opt).norm + seminorm(fam, u, s, spec, opt).norm;
}

NormSummary compute_norms(const MusielakFamily& fam, const GridFunction& u, double s, const QuadSpec& spec,
                          const LuxemburgOptions& opt) {
    NormSummary out;
    auto leb = norm_lebesgue(fam, u, opt);
    auto sem = seminorm(fam, u, s, spec, opt);
    auto psi = norm_psi(fam, u, s, spec, opt);
    out.norm_lebesgue = leb.norm;
    out.seminorm = sem.norm;
    out.norm_full = leb.norm + sem.norm;
    out.modular_lebesgue = leb.modular;
    out.modular_gagliardo = sem.modular;
    out.modular_psi = psi.modular;
    out.norm_psi = psi.norm;
    out.iterations = leb.iterations + sem.iterations + psi.iterations;
    out.bracket_width = std::max({leb.bracket_width, sem.bracket_width, psi.bracket_width});
    return out;
}

std::pair<double, double> holder_pairing(const MusielakFamily& fam, const GridFunction& u, const GridFunction& v) {
    if (!u.domain.same_grid(v.domain)) throw InputError("Hoelder pairing needs functions on one grid");
    for (double x : v.values)
        if (!std::isfinite(x)) throw InputError("Hoelder pairing needs finite v");
    std::vector<double> prod(u.size());
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = u[i] * v[i];
    double lhs = std::fabs(integrate(u.domain, prod));
    double nu = norm_lebesgue(fam, u).norm;
    double nv = norm_lebesgue_conjugate(fam, v).norm;
    return {lhs, 2.0 * nu * nv};
}

VerificationReport check_norm_modular_sandwich(const MusielakFamily& fam, const GridFunction& u, double s,
                                               const QuadSpec& spec, double tol) {
    VerificationReport rep;
    rep.suite = "sandwich";
    rep.family = fam.describe();
    rep.samples = 1;
    if (u.is_zero()) {
        rep.skipped += 3;
        return rep;
    }
    auto check = [&](double nu, double m, double lo, double hi) {
        if (nu == 0.0 || std::fabs(nu - 1.0) < 1e-6) {
            ++rep.skipped;
            return;
        }
        if (nu > 1.0) {
            rep.check_le(std::pow(nu, lo), m, tol);
            rep.check_le(m, std::pow(nu, hi), tol);
        } else {
            rep.check_le(std::pow(nu, hi), m, tol);
            rep.check_le(m, std::pow(nu, lo), tol);
        }
    };
    auto leb = norm_lebesgue(fam, u);
    auto sem = seminorm(fam, u, s, spec);
    auto psi = norm_psi(fam, u, s, spec);
    check(leb.norm, leb.modular, fam.hat_index_lo(), fam.hat_index_hi());
    check(sem.norm, sem.modular, fam.index_lo(), fam.index_hi());
    check(psi.norm, psi.modular, fam.index_lo(), fam.index_hi());
    return rep;
}

}  // namespace fracmus
