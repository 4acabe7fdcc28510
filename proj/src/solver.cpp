#include "fracmus/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fracmus/embedding.hpp"
#include "fracmus/norms.hpp"
#include "fracmus/operator.hpp"
#include "fracmus/random.hpp"
#include "fracmus/sampling.hpp"
#include "pairs.hpp"

namespace fracmus {

Nonlinearity Nonlinearity::power_source(const ExponentExpr& q, const Region& box) {
    Nonlinearity n;
    n.q = q;
    auto [lo, hi] = q.diagonal_range(box);
    n.q_lo = lo;
    n.q_hi = hi;
    const int dim = box.dim;
    std::ostringstream os;
    os << "power-source(q=" << q.describe() << ")";
    n.name = os.str();
    n.f = [q, dim](const Point& x, double t) {
        double p = q.eval_point(x, dim);
        return t == 0.0 ? 0.0 : std::pow(std::fabs(t), p - 2.0) * t;
    };
    n.F = [q, dim](const Point& x, double t) {
        double p = q.eval_point(x, dim);
        return std::pow(std::fabs(t), p) / p;
    };
    n.g = [q, dim](const Point& x, double t) { return std::pow(t, q.eval_point(x, dim) - 1.0); };
    n.G = [q, dim](const Point& x, double t) {
        double p = q.eval_point(x, dim);
        return std::pow(t, p) / p;
    };
    n.g_minus = lo;
    n.g_plus = hi;
    n.theta = lo;
    n.r = 0.0;
    n.c0 = 1.0;
    n.trivial = false;
    return n;
}

Nonlinearity Nonlinearity::zero() {
    Nonlinearity n;
    n.f = [](const Point&, double) { return 0.0; };
    n.F = [](const Point&, double) { return 0.0; };
    n.g = [](const Point&, double) { return 0.0; };
    n.G = [](const Point&, double) { return 0.0; };
    return n;
}

void SolveConfig::validate() const {
    if (!(s2 > 0.0 && s2 <= s1 && s1 < 1.0)) throw InputError("solver needs 0 < s2 <= s1 < 1");
    domain.validate();
    quad.validate();
    if (mp.path_nodes < 3) throw InputError("mountain-pass path needs at least 3 nodes");
    if (!(mp.step_factor > 0.0)) throw InputError("mountain-pass step factor must be positive");
    if (mp.max_iterations < 1) throw InputError("mountain-pass iteration limit must be positive");
    if (!(mp.residual_tol > 0.0)) throw InputError("residual tolerance must be positive");
    if (!nonlinearity.f || !nonlinearity.F) throw InputError("nonlinearity has no evaluators");
    if (!nonlinearity.trivial) {
        double pplus = family.index_hi();
        if (!(nonlinearity.theta > pplus)) {
            std::ostringstream os;
            os << "superlinearity condition fails: need theta > phi+, but theta = q- = " << nonlinearity.theta
               << " and phi+ = " << pplus;
            throw InputError(os.str());
        }
    }
}

namespace {

class Problem {
public:
    explicit Problem(const SolveConfig& cfg, const BoxDomain& d)
        : cfg_(cfg), d_(d), c1_(cfg.family, d, cfg.s1, cfg.quad), c2_(cfg.family, d, cfg.s2, cfg.quad),
          w_(d.weights()), x_(d.size()) {
        for (std::size_t i = 0; i < x_.size(); ++i) x_[i] = d.node(i);
    }

    double psi1(const std::vector<double>& u) const { return c1_.modular(u); }
    double psi(const std::vector<double>& u) const { return c1_.modular(u) + c2_.modular(u); }
    double source(const std::vector<double>& u) const {
        std::vector<double> g(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) g[i] = cfg_.nonlinearity.F(x_[i], u[i]);
        return integrate(d_, g);
    }
    double J(const std::vector<double>& u) const { return psi(u) - source(u); }

    std::vector<double> grad(const std::vector<double>& u) const {
        auto g = c1_.gradient(u);
        auto g2 = c2_.gradient(u);
        for (std::size_t i = 0; i < g.size(); ++i) g[i] = (g[i] + g2[i]) - cfg_.nonlinearity.f(x_[i], u[i]);
        return g;
    }
    // <J'(u), v> from the nodal gradient.
    double pairing(const std::vector<double>& g, const std::vector<double>& v) const {
        std::vector<double> p(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) p[i] = g[i] * v[i];
        return integrate(d_, p);
    }
    const std::vector<double>& weights() const { return w_; }

private:
    const SolveConfig& cfg_;
    BoxDomain d_;
    detail::PairContext c1_, c2_;
    std::vector<double> w_;
    std::vector<Point> x_;
};

std::vector<double> scaled(const std::vector<double>& v, double t) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = t * v[i];
    return out;
}

void require_dirichlet(const GridFunction& u) {
    if (!u.zero_outside) throw PreconditionError("energy is defined on the Dirichlet space; set support=zero-outside");
}

// Random bumps normalized to unit s1 norm.
std::vector<GridFunction> unit_directions(const SolveConfig& cfg, int count, std::uint64_t seed) {
    auto fns = random_sample_functions(count, seed, cfg.domain.region());
    std::vector<GridFunction> out;
    for (const auto& f : fns) {
        GridFunction v = sample_on(f, cfg.domain);
        double n = full_norm(cfg.family, v, cfg.s1, cfg.quad);
        if (n > 0.0) out.push_back(v.scaled(1.0 / n));
    }
    return out;
}

}  // namespace

double energy(const SolveConfig& cfg, const GridFunction& u) {
    require_dirichlet(u);
    Problem pb(cfg, u.domain);
    return pb.J(u.values);
}

GridFunction energy_gradient(const SolveConfig& cfg, const GridFunction& u) {
    require_dirichlet(u);
    Problem pb(cfg, u.domain);
    return GridFunction{u.domain, pb.grad(u.values), true};
}

GeometryCertificate check_geometry(const SolveConfig& cfg) {
    cfg.validate();
    Problem pb(cfg, cfg.domain);
    auto dirs = unit_directions(cfg, 20, cfg.seed);
    if (dirs.empty()) throw GeometryError("no admissible test directions on this grid");
    GeometryCertificate cert;
    cert.sphere_samples = static_cast<int>(dirs.size());
    double rho = 1.0;
    bool found = false;
    for (int k = 0; k < 60 && !found; ++k, rho *= 0.5) {
        double mn = std::numeric_limits<double>::infinity();
        for (const auto& v : dirs) mn = std::min(mn, pb.J(scaled(v.values, rho)));
        if (mn > 0.0) {
            cert.rho = rho;
            cert.r = mn;
            found = true;
        }
    }
    if (!found) throw GeometryError("J is not positive on any sampled sphere around 0");
    const auto& u0 = dirs.front().values;
    for (double t = 1.0; t <= cfg.mp.scan_limit; t *= 2.0) {
        double Jt = pb.J(scaled(u0, t));
        if (Jt < 0.0) {
            cert.T = t;
            cert.J_e = Jt;
            cert.e = GridFunction{cfg.domain, scaled(u0, t), true};
            return cert;
        }
    }
    std::ostringstream os;
    os << "no point e = T u0 with J(e) < 0 for T <= " << cfg.mp.scan_limit
       << "; the nonlinearity is too weak (needs theta > phi+)";
    throw GeometryError(os.str());
}

SolveResult solve_mountain_pass(const SolveConfig& cfg) {
    cfg.validate();
    SolveResult res;
    res.geometry = check_geometry(cfg);
    res.warnings = probe_growth_tail(cfg);
    const BoxDomain& d = cfg.domain;
    Problem pb(cfg, d);
    const auto& w = pb.weights();
    const int P = cfg.mp.path_nodes;

    std::vector<char> interior(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) interior[i] = d.on_boundary(i) ? 0 : 1;
    std::vector<double> basis_norm(d.size(), 0.0);
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (!interior[i]) continue;
        GridFunction e{d, std::vector<double>(d.size(), 0.0), true};
        e[i] = 1.0;
        basis_norm[i] = full_norm(cfg.family, e, cfg.s1, cfg.quad);
    }
    auto dirs = unit_directions(cfg, cfg.mp.random_directions, cfg.seed + 1);

    auto residual = [&](const std::vector<double>& g) {
        double r = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            if (interior[i]) r = std::max(r, std::fabs(w[i] * g[i]) / basis_norm[i]);
        for (const auto& v : dirs) r = std::max(r, std::fabs(pb.pairing(g, v.values)));
        return r;
    };

    // Maximum of J along the ray t -> t v.
    auto ray_max = [&](const std::vector<double>& v) -> std::pair<double, double> {
        double tend = 1.0;
        while (pb.J(scaled(v, tend)) >= 0.0) {
            tend *= 2.0;
            if (tend > cfg.mp.scan_limit) throw GeometryError("path end with negative energy not found");
        }
        int best = 1;
        double bestJ = -std::numeric_limits<double>::infinity();
        for (int k = 1; k < P; ++k) {
            double Jk = pb.J(scaled(v, tend * k / (P - 1)));
            if (Jk > bestJ) {
                bestJ = Jk;
                best = k;
            }
        }
        double a = tend * (best - 1) / (P - 1), b = tend * std::min(best + 1, P - 1) / (P - 1);
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double c = b - gr * (b - a), e = a + gr * (b - a);
        double Jc = pb.J(scaled(v, c)), Je = pb.J(scaled(v, e));
        while (b - a > 1e-10 * b) {
            if (Jc > Je) {
                b = e;
                e = c;
                Je = Jc;
                c = b - gr * (b - a);
                Jc = pb.J(scaled(v, c));
            } else {
                a = c;
                c = e;
                Jc = Je;
                e = a + gr * (b - a);
                Je = pb.J(scaled(v, e));
            }
        }
        double t = Jc > Je ? c : e;
        double Jt = std::max(Jc, Je);
        if (bestJ > Jt) return {tend * best / (P - 1), bestJ};
        return {t, Jt};
    };

    const double theta = cfg.nonlinearity.theta;
    const double pplus = cfg.family.index_hi();
    double C = 0.0;
    if (theta > 0.0 && cfg.nonlinearity.r > 0.0) {
        double sup = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i)
            for (int k = -50; k <= 50; ++k) {
                double t = cfg.nonlinearity.r * k / 50.0;
                Point x = d.node(i);
                sup = std::max(sup, cfg.nonlinearity.F(x, t) - t * cfg.nonlinearity.f(x, t) / theta);
            }
        std::vector<double> ones(d.size(), 1.0);
        C = integrate(d, ones) * sup;
    }
    res.ps_constant = C;

    auto [t0, m] = ray_max(res.geometry.e.values);
    std::vector<double> u = scaled(res.geometry.e.values, t0);
    const double eta0 = cfg.mp.step_factor * d.h_min();
    int it = 0;
    double r = 0.0;
    for (;; ++it) {
        auto g = pb.grad(u);
        for (std::size_t i = 0; i < g.size(); ++i)
            if (!interior[i]) g[i] = 0.0;
        r = residual(g);
        res.trace_energy.push_back(m);
        res.trace_residual.push_back(r);
        if (theta > 0.0) {
            double lhs = (1.0 - pplus / theta) * pb.psi1(u);
            double rhs = m - pb.pairing(g, u) / theta + C;
            if (lhs > rhs + 1e-9 * std::max(std::fabs(lhs), std::fabs(rhs))) ++res.ps_violations;
        }
        if (r <= cfg.mp.residual_tol) {
            res.converged = true;
            break;
        }
        if (it >= cfg.mp.max_iterations) break;
        double eta = eta0;
        bool accepted = false;
        for (int b = 0; b <= cfg.mp.max_backtracks; ++b, eta *= 0.5) {
            std::vector<double> cand(u.size());
            for (std::size_t i = 0; i < u.size(); ++i) cand[i] = u[i] - eta * g[i];
            auto [tc, mc] = ray_max(cand);
            if (mc <= m) {
                u = scaled(cand, tc);
                m = mc;
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
    }
    res.iterations = it;
    res.u = GridFunction{d, u, true};
    res.energy = pb.J(u);
    res.residual = r;
    res.norm_s1 = full_norm(cfg.family, res.u, cfg.s1, cfg.quad);
    res.nontrivial = res.norm_s1 > 1e-6 && res.energy > 0.0;
    if (!res.converged) {
        std::ostringstream os;
        os << "mountain pass stalled after " << it << " iterations with residual " << r << " > "
           << cfg.mp.residual_tol;
        throw SolverNonConvergence(os.str(), std::move(res));
    }
    return res;
}

double weak_residual(const SolveConfig& cfg, const GridFunction& u, const std::vector<GridFunction>& tests) {
    require_dirichlet(u);
    OperatorSpec o1{&cfg.family, cfg.s1, cfg.quad}, o2{&cfg.family, cfg.s2, cfg.quad};
    double worst = 0.0;
    for (const auto& v : tests) {
        require_dirichlet(v);
        if (!v.domain.same_grid(u.domain)) throw InputError("test function lives on a different grid");
        std::vector<double> fv(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) fv[i] = cfg.nonlinearity.f(u.domain.node(i), u[i]) * v[i];
        double val = weak_form(o1, o2, u, v) - integrate(u.domain, fv);
        double n = full_norm(cfg.family, v, cfg.s1, cfg.quad);
        if (n > 0.0) worst = std::max(worst, std::fabs(val) / n);
    }
    return worst;
}

VerificationReport check_nonlinearity(const SolveConfig& cfg, double lambda1, int samples, std::uint64_t seed,
                                      double tol) {
    const Nonlinearity& nl = cfg.nonlinearity;
    VerificationReport rep;
    rep.suite = "nonlinearity";
    rep.family = cfg.family.describe();
    Rng rng(seed);
    const Region box = cfg.domain.region();
    for (int k = 0; k < samples; ++k) {
        ++rep.samples;
        Point x = rng.point(box), y = rng.point(box);
        double t = rng.log_uniform(1e-3, 1e3) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
        rep.check_le(std::fabs(nl.f(x, t)), nl.c0 * (1.0 + nl.g(x, std::fabs(t))), tol);
        if (!nl.trivial && std::fabs(t) >= nl.r) {
            double F = nl.F(x, t);
            rep.check_le(nl.theta * F, t * nl.f(x, t), tol);
            if (F < 0.0) ++rep.violations;
        }
        double t0 = rng.log_uniform(1e-6, 1e-2);
        double Phi = cfg.family.Phi(x, y, t0);
        if (Phi > 0.0) rep.check_le(nl.F(x, t0) / Phi, 1.0 / lambda1, tol);
    }
    rep.constants["c0"] = nl.c0;
    rep.constants["theta"] = nl.theta;
    rep.constants["lambda1"] = lambda1;
    return rep;
}

VerificationReport check_primitive_bound(const SolveConfig& cfg, const GridFunction& u, double tol) {
    const Nonlinearity& nl = cfg.nonlinearity;
    VerificationReport rep;
    rep.suite = "primitive-bound";
    rep.family = cfg.family.describe();
    for (std::size_t i = 0; i < u.size(); ++i) {
        Point x = u.domain.node(i);
        double a = std::fabs(u[i]);
        ++rep.samples;
        rep.check_le(std::fabs(nl.F(x, u[i])), nl.c0 * (a + nl.G(x, a)), tol);
    }
    return rep;
}

std::vector<std::string> probe_growth_tail(const SolveConfig& cfg) {
    std::vector<std::string> warn;
    if (cfg.nonlinearity.trivial) return warn;
    const Region box = cfg.domain.region();
    Point x{0.5 * (box.lower[0] + box.upper[0]), 0.5 * (box.lower[1] + box.upper[1])};
    std::vector<double> conj;
    try {
        for (int j = 0; j <= 6; ++j) conj.push_back(conjugate_sobolev(cfg.family, x, cfg.s2, std::pow(10.0, j)));
    } catch (const DivergenceError&) {
        warn.push_back("growth tail not probed: the Sobolev conjugate at s2 is undefined (integral diverges at 0)");
        return warn;
    }
    for (double k : {0.5, 1.0, 2.0}) {
        std::vector<double> ratio;
        for (int j = 0; j <= 6; ++j) ratio.push_back(cfg.nonlinearity.G(x, k * std::pow(10.0, j)) / conj[j]);
        bool decreasing = ratio[6] < ratio[5] && ratio[5] < ratio[4];
        if (!decreasing) {
            std::ostringstream os;
            os << "growth tail G(k t) / hatPhi*(t) does not decrease up to t = 1e6 at k = " << k;
            warn.push_back(os.str());
        }
    }
    return warn;
}

}  // namespace fracmus
