#include "fracmus/family.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "fracmus/errors.hpp"
#include "fracmus/random.hpp"

namespace fracmus {

namespace {

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

bool Region::contains(const Point& x, double slack) const {
    for (int k = 0; k < dim; ++k) {
        double pad = slack * std::max(1.0, upper[k] - lower[k]);
        if (!(x[k] >= lower[k] - pad && x[k] <= upper[k] + pad)) return false;
    }
    return true;
}

double Region::diameter() const {
    double s = 0.0;
    for (int k = 0; k < dim; ++k) s += (upper[k] - lower[k]) * (upper[k] - lower[k]);
    return std::sqrt(s);
}

double ExponentExpr::eval(const Point& x, const Point& y, int dim) const {
    switch (kind) {
        case Kind::Constant:
            return a;
        case Kind::Affine: {
            double s = 0.0;
            for (int k = 0; k < dim; ++k) s += x[k] + y[k];
            return a + b * 0.5 * s;
        }
        case Kind::Distance: {
            double s = 0.0;
            for (int k = 0; k < dim; ++k) s += (x[k] - y[k]) * (x[k] - y[k]);
            return a + b * std::sqrt(s);
        }
    }
    return a;
}

double ExponentExpr::eval_point(const Point& x, int dim) const {
    if (kind == Kind::Distance || kind == Kind::Constant) return a;
    double s = 0.0;
    for (int k = 0; k < dim; ++k) s += x[k];
    return a + b * s;
}

std::pair<double, double> ExponentExpr::range(const Region& r) const {
    double v0 = a, v1 = a;
    if (kind == Kind::Affine) {
        double lo = 0.0, hi = 0.0;
        for (int k = 0; k < r.dim; ++k) {
            lo += r.lower[k];
            hi += r.upper[k];
        }
        v0 = a + b * lo;
        v1 = a + b * hi;
    } else if (kind == Kind::Distance) {
        v1 = a + b * r.diameter();
    }
    return {std::min(v0, v1), std::max(v0, v1)};
}

std::pair<double, double> ExponentExpr::diagonal_range(const Region& r) const {
    if (kind == Kind::Distance) return {a, a};
    return range(r);
}

std::string ExponentExpr::describe() const {
    switch (kind) {
        case Kind::Constant:
            return "constant(" + fmt_double(a) + ")";
        case Kind::Affine:
            return "affine(" + fmt_double(a) + "," + fmt_double(b) + ")";
        case Kind::Distance:
            return "distance(" + fmt_double(a) + "," + fmt_double(b) + ")";
    }
    return "";
}

MusielakFamily MusielakFamily::power_constant(double p, double scale, Region region) {
    if (!(p > 1.0) || !std::isfinite(p))
        throw InvalidFamilyError("power-constant family needs exponent p > 1, got " + fmt_double(p));
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw InvalidFamilyError("family scale must be positive");
    MusielakFamily f;
    f.kind_ = FamilyKind::PowerConstant;
    f.name_ = "power-constant";
    f.region_ = region;
    f.p_ = p;
    f.scale_ = scale;
    f.pexpr_ = ExponentExpr{ExponentExpr::Kind::Constant, p, 0.0};
    f.lo_ = f.hi_ = f.hat_lo_ = f.hat_hi_ = p;
    return f;
}

MusielakFamily MusielakFamily::power_variable(const ExponentExpr& p, Region region, double scale) {
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw InvalidFamilyError("family scale must be positive");
    auto [lo, hi] = p.range(region);
    if (!(lo > 1.0)) throw InvalidFamilyError("power-variable family needs p(x,y) > 1 on the region; minimum is " + fmt_double(lo));
    if (!std::isfinite(hi)) throw InvalidFamilyError("power-variable exponent must be bounded");
    MusielakFamily f;
    f.kind_ = FamilyKind::PowerVariable;
    f.name_ = "power-variable";
    f.region_ = region;
    f.pexpr_ = p;
    f.p_ = p.a;
    f.scale_ = scale;
    f.lo_ = lo;
    f.hi_ = hi;
    auto [dlo, dhi] = p.diagonal_range(region);
    f.hat_lo_ = dlo;
    f.hat_hi_ = dhi;
    f.x_independent_ = (p.kind == ExponentExpr::Kind::Constant) || p.b == 0.0;
    return f;
}

MusielakFamily MusielakFamily::orlicz_log(double p, double scale, Region region) {
    if (!(p > 1.0) || !std::isfinite(p))
        throw InvalidFamilyError("orlicz-log family needs exponent p > 1, got " + fmt_double(p));
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw InvalidFamilyError("family scale must be positive");
    MusielakFamily f;
    f.kind_ = FamilyKind::OrliczLog;
    f.name_ = "orlicz-log";
    f.region_ = region;
    f.p_ = p;
    f.scale_ = scale;
    f.pexpr_ = ExponentExpr{ExponentExpr::Kind::Constant, p, 0.0};
    // t phi / Phi = p + t / ((1 + t) log(1 + t)), which decreases from p + 1
    // (t -> 0) to p (t -> infinity).
    f.lo_ = f.hat_lo_ = p;
    f.hi_ = f.hat_hi_ = p + 1.0;
    return f;
}

MusielakFamily MusielakFamily::custom(CustomFamilySpec spec) {
    if (!spec.Phi || !spec.phi) throw InvalidFamilyError("custom family needs both Phi and phi evaluators");
    if (!(spec.index_lo > 1.0) || !(spec.index_hi >= spec.index_lo) || !std::isfinite(spec.index_hi))
        throw InvalidFamilyError("custom family must declare 1 < index_lo <= index_hi < infinity");
    MusielakFamily f;
    f.kind_ = FamilyKind::Custom;
    f.name_ = spec.name;
    f.region_ = spec.region;
    f.lo_ = f.hat_lo_ = spec.index_lo;
    f.hi_ = f.hat_hi_ = spec.index_hi;
    f.symmetric_ = spec.symmetric;
    f.x_independent_ = spec.x_independent;
    f.custom_ = std::move(spec);
    return f;
}

double MusielakFamily::delta2_K1() const { return std::pow(2.0, hi_); }
double MusielakFamily::delta2_K2() const { return std::pow(2.0, hat_hi_); }

bool MusielakFamily::is_quadratic() const {
    return kind_ == FamilyKind::PowerConstant && p_ == 2.0;
}

void MusielakFamily::check_point(const Point& x) const {
    if (!region_.contains(x)) {
        std::ostringstream os;
        os << "point (" << x[0];
        if (region_.dim > 1) os << ", " << x[1];
        os << ") lies outside the family region";
        throw InputError(os.str());
    }
}

double MusielakFamily::power_at(const Point& x, const Point& y) const {
    if (kind_ == FamilyKind::PowerVariable) return pexpr_.eval(x, y, region_.dim);
    return p_;
}

double MusielakFamily::Phi_fast(const Point& x, const Point& y, double t) const {
    if (t == 0.0) return 0.0;
    switch (kind_) {
        case FamilyKind::PowerConstant:
            if (p_ == 2.0) return scale_ * t * t;
            return scale_ * std::pow(t, p_);
        case FamilyKind::PowerVariable:
            return scale_ * std::pow(t, pexpr_.eval(x, y, region_.dim));
        case FamilyKind::OrliczLog:
            return scale_ * std::pow(t, p_) * std::log1p(t);
        case FamilyKind::Custom:
            return custom_.Phi(x, y, t);
    }
    return 0.0;
}

double MusielakFamily::phi_fast(const Point& x, const Point& y, double t) const {
    if (t == 0.0) return 0.0;
    double at = std::fabs(t);
    double sg = t > 0.0 ? 1.0 : -1.0;
    double v = 0.0;
    switch (kind_) {
        case FamilyKind::PowerConstant:
            v = (p_ == 2.0) ? 2.0 * scale_ * at : scale_ * p_ * std::pow(at, p_ - 1.0);
            break;
        case FamilyKind::PowerVariable: {
            double p = pexpr_.eval(x, y, region_.dim);
            v = scale_ * p * std::pow(at, p - 1.0);
            break;
        }
        case FamilyKind::OrliczLog:
            v = scale_ * (p_ * std::pow(at, p_ - 1.0) * std::log1p(at) + std::pow(at, p_) / (1.0 + at));
            break;
        case FamilyKind::Custom:
            v = custom_.phi(x, y, at);
            break;
    }
    return sg * v;
}

double MusielakFamily::Phi(const Point& x, const Point& y, double t) const {
    if (std::isnan(t) || t < 0.0) throw InputError("Phi evaluated at negative or NaN argument");
    if (t > kMaxArgument) throw InputError("Phi argument " + fmt_double(t) + " exceeds 1e12");
    check_point(x);
    check_point(y);
    return Phi_fast(x, y, t);
}

double MusielakFamily::phi(const Point& x, const Point& y, double t) const {
    if (std::isnan(t)) throw InputError("phi evaluated at NaN argument");
    if (std::fabs(t) > kMaxArgument) throw InputError("phi argument " + fmt_double(t) + " exceeds 1e12");
    check_point(x);
    check_point(y);
    return phi_fast(x, y, t);
}

std::string MusielakFamily::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << name_;
    switch (kind_) {
        case FamilyKind::PowerConstant:
        case FamilyKind::OrliczLog:
            os << " p=" << p_;
            break;
        case FamilyKind::PowerVariable:
            os << " p=" << pexpr_.describe();
            break;
        case FamilyKind::Custom:
            os << " indices=[" << lo_ << "," << hi_ << "]";
            break;
    }
    os << " scale=" << scale_;
    return os.str();
}

// ---------------------------------------------------------------------------
// Conjugate

double conjugate_phi_small(const MusielakFamily& fam, const Point& x, const Point& y, double t) {
    if (std::isnan(t) || t < 0.0) throw InputError("conjugate evaluated at negative argument");
    if (t == 0.0) return 0.0;
    double lo = 0.0, flo = 0.0;
    double hi = 1.0;
    double fhi = fam.phi(x, y, hi);
    while (fhi <= t) {
        double next = hi * 2.0;
        if (next > MusielakFamily::kMaxArgument)
            throw DivergenceError("phi stays below " + fmt_double(t) + " up to 1e12");
        double fnext = fam.phi_fast(x, y, next);
        if (fnext < fhi) throw InvalidFamilyError("phi decreases during conjugate bracketing");
        lo = hi;
        flo = fhi;
        hi = next;
        fhi = fnext;
    }
    // shrink the lower end geometrically as well
    while (lo == 0.0) {
        double half = hi * 0.5;
        if (half < 1e-300) return 0.0;
        double fh = fam.phi_fast(x, y, half);
        if (fh > fhi) throw InvalidFamilyError("phi decreases during conjugate bracketing");
        if (fh <= t) {
            lo = half;
            flo = fh;
        } else {
            hi = half;
            fhi = fh;
        }
    }
    if (flo == t) return lo;
    std::uintmax_t iters = 100;
    auto g = [&](double v) { return fam.phi_fast(x, y, v) - t; };
    auto [a, b] = boost::math::tools::toms748_solve(g, lo, hi, flo - t, fhi - t,
                                                    boost::math::tools::eps_tolerance<double>(52), iters);
    double r = 0.5 * (a + b);
    double fr = fam.phi_fast(x, y, r);
    // rounding noise of a few ulps is tolerated
    if (fr < flo * (1.0 - 1e-12) || fr > fhi * (1.0 + 1e-12))
        throw InvalidFamilyError("phi is not monotone on the inversion bracket");
    return r;
}

double conjugate_phi(const MusielakFamily& fam, const Point& x, const Point& y, double t,
                     const ConjugateOptions& opt) {
    if (std::isnan(t) || t < 0.0) throw InputError("conjugate evaluated at negative argument");
    if (t == 0.0) return 0.0;
    if (opt.use_closed_form &&
        (fam.kind() == FamilyKind::PowerConstant || fam.kind() == FamilyKind::PowerVariable)) {
        double p = fam.power_at(x, y);
        double c = fam.scale();
        return (1.0 - 1.0 / p) * t * std::pow(t / (c * p), 1.0 / (p - 1.0));
    }
    // u = t v^2 smooths the root-type growth of phibar at 0
    auto f = [&](double v) { return v == 0.0 ? 0.0 : 2.0 * t * v * conjugate_phi_small(fam, x, y, t * v * v); };
    return boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, 0.0, 1.0, 15, opt.rel_tol);
}

double conjugate_phi_legendre(const MusielakFamily& fam, const Point& x, const Point& y, double t) {
    if (t == 0.0) return 0.0;
    double s = conjugate_phi_small(fam, x, y, t);
    return t * s - fam.Phi_fast(x, y, s);
}

// ---------------------------------------------------------------------------
// Indices and growth checks

std::pair<double, double> estimate_indices(const MusielakFamily& fam, int sample_count, std::uint64_t seed) {
    if (sample_count < 1) throw InputError("estimate_indices needs sample_count >= 1");
    Rng rng(seed);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    const int nt = 121;
    for (int s = 0; s < sample_count; ++s) {
        Point x = rng.point(fam.region());
        Point y = fam.x_independent() ? x : rng.point(fam.region());
        for (int k = 0; k < nt; ++k) {
            double t = std::pow(10.0, -6.0 + 12.0 * k / (nt - 1));
            double P = fam.Phi(x, y, t);
            if (!(P > 0.0)) throw InvalidFamilyError("Phi vanishes at t = " + fmt_double(t));
            double r = t * fam.phi(x, y, t) / P;
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
    }
    return {lo, hi};
}

VerificationReport check_growth_lemma(const MusielakFamily& fam, int samples, std::uint64_t seed, double tol) {
    VerificationReport rep;
    rep.suite = "growth";
    rep.family = fam.describe();
    Rng rng(seed);
    const double lo = fam.index_lo(), hi = fam.index_hi();
    for (int i = 0; i < samples; ++i) {
        Point x = rng.point(fam.region());
        Point y = rng.point(fam.region());
        double t = rng.log_uniform(1e-3, 1e3);
        double sig_up = rng.log_uniform(1.0 + 1e-6, 10.0);
        double sig_dn = rng.log_uniform(0.1, 1.0 - 1e-6);
        double Pt = fam.Phi(x, y, t);
        // sigma > 1
        double Pu = fam.Phi(x, y, sig_up * t);
        rep.check_le(std::pow(sig_up, lo) * Pt, Pu, tol);
        rep.check_le(Pu, std::pow(sig_up, hi) * Pt, tol);
        // sigma in (0, 1)
        double Pd = fam.Phi(x, y, sig_dn * t);
        rep.check_le(std::pow(sig_dn, hi) * Pt, Pd, tol);
        rep.check_le(Pt, std::pow(sig_dn, lo) * fam.Phi(x, y, t / sig_dn), tol);
        ++rep.samples;
    }
    rep.constants["index_lo"] = lo;
    rep.constants["index_hi"] = hi;
    rep.constants["delta2_K1"] = fam.delta2_K1();
    return rep;
}

VerificationReport check_conjugate_bound(const MusielakFamily& fam, int samples, std::uint64_t seed, double tol) {
    VerificationReport rep;
    rep.suite = "conjugate";
    rep.family = fam.describe();
    Rng rng(seed);
    ConjugateOptions numeric;
    numeric.use_closed_form = false;
    const double hi = fam.index_hi();
    double young_worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        Point x = rng.point(fam.region());
        Point y = rng.point(fam.region());
        double t = rng.log_uniform(1e-3, 1e3);
        double u = rng.log_uniform(1e-3, 1e3);
        double Pt = fam.Phi(x, y, t);
        double lhs = conjugate_phi(fam, x, y, fam.phi(x, y, t), numeric);
        rep.check_le(lhs, hi * Pt, tol);
        // Young: t u <= Phi(t) + Phibar(u).
        double rhs = Pt + conjugate_phi(fam, x, y, u, numeric);
        young_worst = std::min(young_worst, (rhs - t * u) / std::max(rhs, t * u));
        rep.check_le(t * u, rhs, tol);
        ++rep.samples;
    }
    rep.constants["index_hi"] = hi;
    rep.constants["young_min_gap"] = young_worst;
    return rep;
}

}  // namespace fracmus
