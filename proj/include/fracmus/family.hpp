#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>

#include "fracmus/report.hpp"

namespace fracmus {

using Point = std::array<double, 2>;

// Axis-aligned closed box used to validate evaluation points.
struct Region {
    int dim = 1;
    Point lower{0.0, 0.0};
    Point upper{1.0, 1.0};

    bool contains(const Point& x, double slack = 1e-12) const;
    double diameter() const;
};

// Named exponent expressions. Two-point forms are symmetric in (x, y):
//   constant: a
//   affine:   a + b * sum_k (x_k + y_k) / 2
//   distance: a + b * |x - y|
// The one-point form (used by source terms) is a + b * sum_k x_k.
struct ExponentExpr {
    enum class Kind { Constant, Affine, Distance };
    Kind kind = Kind::Constant;
    double a = 2.0;
    double b = 0.0;

    double eval(const Point& x, const Point& y, int dim) const;
    double eval_point(const Point& x, int dim) const;
    // Range over region x region (two-point form).
    std::pair<double, double> range(const Region& r) const;
    // Range over the diagonal x = y, equal to the one-point range.
    std::pair<double, double> diagonal_range(const Region& r) const;
    std::string describe() const;
};

enum class FamilyKind { PowerConstant, PowerVariable, OrliczLog, Custom };

struct CustomFamilySpec {
    std::string name = "custom";
    std::function<double(const Point&, const Point&, double)> Phi;
    std::function<double(const Point&, const Point&, double)> phi;
    double index_lo = 2.0;
    double index_hi = 2.0;
    bool symmetric = true;
    bool x_independent = false;
    Region region;
};

// Evaluator bundle for Phi(x, y, t), its derivative phi, and the growth
// indices of the family. Evaluation is pure and thread-safe.
class MusielakFamily {
public:
    static constexpr double kMaxArgument = 1e12;

    // scale * t^p
    static MusielakFamily power_constant(double p, double scale = 1.0,
                                         Region region = {});
    // scale * t^{p(x,y)}
    static MusielakFamily power_variable(const ExponentExpr& p, Region region,
                                         double scale = 1.0);
    // scale * t^p * log(1 + t)
    static MusielakFamily orlicz_log(double p, double scale = 1.0,
                                     Region region = {});
    static MusielakFamily custom(CustomFamilySpec spec);

    FamilyKind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    const Region& region() const { return region_; }
    double index_lo() const { return lo_; }
    double index_hi() const { return hi_; }
    // Delta_2 constant K with Phi(2t) <= K Phi(t).
    double delta2_K1() const;
    bool symmetric() const { return symmetric_; }
    // Phi does not depend on (x, y).
    bool x_independent() const { return x_independent_; }
    // Constant power family with p == 2: Phi = scale * t^2.
    bool is_quadratic() const;
    double scale() const { return scale_; }
    // Exponent for PowerConstant / OrliczLog; base value for PowerVariable.
    double exponent() const { return p_; }
    const ExponentExpr& exponent_expr() const { return pexpr_; }

    // Checked evaluation: rejects t < 0, t > kMaxArgument and points outside
    // the region.
    double Phi(const Point& x, const Point& y, double t) const;
    // Odd extension of the derivative.
    double phi(const Point& x, const Point& y, double t) const;

    // Unchecked fast paths for quadrature loops (t >= 0 assumed for Phi).
    double Phi_fast(const Point& x, const Point& y, double t) const;
    double phi_fast(const Point& x, const Point& y, double t) const;
    // Exponent at (x, y) for power families.
    double power_at(const Point& x, const Point& y) const;

    // Hat family: Phi_x(t) = Phi(x, x, t).
    double hat_Phi(const Point& x, double t) const { return Phi(x, x, t); }
    double hat_phi(const Point& x, double t) const { return phi(x, x, t); }
    // Growth indices of the hat family (ranges over the diagonal).
    double hat_index_lo() const { return hat_lo_; }
    double hat_index_hi() const { return hat_hi_; }
    double delta2_K2() const;

    // Config-facing description (family name and parameters).
    std::string describe() const;

private:
    void check_point(const Point& x) const;

    FamilyKind kind_ = FamilyKind::PowerConstant;
    std::string name_;
    Region region_;
    double p_ = 2.0;
    double scale_ = 1.0;
    ExponentExpr pexpr_;
    double lo_ = 2.0, hi_ = 2.0;
    double hat_lo_ = 2.0, hat_hi_ = 2.0;
    bool symmetric_ = true;
    bool x_independent_ = true;
    CustomFamilySpec custom_;
};

// Options for the numerical conjugate.
struct ConjugateOptions {
    double rel_tol = 1e-11;
    bool use_closed_form = true;  // power families
};

// phibar(t) = sup{s : phi(s) <= t} by geometric bracketing and a TOMS 748 solve.
double conjugate_phi_small(const MusielakFamily& fam, const Point& x,
                           const Point& y, double t);
// Conjugate Phibar(t) = integral_0^t phibar.
double conjugate_phi(const MusielakFamily& fam, const Point& x, const Point& y,
                     double t, const ConjugateOptions& opt = {});
// Same value via the Legendre identity Phibar(phi(s)) = s phi(s) - Phi(s).
double conjugate_phi_legendre(const MusielakFamily& fam, const Point& x,
                              const Point& y, double t);

// Sampled min / max of t phi(t) / Phi(t) over log-spaced t and random (x, y).
std::pair<double, double> estimate_indices(const MusielakFamily& fam,
                                           int sample_count,
                                           std::uint64_t seed);

// Randomized check of the four scaling inequalities bounding Phi(sigma t)
// by powers of sigma.
VerificationReport check_growth_lemma(const MusielakFamily& fam, int samples,
                                      std::uint64_t seed, double tol = 1e-6);

// Randomized check of Phibar(phi(t)) <= index_hi * Phi(t) (numerical
// conjugate) together with Young's inequality t u <= Phi(t) + Phibar(u).
VerificationReport check_conjugate_bound(const MusielakFamily& fam,
                                         int samples, std::uint64_t seed,
                                         double tol = 1e-6);

}  // namespace fracmus
