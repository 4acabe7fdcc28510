#include "fracmus/extension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fracmus/errors.hpp"
#include "fracmus/norms.hpp"
#include "fracmus/parallel.hpp"
#include "fracmus/summation.hpp"

namespace fracmus {

namespace {

double smoothstep(double t) {
    t = std::clamp(t, 0.0, 1.0);
    return t * t * (3.0 - 2.0 * t);
}

double sphere_area(int dim) { return dim == 1 ? 2.0 : 2.0 * std::numbers::pi; }

double safe_ratio(double num, double den) {
    if (den == 0.0) return num == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    return num / den;
}

// Layout offset {row, col} of `small` inside `big`; throws when misaligned.
std::array<int, 2> layout_offset(const BoxDomain& small, const BoxDomain& big) {
    if (small.dim != big.dim) throw InputError("dimension mismatch between grids");
    std::array<int, 2> off{0, 0};
    for (int k = 0; k < small.dim; ++k) {
        double h = small.h(k);
        if (std::fabs(big.h(k) - h) > 1e-12 * h) throw InputError("grids have different spacing");
        double o = (small.lower[k] - big.lower[k]) / h;
        int oi = static_cast<int>(std::lround(o));
        if (std::fabs(o - oi) > 1e-9 || oi < 0 || oi + small.nodes[k] > big.nodes[k])
            throw InputError("grids are not aligned");
        off[k] = oi;
    }
    if (small.dim == 1) return {0, off[0]};
    return off;
}

// Spacing per layout axis.
std::array<double, 2> layout_h(const BoxDomain& d) { return {d.h_row(), d.h_col()}; }

// Raw partition weights at a node of omega given by layout indices.
struct PartitionEval {
    const BoxDomain& omega;
    double collar;

    // Returns psi_0 and the face members in the order
    // (row lower, row upper, col lower, col upper); unused faces are 0.
    std::array<double, 5> operator()(int r, int c) const {
        std::array<double, 5> raw{0.0, 0.0, 0.0, 0.0, 0.0};
        auto h = layout_h(omega);
        double mindist = std::numeric_limits<double>::infinity();
        auto face = [&](int slot, double dist) {
            raw[slot] = smoothstep(1.0 - dist / collar);
            mindist = std::min(mindist, dist);
        };
        if (omega.dim == 2) {
            face(1, r * h[0]);
            face(2, (omega.rows() - 1 - r) * h[0]);
        }
        face(3, c * h[1]);
        face(4, (omega.cols() - 1 - c) * h[1]);
        raw[0] = smoothstep(mindist / collar);
        double total = 0.0;
        for (double v : raw) total += v;
        for (double& v : raw) v /= total;
        double check = 0.0;
        for (double v : raw) check += v;
        if (std::fabs(check - 1.0) > 1e-12) {
            std::ostringstream os;
            os << "partition of unity sums to " << check << " at node (" << r << ", " << c << ")";
            throw InputError(os.str());
        }
        return raw;
    }
};

double collar_width(const BoxDomain& omega, double fraction) {
    if (!(fraction > 0.0 && fraction <= 0.5)) throw InputError("collar fraction must lie in (0, 0.5]");
    double side = omega.upper[0] - omega.lower[0];
    if (omega.dim == 2) side = std::min(side, omega.upper[1] - omega.lower[1]);
    return fraction * side;
}

// Coordinatewise fold of a layout index into [0, n - 1]; -1 when the point
// lies more than one side length away.
int fold(int i, int n) {
    if (i < 0) i = -i;
    else if (i > n - 1) i = 2 * (n - 1) - i;
    return (i >= 0 && i <= n - 1) ? i : -1;
}

}  // namespace

void CutoffFunction::validate() const {
    const BoxDomain& d = values.domain;
    for (std::size_t i = 0; i < values.size(); ++i) {
        double v = values[i];
        if (!(v >= 0.0 && v <= 1.0)) {
            std::ostringstream os;
            os << "cutoff value " << v << " at node " << i << " is outside [0, 1]";
            throw PreconditionError(os.str());
        }
    }
    if (!(lipschitz >= 0.0)) throw PreconditionError("cutoff Lipschitz constant must be non-negative");
    auto h = layout_h(d);
    const int R = d.rows(), C = d.cols();
    double limit = lipschitz * (1.0 + 1e-6);
    for (int r = 0; r < R; ++r)
        for (int c = 0; c < C; ++c) {
            double v = values[static_cast<std::size_t>(r) * C + c];
            if (c + 1 < C && std::fabs(values[static_cast<std::size_t>(r) * C + c + 1] - v) / h[1] > limit)
                throw PreconditionError("cutoff difference quotient exceeds the declared Lipschitz constant");
            if (r + 1 < R && std::fabs(values[static_cast<std::size_t>(r + 1) * C + c] - v) / h[0] > limit)
                throw PreconditionError("cutoff difference quotient exceeds the declared Lipschitz constant");
        }
}

ExtensionResult zero_extend(const MusielakFamily& fam, const GridFunction& u, double s, const QuadSpec& spec) {
    const BoxDomain& om = u.domain;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (om.on_boundary(i) && u[i] != 0.0)
            throw PreconditionError("zero extension needs u to vanish on the boundary of the box (support touches it)");
    double factor = spec.truncation_factor > 0.0 ? spec.truncation_factor : 3.0;
    BoxDomain big = om.truncated(factor);
    ExtensionResult res;
    res.extended = extend_by_zero(u, big);

    double m_om = modular_gagliardo(fam, u, s, spec);
    double m_big = modular_gagliardo(fam, res.extended, s, spec);
    res.modular_ratio = safe_ratio(m_big, m_om);
    res.lebesgue_ratio = safe_ratio(modular_lebesgue(fam, res.extended), modular_lebesgue(fam, u));
    res.details["gagliardo_omega"] = m_om;
    res.details["gagliardo_lambda"] = m_big;

    // Tail integral over Lambda \ Omega of dist(y, K)^{-(s p + N)}, with
    // p = 1 at distances >= 1 and p = phi+ below.
    std::vector<Point> support;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (u[i] != 0.0) support.push_back(om.node(i));
    const double N = om.dim;
    const double pplus = fam.index_hi();
    double tail = 0.0, bound = 0.0;
    if (!support.empty()) {
        auto off = layout_offset(om, big);
        auto w = big.weights();
        ExactSum acc;
        for (std::size_t j = 0; j < big.size(); ++j) {
            int r = static_cast<int>(j / big.cols()) - off[0];
            int c = static_cast<int>(j % big.cols()) - off[1];
            if (r >= 0 && r < om.rows() && c >= 0 && c < om.cols()) continue;
            Point y = big.node(j);
            double dmin = std::numeric_limits<double>::infinity();
            for (const Point& x : support) {
                double d2 = 0.0;
                for (int k = 0; k < om.dim; ++k) d2 += (x[k] - y[k]) * (x[k] - y[k]);
                dmin = std::min(dmin, d2);
            }
            dmin = std::sqrt(dmin);
            double p = dmin >= 1.0 ? 1.0 : pplus;
            acc.add(w[j] * std::pow(dmin, -(s * p + N)));
        }
        tail = acc.value();
        // Radius of the largest ball about K inside Lambda.
        double R = std::numeric_limits<double>::infinity();
        for (const Point& x : support)
            for (int k = 0; k < om.dim; ++k) R = std::min({R, x[k] - big.lower[k], big.upper[k] - x[k]});
        double S = sphere_area(om.dim);
        bound = R >= 1.0 ? S * std::pow(R, -s) / s
                         : S * ((std::pow(R, -s * pplus) - 1.0) / (s * pplus) + 1.0 / s);
        res.details["support_to_lambda_boundary"] = R;
    }
    res.details["tail_integral"] = tail;
    res.details["tail_bound_outside_lambda"] = bound;
    res.details["tail_finite"] = std::isfinite(tail) && std::isfinite(bound) ? 1.0 : 0.0;
    res.norm_bound = tail + bound;
    return res;
}

ExtensionResult reflect_extend(const MusielakFamily& fam, const GridFunction& u, double s, const QuadSpec& spec) {
    const BoxDomain& om = u.domain;
    const int axis = om.dim - 1;
    if (om.lower[axis] != 0.0)
        throw PreconditionError("reflection needs a half box with lower bound 0 on the last axis (asymmetric grid)");
    BoxDomain full = om;
    full.lower[axis] = -om.upper[axis];
    full.nodes[axis] = 2 * om.nodes[axis] - 1;
    full.validate();
    const int n = om.cols();
    GridFunction out{full, std::vector<double>(full.size(), 0.0), u.zero_outside};
    for (int r = 0; r < om.rows(); ++r)
        for (int c = 0; c < full.cols(); ++c) {
            int src = c >= n - 1 ? c - (n - 1) : (n - 1) - c;
            out.values[static_cast<std::size_t>(r) * full.cols() + c] = u.values[static_cast<std::size_t>(r) * n + src];
        }
    ExtensionResult res;
    res.extended = std::move(out);
    double l_half = modular_lebesgue(fam, u), l_full = modular_lebesgue(fam, res.extended);
    double g_half = modular_gagliardo(fam, u, s, spec), g_full = modular_gagliardo(fam, res.extended, s, spec);
    res.lebesgue_ratio = safe_ratio(l_full, l_half);
    res.modular_ratio = safe_ratio(g_full, g_half);
    res.norm_bound = 4.0;
    res.details["lebesgue_half"] = l_half;
    res.details["lebesgue_full"] = l_full;
    res.details["gagliardo_half"] = g_half;
    res.details["gagliardo_full"] = g_full;
    res.details["reflection_symmetric_family"] = fam.x_independent() ? 1.0 : 0.0;
    return res;
}

CutoffResult cutoff_multiply(const MusielakFamily& fam, const GridFunction& u, const CutoffFunction& psi, double s,
                             const QuadSpec& spec, double tol) {
    if (!u.domain.same_grid(psi.values.domain)) throw InputError("cutoff and function live on different grids");
    psi.validate();
    CutoffResult res;
    res.product = u;
    for (std::size_t i = 0; i < u.size(); ++i) res.product.values[i] = psi.values[i] * u[i];
    res.norm_product = norm_lebesgue(fam, res.product).norm;
    res.norm_u = norm_lebesgue(fam, u).norm;
    res.seminorm_product = seminorm(fam, res.product, s, spec).norm;
    res.seminorm_u = seminorm(fam, u, s, spec).norm;
    double S = sphere_area(u.domain.dim);
    double L = psi.lipschitz;
    double alpha = L < 1.0 ? 1.0 : fam.index_hi();
    res.constant_C = S / s + std::pow(L, alpha) * S / (1.0 - s);
    res.contraction_ok = res.norm_product <= res.norm_u * (1.0 + tol) && std::isfinite(res.seminorm_product);
    return res;
}

Partition build_partition(const BoxDomain& omega, double collar_fraction) {
    Partition part;
    part.collar = collar_width(omega, collar_fraction);
    PartitionEval ev{omega, part.collar};
    const int faces = 2 * omega.dim;
    part.members.assign(faces + 1, GridFunction{omega, std::vector<double>(omega.size(), 0.0), false});
    for (int r = 0; r < omega.rows(); ++r)
        for (int c = 0; c < omega.cols(); ++c) {
            auto v = ev(r, c);
            std::size_t i = static_cast<std::size_t>(r) * omega.cols() + c;
            part.members[0].values[i] = v[0];
            for (int j = 0; j < faces; ++j) part.members[j + 1].values[i] = v[omega.dim == 2 ? j + 1 : j + 3];
        }
    return part;
}

GridFunction extension_values(const GridFunction& u, double truncation_factor, double collar_fraction) {
    const BoxDomain& om = u.domain;
    const double collar = collar_width(om, collar_fraction);
    BoxDomain big = om.truncated(truncation_factor > 0.0 ? truncation_factor : 3.0);
    auto off = om.truncation_offset(truncation_factor > 0.0 ? truncation_factor : 3.0);
    auto h = layout_h(om);
    const int R = om.rows(), C = om.cols();
    PartitionEval ev{om, collar};
    GridFunction out{big, std::vector<double>(big.size(), 0.0), true};
    parallel_for(big.size(), [&](std::size_t j) {
        int r = static_cast<int>(j / big.cols()) - off[0];
        int c = static_cast<int>(j % big.cols()) - off[1];
        if (r >= 0 && r < R && c >= 0 && c < C) {
            out.values[j] = u.values[static_cast<std::size_t>(r) * C + c];
            return;
        }
        double er = r < 0 ? -r * h[0] : (r > R - 1 ? (r - (R - 1)) * h[0] : 0.0);
        double ec = c < 0 ? -c * h[1] : (c > C - 1 ? (c - (C - 1)) * h[1] : 0.0);
        double dist = std::sqrt(er * er + ec * ec);
        if (dist >= collar) return;
        int fr = fold(r, R), fc = fold(c, C);
        if (fr < 0 || fc < 0) return;
        auto psi = ev(fr, fc);
        double uv = u.values[static_cast<std::size_t>(fr) * C + fc];
        CompensatedSum acc;
        for (int k = 1; k < 5; ++k) acc.add(psi[k] * uv);
        out.values[j] = smoothstep(1.0 - dist / collar) * acc.value();
    });
    return out;
}

ExtensionResult extend(const MusielakFamily& fam, const GridFunction& u, double s, const QuadSpec& spec,
                       double collar_fraction) {
    ExtensionResult res;
    res.extended = extension_values(u, spec.truncation_factor, collar_fraction);
    double n_om = full_norm(fam, u, s, spec);
    double n_big = full_norm(fam, res.extended, s, spec);
    res.norm_bound = safe_ratio(n_big, n_om);
    res.modular_ratio = safe_ratio(modular_gagliardo(fam, res.extended, s, spec), modular_gagliardo(fam, u, s, spec));
    res.details["norm_omega"] = n_om;
    res.details["norm_lambda"] = n_big;
    res.details["collar"] = collar_width(u.domain, collar_fraction);
    res.details["C_emp"] = res.norm_bound;
    return res;
}

GridFunction trace(const GridFunction& U, const BoxDomain& omega) {
    auto off = layout_offset(omega, U.domain);
    GridFunction out{omega, std::vector<double>(omega.size(), 0.0), U.zero_outside};
    const int C = U.domain.cols();
    for (int r = 0; r < omega.rows(); ++r)
        for (int c = 0; c < omega.cols(); ++c)
            out.values[static_cast<std::size_t>(r) * omega.cols() + c] =
                U.values[static_cast<std::size_t>(r + off[0]) * C + (c + off[1])];
    return out;
}

Decomposition decompose(const GridFunction& U, const BoxDomain& omega, double truncation_factor,
                        double collar_fraction) {
    Decomposition dec;
    dec.image_part = extension_values(trace(U, omega), truncation_factor, collar_fraction);
    if (!dec.image_part.domain.same_grid(U.domain))
        throw InputError("decomposition needs U on the truncation box of omega");
    dec.kernel_part = U;
    dec.kernel_part.zero_outside = true;
    dec.kernel_residual.assign(U.size(), 0.0);
    bool exact = true;
    for (std::size_t i = 0; i < U.size(); ++i) {
        double a = U[i], b = -dec.image_part[i];
        double k = a + b;
        double bb = k - a;
        double e = (a - (k - bb)) + (b - bb);
        dec.kernel_part.values[i] = k;
        dec.kernel_residual[i] = e;
        ExactSum chk;
        chk.add(dec.image_part[i]);
        chk.add(k);
        chk.add(e);
        chk.add(-a);
        exact = exact && chk.exactly_zero();
        if (k + dec.image_part[i] == a) ++dec.plain_sum_matches;
    }
    dec.reconstruction_exact = exact;
    GridFunction tk = trace(dec.kernel_part, omega);
    dec.trace_of_kernel_zero = std::all_of(tk.values.begin(), tk.values.end(), [](double v) { return v == 0.0; });
    return dec;
}

}  // namespace fracmus
