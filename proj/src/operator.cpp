#include "fracmus/operator.hpp"

#include <cmath>
#include <sstream>

#include "fracmus/errors.hpp"
#include "fracmus/kernels.hpp"
#include "fracmus/parallel.hpp"
#include "fracmus/summation.hpp"
#include "pairs.hpp"

namespace fracmus {

void OperatorSpec::validate() const {
    if (!family) throw InputError("operator spec has no family");
    if (!(s > 0.0 && s < 1.0)) throw InputError("operator order s must lie strictly inside (0,1)");
    quad.validate();
}

GridFunction apply_operator(const OperatorSpec& spec, const GridFunction& u) {
    spec.validate();
    const MusielakFamily& fam = *spec.family;
    const BoxDomain& om = u.domain;
    const bool extend = u.zero_outside && spec.quad.truncation_factor > 0.0;
    const BoxDomain big = extend ? om.truncated(spec.quad.truncation_factor) : om;
    const GridFunction ub = extend ? extend_by_zero(u, big) : u;
    std::array<int, 2> off{0, 0};
    if (extend) off = om.truncation_offset(spec.quad.truncation_factor);
    detail::check_pair_budget(om.size(), big.size(), spec.quad);

    detail::PairGeometry geo(big);
    const int R = big.rows(), C = big.cols();
    const auto wr = big.row_weights();
    const auto wc = big.col_weights();
    const double N = big.dim;
    GridFunction out{om, std::vector<double>(om.size(), 0.0), u.zero_outside};

    auto fail = [](std::size_t i) {
        std::ostringstream os;
        os << "singular-weight overflow in the operator at node " << i;
        throw QuadratureError(os.str());
    };

    if (fam.is_quadratic()) {
        const auto T = geo.power_table(N + 2.0 * spec.s);
        const auto& K = kernels::active();
        const double c4 = 4.0 * fam.scale();
        parallel_for(om.size(), [&](std::size_t i) {
            int rx = static_cast<int>(i / om.cols()) + off[0];
            int cx = static_cast<int>(i % om.cols()) + off[1];
            double ux = ub.values[static_cast<std::size_t>(rx) * C + cx];
            CompensatedSum acc;
            for (int r = 0; r < R; ++r)
                acc.add(wr[r] * K.w_diff(ux, ub.values.data() + static_cast<std::size_t>(r) * C, wc.data(),
                                         geo.slice(T, rx, cx, r), C));
            out.values[i] = c4 * acc.value();
            if (!std::isfinite(out.values[i])) fail(i);
        });
        return out;
    }

    const auto TNs = geo.power_table(N + spec.s);
    const auto TS = geo.power_table(spec.s);
    std::vector<Point> xb(big.size());
    for (std::size_t j = 0; j < xb.size(); ++j) xb[j] = big.node(j);
    parallel_for(om.size(), [&](std::size_t i) {
        int rx = static_cast<int>(i / om.cols()) + off[0];
        int cx = static_cast<int>(i % om.cols()) + off[1];
        std::size_t ix = static_cast<std::size_t>(rx) * C + cx;
        double ux = ub.values[ix];
        CompensatedSum acc;
        for (int r = 0; r < R; ++r) {
            const double* a = geo.slice(TNs, rx, cx, r);
            const double* b = geo.slice(TS, rx, cx, r);
            std::size_t base = static_cast<std::size_t>(r) * C;
            for (int c = 0; c < C; ++c) {
                if (a[c] == 0.0) continue;
                double D = (ux - ub.values[base + c]) * b[c];
                acc.add(wr[r] * wc[c] * fam.phi_fast(xb[ix], xb[base + c], D) * a[c]);
            }
        }
        out.values[i] = 2.0 * acc.value();
        if (!std::isfinite(out.values[i])) fail(i);
    });
    return out;
}

double weak_form_term(const OperatorSpec& spec, const GridFunction& u, const GridFunction& v) {
    spec.validate();
    if (!u.domain.same_grid(v.domain)) throw InputError("weak form needs u and v on one grid");
    detail::PairContext ctx(*spec.family, u.domain, spec.s, spec.quad);
    return ctx.directional(u.values, v.values);
}

double weak_form(const OperatorSpec& spec1, const OperatorSpec& spec2, const GridFunction& u,
                 const GridFunction& v) {
    if (!u.zero_outside || !v.zero_outside)
        throw PreconditionError("weak form is defined on the Dirichlet space; set support=zero-outside");
    return weak_form_term(spec1, u, v) + weak_form_term(spec2, u, v);
}

}  // namespace fracmus
