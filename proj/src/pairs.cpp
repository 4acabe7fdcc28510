#include "pairs.hpp"

#include <sstream>

#include "fracmus/errors.hpp"
#include "fracmus/kernels.hpp"
#include "fracmus/parallel.hpp"
#include "fracmus/summation.hpp"

namespace fracmus::detail {

void check_pair_budget(std::size_t a, std::size_t b, const QuadSpec& spec) {
    if (static_cast<double>(a) * static_cast<double>(b) > static_cast<double>(spec.max_pairs)) {
        std::ostringstream os;
        os << "pair budget exceeded: " << a << " x " << b << " pairs > " << spec.max_pairs;
        throw QuadratureError(os.str());
    }
}

PairGeometry::PairGeometry(const BoxDomain& d) : dim_(d.dim), rows_(d.rows()), cols_(d.cols()) {
    const double hr = d.h_row(), hc = d.h_col();
    dist_.assign(static_cast<std::size_t>(rows_) * stride(), 0.0);
    excluded_.assign(dist_.size(), 0);
    for (int dr = 0; dr < rows_; ++dr) {
        for (int dc = -(cols_ - 1); dc <= cols_ - 1; ++dc) {
            double a = dr * hr, b = std::abs(dc) * hc;
            double dist = dim_ == 1 ? b : std::sqrt(a * a + b * b);
            std::size_t k = static_cast<std::size_t>(dr) * stride() + (dc + cols_ - 1);
            dist_[k] = dist;
            excluded_[k] = excluded_pair(d, dist) ? 1 : 0;
        }
    }
}

std::vector<double> PairGeometry::power_table(double exponent) const {
    std::vector<double> t(dist_.size(), 0.0);
    for (std::size_t k = 0; k < t.size(); ++k)
        if (!excluded_[k]) t[k] = std::pow(dist_[k], -exponent);
    return t;
}

PairContext::PairContext(const MusielakFamily& f, const BoxDomain& d, double s_, const QuadSpec& spec)
    : fam(&f), domain(d), s(s_), geo(d) {
    if (!(s > 0.0 && s < 1.0)) throw InputError("fractional order s must lie in (0,1)");
    spec.validate();
    check_pair_budget(d.size(), d.size(), spec);
    wr = d.row_weights();
    wc = d.col_weights();
    w = d.weights();
    x.resize(d.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = d.node(i);
    const double N = d.dim;
    quadratic = f.is_quadratic();
    if (quadratic) {
        inv_dN2s = geo.power_table(N + 2.0 * s);
    } else {
        inv_dN = geo.power_table(N);
        inv_ds = geo.power_table(s);
        inv_dNs = geo.power_table(N + s);
    }
}

namespace {
void require_finite(double v, std::size_t i) {
    if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "non-finite pair integrand in the row of node " << i;
        throw QuadratureError(os.str());
    }
}
}  // namespace

double PairContext::modular(const std::vector<double>& u, double lambda) const {
    const int R = geo.rows(), C = geo.cols();
    const std::size_t M = u.size();
    if (M != domain.size()) throw InputError("grid function does not match the quadrature grid");
    const double inv = 1.0 / lambda;
    if (quadratic) {
        const auto& K = kernels::active();
        double total = deterministic_sum(M, [&](std::size_t i) {
            int ri = static_cast<int>(i / C), ci = static_cast<int>(i % C);
            CompensatedSum row;
            for (int r = 0; r < R; ++r) {
                const double* T = geo.slice(inv_dN2s, ri, ci, r);
                row.add(wr[r] * K.wsq_diff(u[i], u.data() + static_cast<std::size_t>(r) * C, wc.data(), T, C));
            }
            double v = w[i] * row.value();
            require_finite(v, i);
            return v;
        });
        return fam->scale() * inv * inv * total;
    }
    const bool sym = fam->symmetric();
    double total = deterministic_sum(M, [&](std::size_t i) {
        int ri = static_cast<int>(i / C), ci = static_cast<int>(i % C);
        CompensatedSum row;
        for (int r = sym ? ri : 0; r < R; ++r) {
            const double* TN = geo.slice(inv_dN, ri, ci, r);
            const double* TS = geo.slice(inv_ds, ri, ci, r);
            int c0 = (sym && r == ri) ? ci + 1 : 0;
            std::size_t base = static_cast<std::size_t>(r) * C;
            for (int c = c0; c < C; ++c) {
                if (TN[c] == 0.0) continue;
                std::size_t j = base + c;
                double t = std::fabs(u[i] - u[j]) * inv * TS[c];
                row.add(w[j] * fam->Phi_fast(x[i], x[j], t) * TN[c]);
            }
        }
        double v = w[i] * row.value();
        require_finite(v, i);
        return v;
    });
    return sym ? 2.0 * total : total;
}

std::vector<double> PairContext::gradient(const std::vector<double>& u) const {
    const int R = geo.rows(), C = geo.cols();
    const std::size_t M = u.size();
    std::vector<double> g(M, 0.0);
    if (quadratic) {
        const auto& K = kernels::active();
        const double c4 = 4.0 * fam->scale();
        parallel_for(M, [&](std::size_t k) {
            int rk = static_cast<int>(k / C), ck = static_cast<int>(k % C);
            CompensatedSum acc;
            for (int r = 0; r < R; ++r) {
                const double* T = geo.slice(inv_dN2s, rk, ck, r);
                acc.add(wr[r] * K.w_diff(u[k], u.data() + static_cast<std::size_t>(r) * C, wc.data(), T, C));
            }
            g[k] = c4 * acc.value();
            require_finite(g[k], k);
        });
        return g;
    }
    const bool sym = fam->symmetric();
    parallel_for(M, [&](std::size_t k) {
        int rk = static_cast<int>(k / C), ck = static_cast<int>(k % C);
        CompensatedSum acc;
        for (int r = 0; r < R; ++r) {
            const double* TNs = geo.slice(inv_dNs, rk, ck, r);
            const double* TS = geo.slice(inv_ds, rk, ck, r);
            std::size_t base = static_cast<std::size_t>(r) * C;
            for (int c = 0; c < C; ++c) {
                if (TNs[c] == 0.0) continue;
                std::size_t j = base + c;
                double D = (u[k] - u[j]) * TS[c];
                double a = fam->phi_fast(x[k], x[j], D);
                double b = sym ? a : fam->phi_fast(x[j], x[k], D);
                acc.add(wr[r] * wc[c] * (a + b) * TNs[c]);
            }
        }
        g[k] = acc.value();
        require_finite(g[k], k);
    });
    return g;
}

double PairContext::directional(const std::vector<double>& u, const std::vector<double>& v) const {
    const int R = geo.rows(), C = geo.cols();
    const std::size_t M = u.size();
    if (quadratic) {
        const auto& K = kernels::active();
        double total = deterministic_sum(M, [&](std::size_t i) {
            int ri = static_cast<int>(i / C), ci = static_cast<int>(i % C);
            CompensatedSum row;
            for (int r = 0; r < R; ++r) {
                const double* T = geo.slice(inv_dN2s, ri, ci, r);
                std::size_t base = static_cast<std::size_t>(r) * C;
                row.add(wr[r] * K.wdiff_prod(u[i], v[i], u.data() + base, v.data() + base, wc.data(), T, C));
            }
            double val = w[i] * row.value();
            require_finite(val, i);
            return val;
        });
        return 2.0 * fam->scale() * total;
    }
    const bool sym = fam->symmetric();
    double total = deterministic_sum(M, [&](std::size_t i) {
        int ri = static_cast<int>(i / C), ci = static_cast<int>(i % C);
        CompensatedSum row;
        for (int r = sym ? ri : 0; r < R; ++r) {
            const double* TNs = geo.slice(inv_dNs, ri, ci, r);
            const double* TS = geo.slice(inv_ds, ri, ci, r);
            int c0 = (sym && r == ri) ? ci + 1 : 0;
            std::size_t base = static_cast<std::size_t>(r) * C;
            for (int c = c0; c < C; ++c) {
                if (TNs[c] == 0.0) continue;
                std::size_t j = base + c;
                double D = (u[i] - u[j]) * TS[c];
                row.add(w[j] * fam->phi_fast(x[i], x[j], D) * (v[i] - v[j]) * TNs[c]);
            }
        }
        double val = w[i] * row.value();
        require_finite(val, i);
        return val;
    });
    return sym ? 2.0 * total : total;
}

}  // namespace fracmus::detail
