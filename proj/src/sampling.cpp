#include "fracmus/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace fracmus {

double SampleFunction::operator()(const Point& x) const {
    double v = 0.0;
    for (const Term& t : terms) {
        double r2 = 0.0;
        for (int k = 0; k < dim; ++k) r2 += (x[k] - t.center[k]) * (x[k] - t.center[k]);
        double q = r2 / (t.radius * t.radius);
        if (q >= 1.0) continue;
        if (t.smooth)
            v += t.amplitude * std::exp(1.0 - 1.0 / (1.0 - q));
        else
            v += t.amplitude * (1.0 - std::sqrt(q));
    }
    return v;
}

SampleFunction random_sample_function(Rng& rng, const Region& box) {
    SampleFunction f;
    f.dim = box.dim;
    double side = box.upper[0] - box.lower[0];
    if (box.dim == 2) side = std::min(side, box.upper[1] - box.lower[1]);
    const double margin = 0.02 * side;
    const double rmin = 0.1 * side;
    int count = rng.integer(1, 5);
    for (int i = 0; i < count; ++i) {
        SampleFunction::Term t;
        t.smooth = rng.uniform() < 0.7;
        double room = 1e300;
        for (int k = 0; k < box.dim; ++k) {
            t.center[k] = rng.uniform(box.lower[k] + margin + rmin, box.upper[k] - margin - rmin);
            room = std::min({room, t.center[k] - box.lower[k] - margin, box.upper[k] - margin - t.center[k]});
        }
        double rmax = std::min(0.45 * side, room);
        t.radius = rng.uniform(rmin, std::max(rmin, rmax));
        double mag = rng.uniform(0.2, 1.5);
        t.amplitude = rng.uniform() < 0.5 ? -mag : mag;
        f.terms.push_back(t);
    }
    return f;
}

std::vector<SampleFunction> random_sample_functions(int count, std::uint64_t seed, const Region& box) {
    Rng rng(seed);
    std::vector<SampleFunction> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) out.push_back(random_sample_function(rng, box));
    return out;
}

GridFunction sample_on(const SampleFunction& f, const BoxDomain& d) {
    GridFunction u = make_grid_function(d, [&](const Point& x) { return f(x); }, true);
    for (std::size_t i = 0; i < u.size(); ++i)
        if (d.on_boundary(i)) u[i] = 0.0;
    return u;
}

GridFunction random_grid_function(Rng& rng, const BoxDomain& d, double scale) {
    std::vector<double> v(d.size());
    for (double& x : v) x = scale * rng.normal();
    return make_grid_function(d, v, false);
}

}  // namespace fracmus
