#pragma once

#include <cstdint>
#include <vector>

#include "fracmus/family.hpp"
#include "fracmus/grid.hpp"
#include "fracmus/random.hpp"

namespace fracmus {

// A random test function defined on the continuum, so it can be sampled on
// grids of different resolution. Terms are compactly supported inside the
// sampling box.
struct SampleFunction {
    struct Term {
        bool smooth = true;  // C-infinity bump, otherwise radial tent
        Point center{0.0, 0.0};
        double radius = 0.1;
        double amplitude = 1.0;
    };
    std::vector<Term> terms;
    int dim = 1;

    double operator()(const Point& x) const;
};

// Sum of 1 to 5 bumps or tents with random centers, radii and signed
// amplitudes, supported at least 2% of the shortest side away from the box
// boundary.
SampleFunction random_sample_function(Rng& rng, const Region& box);
std::vector<SampleFunction> random_sample_functions(int count, std::uint64_t seed, const Region& box);

// Nodal values with zero_outside set.
GridFunction sample_on(const SampleFunction& f, const BoxDomain& d);

// Independent standard-normal nodal values (no support constraint).
GridFunction random_grid_function(Rng& rng, const BoxDomain& d, double scale = 1.0);

}  // namespace fracmus
