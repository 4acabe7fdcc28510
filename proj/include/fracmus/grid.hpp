#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "fracmus/family.hpp"

namespace fracmus {

// Uniform axis-aligned grid on a box. Nodes include both end points of each
// axis; values are stored row-major (axis 0 slowest).
struct BoxDomain {
    int dim = 1;
    Point lower{0.0, 0.0};
    Point upper{1.0, 1.0};
    std::array<int, 2> nodes{2, 1};

    static BoxDomain interval(double a, double b, int n_nodes);
    static BoxDomain rectangle(Point lo, Point hi, int n0, int n1);

    void validate() const;
    std::size_t size() const { return static_cast<std::size_t>(nodes[0]) * nodes[1]; }
    // Rows and columns of the 2D layout; a 1D grid is a single row.
    int rows() const { return dim == 1 ? 1 : nodes[0]; }
    int cols() const { return dim == 1 ? nodes[0] : nodes[1]; }
    double h(int axis) const { return (upper[axis] - lower[axis]) / (nodes[axis] - 1); }
    double h_min() const;
    // Spacing along the row (slow) and column (fast) directions of the layout.
    double h_row() const { return dim == 1 ? 1.0 : h(0); }
    double h_col() const { return dim == 1 ? h(0) : h(1); }
    Point node(std::size_t idx) const;
    Region region() const;
    double diameter() const { return region().diameter(); }
    // Trapezoid weights along rows / columns of the layout, and nodal weights.
    std::vector<double> row_weights() const;
    std::vector<double> col_weights() const;
    std::vector<double> weights() const;
    // Index of a node lying on the boundary of the box.
    bool on_boundary(std::size_t idx) const;

    // Truncation box: the box dilated about its center by `factor`, snapped to
    // whole cells so that the two grids share nodes.
    BoxDomain truncated(double factor) const;
    // Offset (in cells per layout axis) of this grid inside truncated(factor).
    std::array<int, 2> truncation_offset(double factor) const;
    bool same_grid(const BoxDomain& o) const;
};

enum class DiagonalPolicy { ExcludeCell, SymmetricDifference };

struct QuadSpec {
    DiagonalPolicy diagonal = DiagonalPolicy::ExcludeCell;
    // Dilation factor of the truncation box used for integrals over R^N \ Omega.
    // A value of 0 restricts such integrals to Omega.
    double truncation_factor = 3.0;
    double tolerance = 1e-12;
    std::size_t max_pairs = 400'000'000;

    void validate() const;
};

// Real values on the nodes of a BoxDomain. When zero_outside is set the
// function is a member of the Dirichlet space: it is taken as 0 on the
// complement of the box.
struct GridFunction {
    BoxDomain domain;
    std::vector<double> values;
    bool zero_outside = false;

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
    std::size_t size() const { return values.size(); }
    bool is_zero() const;
    GridFunction scaled(double a) const;
};

GridFunction make_grid_function(const BoxDomain& d, const std::vector<double>& values,
                                bool zero_outside = false);
GridFunction make_grid_function(const BoxDomain& d, const std::function<double(const Point&)>& f,
                                bool zero_outside = false);
GridFunction linear_combination(double a, const GridFunction& u, double b, const GridFunction& v);

// Zero extension of a Dirichlet-space function onto an aligned larger grid.
GridFunction extend_by_zero(const GridFunction& u, const BoxDomain& big);

// Composite trapezoid rule; the sum is exactly rounded.
double integrate(const BoxDomain& d, const GridFunction& g);
double integrate(const BoxDomain& d, const std::vector<double>& g);

// Sum over node pairs x != y of w_x w_y g(x, y), with the diagonal handled by
// the policy. The integrand receives node indices.
double double_sum_singular(const BoxDomain& d, const std::function<double(std::size_t, std::size_t)>& g,
                           const QuadSpec& spec);

// Distance between two nodes of the same grid, computed from index offsets.
double node_distance(const BoxDomain& d, std::size_t i, std::size_t j);
// True when the pair is dropped by the exclude-cell rule.
bool excluded_pair(const BoxDomain& d, double dist);

// CSV grid format (see README).
void write_csv(std::ostream& os, const GridFunction& u);
void write_csv_file(const std::string& path, const GridFunction& u);
GridFunction read_csv(std::istream& is);
GridFunction read_csv_file(const std::string& path);

}  // namespace fracmus
