#include "fracmus/grid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fracmus/errors.hpp"
#include "fracmus/parallel.hpp"
#include "fracmus/summation.hpp"

namespace fracmus {

BoxDomain BoxDomain::interval(double a, double b, int n_nodes) {
    BoxDomain d;
    d.dim = 1;
    d.lower = {a, 0.0};
    d.upper = {b, 0.0};
    d.nodes = {n_nodes, 1};
    d.validate();
    return d;
}

BoxDomain BoxDomain::rectangle(Point lo, Point hi, int n0, int n1) {
    BoxDomain d;
    d.dim = 2;
    d.lower = lo;
    d.upper = hi;
    d.nodes = {n0, n1};
    d.validate();
    return d;
}

void BoxDomain::validate() const {
    if (dim != 1 && dim != 2) throw InputError("dim must be 1 or 2");
    for (int k = 0; k < dim; ++k) {
        if (!std::isfinite(lower[k]) || !std::isfinite(upper[k]) || !(upper[k] > lower[k]))
            throw InputError("upper must exceed lower on every axis");
        if (nodes[k] < 2) throw InputError("grid shape needs at least 2 nodes per axis");
    }
    if (dim == 1 && nodes[1] != 1) throw InputError("1D grid must have a single column count");
}

double BoxDomain::h_min() const {
    double m = h(0);
    if (dim == 2) m = std::min(m, h(1));
    return m;
}

Point BoxDomain::node(std::size_t idx) const {
    if (dim == 1) return {lower[0] + static_cast<double>(idx) * h(0), 0.0};
    std::size_t i0 = idx / nodes[1], i1 = idx % nodes[1];
    return {lower[0] + static_cast<double>(i0) * h(0), lower[1] + static_cast<double>(i1) * h(1)};
}

Region BoxDomain::region() const {
    Region r;
    r.dim = dim;
    r.lower = lower;
    r.upper = upper;
    return r;
}

namespace {
std::vector<double> trapezoid(int n, double h) {
    std::vector<double> w(n, h);
    if (n >= 1) {
        w.front() = 0.5 * h;
        w.back() = 0.5 * h;
    }
    return w;
}
}  // namespace

std::vector<double> BoxDomain::row_weights() const {
    if (dim == 1) return {1.0};
    return trapezoid(nodes[0], h(0));
}

std::vector<double> BoxDomain::col_weights() const {
    return dim == 1 ? trapezoid(nodes[0], h(0)) : trapezoid(nodes[1], h(1));
}

std::vector<double> BoxDomain::weights() const {
    auto wr = row_weights();
    auto wc = col_weights();
    std::vector<double> w(size());
    for (int r = 0; r < rows(); ++r)
        for (int c = 0; c < cols(); ++c) w[static_cast<std::size_t>(r) * cols() + c] = wr[r] * wc[c];
    return w;
}

bool BoxDomain::on_boundary(std::size_t idx) const {
    int r = static_cast<int>(idx / cols()), c = static_cast<int>(idx % cols());
    if (c == 0 || c == cols() - 1) return true;
    if (dim == 2 && (r == 0 || r == rows() - 1)) return true;
    return false;
}

std::array<int, 2> BoxDomain::truncation_offset(double factor) const {
    if (!(factor > 1.0)) throw InputError("truncation factor must exceed 1");
    std::array<int, 2> off{0, 0};
    for (int k = 0; k < dim; ++k) {
        int cells = nodes[k] - 1;
        int c = static_cast<int>(std::lround(0.5 * (factor - 1.0) * cells));
        if (c < 1) c = 1;
        off[k] = c;
    }
    if (dim == 1) return {0, off[0]};
    return off;
}

BoxDomain BoxDomain::truncated(double factor) const {
    auto off = truncation_offset(factor);
    BoxDomain big = *this;
    if (dim == 1) {
        big.lower[0] = lower[0] - off[1] * h(0);
        big.upper[0] = upper[0] + off[1] * h(0);
        big.nodes[0] = nodes[0] + 2 * off[1];
    } else {
        for (int k = 0; k < 2; ++k) {
            big.lower[k] = lower[k] - off[k] * h(k);
            big.upper[k] = upper[k] + off[k] * h(k);
            big.nodes[k] = nodes[k] + 2 * off[k];
        }
    }
    return big;
}

bool BoxDomain::same_grid(const BoxDomain& o) const {
    return dim == o.dim && lower == o.lower && upper == o.upper && nodes == o.nodes;
}

void QuadSpec::validate() const {
    if (!(tolerance > 0.0)) throw InputError("quadrature tolerance must be positive");
    if (max_pairs == 0) throw InputError("pair budget must be positive");
    if (truncation_factor != 0.0 && !(truncation_factor > 1.0))
        throw InputError("truncation factor must be 0 (none) or exceed 1");
}

bool GridFunction::is_zero() const {
    for (double v : values)
        if (v != 0.0) return false;
    return true;
}

GridFunction GridFunction::scaled(double a) const {
    GridFunction g = *this;
    for (double& v : g.values) v *= a;
    return g;
}

GridFunction make_grid_function(const BoxDomain& d, const std::vector<double>& values, bool zero_outside) {
    d.validate();
    if (values.size() != d.size())
        throw InputError("value count " + std::to_string(values.size()) + " does not match grid size " +
                         std::to_string(d.size()));
    for (std::size_t i = 0; i < values.size(); ++i)
        if (!std::isfinite(values[i])) throw InputError("non-finite value at node " + std::to_string(i));
    return GridFunction{d, values, zero_outside};
}

GridFunction make_grid_function(const BoxDomain& d, const std::function<double(const Point&)>& f,
                                bool zero_outside) {
    d.validate();
    std::vector<double> v(d.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(d.node(i));
    return make_grid_function(d, v, zero_outside);
}

GridFunction linear_combination(double a, const GridFunction& u, double b, const GridFunction& v) {
    if (!u.domain.same_grid(v.domain)) throw InputError("grid functions live on different grids");
    GridFunction w = u;
    for (std::size_t i = 0; i < w.size(); ++i) w.values[i] = a * u.values[i] + b * v.values[i];
    w.zero_outside = u.zero_outside && v.zero_outside;
    return w;
}

GridFunction extend_by_zero(const GridFunction& u, const BoxDomain& big) {
    const BoxDomain& d = u.domain;
    if (big.dim != d.dim) throw InputError("dimension mismatch in zero extension");
    double tol = 1e-9 * d.h_min();
    std::array<int, 2> off{0, 0};
    for (int k = 0; k < d.dim; ++k) {
        if (std::fabs(big.h(k) - d.h(k)) > 1e-12 * d.h(k)) throw InputError("grids have different spacing");
        double o = (d.lower[k] - big.lower[k]) / d.h(k);
        int oi = static_cast<int>(std::lround(o));
        if (std::fabs(o - oi) * d.h(k) > tol || oi < 0 || oi + d.nodes[k] > big.nodes[k])
            throw InputError("grids are not aligned for zero extension");
        off[k] = oi;
    }
    GridFunction out{big, std::vector<double>(big.size(), 0.0), true};
    int ro = d.dim == 1 ? 0 : off[0];
    int co = d.dim == 1 ? off[0] : off[1];
    for (int r = 0; r < d.rows(); ++r)
        for (int c = 0; c < d.cols(); ++c)
            out.values[static_cast<std::size_t>(r + ro) * big.cols() + (c + co)] =
                u.values[static_cast<std::size_t>(r) * d.cols() + c];
    return out;
}

double integrate(const BoxDomain& d, const std::vector<double>& g) {
    if (g.size() != d.size()) throw InputError("integrand size does not match grid");
    auto w = d.weights();
    ExactSum s;
    for (std::size_t i = 0; i < g.size(); ++i) s.add(w[i] * g[i]);
    return s.value();
}

double integrate(const BoxDomain& d, const GridFunction& g) { return integrate(d, g.values); }

double node_distance(const BoxDomain& d, std::size_t i, std::size_t j) {
    long ri = static_cast<long>(i / d.cols()), ci = static_cast<long>(i % d.cols());
    long rj = static_cast<long>(j / d.cols()), cj = static_cast<long>(j % d.cols());
    double dr = static_cast<double>(std::labs(ri - rj)) * d.h_row();
    double dc = static_cast<double>(std::labs(ci - cj)) * d.h_col();
    if (d.dim == 1) return dc;
    return std::sqrt(dr * dr + dc * dc);
}

bool excluded_pair(const BoxDomain& d, double dist) { return dist < d.h_min() * (1.0 - 1e-9); }

double double_sum_singular(const BoxDomain& d, const std::function<double(std::size_t, std::size_t)>& g,
                           const QuadSpec& spec) {
    spec.validate();
    const std::size_t M = d.size();
    if (static_cast<double>(M) * static_cast<double>(M) > static_cast<double>(spec.max_pairs))
        throw QuadratureError("pair budget exceeded: " + std::to_string(M) + "^2 pairs > " +
                              std::to_string(spec.max_pairs));
    const auto w = d.weights();
    const bool sym = spec.diagonal == DiagonalPolicy::SymmetricDifference;
    return deterministic_sum(M, [&](std::size_t i) {
        CompensatedSum row;
        for (std::size_t j = sym ? i + 1 : 0; j < M; ++j) {
            if (j == i) continue;
            double dist = node_distance(d, i, j);
            if (excluded_pair(d, dist)) continue;
            double v = sym ? g(i, j) + g(j, i) : g(i, j);
            if (!std::isfinite(v)) {
                std::ostringstream os;
                os << "non-finite integrand at pair (" << i << ", " << j << ")";
                throw QuadratureError(os.str());
            }
            row.add(w[i] * w[j] * v);
        }
        return row.value();
    });
}

// ---------------------------------------------------------------------------
// CSV

namespace {
std::string join_doubles(const double* v, int n) {
    std::string s;
    char buf[64];
    for (int k = 0; k < n; ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", v[k]);
        if (k) s += ",";
        s += buf;
    }
    return s;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        char* end = nullptr;
        double v = std::strtod(item.c_str(), &end);
        if (end == item.c_str()) throw InputError("csv header field '" + key + "' is malformed: " + text);
        out.push_back(v);
    }
    return out;
}
}  // namespace

void write_csv(std::ostream& os, const GridFunction& u) {
    const BoxDomain& d = u.domain;
    os << "# dim=" << d.dim << "\n";
    os << "# lower=" << join_doubles(d.lower.data(), d.dim) << "\n";
    os << "# upper=" << join_doubles(d.upper.data(), d.dim) << "\n";
    os << "# shape=" << d.nodes[0];
    if (d.dim == 2) os << "," << d.nodes[1];
    os << "\n";
    os << "# support=" << (u.zero_outside ? "zero-outside" : "free") << "\n";
    char buf[64];
    for (double v : u.values) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf << "\n";
    }
}

void write_csv_file(const std::string& path, const GridFunction& u) {
    std::ofstream f(path);
    if (!f) throw InputError("cannot open output file " + path);
    write_csv(f, u);
    if (!f) throw InputError("failed writing " + path);
}

GridFunction read_csv(std::istream& is) {
    BoxDomain d;
    bool have_dim = false, have_lower = false, have_upper = false, have_shape = false;
    bool zero_outside = false;
    std::vector<double> lower, upper, shape;
    std::vector<double> values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(1);
            auto eq = body.find('=');
            if (eq == std::string::npos) continue;
            auto trim = [](std::string s) {
                auto b = s.find_first_not_of(" \t");
                auto e = s.find_last_not_of(" \t");
                return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            std::string key = trim(body.substr(0, eq));
            std::string val = trim(body.substr(eq + 1));
            if (key == "dim") {
                d.dim = std::atoi(val.c_str());
                have_dim = true;
            } else if (key == "lower") {
                lower = parse_list(key, val);
                have_lower = true;
            } else if (key == "upper") {
                upper = parse_list(key, val);
                have_upper = true;
            } else if (key == "shape") {
                shape = parse_list(key, val);
                have_shape = true;
            } else if (key == "support") {
                if (val == "zero-outside")
                    zero_outside = true;
                else if (val == "free")
                    zero_outside = false;
                else
                    throw InputError("csv header field 'support' must be zero-outside or free");
            }
            continue;
        }
        char* end = nullptr;
        double v = std::strtod(line.c_str(), &end);
        while (end && (*end == ' ' || *end == '\t')) ++end;
        if (end == line.c_str() || (end && *end != '\0'))
            throw InputError("csv line " + std::to_string(lineno) + " is not a number");
        values.push_back(v);
    }
    if (!have_dim) throw InputError("csv header field 'dim' missing");
    if (!have_lower) throw InputError("csv header field 'lower' missing");
    if (!have_upper) throw InputError("csv header field 'upper' missing");
    if (!have_shape) throw InputError("csv header field 'shape' missing");
    if (d.dim != 1 && d.dim != 2) throw InputError("csv header field 'dim' must be 1 or 2");
    auto need = static_cast<std::size_t>(d.dim);
    if (lower.size() != need) throw InputError("csv header field 'lower' has wrong length");
    if (upper.size() != need) throw InputError("csv header field 'upper' has wrong length");
    if (shape.size() != need) throw InputError("csv header field 'shape' has wrong length");
    for (int k = 0; k < d.dim; ++k) {
        d.lower[k] = lower[k];
        d.upper[k] = upper[k];
        if (shape[k] != std::floor(shape[k])) throw InputError("csv header field 'shape' must be integral");
        d.nodes[k] = static_cast<int>(shape[k]);
    }
    if (d.dim == 1) {
        d.lower[1] = d.upper[1] = 0.0;
        d.nodes[1] = 1;
    }
    return make_grid_function(d, values, zero_outside);
}

GridFunction read_csv_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open input file " + path);
    return read_csv(f);
}

}  // namespace fracmus
