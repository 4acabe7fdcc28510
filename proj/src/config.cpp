#include "fracmus/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "fracmus/errors.hpp"

namespace fracmus {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') || (s.front() == '\'' && s.back() == '\'')))
        return s.substr(1, s.size() - 2);
    return s;
}

double parse_double(const std::string& text, const std::string& field) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || trim(text.substr(used)) != "")
        throw InputError(field + ": expected a number, got '" + text + "'");
    return v;
}

}  // namespace

ConfigFile ConfigFile::parse(std::istream& is, const std::string& source) {
    ConfigFile cf;
    cf.source_ = source;
    std::string line, section = "";
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string body = line;
        bool quoted = false;
        for (std::size_t i = 0; i < body.size(); ++i) {
            if (body[i] == '"') quoted = !quoted;
            if (!quoted && (body[i] == '#' || body[i] == ';')) {
                body = body.substr(0, i);
                break;
            }
        }
        body = trim(body);
        if (body.empty()) continue;
        if (body.front() == '[') {
            if (body.back() != ']')
                throw InputError(source + ":" + std::to_string(lineno) + ": malformed section header '" + body + "'");
            section = trim(body.substr(1, body.size() - 2));
            if (section.empty()) throw InputError(source + ":" + std::to_string(lineno) + ": empty section name");
            cf.data_[section];
            continue;
        }
        auto eq = body.find('=');
        if (eq == std::string::npos)
            throw InputError(source + ":" + std::to_string(lineno) + ": expected 'key = value', got '" + body + "'");
        std::string key = trim(body.substr(0, eq));
        std::string value = unquote(trim(body.substr(eq + 1)));
        if (key.empty()) throw InputError(source + ":" + std::to_string(lineno) + ": missing key");
        if (section.empty())
            throw InputError(source + ":" + std::to_string(lineno) + ": key '" + key + "' outside any [section]");
        if (cf.data_[section].count(key))
            throw InputError(source + ":" + std::to_string(lineno) + ": duplicate key [" + section + "] " + key);
        cf.data_[section][key] = value;
    }
    return cf;
}

ConfigFile ConfigFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config file '" + path + "'");
    return parse(in, path);
}

std::string ConfigFile::field(const std::string& section, const std::string& key) const {
    return "config [" + section + "] " + key;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    auto it = data_.find(section);
    return it != data_.end() && it->second.count(key) > 0;
}

std::string ConfigFile::text(const std::string& section, const std::string& key, const std::string& fallback) const {
    if (!has(section, key)) return fallback;
    return data_.at(section).at(key);
}

double ConfigFile::number(const std::string& section, const std::string& key, double fallback) const {
    if (!has(section, key)) return fallback;
    return parse_double(data_.at(section).at(key), field(section, key));
}

long long ConfigFile::integer(const std::string& section, const std::string& key, long long fallback) const {
    if (!has(section, key)) return fallback;
    const std::string& t = data_.at(section).at(key);
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(t, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || trim(t.substr(used)) != "")
        throw InputError(field(section, key) + ": expected an integer, got '" + t + "'");
    return v;
}

std::vector<double> ConfigFile::numbers(const std::string& section, const std::string& key,
                                        const std::vector<double>& fallback) const {
    if (!has(section, key)) return fallback;
    std::vector<double> out;
    std::stringstream ss(data_.at(section).at(key));
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(trim(item), field(section, key)));
    return out;
}

void ConfigFile::set(const std::string& section, const std::string& key, const std::string& value) {
    data_[section][key] = value;
}

void ConfigFile::check_keys(const std::map<std::string, std::vector<std::string>>& allowed) const {
    for (const auto& [sec, kv] : data_) {
        auto it = allowed.find(sec);
        if (it == allowed.end()) throw InputError("config: unknown section [" + sec + "]");
        for (const auto& [k, v] : kv)
            if (std::find(it->second.begin(), it->second.end(), k) == it->second.end())
                throw InputError(field(sec, k) + ": unknown key");
    }
}

namespace {

const std::map<std::string, std::vector<std::string>>& allowed_keys() {
    static const std::map<std::string, std::vector<std::string>> k{
        {"family", {"family", "p", "scale", "exponent", "a", "b"}},
        {"domain", {"dim", "lower", "upper", "nodes"}},
        {"quadrature", {"diagonal", "truncation_factor", "tolerance", "max_pairs"}},
        {"operator", {"s"}},
        {"solver",
         {"s1", "s2", "source", "q", "q_expression", "q_a", "q_b", "path_nodes", "step_factor", "max_backtracks",
          "max_iterations", "residual_tol", "random_directions", "scan_limit", "seed"}},
        {"verify", {"suite", "samples", "seed", "tol", "s", "s2", "s_prime", "stability"}},
    };
    return k;
}

ExponentExpr::Kind exponent_kind(const std::string& v, const std::string& field) {
    if (v == "constant") return ExponentExpr::Kind::Constant;
    if (v == "affine") return ExponentExpr::Kind::Affine;
    if (v == "distance") return ExponentExpr::Kind::Distance;
    throw InputError(field + ": expected constant, affine or distance, got '" + v + "'");
}

void require(bool ok, const std::string& field, const std::string& what) {
    if (!ok) throw InputError("config " + field + ": " + what);
}

}  // namespace

BoxDomain domain_from_config(const ConfigFile& cfg) {
    long long dim = cfg.integer("domain", "dim", 1);
    require(dim == 1 || dim == 2, "[domain] dim", "must be 1 or 2");
    std::vector<double> def_lo(static_cast<std::size_t>(dim), 0.0), def_hi(static_cast<std::size_t>(dim), 1.0);
    auto lo = cfg.numbers("domain", "lower", def_lo);
    auto hi = cfg.numbers("domain", "upper", def_hi);
    auto nodes = cfg.numbers("domain", "nodes", std::vector<double>(static_cast<std::size_t>(dim), 65.0));
    require(lo.size() == static_cast<std::size_t>(dim), "[domain] lower", "needs one value per axis");
    require(hi.size() == static_cast<std::size_t>(dim), "[domain] upper", "needs one value per axis");
    require(nodes.size() == static_cast<std::size_t>(dim), "[domain] nodes", "needs one value per axis");
    for (int k = 0; k < dim; ++k) {
        require(hi[k] > lo[k], "[domain] upper", "must exceed lower on every axis");
        require(nodes[k] >= 2 && nodes[k] == std::floor(nodes[k]), "[domain] nodes",
                "must be integers >= 2");
    }
    BoxDomain d = dim == 1 ? BoxDomain::interval(lo[0], hi[0], static_cast<int>(nodes[0]))
                           : BoxDomain::rectangle({lo[0], lo[1]}, {hi[0], hi[1]}, static_cast<int>(nodes[0]),
                                                  static_cast<int>(nodes[1]));
    d.validate();
    return d;
}

MusielakFamily family_from_config(const ConfigFile& cfg, const Region& region) {
    std::string kind = cfg.text("family", "family", "power-constant");
    double scale = cfg.number("family", "scale", 1.0);
    require(scale > 0.0, "[family] scale", "must be positive");
    if (kind == "power-constant" || kind == "orlicz-log") {
        double p = cfg.number("family", "p", 2.0);
        require(p > 1.0, "[family] p", kind == "orlicz-log" ? "must exceed 1" : "must exceed 1 (convex power)");
        return kind == "power-constant" ? MusielakFamily::power_constant(p, scale, region)
                                        : MusielakFamily::orlicz_log(p, scale, region);
    }
    if (kind == "power-variable") {
        ExponentExpr e;
        e.kind = exponent_kind(cfg.text("family", "exponent", "affine"), "config [family] exponent");
        e.a = cfg.number("family", "a", 2.0);
        e.b = cfg.number("family", "b", 0.0);
        auto [lo, hi] = e.range(region);
        require(lo > 1.0, "[family] a", "exponent p(x,y) must exceed 1 on the whole region (minimum " +
                                            std::to_string(lo) + ")");
        (void)hi;
        return MusielakFamily::power_variable(e, region, scale);
    }
    if (kind == "custom")
        throw InputError("config [family] family: custom families are available through the library API only");
    throw InputError("config [family] family: expected power-constant, power-variable, orlicz-log or custom, got '" +
                     kind + "'");
}

nlohmann::ordered_json domain_json(const BoxDomain& d) {
    nlohmann::ordered_json j;
    j["dim"] = d.dim;
    std::vector<double> lo, hi;
    std::vector<int> n;
    for (int k = 0; k < d.dim; ++k) {
        lo.push_back(d.lower[k]);
        hi.push_back(d.upper[k]);
        n.push_back(d.nodes[k]);
    }
    j["lower"] = lo;
    j["upper"] = hi;
    j["nodes"] = n;
    return j;
}

RunConfig build_run_config(const ConfigFile& cfg, bool for_solve) {
    cfg.check_keys(allowed_keys());
    RunConfig rc;
    rc.domain = domain_from_config(cfg);

    std::string diag = cfg.text("quadrature", "diagonal", "exclude-cell");
    if (diag == "exclude-cell") rc.quad.diagonal = DiagonalPolicy::ExcludeCell;
    else if (diag == "symmetric-difference") rc.quad.diagonal = DiagonalPolicy::SymmetricDifference;
    else throw InputError("config [quadrature] diagonal: expected exclude-cell or symmetric-difference, got '" + diag + "'");
    rc.quad.truncation_factor = cfg.number("quadrature", "truncation_factor", 3.0);
    require(rc.quad.truncation_factor == 0.0 || rc.quad.truncation_factor > 1.0, "[quadrature] truncation_factor",
            "must be 0 or exceed 1 (the truncation box must strictly contain the domain)");
    rc.quad.tolerance = cfg.number("quadrature", "tolerance", 1e-12);
    require(rc.quad.tolerance > 0.0, "[quadrature] tolerance", "must be positive");
    long long mp = cfg.integer("quadrature", "max_pairs", 400000000LL);
    require(mp > 0, "[quadrature] max_pairs", "must be positive");
    rc.quad.max_pairs = static_cast<std::size_t>(mp);

    rc.family = family_from_config(cfg, rc.domain.region());
    if (rc.family.kind() == FamilyKind::PowerVariable && rc.quad.truncation_factor > 0.0) {
        auto [lo, hi] = rc.family.exponent_expr().range(rc.domain.truncated(rc.quad.truncation_factor).region());
        (void)hi;
        require(lo > 1.0, "[family] b", "exponent p(x,y) drops to " + std::to_string(lo) +
                                            " on the truncation box; it must stay above 1");
    }

    rc.s = cfg.number("operator", "s", 0.5);
    require(rc.s > 0.0 && rc.s < 1.0, "[operator] s", "must lie strictly inside (0,1)");

    SolveConfig& sc = rc.solve;
    sc.family = rc.family;
    sc.domain = rc.domain;
    sc.quad = rc.quad;
    sc.s1 = cfg.number("solver", "s1", 0.5);
    sc.s2 = cfg.number("solver", "s2", sc.s1);
    require(sc.s1 > 0.0 && sc.s1 < 1.0, "[solver] s1", "must lie strictly inside (0,1)");
    require(sc.s2 > 0.0 && sc.s2 <= sc.s1, "[solver] s2", "must satisfy 0 < s2 <= s1");
    std::string source = cfg.text("solver", "source", "power");
    if (source == "power") {
        ExponentExpr q;
        if (cfg.has("solver", "q")) {
            require(!cfg.has("solver", "q_expression"), "[solver] q", "give either q or q_expression, not both");
            q.kind = ExponentExpr::Kind::Constant;
            q.a = cfg.number("solver", "q", 4.0);
        } else {
            q.kind = exponent_kind(cfg.text("solver", "q_expression", "constant"), "config [solver] q_expression");
            require(q.kind != ExponentExpr::Kind::Distance, "[solver] q_expression",
                    "a source exponent depends on one point; use constant or affine");
            q.a = cfg.number("solver", "q_a", 4.0);
            q.b = cfg.number("solver", "q_b", 0.0);
        }
        sc.nonlinearity = Nonlinearity::power_source(q, rc.domain.region());
        require(sc.nonlinearity.q_lo > 1.0, "[solver] q", "source exponent must exceed 1");
    } else if (source == "zero") {
        sc.nonlinearity = Nonlinearity::zero();
    } else {
        throw InputError("config [solver] source: expected power or zero, got '" + source + "'");
    }
    sc.mp.path_nodes = static_cast<int>(cfg.integer("solver", "path_nodes", 21));
    sc.mp.step_factor = cfg.number("solver", "step_factor", 0.1);
    sc.mp.max_backtracks = static_cast<int>(cfg.integer("solver", "max_backtracks", 30));
    sc.mp.max_iterations = static_cast<int>(cfg.integer("solver", "max_iterations", 5000));
    sc.mp.residual_tol = cfg.number("solver", "residual_tol", 1e-5);
    sc.mp.random_directions = static_cast<int>(cfg.integer("solver", "random_directions", 50));
    sc.mp.scan_limit = cfg.number("solver", "scan_limit", 1e6);
    long long seed = cfg.integer("solver", "seed", 1);
    require(seed >= 0, "[solver] seed", "must be non-negative");
    sc.seed = static_cast<std::uint64_t>(seed);
    require(sc.mp.path_nodes >= 3, "[solver] path_nodes", "must be at least 3");
    require(sc.mp.step_factor > 0.0, "[solver] step_factor", "must be positive");
    require(sc.mp.max_backtracks >= 0, "[solver] max_backtracks", "must be non-negative");
    require(sc.mp.max_iterations >= 1, "[solver] max_iterations", "must be positive");
    require(sc.mp.residual_tol > 0.0, "[solver] residual_tol", "must be positive");
    require(sc.mp.random_directions >= 0, "[solver] random_directions", "must be non-negative");
    if (for_solve) {
        if (!sc.nonlinearity.trivial && !(sc.nonlinearity.theta > rc.family.index_hi())) {
            std::ostringstream os;
            os << "config [solver] q: superlinearity condition fails, need theta > phi+ but theta = q- = "
               << sc.nonlinearity.theta << " and phi+ = " << rc.family.index_hi();
            throw InputError(os.str());
        }
        sc.validate();
    }

    SuiteOptions& so = rc.suite;
    so.samples = static_cast<int>(cfg.integer("verify", "samples", 1000));
    long long vseed = cfg.integer("verify", "seed", 42);
    require(vseed >= 0, "[verify] seed", "must be non-negative");
    so.seed = static_cast<std::uint64_t>(vseed);
    so.tol = cfg.number("verify", "tol", 1e-6);
    so.s = cfg.number("verify", "s", 0.5);
    so.s2 = cfg.number("verify", "s2", 0.25);
    so.s_prime = cfg.number("verify", "s_prime", 0.2);
    so.embed.domain = rc.domain;
    so.embed.quad = rc.quad;
    so.embed.stability = cfg.number("verify", "stability", 0.2);
    require(so.samples >= 1, "[verify] samples", "must be positive");
    require(so.tol > 0.0, "[verify] tol", "must be positive");
    require(so.s > 0.0 && so.s < 1.0, "[verify] s", "must lie strictly inside (0,1)");
    require(so.s2 > 0.0 && so.s2 <= so.s, "[verify] s2", "must satisfy 0 < s2 <= s");
    require(so.s_prime > 0.0 && so.s_prime < so.s, "[verify] s_prime", "must satisfy 0 < s_prime < s");

    auto& j = rc.resolved;
    j["family"] = {{"family", cfg.text("family", "family", "power-constant")},
                   {"description", rc.family.describe()},
                   {"index_lo", rc.family.index_lo()},
                   {"index_hi", rc.family.index_hi()}};
    j["domain"] = domain_json(rc.domain);
    j["quadrature"] = {{"diagonal", diag},
                       {"truncation_factor", rc.quad.truncation_factor},
                       {"tolerance", rc.quad.tolerance},
                       {"max_pairs", rc.quad.max_pairs}};
    j["operator"] = {{"s", rc.s}};
    j["solver"] = {{"s1", sc.s1},
                   {"s2", sc.s2},
                   {"source", sc.nonlinearity.name},
                   {"path_nodes", sc.mp.path_nodes},
                   {"step_factor", sc.mp.step_factor},
                   {"max_backtracks", sc.mp.max_backtracks},
                   {"max_iterations", sc.mp.max_iterations},
                   {"residual_tol", sc.mp.residual_tol},
                   {"random_directions", sc.mp.random_directions},
                   {"scan_limit", sc.mp.scan_limit},
                   {"seed", sc.seed}};
    j["verify"] = {{"samples", so.samples}, {"seed", so.seed},       {"tol", so.tol},
                   {"s", so.s},             {"s2", so.s2},           {"s_prime", so.s_prime},
                   {"stability", so.embed.stability}};
    return rc;
}

}  // namespace fracmus
