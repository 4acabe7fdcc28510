#include "fracmus/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fracmus/config.hpp"
#include "fracmus/errors.hpp"
#include "fracmus/extension.hpp"
#include "fracmus/norms.hpp"
#include "fracmus/operator.hpp"
#include "fracmus/parallel.hpp"
#include "fracmus/sampling.hpp"
#include "fracmus/solver.hpp"
#include "fracmus/suites.hpp"

namespace fracmus::cli {

namespace {

using json = nlohmann::ordered_json;

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_json(const std::string& path, const json& j, std::ostream& out) {
    std::string text = j.dump(2) + "\n";
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw InputError("cannot open output file " + path);
    f << text;
    if (!f) throw InputError("failed writing " + path);
}

ConfigFile load_config(const std::string& path) {
    if (path.empty()) {
        std::istringstream empty;
        return ConfigFile::parse(empty);
    }
    return ConfigFile::load(path);
}

// Config whose domain and family region follow the grid of an input file.
RunConfig config_for_grid(const ConfigFile& cf, const BoxDomain& d) {
    RunConfig rc = build_run_config(cf);
    rc.domain = d;
    rc.family = family_from_config(cf, d.region());
    rc.resolved["domain"] = domain_json(d);
    rc.resolved["family"]["description"] = rc.family.describe();
    rc.resolved["family"]["index_lo"] = rc.family.index_lo();
    rc.resolved["family"]["index_hi"] = rc.family.index_hi();
    return rc;
}

struct Options {
    std::string config, input, out, report, mode = "full", suite, family;
    std::vector<std::string> inputs;
    double s = -1.0, p = -1.0, tol = -1.0;
    long long samples = -1, seed = -1;
    int threads = 1;
};

int cmd_compute_norm(const Options& o, std::ostream& out) {
    ConfigFile cf = load_config(o.config);
    GridFunction u = read_csv_file(o.input);
    RunConfig rc = config_for_grid(cf, u.domain);
    double s = o.s > 0.0 ? o.s : rc.s;
    if (!(s > 0.0 && s < 1.0)) throw InputError("--s must lie strictly inside (0,1)");
    NormSummary n = compute_norms(rc.family, u, s, rc.quad);
    json j;
    j["command"] = "compute-norm";
    j["s"] = s;
    j["norm_lebesgue"] = nullable(n.norm_lebesgue);
    j["seminorm"] = nullable(n.seminorm);
    j["norm_full"] = nullable(n.norm_full);
    j["modular_lebesgue"] = nullable(n.modular_lebesgue);
    j["modular_gagliardo"] = nullable(n.modular_gagliardo);
    j["modular_psi"] = nullable(n.modular_psi);
    j["norm_psi"] = nullable(n.norm_psi);
    j["iterations"] = n.iterations;
    j["bracket_width"] = n.bracket_width;
    j["config"] = rc.resolved;
    write_json(o.out, j, out);
    return kOk;
}

int cmd_apply_operator(const Options& o, std::ostream&) {
    ConfigFile cf = load_config(o.config);
    GridFunction u = read_csv_file(o.input);
    RunConfig rc = config_for_grid(cf, u.domain);
    OperatorSpec spec{&rc.family, o.s > 0.0 ? o.s : rc.s, rc.quad};
    GridFunction Lu = apply_operator(spec, u);
    write_csv_file(o.out, Lu);
    return kOk;
}

int cmd_extend(const Options& o, std::ostream& out) {
    ConfigFile cf = load_config(o.config);
    GridFunction u = read_csv_file(o.input);
    RunConfig rc = config_for_grid(cf, u.domain);
    double s = o.s > 0.0 ? o.s : rc.s;
    ExtensionResult res;
    if (o.mode == "zero") res = zero_extend(rc.family, u, s, rc.quad);
    else if (o.mode == "reflect") res = reflect_extend(rc.family, u, s, rc.quad);
    else if (o.mode == "full") res = extend(rc.family, u, s, rc.quad);
    else throw InputError("--mode must be zero, reflect or full");
    if (!o.out.empty()) write_csv_file(o.out, res.extended);
    json j;
    j["command"] = "extend";
    j["mode"] = o.mode;
    j["s"] = s;
    j["modular_ratio"] = nullable(res.modular_ratio);
    j["lebesgue_ratio"] = nullable(res.lebesgue_ratio);
    j[o.mode == "full" ? "C_emp" : "norm_bound"] = nullable(res.norm_bound);
    json d = json::object();
    for (const auto& [k, v] : res.details) d[k] = nullable(v);
    j["details"] = d;
    j["extended_domain"] = domain_json(res.extended.domain);
    j["config"] = rc.resolved;
    write_json(o.report, j, out);
    return kOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
    ConfigFile cf = load_config(o.config);
    if (!o.family.empty()) cf.set("family", "family", o.family);
    if (o.p > 0.0) cf.set("family", "p", std::to_string(o.p));
    if (o.samples >= 0) cf.set("verify", "samples", std::to_string(o.samples));
    if (o.seed >= 0) cf.set("verify", "seed", std::to_string(o.seed));
    if (o.tol > 0.0) {
        std::ostringstream t;
        t.precision(17);
        t << o.tol;
        cf.set("verify", "tol", t.str());
    }
    std::string suite = o.suite.empty() ? cf.text("verify", "suite", "") : o.suite;
    if (suite.empty()) throw InputError("--suite is required");
    const auto& names = suite_names();
    if (std::find(names.begin(), names.end(), suite) == names.end())
        throw InputError("--suite: unknown suite '" + suite + "'");
    if (!cf.has("domain", "nodes")) cf.set("domain", "nodes", cf.text("domain", "dim", "1") == "2" ? "9,9" : "33");
    RunConfig rc = build_run_config(cf);
    VerificationReport rep = run_suite(suite, rc.family, rc.suite);
    json j = rep.to_json();
    j["config"] = rc.resolved;
    write_json(o.out, j, out);
    return rep.ok() ? kOk : kViolations;
}

int cmd_solve(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.config.empty()) throw InputError("--config is required for solve");
    ConfigFile cf = load_config(o.config);
    RunConfig rc = build_run_config(cf, true);
    SolveResult res;
    int code = kOk;
    std::string failure;
    try {
        res = solve_mountain_pass(rc.solve);
    } catch (SolverNonConvergence& e) {
        res = std::move(e.result);
        failure = e.what();
        code = kNoConvergence;
    }
    auto tests = random_sample_functions(20, rc.solve.seed + 1000, rc.domain.region());
    std::vector<GridFunction> vs;
    for (const auto& f : tests) vs.push_back(sample_on(f, rc.domain));
    double held_out = weak_residual(rc.solve, res.u, vs);

    json j;
    j["command"] = "solve";
    j["converged"] = code == kOk;
    if (!failure.empty()) j["failure"] = failure;
    j["energy"] = nullable(res.energy);
    j["residual"] = nullable(res.residual);
    j["weak_residual_held_out"] = nullable(held_out);
    j["iterations"] = res.iterations;
    j["norm_s1"] = nullable(res.norm_s1);
    j["nontrivial"] = res.nontrivial;
    j["geometry"] = {{"rho", res.geometry.rho},
                     {"r", res.geometry.r},
                     {"T", res.geometry.T},
                     {"J_e", res.geometry.J_e},
                     {"sphere_samples", res.geometry.sphere_samples}};
    j["palais_smale"] = {{"constant", res.ps_constant}, {"violations", res.ps_violations}};
    json trace = json::array();
    for (std::size_t k = 0; k < res.trace_energy.size(); ++k)
        trace.push_back({{"energy", res.trace_energy[k]}, {"residual", res.trace_residual[k]}});
    j["trace"] = trace;
    j["warnings"] = res.warnings;
    j["config"] = rc.resolved;
    for (const auto& w : res.warnings) err << "warning: " << w << "\n";
    if (!o.out.empty()) write_csv_file(o.out, res.u);
    write_json(o.report, j, out);
    if (code != kOk) err << "error: " << failure << "\n";
    return code;
}

int cmd_report(const Options& o, std::ostream& out) {
    if (o.inputs.empty()) throw InputError("--input needs at least one report file");
    bool bad = false;
    for (const auto& path : o.inputs) {
        std::ifstream f(path);
        if (!f) throw InputError("cannot open report file " + path);
        json j;
        try {
            j = json::parse(f);
        } catch (const std::exception& e) {
            throw InputError("report file " + path + " is not valid JSON: " + e.what());
        }
        out << path << ":";
        if (j.contains("suite")) {
            long long v = j.value("violations", 0LL);
            out << " suite=" << j["suite"].get<std::string>() << " samples=" << j.value("samples", 0LL)
                << " violations=" << v;
            bad = bad || v > 0;
        } else if (j.contains("command")) {
            out << " command=" << j["command"].get<std::string>();
            if (j.contains("converged")) {
                out << " converged=" << (j["converged"].get<bool>() ? "true" : "false");
                bad = bad || !j["converged"].get<bool>();
            }
        }
        out << "\n";
    }
    return bad ? kViolations : kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fractional Musielak-Sobolev toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);

    auto* norm = app.add_subcommand("compute-norm", "Norms and modulars of a grid function");
    norm->add_option("--config", o.config);
    norm->add_option("--input", o.input)->required();
    norm->add_option("--s", o.s);
    norm->add_option("--out", o.out);

    auto* op = app.add_subcommand("apply-operator", "Nodal values of the nonlocal operator");
    op->add_option("--config", o.config);
    op->add_option("--input", o.input)->required();
    op->add_option("--s", o.s);
    op->add_option("--out", o.out)->required();

    auto* ext = app.add_subcommand("extend", "Extension to the truncation box");
    ext->add_option("--config", o.config);
    ext->add_option("--mode", o.mode)->check(CLI::IsMember({"zero", "reflect", "full"}));
    ext->add_option("--input", o.input)->required();
    ext->add_option("--out", o.out);
    ext->add_option("--report", o.report);
    ext->add_option("--s", o.s);

    auto* ver = app.add_subcommand("verify", "Randomized inequality suites");
    ver->add_option("--config", o.config);
    ver->add_option("--suite", o.suite);
    ver->add_option("--samples", o.samples);
    ver->add_option("--seed", o.seed);
    ver->add_option("--family", o.family);
    ver->add_option("--p", o.p);
    ver->add_option("--tol", o.tol);
    ver->add_option("--out", o.out);

    auto* sol = app.add_subcommand("solve", "Mountain-pass solve of the Dirichlet problem");
    sol->add_option("--config", o.config)->required();
    sol->add_option("--out", o.out);
    sol->add_option("--report", o.report);

    auto* rep = app.add_subcommand("report", "Summarize report files");
    rep->add_option("--input", o.inputs)->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    }
    set_threads(o.threads);
    try {
        if (*norm) return cmd_compute_norm(o, out);
        if (*op) return cmd_apply_operator(o, out);
        if (*ext) return cmd_extend(o, out);
        if (*ver) return cmd_verify(o, out);
        if (*sol) return cmd_solve(o, out, err);
        if (*rep) return cmd_report(o, out);
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const InvalidFamilyError& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const GeometryError& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const NonConvergenceError& e) {
        err << "error: " << e.what() << "\n";
        return kNoConvergence;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInternal;
    }
    return kInternal;
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

}  // namespace fracmus::cli
