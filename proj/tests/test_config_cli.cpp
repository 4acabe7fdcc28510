#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include <json.hpp>

#include "fracmus/cli.hpp"
#include "fracmus/config.hpp"
#include "fracmus/errors.hpp"
#include "fracmus/random.hpp"
#include "fracmus/sampling.hpp"

using namespace fracmus;
namespace fs = std::filesystem;

namespace {

ConfigFile parse(const std::string& text) {
    std::istringstream is(text);
    return ConfigFile::parse(is);
}

std::string error_of(const std::string& text, bool solve = false) {
    try {
        build_run_config(parse(text), solve);
    } catch (const InputError& e) {
        return e.what();
    }
    return "";
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("fracmus_cli_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name, const std::string& body = "") const {
        auto p = (path / name).string();
        if (!body.empty()) std::ofstream(p) << body;
        return p;
    }
};

int run(std::vector<std::string> args, std::string* out = nullptr, std::string* err = nullptr) {
    std::ostringstream o, e;
    int code = cli::run(args, o, e);
    if (out) *out = o.str();
    if (err) *err = e.str();
    return code;
}

std::string slurp(const std::string& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

const char* kCubic =
    "# cubic source\n[family]\nfamily = power-constant\np = 2\nscale = 0.5\n"
    "[domain]\ndim = 1\nlower = 0\nupper = 1\nnodes = 33\n"
    "[solver]\ns1 = 0.5\ns2 = 0.5 ; same order\nsource = power\nq = 4\n";

}  // namespace

TEST_CASE("config parsing") {
    auto c = parse("[a]\nx = 1\ny = \"two words\"\n# comment\n; other\n[b]\nz = 1, 2 ,3\n");
    CHECK(c.has("a", "x"));
    CHECK(c.integer("a", "x", 0) == 1);
    CHECK(c.text("a", "y", "") == "two words");
    CHECK(c.numbers("b", "z", {}) == std::vector<double>{1, 2, 3});
    CHECK(c.number("a", "missing", 2.5) == 2.5);
    CHECK_THROWS_AS(parse("x = 1\n"), InputError);
    CHECK_THROWS_AS(parse("[a]\nx = 1\nx = 2\n"), InputError);
    CHECK_THROWS_AS(parse("[a\n"), InputError);
    CHECK_THROWS_AS(parse("[a]\njunk\n"), InputError);
    CHECK_THROWS_AS(c.number("a", "y", 0.0), InputError);
}

TEST_CASE("run config validation names the field") {
    CHECK(error_of("[family]\np = 0.5\n").find("[family] p") != std::string::npos);
    CHECK(error_of("[family]\nfamily = nope\n").find("[family] family") != std::string::npos);
    CHECK(error_of("[familly]\np = 2\n").find("familly") != std::string::npos);
    CHECK(error_of("[domain]\nnodes = 1\n").find("[domain] nodes") != std::string::npos);
    CHECK(error_of("[operator]\ns = 1.2\n").find("[operator] s") != std::string::npos);
    CHECK(error_of("[solver]\ns1 = 0.3\ns2 = 0.6\n").find("[solver] s2") != std::string::npos);
    CHECK(error_of("[quadrature]\ntruncation_factor = 0.5\n").find("truncation_factor") != std::string::npos);
    CHECK(error_of("[family]\nfamily = power-variable\nexponent = affine\na = 1.5\nb = 0.6\n")
              .find("truncation box") != std::string::npos);
    std::string q2 = error_of("[solver]\nq = 2\n", true);
    CHECK(q2.find("[solver] q") != std::string::npos);
    CHECK(q2.find("theta") != std::string::npos);
    CHECK(error_of(kCubic, true).empty());
}

TEST_CASE("resolved config is echoed") {
    auto rc = build_run_config(parse(kCubic), true);
    CHECK(rc.resolved["domain"]["nodes"][0] == 33);
    CHECK(rc.resolved.contains("family"));
    CHECK(rc.resolved.contains("solver"));
    CHECK(rc.solve.nonlinearity.q_lo == 4.0);
}

TEST_CASE("cli exit codes") {
    TempDir t;
    std::string err;
    CHECK(run({}, nullptr, &err) == cli::kValidation);
    CHECK(run({"compute-norm", "--input", t.file("missing.csv")}, nullptr, &err) == cli::kValidation);
    CHECK(err.find("missing.csv") != std::string::npos);
    CHECK(run({"verify", "--suite", "growth", "--bogus"}) == cli::kValidation);
    CHECK(run({"verify", "--suite", "nope"}) == cli::kValidation);
    auto bad = t.file("q2.cfg", "[solver]\nq = 2\n");
    CHECK(run({"solve", "--config", bad}, nullptr, &err) == cli::kValidation);
    CHECK(err.find("theta") != std::string::npos);
    auto zero = t.file("zero.cfg", "[solver]\nsource = zero\n[domain]\nnodes = 17\n");
    CHECK(run({"solve", "--config", zero}) == cli::kValidation);
    std::string out;
    CHECK(run({"verify", "--suite", "growth", "--samples", "1000", "--seed", "42"}, &out) == cli::kOk);
    auto j = nlohmann::json::parse(out);
    CHECK(j["violations"] == 0);
    CHECK(j["samples"] == 1000);
    CHECK(j.contains("config"));
}

TEST_CASE("cli norm, operator and extension round trip") {
    TempDir t;
    auto d = BoxDomain::interval(0.0, 1.0, 33);
    Rng rng(4);
    auto u = sample_on(random_sample_function(rng, d.region()), d);
    auto in = t.file("u.csv");
    write_csv_file(in, u);
    auto rep = t.file("norm.json");
    REQUIRE(run({"compute-norm", "--input", in, "--s", "0.5", "--out", rep}) == cli::kOk);
    auto j = nlohmann::json::parse(slurp(rep));
    for (const char* k : {"norm_lebesgue", "seminorm", "norm_full", "modular_psi", "iterations", "bracket_width"})
        CHECK(j.contains(k));
    CHECK(j["config"]["domain"]["nodes"][0] == 33);
    auto Lu = t.file("Lu.csv");
    REQUIRE(run({"apply-operator", "--input", in, "--s", "0.5", "--out", Lu}) == cli::kOk);
    CHECK(read_csv_file(Lu).size() == 33);
    auto ext = t.file("ext.csv"), er = t.file("ext.json");
    REQUIRE(run({"extend", "--mode", "full", "--input", in, "--out", ext, "--report", er}) == cli::kOk);
    auto e = nlohmann::json::parse(slurp(er));
    CHECK(e.contains("C_emp"));
    CHECK(e.contains("modular_ratio"));
    CHECK(run({"extend", "--mode", "sideways", "--input", in}) == cli::kValidation);
}

TEST_CASE("cli solve and report") {
    TempDir t;
    auto cfg = t.file("cubic.cfg", kCubic);
    auto r1 = t.file("r1.json"), r2 = t.file("r2.json");
    REQUIRE(run({"solve", "--config", cfg, "--report", r1, "--out", t.file("u.csv")}) == cli::kOk);
    REQUIRE(run({"solve", "--config", cfg, "--report", r2, "--threads", "2"}) == cli::kOk);
    CHECK(slurp(r1) == slurp(r2));
    auto j = nlohmann::json::parse(slurp(r1));
    CHECK(j["converged"] == true);
    CHECK(j["energy"].get<double>() > 0.0);
    CHECK(j["weak_residual_held_out"].get<double>() <= 1e-4);
    CHECK(j.contains("geometry"));
    std::string out;
    CHECK(run({"report", "--input", r1}, &out) == cli::kOk);
    CHECK(out.find("converged=true") != std::string::npos);
    auto viol = t.file("v.json", "{\"suite\": \"growth\", \"samples\": 3, \"violations\": 2}");
    CHECK(run({"report", "--input", r1, viol}) == cli::kViolations);

    auto slow = t.file("slow.cfg", std::string(kCubic) + "max_iterations = 2\n");
    auto r3 = t.file("r3.json");
    CHECK(run({"solve", "--config", slow, "--report", r3}) == cli::kNoConvergence);
    auto p = nlohmann::json::parse(slurp(r3));
    CHECK(p["converged"] == false);
    CHECK(p["iterations"] == 2);
}

TEST_CASE("verify reports are deterministic") {
    std::string a, b;
    for (const char* s : {"sandwich", "conjugate", "poincare"}) {
        std::vector<std::string> args{"verify", "--suite", s, "--samples", "30", "--seed", "5", "--family", "orlicz-log"};
        CHECK(run(args, &a) == cli::kOk);
        CHECK(run(args, &b) == cli::kOk);
        CHECK(a == b);
    }
}
