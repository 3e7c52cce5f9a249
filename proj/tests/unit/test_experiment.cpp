#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "nashmoser/error.hpp"
#include "nashmoser/experiment.hpp"

using namespace nashmoser;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("nashmoser_unit_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

ExperimentConfig base(const std::string& name, std::string_view problem = "P0") {
    ExperimentConfig c;
    c.set("seed", "5");
    c.set("problem.id", problem);
    c.set("output.dir", fresh_dir(name).string());
    return c;
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("verify-space passes on the standard grading") {
    ExperimentConfig c = base("space_ok");
    c.set("verify_space.samples", "100");
    c.set("problem.order", "32");
    const CommandResult r = cmd_verify_space(c);
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(fs::path(c.get("output.dir")) / "reports" / "verify_space.json"));
}

TEST_CASE("verify-space catches a broken weight") {
    ExperimentConfig c = base("space_bad");
    c.set("verify_space.samples", "100");
    c.set("problem.order", "32");
    c.set("space.weight_power", "2");
    const CommandResult r = cmd_verify_space(c);
    CHECK(r.exit_code == 1);
    CHECK(r.summary.contains("first_failure"));
}

TEST_CASE("verify-space at N = 1") {
    ExperimentConfig c = base("space_n1");
    c.set("verify_space.samples", "50");
    c.set("problem.order", "1");
    CHECK(cmd_verify_space(c).exit_code == 0);
}

TEST_CASE("identity solve converges in at most three iterations") {
    ExperimentConfig c = base("solve_p0");
    c.set("problem.order", "32");
    const CommandResult r = cmd_solve(c);
    CHECK(r.exit_code == 0);
    CHECK(r.summary["iterations"].get<int>() <= 3);
    CHECK(r.summary["final_residual"].get<double>() < 1e-12);
    const fs::path out(c.get("output.dir"));
    for (const char* f : {"trace.csv", "summary.json", "reports/diagnostics.json", "reports/diagnostics.csv"}) {
        CHECK(fs::exists(out / f));
    }
    CHECK(slurp(out / "trace.csv").rfind("# config_hash=" + c.hash() + "\np,theta,x_d,", 0) == 0);
}

TEST_CASE("targets beyond delta are refused") {
    ExperimentConfig c = base("solve_far");
    c.set("problem.order", "16");
    c.set("target.amplitude", "10");
    c.set("diagnostics.theorem_instances", "0");
    const CommandResult r = cmd_solve(c);
    CHECK(r.exit_code == 1);
    CHECK(r.message.find("outside V") != std::string::npos);
}

TEST_CASE("rational rotation fails verify-problem") {
    ExperimentConfig c = base("rational", "P2");
    c.set("problem.order", "16");
    c.set("problem.alpha", "0.5");
    const CommandResult r = cmd_verify_problem(c);
    CHECK(r.exit_code == 1);
    CHECK(r.message.find("divisor floor") != std::string::npos);
}

TEST_CASE("configuration errors propagate") {
    ExperimentConfig c;
    CHECK_THROWS_AS(cmd_solve(c), Error);
}

TEST_CASE("a single-point sweep matches solve") {
    ExperimentConfig c = base("sweep_one", "P1");
    c.set("problem.order", "16");
    c.set("diagnostics.theorem_instances", "0");
    const CommandResult s = cmd_solve(c);
    const CommandResult w = cmd_sweep(c);
    REQUIRE(w.exit_code == 0);
    const std::string csv = slurp(fs::path(c.get("output.dir")) / "sweep.csv");
    const std::string row = csv.substr(csv.rfind("\n0,") + 1);
    CHECK(row.find(",converged," + std::to_string(s.summary["iterations"].get<int>()) + ",") !=
          std::string::npos);
}

TEST_CASE("sweep output is independent of the worker count") {
    auto run = [](const std::string& workers) {
        ExperimentConfig c = base("sweep_w" + workers, "P1");
        c.set("problem.order", "16");
        c.set("diagnostics.theorem_instances", "0");
        c.set("sweep.epsilon", "0,0.05,0.1");
        c.set("sweep.amplitude", "0.01,0.1");
        c.set("sweep.workers", workers);
        REQUIRE(cmd_sweep(c).exit_code == 0);
        return slurp(fs::path(c.get("output.dir")) / "sweep.csv");
    };
    const std::string one = run("1");
    CHECK(one == run("3"));
    CHECK(std::count(one.begin(), one.end(), '\n') == 8);
}

TEST_CASE("solve artifacts are byte-identical across runs") {
    auto run = [](const std::string& name) {
        ExperimentConfig c = base(name, "P1");
        c.set("problem.order", "16");
        c.set("diagnostics.theorem_instances", "5");
        cmd_solve(c);
        const fs::path out(c.get("output.dir"));
        return slurp(out / "trace.csv") + slurp(out / "summary.json") + slurp(out / "reports/diagnostics.json");
    };
    CHECK(run("det_a") == run("det_b"));
}

}
