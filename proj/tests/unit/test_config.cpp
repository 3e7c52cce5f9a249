#include <doctest.h>

#include <set>

#include "nashmoser/config.hpp"
#include "nashmoser/error.hpp"

using namespace nashmoser;

namespace {

ErrorCode code_of(auto&& body) {
    try {
        body();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::internal;
}

std::string message_of(auto&& body) {
    try {
        body();
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("schema keys are unique and defaulted") {
    std::set<std::string_view> names;
    for (const ConfigKey& k : config_schema()) {
        CHECK(names.insert(k.name).second);
        CHECK_FALSE(k.doc.empty());
    }
    CHECK(names.count("seed") == 1);
    CHECK(ExperimentConfig().get("problem.id") == "P2");
    CHECK(ExperimentConfig().get("seed").empty());
}

TEST_CASE("parse handles comments, blanks and spacing") {
    const ExperimentConfig c = ExperimentConfig::parse(
        "# header\n"
        "\n"
        "seed = 7\n"
        "  problem.id=P1   \n"
        "problem.epsilon = 0.05\n"
        "# problem.order = 4\n");
    CHECK(c.get("seed") == "7");
    CHECK(c.get("problem.id") == "P1");
    CHECK(c.get("problem.epsilon") == "0.05");
    CHECK(c.get("problem.order") == "128");
    const ResolvedConfig r = resolve(c);
    CHECK(r.seed == 7);
    CHECK(r.problem.id == "P1");
    CHECK(r.problem.epsilon == 0.05);
    CHECK(r.target.seed == 7);  // auto follows the master seed
}

TEST_CASE("unknown keys and malformed lines name the line") {
    CHECK(code_of([] { ExperimentConfig::parse("bogus = 1\n"); }) == ErrorCode::config);
    CHECK(message_of([] { ExperimentConfig::parse("seed = 1\nno equals sign\n"); }).find("line 2") !=
          std::string::npos);
    ExperimentConfig c;
    CHECK(code_of([&] { c.set("solver.nope", "1"); }) == ErrorCode::config);
}

TEST_CASE("seed is mandatory") {
    const std::string msg = message_of([] { resolve(ExperimentConfig()); });
    CHECK(msg.find("seed") != std::string::npos);
}

TEST_CASE("bad values name the key") {
    auto bad = [](std::string_view key, std::string_view value) {
        ExperimentConfig c;
        c.set("seed", "1");
        c.set(key, value);
        return message_of([&] { resolve(c); });
    };
    CHECK(bad("problem.order", "0").find("problem.order") != std::string::npos);
    CHECK(bad("problem.order", "12x").find("problem.order") != std::string::npos);
    CHECK(bad("problem.id", "P7").find("problem.id") != std::string::npos);
    CHECK(bad("solver.residual_tol", "-1").find("solver.residual_tol") != std::string::npos);
    CHECK(bad("calibration.mode", "guess").find("calibration.mode") != std::string::npos);
    CHECK(bad("sweep.epsilon", "0.1,,0.2").find("sweep.epsilon") != std::string::npos);
}

TEST_CASE("dump round-trips and hash is canonical") {
    ExperimentConfig a;
    a.set("seed", "3");
    a.set("problem.id", "P0");
    const ExperimentConfig b = ExperimentConfig::parse(a.dump());
    CHECK(b.dump() == a.dump());
    CHECK(b.hash() == a.hash());
    CHECK(a.hash().size() == 16);

    ExperimentConfig moved = a;
    moved.set("output.dir", "/elsewhere");
    moved.set("sweep.workers", "8");
    CHECK(moved.hash() == a.hash());
    moved.set("seed", "4");
    CHECK(moved.hash() != a.hash());
}

TEST_CASE("auto values resolve to unset") {
    ExperimentConfig c;
    c.set("seed", "1");
    const ResolvedConfig r = resolve(c);
    CHECK_FALSE(r.schedule_tau.has_value());
    CHECK_FALSE(r.target.decay.has_value());
    CHECK(r.diagnostics.n_grid.empty());
    CHECK(r.problem.alpha == doctest::Approx(0.6180339887498949));
    CHECK(r.solver.residual_tol == 1e-13);
    c.set("schedule.tau", "1.7");
    c.set("diagnostics.n_grid", "1, 2.5");
    const ResolvedConfig s = resolve(c);
    CHECK(s.schedule_tau == 1.7);
    CHECK(s.diagnostics.n_grid == std::vector<double>{1.0, 2.5});
}

}
