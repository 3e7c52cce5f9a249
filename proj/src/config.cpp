#include "nashmoser/config.hpp"

#include <cmath>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "nashmoser/error.hpp"

namespace nashmoser {
namespace {

const std::vector<ConfigKey> schema{
    {"seed", "", "master seed; required, feeds every key whose seed is auto"},
    {"problem.id", "P2", "P0 | P1 | P2 | P3"},
    {"problem.order", "128", "truncation order N (modes -N..N)"},
    {"problem.epsilon", "0.001", "nonlinearity strength"},
    {"problem.alpha", "golden", "rotation number for P2/P3; golden = (sqrt 5 - 1)/2"},
    {"problem.d", "2", "P2/P3 loss index d"},
    {"problem.l", "2", "P2/P3 domain index l"},
    {"problem.divisor_floor", "1e-6", "P2/P3 minimum of |e^{2 pi i k alpha} - 1|(1+|k|)^d"},
    {"problem.m", "auto", "P2/P3 Neumann exponent m; auto = max(0, estimated)"},
    {"problem.lambda", "auto", "P2/P3 loss factor lambda; auto = estimated"},
    {"problem.calibration_samples", "40", "samples for the lambda / m estimates"},
    {"schedule.lambda", "auto", "schedule lambda; auto = problem lambda"},
    {"schedule.tau", "auto", "schedule tau; auto = (lambda + 2)/2"},
    {"solver.residual_tol", "1e-13", "stop once |z_p|_d falls below this"},
    {"solver.max_iter", "30", "iteration cap"},
    {"solver.stagnation_steps", "3", "steps without residual decrease before giving up"},
    {"solver.allow_outside_domain", "false", "skip the |y|_s0 < delta entry check"},
    {"neumann.tol", "1e-12", "relative term tolerance of the Neumann series"},
    {"neumann.max_terms", "200", "Neumann series term cap"},
    {"calibration.mode", "bisect", "bisect | analytic: how delta is obtained"},
    {"calibration.safety", "0.5", "delta-hat = safety * bisection boundary"},
    {"calibration.bisection_steps", "40", "log-space bisection steps"},
    {"target.seed", "auto", "seed of the target y; auto = seed"},
    {"target.amplitude", "2e-5", "|y|_s0, absolute or as a fraction of delta"},
    {"target.amplitude_scale", "delta", "delta | absolute"},
    {"target.decay", "auto", "coefficient decay r of y; auto = s0 + 2(d+m) + 1"},
    {"target.band_limit", "auto", "highest populated |k|; auto = 3 for P0, none otherwise"},
    {"diagnostics.n_grid", "auto", "growth-bound indices; auto = d, 2d+1, s0"},
    {"diagnostics.a_grid", "auto", "rate-a residual decay rates; auto = mu, mu+d+m, mu+2(d+m)"},
    {"diagnostics.b", "auto", "increment decay rate; auto = mu - d - m"},
    {"diagnostics.increment_n", "auto", "increment decay indices; auto = d"},
    {"diagnostics.theorem_instances", "20", "seeded solves over [delta/100, delta]; 0 disables"},
    {"diagnostics.boundedness_slope", "0.05", "max log-log slope of a bounded ratio"},
    {"diagnostics.decay_slack", "0.25", "measured decay >= (1 - slack) * predicted"},
    {"diagnostics.trend_tol", "0.2", "max |slope| of the theorem ratio trend"},
    {"diagnostics.residual_floor", "1e-14", "residuals below this are excluded from fits"},
    {"diagnostics.sup_growth", "10", "max growth of rate-a partial suprema"},
    {"sampler.samples", "200", "verify-problem samples per condition"},
    {"sampler.seed", "auto", "verify-problem seed; auto = seed"},
    {"sampler.indices", "0,1,2,4,8", "verify-problem seminorm indices"},
    {"verify_space.samples", "1000", "samples per (n, k) pair"},
    {"verify_space.grid", "0,0.5,1,2,4,8", "index grid"},
    {"space.weight_power", "1", "weights (1+|k|)^(power n); 1 is the standard grading"},
    {"sweep.epsilon", "", "epsilon grid; empty = problem.epsilon"},
    {"sweep.amplitude", "", "target.amplitude grid; empty = target.amplitude"},
    {"sweep.tau", "", "schedule.tau grid; empty = schedule.tau"},
    {"sweep.mode", "solve", "solve | delta"},
    {"sweep.workers", "1", "concurrent solves"},
    {"output.dir", "out", "artifact directory"},
};

const ConfigKey* find_key(std::string_view name) {
    for (const ConfigKey& k : config_schema()) {
        if (k.name == name) return &k;
    }
    return nullptr;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
    throw Error(ErrorCode::config, "config key '" + std::string(key) + "': cannot read '" +
                                       std::string(value) + "' as " + std::string(expected));
}

double to_double(std::string_view key, std::string_view v) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) {
        bad_value(key, v, "a finite number");
    }
    return out;
}

long long to_integer(std::string_view key, std::string_view v) {
    long long out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) bad_value(key, v, "an integer");
    return out;
}

std::uint64_t to_u64(std::string_view key, std::string_view v) {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) bad_value(key, v, "an unsigned integer");
    return out;
}

bool to_bool(std::string_view key, std::string_view v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    bad_value(key, v, "a boolean");
}

std::vector<double> to_list(std::string_view key, std::string_view v) {
    std::vector<double> out;
    while (!trim(v).empty()) {
        const auto comma = v.find(',');
        out.push_back(to_double(key, trim(v.substr(0, comma))));
        if (comma == std::string_view::npos) break;
        v.remove_prefix(comma + 1);
    }
    return out;
}

void require(bool ok, std::string_view key, std::string_view what) {
    if (!ok) throw Error(ErrorCode::config, "config key '" + std::string(key) + "': " + std::string(what));
}

void require_indices(const std::vector<double>& grid, std::string_view key) {
    for (double n : grid) require(n >= 0.0, key, "seminorm indices must be >= 0");
}

}  // namespace

std::span<const ConfigKey> config_schema() {
    return schema;
}

ExperimentConfig::ExperimentConfig() {
    for (const ConfigKey& k : config_schema()) values_.emplace(std::string(k.name), std::string(k.default_value));
}

ExperimentConfig ExperimentConfig::parse(std::string_view text) {
    ExperimentConfig config;
    int line_no = 0;
    while (!text.empty()) {
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorCode::config, "config line " + std::to_string(line_no) + ": expected key = value");
        }
        config.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return config;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io, "cannot read config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

void ExperimentConfig::set(std::string_view key, std::string_view value) {
    if (find_key(key) == nullptr) throw Error(ErrorCode::config, "unknown config key '" + std::string(key) + "'");
    values_.find(key)->second = std::string(trim(value));
}

std::string ExperimentConfig::get(std::string_view key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw Error(ErrorCode::config, "unknown config key '" + std::string(key) + "'");
    return it->second;
}

std::string ExperimentConfig::dump() const {
    std::string out;
    for (const ConfigKey& k : config_schema()) {
        out += std::string(k.name) + " = " + values_.find(k.name)->second + "\n";
    }
    return out;
}

std::string ExperimentConfig::hash() const {
    // where artifacts go and how many threads write them do not change their content
    std::string canonical;
    for (const ConfigKey& k : config_schema()) {
        if (k.name == "output.dir" || k.name == "sweep.workers") continue;
        canonical += std::string(k.name) + " = " + values_.find(k.name)->second + "\n";
    }
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ResolvedConfig resolve(const ExperimentConfig& config) {
    ResolvedConfig r;
    auto raw = [&](std::string_view key) { return config.get(key); };
    auto num = [&](std::string_view key) { return to_double(key, raw(key)); };
    auto integer = [&](std::string_view key) { return to_integer(key, raw(key)); };
    auto optional_num = [&](std::string_view key) -> std::optional<double> {
        const std::string v = raw(key);
        if (v == "auto") return std::nullopt;
        return to_double(key, v);
    };
    auto list = [&](std::string_view key) {
        const std::string v = raw(key);
        return v == "auto" ? std::vector<double>{} : to_list(key, v);
    };
    auto seed_or_master = [&](std::string_view key) {
        const std::string v = raw(key);
        return v == "auto" ? r.seed : to_u64(key, v);
    };

    require(!raw("seed").empty(), "seed", "a seed is required (no nondeterministic default)");
    r.seed = to_u64("seed", raw("seed"));

    ProblemSpec& p = r.problem;
    p.id = raw("problem.id");
    require(p.id == "P0" || p.id == "P1" || p.id == "P2" || p.id == "P3", "problem.id", "expected P0..P3");
    const long long order = integer("problem.order");
    require(order >= 1 && order <= (1 << 20), "problem.order", "must be in 1..2^20");
    p.order = static_cast<int>(order);
    p.epsilon = num("problem.epsilon");
    require(p.epsilon >= 0.0, "problem.epsilon", "must be >= 0");
    p.alpha = raw("problem.alpha") == "golden" ? golden_mean() : num("problem.alpha");
    SmallDivisorOptions& sd = p.small_divisor;
    sd.d = num("problem.d");
    sd.l = num("problem.l");
    require(sd.d >= 0.0 && sd.l >= 0.0, "problem.d", "d and l must be >= 0");
    sd.divisor_floor = num("problem.divisor_floor");
    sd.m = optional_num("problem.m");
    sd.lambda = optional_num("problem.lambda");
    sd.calibration.samples = static_cast<int>(integer("problem.calibration_samples"));
    require(sd.calibration.samples >= 1, "problem.calibration_samples", "must be >= 1");

    r.schedule_lambda = optional_num("schedule.lambda");
    r.schedule_tau = optional_num("schedule.tau");

    r.solver.residual_tol = num("solver.residual_tol");
    require(r.solver.residual_tol > 0.0, "solver.residual_tol", "must be > 0");
    r.solver.max_iter = static_cast<int>(integer("solver.max_iter"));
    require(r.solver.max_iter >= 0, "solver.max_iter", "must be >= 0");
    r.solver.stagnation_steps = static_cast<int>(integer("solver.stagnation_steps"));
    require(r.solver.stagnation_steps >= 1, "solver.stagnation_steps", "must be >= 1");
    r.solver.allow_outside_domain = to_bool("solver.allow_outside_domain", raw("solver.allow_outside_domain"));
    r.solver.neumann.tol = num("neumann.tol");
    r.solver.neumann.max_terms = static_cast<int>(integer("neumann.max_terms"));
    require(r.solver.neumann.tol > 0.0 && r.solver.neumann.max_terms >= 1, "neumann.tol",
            "tolerance must be > 0 and max_terms >= 1");
    sd.calibration.neumann = r.solver.neumann;

    const std::string mode = raw("calibration.mode");
    require(mode == "bisect" || mode == "analytic", "calibration.mode", "expected bisect or analytic");
    r.calibration = mode == "bisect" ? CalibrationMode::bisect : CalibrationMode::analytic;
    r.calibration_safety = num("calibration.safety");
    require(r.calibration_safety > 0.0 && r.calibration_safety <= 1.0, "calibration.safety", "must be in (0, 1]");
    r.calibration_steps = static_cast<int>(integer("calibration.bisection_steps"));
    require(r.calibration_steps >= 0, "calibration.bisection_steps", "must be >= 0");

    r.target.seed = seed_or_master("target.seed");
    r.target.amplitude = num("target.amplitude");
    require(r.target.amplitude >= 0.0, "target.amplitude", "must be >= 0");
    const std::string scale = raw("target.amplitude_scale");
    require(scale == "delta" || scale == "absolute", "target.amplitude_scale", "expected delta or absolute");
    r.target.scale = scale == "delta" ? AmplitudeScale::delta : AmplitudeScale::absolute;
    r.target.decay = optional_num("target.decay");
    if (raw("target.band_limit") != "auto") {
        const long long band = integer("target.band_limit");
        require(band >= 0, "target.band_limit", "must be >= 0");
        r.target.band_limit = static_cast<int>(band);
    } else if (p.id == "P0") {
        r.target.band_limit = 3;
    }

    DiagnosticsSpec& dg = r.diagnostics;
    dg.n_grid = list("diagnostics.n_grid");
    require_indices(dg.n_grid, "diagnostics.n_grid");
    dg.a_grid = list("diagnostics.a_grid");
    dg.b = optional_num("diagnostics.b");
    dg.increment_n = list("diagnostics.increment_n");
    require_indices(dg.increment_n, "diagnostics.increment_n");
    dg.theorem_instances = static_cast<int>(integer("diagnostics.theorem_instances"));
    require(dg.theorem_instances == 0 || dg.theorem_instances >= 5, "diagnostics.theorem_instances",
            "must be 0 or >= 5");
    dg.tolerances.boundedness_slope = num("diagnostics.boundedness_slope");
    dg.tolerances.decay_slack = num("diagnostics.decay_slack");
    dg.tolerances.trend_tol = num("diagnostics.trend_tol");
    dg.tolerances.residual_floor = num("diagnostics.residual_floor");
    dg.tolerances.sup_growth = num("diagnostics.sup_growth");

    r.sampler.samples = static_cast<int>(integer("sampler.samples"));
    require(r.sampler.samples >= 1, "sampler.samples", "must be >= 1");
    r.sampler.seed = seed_or_master("sampler.seed");
    r.sampler.indices = list("sampler.indices");
    require(!r.sampler.indices.empty(), "sampler.indices", "must not be empty");
    require_indices(r.sampler.indices, "sampler.indices");
    r.sampler.neumann = r.solver.neumann;

    r.verify_space.seed = r.seed;
    r.verify_space.order = p.order;
    r.verify_space.samples = static_cast<int>(integer("verify_space.samples"));
    require(r.verify_space.samples >= 1, "verify_space.samples", "must be >= 1");
    r.verify_space.grid = list("verify_space.grid");
    require(!r.verify_space.grid.empty(), "verify_space.grid", "must not be empty");
    require_indices(r.verify_space.grid, "verify_space.grid");
    r.verify_space.grading.power = num("space.weight_power");
    require(r.verify_space.grading.power > 0.0, "space.weight_power", "must be > 0");

    r.sweep.epsilon = to_list("sweep.epsilon", raw("sweep.epsilon"));
    r.sweep.amplitude = to_list("sweep.amplitude", raw("sweep.amplitude"));
    r.sweep.tau = to_list("sweep.tau", raw("sweep.tau"));
    const std::string sweep_mode = raw("sweep.mode");
    require(sweep_mode == "solve" || sweep_mode == "delta", "sweep.mode", "expected solve or delta");
    r.sweep.mode = sweep_mode == "solve" ? SweepMode::solve : SweepMode::delta;
    r.sweep.workers = static_cast<int>(integer("sweep.workers"));
    require(r.sweep.workers >= 1 && r.sweep.workers <= 256, "sweep.workers", "must be in 1..256");

    r.output_dir = raw("output.dir");
    require(!r.output_dir.empty(), "output.dir", "must not be empty");
    return r;
}

}  // namespace nashmoser
