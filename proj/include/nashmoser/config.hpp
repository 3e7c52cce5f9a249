#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nashmoser/diagnostics.hpp"
#include "nashmoser/problems.hpp"

namespace nashmoser {

struct ConfigKey {
    std::string_view name;
    std::string_view default_value;  // "" marks a key without default (seed)
    std::string_view doc;
};

/// Every recognised key in documentation order.
std::span<const ConfigKey> config_schema();

/// Flat "key = value" configuration. Lines starting with '#' are comments.
/// Values stay textual until resolve(), so dumps and hashes are canonical.
class ExperimentConfig {
public:
    ExperimentConfig();

    static ExperimentConfig parse(std::string_view text);
    static ExperimentConfig load(const std::filesystem::path& path);

    /// Throws config on an unknown key.
    void set(std::string_view key, std::string_view value);
    std::string get(std::string_view key) const;

    /// All keys in schema order, "key = value" per line.
    std::string dump() const;

    /// FNV-1a of dump() without output.dir and sweep.workers, as 16 hex digits.
    std::string hash() const;

private:
    std::map<std::string, std::string, std::less<>> values_;
};

enum class AmplitudeScale { absolute, delta };
enum class CalibrationMode { bisect, analytic };
enum class SweepMode { solve, delta };

struct TargetSpec {
    std::uint64_t seed = 0;
    double amplitude = 0.0;
    AmplitudeScale scale = AmplitudeScale::delta;
    std::optional<double> decay;       // unset: s0 + 2(d+m) + 1
    std::optional<int> band_limit;     // unset: 3 for P0, none otherwise
};

struct DiagnosticsSpec {
    std::vector<double> n_grid;        // growth bound; empty: {d, 2d+1, s0}
    std::vector<double> a_grid;        // rate-a decay; empty: {mu, mu+d+m, mu+2(d+m)}
    std::optional<double> b;           // increment decay; unset: mu - d - m
    std::vector<double> increment_n;  // increment decay; empty: {d}
    int theorem_instances = 20;        // seeded solves over [delta/100, delta]; 0 disables
    DiagnosticTolerances tolerances;
};

struct SweepSpec {
    std::vector<double> epsilon;
    std::vector<double> amplitude;
    std::vector<double> tau;
    SweepMode mode = SweepMode::solve;
    int workers = 1;
};

struct VerifySpaceSpec {
    std::uint64_t seed = 0;
    int order = 128;
    int samples = 1000;
    std::vector<double> grid{0, 0.5, 1, 2, 4, 8};
    double rel_tol = 1e-12;
    Grading grading;
};

/// Typed view of an ExperimentConfig after validation.
struct ResolvedConfig {
    std::uint64_t seed = 0;
    ProblemSpec problem;
    std::optional<double> schedule_lambda;
    std::optional<double> schedule_tau;
    SolverConfig solver;
    CalibrationMode calibration = CalibrationMode::bisect;
    double calibration_safety = 0.5;
    int calibration_steps = 40;
    TargetSpec target;
    DiagnosticsSpec diagnostics;
    SamplerConfig sampler;
    VerifySpaceSpec verify_space;
    SweepSpec sweep;
    std::filesystem::path output_dir;
};

/// Throws config naming the offending key.
ResolvedConfig resolve(const ExperimentConfig& config);

}  // namespace nashmoser
