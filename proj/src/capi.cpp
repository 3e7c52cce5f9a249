#include "nashmoser/nashmoser.h"

#include <cstring>
#include <new>
#include <string>

#include "nashmoser/error.hpp"
#include "nashmoser/experiment.hpp"

using namespace nashmoser;

struct nm_config {
    ExperimentConfig value;
};

struct nm_result {
    int exit_code = 0;
    std::string message;
    std::string summary;
};

struct nm_element {
    GradedElement value;
};

struct nm_problem {
    ProblemPtr value;
};

struct nm_solution {
    SolveOutcome outcome;
    std::string status;
    std::string trace;
};

namespace {

thread_local std::string last_error;

nm_status fail(nm_status status, const char* message) {
    last_error = message;
    return status;
}

template <class F>
nm_status guard(F&& body) {
    try {
        body();
        return NM_OK;
    } catch (const Error& e) {
        return fail(static_cast<nm_status>(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(NM_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(NM_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(NM_ERR_INTERNAL, "unknown exception");
    }
}

void require(const void* p, const char* what) {
    if (p == nullptr) throw Error(ErrorCode::invalid_argument, std::string("null ") + what);
}

void copy_out(const std::string& s, char* buf, size_t cap, size_t* needed) {
    if (needed != nullptr) *needed = s.size() + 1;
    if (buf == nullptr || cap == 0) return;
    const size_t n = std::min(cap - 1, s.size());
    std::memcpy(buf, s.data(), n);
    buf[n] = '\0';
}

nm_exponents to_c(const DerivedExponents& e) {
    return {e.lambda, e.tau, e.d, e.m, e.mu, e.s, e.s0, e.delta, e.degenerate ? 1 : 0};
}

DerivedExponents from_c(const nm_exponents& c) {
    DerivedExponents e;
    e.lambda = c.lambda;
    e.tau = c.tau;
    e.d = c.d;
    e.m = c.m;
    e.mu = c.mu;
    e.s = c.s;
    e.s0 = c.s0;
    e.delta = c.delta;
    e.degenerate = c.degenerate != 0;
    return e;
}

ScheduleParams schedule_for(const TameProblem& problem, const ResolvedConfig& rc) {
    ScheduleParams params;
    params.lambda = rc.schedule_lambda.value_or(problem.constants().lambda);
    params.tau = rc.schedule_tau.value_or((params.lambda + 2.0) / 2.0);
    return params;
}

}  // namespace

extern "C" {

const char* nm_version(void) { return "0.1.0"; }

const char* nm_status_string(nm_status status) {
    if (status == NM_OK) return "ok";
    if (status < NM_ERR_INVALID_ARGUMENT || status > NM_ERR_INTERNAL) return "unknown status";
    return to_string(static_cast<ErrorCode>(status)).data();
}

const char* nm_last_error(void) { return last_error.c_str(); }

nm_status nm_config_new(nm_config** out) {
    return guard([&] {
        require(out, "output pointer");
        *out = new nm_config{};
    });
}

nm_status nm_config_parse(const char* text, nm_config** out) {
    return guard([&] {
        require(text, "text");
        require(out, "output pointer");
        *out = new nm_config{ExperimentConfig::parse(text)};
    });
}

nm_status nm_config_load(const char* path, nm_config** out) {
    return guard([&] {
        require(path, "path");
        require(out, "output pointer");
        *out = new nm_config{ExperimentConfig::load(path)};
    });
}

void nm_config_free(nm_config* config) { delete config; }

nm_status nm_config_set(nm_config* config, const char* key, const char* value) {
    return guard([&] {
        require(config, "config");
        require(key, "key");
        require(value, "value");
        config->value.set(key, value);
    });
}

nm_status nm_config_get(const nm_config* config, const char* key, char* buf, size_t cap, size_t* needed) {
    return guard([&] {
        require(config, "config");
        require(key, "key");
        copy_out(config->value.get(key), buf, cap, needed);
    });
}

nm_status nm_config_dump(const nm_config* config, char* buf, size_t cap, size_t* needed) {
    return guard([&] {
        require(config, "config");
        copy_out(config->value.dump(), buf, cap, needed);
    });
}

nm_status nm_config_hash(const nm_config* config, char out[17]) {
    return guard([&] {
        require(config, "config");
        require(out, "output buffer");
        copy_out(config->value.hash(), out, 17, nullptr);
    });
}

size_t nm_config_key_count(void) { return config_schema().size(); }

nm_status nm_config_key_info(size_t index, const char** name, const char** default_value, const char** doc) {
    return guard([&] {
        const auto schema = config_schema();
        if (index >= schema.size()) throw Error(ErrorCode::invalid_argument, "config key index out of range");
        // schema strings are literals, so their data() is terminated
        if (name != nullptr) *name = schema[index].name.data();
        if (default_value != nullptr) *default_value = schema[index].default_value.data();
        if (doc != nullptr) *doc = schema[index].doc.data();
    });
}

nm_status nm_run(const nm_config* config, nm_command command, nm_result** out) {
    return guard([&] {
        require(config, "config");
        require(out, "output pointer");
        CommandResult r;
        switch (command) {
            case NM_CMD_VERIFY_SPACE: r = cmd_verify_space(config->value); break;
            case NM_CMD_VERIFY_PROBLEM: r = cmd_verify_problem(config->value); break;
            case NM_CMD_SOLVE: r = cmd_solve(config->value); break;
            case NM_CMD_SWEEP: r = cmd_sweep(config->value); break;
            default: throw Error(ErrorCode::invalid_argument, "unknown command");
        }
        *out = new nm_result{r.exit_code, std::move(r.message), r.summary.dump(2)};
    });
}

int nm_result_exit_code(const nm_result* result) { return result == nullptr ? -1 : result->exit_code; }
const char* nm_result_message(const nm_result* result) { return result == nullptr ? "" : result->message.c_str(); }
const char* nm_result_summary_json(const nm_result* result) {
    return result == nullptr ? "" : result->summary.c_str();
}
void nm_result_free(nm_result* result) { delete result; }

nm_status nm_element_new(int order, nm_element** out) {
    return guard([&] {
        require(out, "output pointer");
        *out = new nm_element{GradedElement(order)};
    });
}

nm_status nm_element_random(int order, uint64_t seed, double decay, nm_element** out) {
    return guard([&] {
        require(out, "output pointer");
        Rng rng(seed);
        SampleShape shape;
        shape.decay = decay;
        *out = new nm_element{random_element(order, rng, shape)};
    });
}

nm_status nm_element_clone(const nm_element* x, nm_element** out) {
    return guard([&] {
        require(x, "element");
        require(out, "output pointer");
        *out = new nm_element{x->value};
    });
}

void nm_element_free(nm_element* x) { delete x; }

int nm_element_order(const nm_element* x) { return x == nullptr ? -1 : x->value.order(); }

nm_status nm_element_set(nm_element* x, int k, double re, double im) {
    return guard([&] {
        require(x, "element");
        x->value.set(k, Coeff{re, im});
    });
}

nm_status nm_element_get(const nm_element* x, int k, double* re, double* im) {
    return guard([&] {
        require(x, "element");
        const Coeff c = x->value.at(k);
        if (re != nullptr) *re = c.real();
        if (im != nullptr) *im = c.imag();
    });
}

nm_status nm_element_seminorm(const nm_element* x, double n, double* out) {
    return guard([&] {
        require(x, "element");
        require(out, "output pointer");
        *out = seminorm(x->value, n);
    });
}

nm_status nm_element_smooth(const nm_element* x, double theta, nm_element** out) {
    return guard([&] {
        require(x, "element");
        require(out, "output pointer");
        *out = new nm_element{smooth(x->value, theta)};
    });
}

nm_status nm_element_rough(const nm_element* x, double theta, nm_element** out) {
    return guard([&] {
        require(x, "element");
        require(out, "output pointer");
        *out = new nm_element{rough(x->value, theta)};
    });
}

nm_status nm_derive_exponents(double lambda, double tau, double d, double m, nm_exponents* out) {
    return guard([&] {
        require(out, "output pointer");
        ProblemConstants c;
        c.d = d;
        c.m = m;
        c.lambda = lambda;
        *out = to_c(derive_exponents(c, ScheduleParams{lambda, tau}));
    });
}

nm_status nm_growth_exponent(const nm_exponents* exps, double n, double* out) {
    return guard([&] {
        require(exps, "exponents");
        require(out, "output pointer");
        *out = from_c(*exps).growth_exponent(n);
    });
}

nm_status nm_problem_new(const nm_config* config, nm_problem** out) {
    return guard([&] {
        require(config, "config");
        require(out, "output pointer");
        *out = new nm_problem{make_problem(resolve(config->value).problem)};
    });
}

void nm_problem_free(nm_problem* problem) { delete problem; }

int nm_problem_order(const nm_problem* problem) { return problem == nullptr ? -1 : problem->value->order(); }

nm_status nm_problem_exponents(const nm_problem* problem, const nm_config* config, nm_exponents* out) {
    return guard([&] {
        require(problem, "problem");
        require(config, "config");
        require(out, "output pointer");
        const ResolvedConfig rc = resolve(config->value);
        *out = to_c(derive_exponents(problem->value->constants(), schedule_for(*problem->value, rc)));
    });
}

nm_status nm_problem_apply(const nm_problem* problem, const nm_element* x, nm_element** out) {
    return guard([&] {
        require(problem, "problem");
        require(x, "element");
        require(out, "output pointer");
        *out = new nm_element{problem->value->apply(x->value)};
    });
}

nm_status nm_problem_describe(const nm_problem* problem, char* buf, size_t cap, size_t* needed) {
    return guard([&] {
        require(problem, "problem");
        copy_out(problem->value->describe().dump(), buf, cap, needed);
    });
}

nm_status nm_solve(const nm_problem* problem, const nm_element* y, const nm_config* config, nm_solution** out) {
    return guard([&] {
        require(problem, "problem");
        require(y, "target");
        require(config, "config");
        require(out, "output pointer");
        const ResolvedConfig rc = resolve(config->value);
        const ScheduleParams params = schedule_for(*problem->value, rc);
        const DerivedExponents exps = derive_exponents(problem->value->constants(), params);
        SolveOutcome outcome = solve(*problem->value, y->value, params, exps, rc.solver);
        std::string status(to_string(outcome.status));
        std::string trace = trace_csv(outcome.trace, config->value.hash());
        *out = new nm_solution{std::move(outcome), std::move(status), std::move(trace)};
    });
}

int nm_solution_converged(const nm_solution* solution) {
    return solution != nullptr && solution->outcome.ok() ? 1 : 0;
}

const char* nm_solution_status(const nm_solution* solution) {
    return solution == nullptr ? "" : solution->status.c_str();
}

int nm_solution_iterations(const nm_solution* solution) {
    if (solution == nullptr || solution->outcome.trace.rows.empty()) return 0;
    return static_cast<int>(solution->outcome.trace.rows.size()) - 1;
}

double nm_solution_residual(const nm_solution* solution) {
    if (solution == nullptr || solution->outcome.trace.rows.empty()) return -1.0;
    return solution->outcome.trace.rows.back().z_d;
}

nm_status nm_solution_element(const nm_solution* solution, nm_element** out) {
    return guard([&] {
        require(solution, "solution");
        require(out, "output pointer");
        *out = new nm_element{solution->outcome.solution};
    });
}

const char* nm_solution_trace_csv(const nm_solution* solution) {
    return solution == nullptr ? "" : solution->trace.c_str();
}

void nm_solution_free(nm_solution* solution) { delete solution; }

}  // extern "C"
