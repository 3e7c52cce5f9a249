#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nashmoser/nashmoser.h"

namespace {

std::string config_value(const nm_config* config, const char* key) {
    size_t needed = 0;
    nm_config_get(config, key, nullptr, 0, &needed);
    std::string out(needed, '\0');
    nm_config_get(config, key, out.data(), out.size(), &needed);
    out.resize(needed - 1);
    return out;
}

int config_error(const char* what) {
    std::fprintf(stderr, "nmctl: %s: %s\n", what, nm_last_error());
    return 2;
}

void print_config(const nm_config* config) {
    for (size_t i = 0; i < nm_config_key_count(); ++i) {
        const char* name = nullptr;
        const char* doc = nullptr;
        nm_config_key_info(i, &name, nullptr, &doc);
        std::printf("# %s\n%s = %s\n", doc, name, config_value(config, name).c_str());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nash-Moser iteration experiments on spectral truncations"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    app.add_option("-c,--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);

    std::map<std::string, std::string> overrides;
    std::vector<std::pair<std::string, CLI::Option*>> flags;
    for (size_t i = 0; i < nm_config_key_count(); ++i) {
        const char* name = nullptr;
        const char* def = nullptr;
        const char* doc = nullptr;
        nm_config_key_info(i, &name, &def, &doc);
        CLI::Option* opt = app.add_option(std::string("--") + name, overrides[name], doc);
        opt->group("Config keys");
        flags.emplace_back(name, opt);
    }

    const std::vector<std::pair<std::string, nm_command>> commands{
        {"verify-space", NM_CMD_VERIFY_SPACE},
        {"verify-problem", NM_CMD_VERIFY_PROBLEM},
        {"solve", NM_CMD_SOLVE},
        {"sweep", NM_CMD_SWEEP},
    };
    app.add_subcommand("verify-space", "check the smoothing and interpolation inequalities");
    app.add_subcommand("verify-problem", "estimate the tame condition constants of a problem");
    app.add_subcommand("solve", "solve phi(x) = y and run the diagnostics");
    app.add_subcommand("sweep", "Cartesian sweep over epsilon, amplitude and tau");
    app.add_subcommand("print-config", "print every key with its current value");

    CLI11_PARSE(app, argc, argv);

    nm_config* config = nullptr;
    const nm_status loaded = config_path.empty() ? nm_config_new(&config) : nm_config_load(config_path.c_str(), &config);
    if (loaded != NM_OK) return config_error("cannot load config");
    for (const auto& [name, opt] : flags) {
        if (opt->count() == 0) continue;
        if (nm_config_set(config, name.c_str(), overrides[name].c_str()) != NM_OK) {
            nm_config_free(config);
            return config_error("bad override");
        }
    }

    if (app.got_subcommand("print-config")) {
        print_config(config);
        nm_config_free(config);
        return 0;
    }

    int exit_code = 2;
    for (const auto& [name, command] : commands) {
        if (!app.got_subcommand(name)) continue;
        nm_result* result = nullptr;
        if (nm_run(config, command, &result) != NM_OK) {
            exit_code = config_error(name.c_str());
            break;
        }
        exit_code = nm_result_exit_code(result);
        std::printf("%s: %s\n", name.c_str(), nm_result_message(result));
        nm_result_free(result);
    }
    nm_config_free(config);
    return exit_code;
}
