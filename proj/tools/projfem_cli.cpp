// projfem command line: run | convergence | compare, driving the shared
// library strictly through its C API.

#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "projfem/projfem.h"

namespace {

struct ConfigDeleter {
    void operator()(projfem_config* c) const { projfem_config_destroy(c); }
};
using ConfigPtr = std::unique_ptr<projfem_config, ConfigDeleter>;

int usage_error(const std::string& msg) {
    std::fprintf(stderr, "error: %s\n", msg.c_str());
    return PROJFEM_ERR_USAGE;
}

/* report the last C API failure and mirror its code as the exit status */
int api_error_exit() {
    std::fprintf(stderr, "error: %s\n", projfem_last_error());
    const int code = projfem_last_error_code();
    return code == PROJFEM_OK ? PROJFEM_ERR_RUNTIME : code;
}

int apply(projfem_config* config, const std::string& key,
          const std::string& value) {
    return projfem_config_set(config, key.c_str(), value.c_str());
}

std::string get_key(const projfem_config* config, const std::string& key) {
    char buf[4096];
    if (projfem_config_get(config, key.c_str(), buf, sizeof buf) != PROJFEM_OK) {
        return "?";
    }
    return buf;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<double> parse_k_list(const std::string& text) {
    std::vector<double> ks;
    std::string tok;
    for (char c : text + ",") {
        if (c == ',') {
            if (!tok.empty()) ks.push_back(std::stod(tok));
            tok.clear();
        } else {
            tok += c;
        }
    }
    return ks;
}

constexpr int kTextCap = 1 << 20;

int cmd_run(const projfem_config* config) {
    projfem_result* result = projfem_run(config);
    if (!result) return api_error_exit();
    std::printf("run finished: %d steps, out=%s\n",
                projfem_result_steps(result),
                get_key(config, "out").c_str());
    const char* norms[] = {"u1_linf_l2", "u1_linf_h1", "u2_linf_l2",
                           "u2_linf_h1", "p_l2_l2",    "p_linf_l2"};
    for (const char* name : norms) {
        double v = 0.0;
        projfem_result_norm(result, name, &v);
        std::printf("%-12s %.6e\n", name, v);
    }
    std::printf("assembly %.3f s, solve %.3f s, total %.3f s\n",
                projfem_result_seconds(result, "assembly"),
                projfem_result_seconds(result, "solve"),
                projfem_result_seconds(result, "total"));
    projfem_result_destroy(result);
    return 0;
}

int cmd_convergence(const projfem_config* config,
                    const std::vector<double>& ks) {
    projfem_sweep* sweep =
        projfem_convergence(config, ks.empty() ? nullptr : ks.data(),
                            static_cast<int>(ks.size()));
    if (!sweep) return api_error_exit();
    const std::string out_dir = get_key(config, "out");
    if (!out_dir.empty()) {
        const std::string path = out_dir + "/convergence.csv";
        if (projfem_sweep_write_csv(sweep, path.c_str()) == PROJFEM_OK) {
            std::printf("wrote %s\n", path.c_str());
        }
    }
    std::vector<char> text(kTextCap);
    if (projfem_sweep_format(sweep, text.data(), kTextCap) == PROJFEM_OK) {
        std::fputs(text.data(), stdout);
    }
    projfem_sweep_destroy(sweep);
    return 0;
}

int cmd_compare(const projfem_config* config,
                const std::vector<std::string>& schemes) {
    std::vector<const char*> names;
    names.reserve(schemes.size());
    for (const auto& s : schemes) names.push_back(s.c_str());
    projfem_compare* cmp = projfem_compare_run(
        config, names.data(), static_cast<int>(names.size()));
    if (!cmp) return api_error_exit();
    const std::string out_dir = get_key(config, "out");
    if (!out_dir.empty()) {
        const std::string path = out_dir + "/compare.csv";
        if (projfem_compare_write_csv(cmp, path.c_str()) == PROJFEM_OK) {
            std::printf("wrote %s\n", path.c_str());
        }
    }
    std::vector<char> text(kTextCap);
    if (projfem_compare_format(cmp, text.data(), kTextCap) == PROJFEM_OK) {
        std::fputs(text.data(), stdout);
    }
    projfem_compare_destroy(cmp);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Segregated pressure-projection Navier-Stokes solver on the "
                 "unit square (manufactured-solution error studies)"};
    app.require_subcommand(1);

    std::string config_path, scheme, pair, out_dir, k_list_text, schemes_text,
        format;
    int n = -1, workers = -1, vtk_every = -1;
    double k = -1.0, T = -1.0, nu = -1.0;
    bool vtk = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "flat key = value config file");
        cmd->add_option("--scheme", scheme,
                        "incremental | rotational | consistent | penalty");
        cmd->add_option("--n", n, "mesh subdivisions per side");
        cmd->add_option("--k", k, "time step");
        cmd->add_option("--T", T, "final time");
        cmd->add_option("--nu", nu, "viscosity");
        cmd->add_option("--pair", pair, "FE pair: th | mini");
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_flag("--vtk", vtk, "write VTK snapshots");
        cmd->add_option("--vtk-every", vtk_every, "VTK step stride");
        cmd->add_option("--workers", workers, "concurrent sweep runs");
        cmd->add_option("--format", format, "report format: csv | pretty");
    };

    CLI::App* run_cmd = app.add_subcommand("run", "single simulation run");
    add_common(run_cmd);
    CLI::App* conv_cmd =
        app.add_subcommand("convergence", "temporal convergence sweep");
    add_common(conv_cmd);
    conv_cmd->add_option("--k-list", k_list_text,
                         "comma-separated descending time steps");
    CLI::App* cmp_cmd =
        app.add_subcommand("compare", "error/cost comparison across schemes");
    add_common(cmp_cmd);
    cmp_cmd->add_option("--schemes", schemes_text,
                        "comma-separated scheme names (default: all four)");
    cmp_cmd->add_option("--k-list", k_list_text, "ignored for compare");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return PROJFEM_ERR_USAGE;
    }

    ConfigPtr config(projfem_config_create());
    if (!config_path.empty() &&
        projfem_config_load_file(config.get(), config_path.c_str()) !=
            PROJFEM_OK) {
        return usage_error(projfem_last_error());
    }

    // command-line overrides win over the file
    std::vector<std::pair<std::string, std::string>> overrides;
    if (!scheme.empty()) overrides.emplace_back("scheme", scheme);
    if (!pair.empty()) overrides.emplace_back("pair", pair);
    if (n >= 0) overrides.emplace_back("n", std::to_string(n));
    if (k >= 0.0) overrides.emplace_back("k", format_double(k));
    if (T >= 0.0) overrides.emplace_back("T", format_double(T));
    if (nu >= 0.0) overrides.emplace_back("nu", format_double(nu));
    if (!out_dir.empty()) overrides.emplace_back("out", out_dir);
    if (vtk) overrides.emplace_back("vtk", "true");
    if (vtk_every >= 1) overrides.emplace_back("vtk_every",
                                               std::to_string(vtk_every));
    if (workers >= 1) overrides.emplace_back("workers", std::to_string(workers));
    if (!format.empty()) overrides.emplace_back("format", format);
    if (!k_list_text.empty()) overrides.emplace_back("k_list", k_list_text);
    for (const auto& [key, value] : overrides) {
        if (apply(config.get(), key, value) != PROJFEM_OK) {
            return usage_error(projfem_last_error());
        }
    }
    if (get_key(config.get(), "out").empty()) {
        apply(config.get(), "out", "projfem_out");
    }

    if (run_cmd->parsed()) return cmd_run(config.get());
    if (conv_cmd->parsed()) {
        return cmd_convergence(config.get(), parse_k_list(k_list_text));
    }
    std::vector<std::string> schemes;
    if (schemes_text.empty()) {
        schemes = {"incremental", "rotational", "consistent", "penalty"};
    } else {
        std::string tok;
        for (char c : schemes_text + ",") {
            if (c == ',') {
                if (!tok.empty()) schemes.push_back(tok);
                tok.clear();
            } else {
                tok += c;
            }
        }
    }
    return cmd_compare(config.get(), schemes);
}
