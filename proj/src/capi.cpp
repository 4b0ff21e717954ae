#include "projfem/projfem.h"

#include <cstring>
#include <stdexcept>
#include <string>

#include "projfem/config.hpp"
#include "projfem/log.hpp"
#include "projfem/report.hpp"
#include "projfem/run.hpp"

using namespace projfem;

struct projfem_config {
    RunConfig config;
};

struct projfem_result {
    RunResult result;
};

struct projfem_sweep {
    ConvergenceReport report;
    ReportFormat format = ReportFormat::Csv;
};

struct projfem_compare {
    CompareReport report;
    ReportFormat format = ReportFormat::Csv;
};

namespace {

thread_local std::string g_last_error;
thread_local int g_last_error_code = PROJFEM_OK;

int fail(int code, const std::string& message) {
    g_last_error = message;
    g_last_error_code = code;
    log_error(message);
    return code;
}

/* invalid_argument maps to usage errors, everything else to runtime */
template <typename Fn>
int guarded(Fn&& fn) {
    try {
        fn();
        return PROJFEM_OK;
    } catch (const std::invalid_argument& e) {
        return fail(PROJFEM_ERR_USAGE, e.what());
    } catch (const std::exception& e) {
        return fail(PROJFEM_ERR_RUNTIME, e.what());
    }
}

int copy_out(const std::string& text, char* buf, int cap) {
    if (!buf || cap <= static_cast<int>(text.size())) {
        return fail(PROJFEM_ERR_USAGE, "buffer too small");
    }
    std::memcpy(buf, text.c_str(), text.size() + 1);
    return PROJFEM_OK;
}

}  // namespace

extern "C" {

const char* projfem_version(void) { return "0.1.0"; }

const char* projfem_last_error(void) { return g_last_error.c_str(); }

int projfem_last_error_code(void) { return g_last_error_code; }

projfem_config* projfem_config_create(void) { return new projfem_config(); }

void projfem_config_destroy(projfem_config* config) { delete config; }

int projfem_config_set(projfem_config* config, const char* key,
                       const char* value) {
    if (!config || !key || !value) {
        return fail(PROJFEM_ERR_USAGE, "null argument");
    }
    return guarded([&] { config->config.set(key, value); });
}

int projfem_config_load_file(projfem_config* config, const char* path) {
    if (!config || !path) return fail(PROJFEM_ERR_USAGE, "null argument");
    return guarded([&] { config->config.load_file(path); });
}

int projfem_config_get(const projfem_config* config, const char* key,
                       char* buf, int cap) {
    if (!config || !key) return fail(PROJFEM_ERR_USAGE, "null argument");
    std::string value;
    int rc = guarded([&] { value = config->config.get(key); });
    if (rc != PROJFEM_OK) return rc;
    return copy_out(value, buf, cap);
}

projfem_result* projfem_run(const projfem_config* config) {
    if (!config) {
        fail(PROJFEM_ERR_USAGE, "null config");
        return nullptr;
    }
    projfem_result* out = nullptr;
    int rc = guarded([&] {
        auto holder = new projfem_result{run_single(config->config)};
        out = holder;
    });
    if (rc != PROJFEM_OK) return nullptr;
    return out;
}

void projfem_result_destroy(projfem_result* result) { delete result; }

int projfem_result_steps(const projfem_result* result) {
    if (!result) return -1;
    return static_cast<int>(result->result.series.steps.size()) - 1;
}

int projfem_result_norm(const projfem_result* result, const char* name,
                        double* out) {
    if (!result || !name || !out) {
        return fail(PROJFEM_ERR_USAGE, "null argument");
    }
    return guarded([&] { *out = result->result.norms.get(name); });
}

int projfem_result_series_value(const projfem_result* result, int step,
                                const char* column, double* out) {
    if (!result || !column || !out) {
        return fail(PROJFEM_ERR_USAGE, "null argument");
    }
    const auto& steps = result->result.series.steps;
    if (step < 0 || step >= static_cast<int>(steps.size())) {
        return fail(PROJFEM_ERR_USAGE, "step out of range");
    }
    const StepErrors& e = steps[step];
    const std::string c(column);
    if (c == "time") {
        *out = e.t;
    } else if (c == "u1_l2") {
        *out = e.u1_l2;
    } else if (c == "u1_h1") {
        *out = e.u1_h1;
    } else if (c == "u2_l2") {
        *out = e.u2_l2;
    } else if (c == "u2_h1") {
        *out = e.u2_h1;
    } else if (c == "p_l2") {
        *out = e.p_l2;
    } else {
        return fail(PROJFEM_ERR_USAGE, "unknown series column: " + c);
    }
    return PROJFEM_OK;
}

double projfem_result_seconds(const projfem_result* result, const char* phase) {
    if (!result || !phase) return -1.0;
    const std::string p(phase);
    if (p == "assembly") return result->result.assembly_seconds;
    if (p == "solve") return result->result.solve_seconds;
    if (p == "total") return result->result.total_seconds;
    return -1.0;
}

int projfem_result_write_csv(const projfem_result* result, const char* path) {
    if (!result || !path) return fail(PROJFEM_ERR_USAGE, "null argument");
    return guarded(
        [&] { write_file(path, error_series_csv(result->result.series)); });
}

projfem_sweep* projfem_convergence(const projfem_config* config,
                                   const double* ks, int count) {
    if (!config || (count > 0 && !ks)) {
        fail(PROJFEM_ERR_USAGE, "null argument");
        return nullptr;
    }
    projfem_sweep* out = nullptr;
    int rc = guarded([&] {
        std::vector<double> ladder;
        if (ks && count > 0) {
            ladder.assign(ks, ks + count);
        } else {
            ladder = config->config.k_list;
        }
        auto holder = new projfem_sweep{
            run_convergence(config->config, ladder), config->config.format};
        out = holder;
    });
    if (rc != PROJFEM_OK) return nullptr;
    return out;
}

void projfem_sweep_destroy(projfem_sweep* sweep) { delete sweep; }

int projfem_sweep_count(const projfem_sweep* sweep) {
    if (!sweep) return -1;
    return static_cast<int>(sweep->report.entries.size());
}

int projfem_sweep_value(const projfem_sweep* sweep, int k_index,
                        const char* norm, double* out) {
    if (!sweep || !norm || !out) return fail(PROJFEM_ERR_USAGE, "null argument");
    if (k_index < 0 || k_index >= static_cast<int>(sweep->report.entries.size())) {
        return fail(PROJFEM_ERR_USAGE, "k index out of range");
    }
    return guarded(
        [&] { *out = sweep->report.entries[k_index].norms.get(norm); });
}

int projfem_sweep_order(const projfem_sweep* sweep, int pair_index,
                        const char* norm, double* out) {
    if (!sweep || !norm || !out) return fail(PROJFEM_ERR_USAGE, "null argument");
    if (pair_index < 0 ||
        pair_index >= static_cast<int>(sweep->report.orders.size())) {
        return fail(PROJFEM_ERR_USAGE, "order pair index out of range");
    }
    return guarded([&] { *out = sweep->report.orders[pair_index].get(norm); });
}

int projfem_sweep_write_csv(const projfem_sweep* sweep, const char* path) {
    if (!sweep || !path) return fail(PROJFEM_ERR_USAGE, "null argument");
    return guarded([&] { write_file(path, convergence_csv(sweep->report)); });
}

int projfem_sweep_format(const projfem_sweep* sweep, char* buf, int cap) {
    if (!sweep) return fail(PROJFEM_ERR_USAGE, "null sweep");
    const std::string text = sweep->format == ReportFormat::Pretty
                                 ? convergence_table(sweep->report)
                                 : convergence_csv(sweep->report);
    return copy_out(text, buf, cap);
}

projfem_compare* projfem_compare_run(const projfem_config* config,
                                     const char* const* schemes, int count) {
    if (!config || !schemes || count < 2) {
        fail(PROJFEM_ERR_USAGE, "compare needs a config and >= 2 schemes");
        return nullptr;
    }
    projfem_compare* out = nullptr;
    int rc = guarded([&] {
        std::vector<std::string> names(schemes, schemes + count);
        auto holder = new projfem_compare{run_compare(config->config, names),
                                          config->config.format};
        out = holder;
    });
    if (rc != PROJFEM_OK) return nullptr;
    return out;
}

void projfem_compare_destroy(projfem_compare* compare) { delete compare; }

int projfem_compare_count(const projfem_compare* compare) {
    if (!compare) return -1;
    return static_cast<int>(compare->report.entries.size());
}

int projfem_compare_value(const projfem_compare* compare, int scheme_index,
                          const char* metric, double* out) {
    if (!compare || !metric || !out) {
        return fail(PROJFEM_ERR_USAGE, "null argument");
    }
    if (scheme_index < 0 ||
        scheme_index >= static_cast<int>(compare->report.entries.size())) {
        return fail(PROJFEM_ERR_USAGE, "scheme index out of range");
    }
    const CompareEntry& e = compare->report.entries[scheme_index];
    const std::string m(metric);
    if (m == "assembly_seconds") {
        *out = e.assembly_seconds;
    } else if (m == "solve_seconds") {
        *out = e.solve_seconds;
    } else if (m == "total_seconds") {
        *out = e.total_seconds;
    } else if (m == "relative_cost") {
        *out = e.relative_cost;
    } else {
        return guarded([&] { *out = e.norms.get(m); });
    }
    return PROJFEM_OK;
}

int projfem_compare_write_csv(const projfem_compare* compare,
                              const char* path) {
    if (!compare || !path) return fail(PROJFEM_ERR_USAGE, "null argument");
    return guarded([&] { write_file(path, compare_csv(compare->report)); });
}

int projfem_compare_format(const projfem_compare* compare, char* buf, int cap) {
    if (!compare) return fail(PROJFEM_ERR_USAGE, "null compare");
    const std::string text = compare->format == ReportFormat::Pretty
                                 ? compare_table(compare->report)
                                 : compare_csv(compare->report);
    return copy_out(text, buf, cap);
}

}  // extern "C"
