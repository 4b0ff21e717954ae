#include "projfem/run.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <thread>

#include "projfem/log.hpp"

namespace projfem {

namespace {

std::string run_tag(const RunConfig& config) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s %s n=%d k=%g T=%g",
                  to_string(config.scheme.scheme).c_str(),
                  to_string(config.scheme.pair).c_str(), config.scheme.n,
                  config.scheme.k, config.scheme.T);
    return buf;
}

}  // namespace

void operator_self_check(const OperatorSet& ops, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const int nv = ops.vspace->n_dofs();
    const int np = ops.pspace->n_dofs();

    // skew-symmetry of the convection form: v' N(w) v = 0
    ConvectionAssembler convection(*ops.vspace, ops.pat_v);
    std::vector<double> values;
    for (int trial = 0; trial < 5; ++trial) {
        Field w1(*ops.vspace), w2(*ops.vspace);
        for (int i = 0; i < nv; ++i) {
            w1.values[i] = unif(rng);
            w2.values[i] = unif(rng);
        }
        convection.fill(w1, w2, values);
        CsrMatrix N = ops.pat_v.matrix_with(values);
        Vector v(nv);
        for (int i = 0; i < nv; ++i) v[i] = unif(rng);
        const double vNv = dot(v, N.multiply(v));
        double scale = 0.0;
        for (double x : N.values()) scale = std::max(scale, std::abs(x));
        scale = std::max(scale * dot(v, v), 1e-30);
        if (std::abs(vNv) > 1e-12 * scale) {
            throw std::runtime_error("self-check: convection not skew-symmetric");
        }
    }

    // duality (G_x q) . v = (D_x v) . q
    for (int trial = 0; trial < 5; ++trial) {
        Vector q(np), v(nv);
        for (double& x : q) x = unif(rng);
        for (double& x : v) x = unif(rng);
        const double a = dot(ops.G_x.multiply(q), v);
        const double b = dot(ops.D_x.multiply(v), q);
        if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a))) {
            throw std::runtime_error("self-check: G/D duality violated");
        }
    }

    // constants span the null space of the pressure Laplacian
    Vector ones(np, 1.0);
    if (norm_inf(ops.K_p.multiply(ones)) > 1e-12) {
        throw std::runtime_error("self-check: K_p 1 != 0");
    }
    log_debug("operator self-check passed");
}

RunResult run_single(const RunConfig& config) {
    config.validate();
    const auto t_start = std::chrono::steady_clock::now();
    const SchemeConfig& sc = config.scheme;
    const int n_steps = sc.steps();

    RunResult result;
    result.config = config;

    log_info("run " + run_tag(config));

    const auto t_setup = std::chrono::steady_clock::now();
    TriMesh mesh = TriMesh::structured(sc.n, sc.diagonal);
    FeSpace vspace(mesh, velocity_kind(sc.pair));
    FeSpace pspace(mesh, FeKind::P1);
    OperatorSet ops = assemble_operator_set(vspace, pspace);
    result.assembly_seconds +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_setup)
            .count();

    operator_self_check(ops, config.seed);

    const double nu = sc.nu;
    VectorFn2 force = [nu](double t, double x, double y) {
        return forcing(t, x, y, nu);
    };
    Stepper stepper(vspace, pspace, ops, sc, force);
    SchemeState state = stepper.interpolated_initial_state();

    const bool writing = !config.out_dir.empty();
    namespace fs = std::filesystem;
    if (writing) fs::create_directories(config.out_dir);
    auto vtk_path = [&](int step) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "fields_%06d.vtk", step);
        return (fs::path(config.out_dir) / buf).string();
    };
    auto emit_vtk = [&](int step) {
        if (!writing || !config.emit_vtk) return;
        if (step % config.vtk_every != 0) return;
        write_file(vtk_path(step),
                   vtk_snapshot(mesh, state.u1, state.u2, state.p_curr,
                                run_tag(config) + " step " + std::to_string(step)));
    };

    result.series.steps.push_back(
        step_errors(state.u1, state.u2, state.p_curr, ops.mass_vector_p, 0.0));
    emit_vtk(0);

    for (int m = 1; m <= n_steps; ++m) {
        StepDiagnostics diag = stepper.advance(state);
        result.diagnostics.push_back(diag);
        result.series.steps.push_back(step_errors(
            state.u1, state.u2, state.p_curr, ops.mass_vector_p, state.t));
        emit_vtk(m);
        if (log_level() >= LogLevel::Debug) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "step %d t=%.4f vel_it=%d p_it=%d", m, state.t,
                          diag.velocity_iterations, diag.pressure_iterations);
            log_debug(buf);
        }
    }

    result.norms = summarize(result.series, sc.k);
    result.assembly_seconds += stepper.assembly_seconds();
    result.solve_seconds += stepper.solve_seconds();
    result.total_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
            .count();

    if (writing) {
        write_file((fs::path(config.out_dir) / "errors.csv").string(),
                   error_series_csv(result.series));
        write_file((fs::path(config.out_dir) / "invariants.csv").string(),
                   diagnostics_csv(result.diagnostics));
    }
    return result;
}

ConvergenceReport run_convergence(const RunConfig& config,
                                  const std::vector<double>& ks) {
    if (ks.empty()) throw std::invalid_argument("convergence: empty k list");
    for (std::size_t i = 0; i < ks.size(); ++i) {
        if (i > 0 && ks[i] >= ks[i - 1]) {
            throw std::invalid_argument("convergence: k list must be descending");
        }
        RunConfig probe = config;
        probe.scheme.k = ks[i];
        probe.scheme.steps();  // rejects non-divisible k
    }

    ConvergenceReport report;
    report.scheme = to_string(config.scheme.scheme);
    report.pair = to_string(config.scheme.pair);
    report.n = config.scheme.n;
    report.diagonal = to_string(config.scheme.diagonal);
    report.entries.resize(ks.size());

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(ks.size());
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= ks.size()) return;
            try {
                RunConfig rc = config;
                rc.scheme.k = ks[i];
                if (!rc.out_dir.empty()) {
                    rc.out_dir += "/k_" + format_g17(ks[i]);
                }
                RunResult r = run_single(rc);
                ConvergenceEntry& e = report.entries[i];
                e.k = ks[i];
                e.norms = r.norms;
                e.assembly_seconds = r.assembly_seconds;
                e.solve_seconds = r.solve_seconds;
                e.total_seconds = r.total_seconds;
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int n_workers =
        std::max(1, std::min<int>(config.workers, static_cast<int>(ks.size())));
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (auto& err : errors) {
        if (err) std::rethrow_exception(err);
    }

    compute_orders(report);
    return report;
}

CompareReport run_compare(const RunConfig& config,
                          const std::vector<std::string>& schemes) {
    if (schemes.size() < 2) {
        throw std::invalid_argument("compare: need at least 2 schemes");
    }
    CompareReport report;
    report.pair = to_string(config.scheme.pair);
    report.n = config.scheme.n;
    report.k = config.scheme.k;
    for (const std::string& name : schemes) {
        RunConfig rc = config;
        rc.scheme.scheme = scheme_from_string(name);
        if (!rc.out_dir.empty()) rc.out_dir += "/" + name;
        RunResult r = run_single(rc);
        CompareEntry entry;
        entry.scheme = name;
        entry.norms = r.norms;
        entry.assembly_seconds = r.assembly_seconds;
        entry.solve_seconds = r.solve_seconds;
        entry.total_seconds = r.total_seconds;
        report.entries.push_back(entry);
    }
    double reference = report.entries.front().total_seconds;
    for (const CompareEntry& e : report.entries) {
        if (e.scheme == "incremental") {
            reference = e.total_seconds;
            break;
        }
    }
    for (CompareEntry& e : report.entries) {
        e.relative_cost = reference > 0.0 ? e.total_seconds / reference : 1.0;
    }
    return report;
}

}  // namespace projfem
