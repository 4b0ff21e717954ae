#ifndef PROJFEM_RUN_HPP
#define PROJFEM_RUN_HPP

#include <memory>
#include <string>
#include <vector>

#include "projfem/config.hpp"
#include "projfem/report.hpp"
#include "projfem/schemes.hpp"
#include "projfem/verify.hpp"

namespace projfem {

struct RunResult {
    RunConfig config;
    ErrorSeries series;
    SummaryNorms norms;
    std::vector<StepDiagnostics> diagnostics;
    double assembly_seconds = 0.0;
    double solve_seconds = 0.0;
    double total_seconds = 0.0;
};

/// One manufactured-solution run: build mesh/spaces/operators, run the
/// seeded operator self-check, time-step to T, compute the error series.
/// Writes errors.csv, invariants.csv and the optional VTK series when
/// the config names an output directory.
RunResult run_single(const RunConfig& config);

/// One run per k in ks (descending, each dividing T); observed orders in
/// the tables' layout. Runs execute concurrently up to config.workers.
ConvergenceReport run_convergence(const RunConfig& config,
                                  const std::vector<double>& ks);

/// Fixed (n, k): one run per scheme plus relative wall-clock cost
/// normalized to the incremental scheme (or the first listed).
CompareReport run_compare(const RunConfig& config,
                          const std::vector<std::string>& schemes);

/// Randomized sanity checks on the assembled operators: convection
/// skew-symmetry, G/D duality, K_p null space. Throws on violation;
/// these failing means the assembly is wrong, not the data.
void operator_self_check(const OperatorSet& ops, std::uint64_t seed);

}  // namespace projfem

#endif
