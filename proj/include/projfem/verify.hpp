#ifndef PROJFEM_VERIFY_HPP
#define PROJFEM_VERIFY_HPP

#include <array>
#include <string>
#include <vector>

#include "projfem/assemble.hpp"
#include "projfem/fem.hpp"

namespace projfem {

/// The manufactured solution driving every convergence study:
///   u  = e^{-t} ((cos 2 pi x - 1) sin 2 pi y, -(cos 2 pi y - 1) sin 2 pi x)
///   p  = 2 pi e^{-t} (sin 2 pi x + sin 2 pi y)
/// Divergence-free, u = 0 on the boundary, zero-mean pressure, and
/// grad p . n != 0 on the boundary so the artificial Neumann condition of
/// the projection step is actually exercised.
struct ExactValue {
    double u1, u2, p;
};
ExactValue exact_solution(double t, double x, double y);

/// Gradients of the exact velocity components (needed for H1 errors).
struct ExactGradient {
    std::array<double, 2> u1;
    std::array<double, 2> u2;
};
ExactGradient exact_gradient(double t, double x, double y);

/// Closed-form forcing f = u_t + (u.grad)u - nu Lap u + grad p for the
/// manufactured solution above.
std::pair<double, double> forcing(double t, double x, double y, double nu);

/// One row of per-step errors against the exact solution.
struct StepErrors {
    double t = 0.0;
    double u1_l2 = 0.0;
    double u1_h1 = 0.0;  // H1 seminorm (gradient L2)
    double u2_l2 = 0.0;
    double u2_h1 = 0.0;
    double p_l2 = 0.0;
};

struct ErrorSeries {
    std::vector<StepErrors> steps;  // length M + 1, including t0
};

/// Summary norms in the tables' row order. linf = max over steps,
/// l2 = sqrt(k * sum over m = 0..M).
struct SummaryNorms {
    double u1_linf_l2 = 0.0;
    double u1_linf_h1 = 0.0;
    double u2_linf_l2 = 0.0;
    double u2_linf_h1 = 0.0;
    double p_l2_l2 = 0.0;
    double p_linf_l2 = 0.0;

    double get(const std::string& name) const;
    static const std::vector<std::string>& names();
};

/// Per-step errors of the discrete fields at time t. Velocity errors use
/// the degree-6 rule; the pressure error mean-zeroes both pressures.
StepErrors step_errors(const Field& u1, const Field& u2, const Field& p,
                       const Vector& mass_vector_p, double t);

SummaryNorms summarize(const ErrorSeries& series, double k);

/// History-based wrapper: fields sampled at every t_m = m k.
struct StepFields {
    Field u1, u2, p;
};
ErrorSeries error_norms(const std::vector<StepFields>& history,
                        const Vector& mass_vector_p, double k);

/// ln(e_coarse / e_fine) / ln(k_coarse / k_fine); rejects nonpositive
/// errors and a nonincreasing step pair.
double observed_order(double e_coarse, double e_fine, double k_coarse,
                      double k_fine);

struct ConvergenceEntry {
    double k = 0.0;
    SummaryNorms norms;
    double assembly_seconds = 0.0;
    double solve_seconds = 0.0;
    double total_seconds = 0.0;
};

struct ConvergenceReport {
    std::string scheme;
    std::string pair;
    int n = 0;
    std::string diagonal;
    std::vector<ConvergenceEntry> entries;          // one per k, descending k
    /// orders[i] pairs entries[i] and entries[i+1], per norm name.
    std::vector<SummaryNorms> orders;
};

/// Fills report.orders from report.entries.
void compute_orders(ConvergenceReport& report);

}  // namespace projfem

#endif
