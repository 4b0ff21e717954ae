#ifndef PROJFEM_SCHEMES_HPP
#define PROJFEM_SCHEMES_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "projfem/assemble.hpp"
#include "projfem/fem.hpp"
#include "projfem/verify.hpp"

namespace projfem {

enum class SchemeKind { Incremental, Rotational, Consistent, Penalty };
SchemeKind scheme_from_string(const std::string& name);
std::string to_string(SchemeKind s);

enum class FePair { TaylorHood, Mini };
FePair pair_from_string(const std::string& name);  // "th" | "mini"
std::string to_string(FePair p);
FeKind velocity_kind(FePair p);

struct SchemeConfig {
    SchemeKind scheme = SchemeKind::Incremental;
    FePair pair = FePair::TaylorHood;
    int n = 32;
    double k = 0.1;
    double T = 2.0;
    double nu = 1.0;
    Diagonal diagonal = Diagonal::Right;
    double velocity_tol = 1e-10;
    double pressure_tol = 1e-11;
    int max_iter_factor = 10;
    bool with_convection = true;  // off only in diagnostic runs

    int steps() const;  // T / k, rejecting non-divisible k
    void validate() const;
};

/// Per-timestep unknowns. u1/u2 hold the computable velocity: the
/// intermediate tilde-u for the incremental scheme, u itself for the
/// section-3 competitors. The incremental end-of-step velocity lives in
/// Y_h + grad Q_h and is never materialized; its norm is recovered from
/// the projection identity.
struct SchemeState {
    Field u1, u2;
    Field p_prev, p_curr;
    int step = 0;
    double t = 0.0;
};

struct StepDiagnostics {
    int step = 0;
    double t = 0.0;
    int velocity_iterations = 0;
    int pressure_iterations = 0;
    int projector_iterations = 0;
    // incremental scheme only (NaN otherwise)
    double proj_identity_rel = std::numeric_limits<double>::quiet_NaN();
    double div_orthog_inf = std::numeric_limits<double>::quiet_NaN();
    double energy = std::numeric_limits<double>::quiet_NaN();
    // section-3 schemes only: ||Pi_h(div u)|| in the M_p norm
    double div_norm = std::numeric_limits<double>::quiet_NaN();
};

class SolverFailure : public std::runtime_error {
public:
    SolverFailure(const std::string& what, SolveReport report)
        : std::runtime_error(what), report(report) {}
    SolveReport report;
};

/// L2 projection of div u onto the pressure space: solves
/// M_p x = (div u, q_h), the Pi_h operator of the rotational, consistent
/// and penalty schemes. Requires boundary-zero velocity fields.
Field l2_project_div(const Field& u1, const Field& u2, const OperatorSet& ops,
                     double tol = 1e-11, int max_iter_factor = 10);

/// Advances one scheme in time. Owns the per-step system matrices and
/// scratch vectors; the OperatorSet stays immutable.
class Stepper {
public:
    Stepper(const FeSpace& vspace, const FeSpace& pspace,
            const OperatorSet& ops, SchemeConfig cfg, VectorFn2 force);

    /// Nodal interpolation of the manufactured solution at t = 0;
    /// boundary velocity dofs zeroed, pressure mean-zero projected.
    SchemeState interpolated_initial_state() const;

    /// State from given fields, with the state invariants enforced.
    SchemeState make_state(const Field& u1, const Field& u2,
                           const Field& p0) const;

    /// One step m -> m+1. The first step from a fresh state (where
    /// p_prev == p_curr) is the auxiliary initial step: the pressure
    /// extrapolation 2 p^m - p^{m-1} collapses to p^0.
    StepDiagnostics advance(SchemeState& state);

    /// Incremental sub-step (a): solve the two decoupled
    /// convection-diffusion systems for the intermediate velocity.
    std::pair<Field, Field> incremental_velocity_step(const SchemeState& state,
                                                      int* iterations = nullptr);

    struct PressureStep {
        Field p_next;
        Field delta_p;
        SolveReport report;
    };
    /// Incremental sub-step (b): k (grad dp, grad q) = (u~, grad q).
    PressureStep incremental_pressure_step(const Field& ut1, const Field& ut2,
                                           const SchemeState& state);

    const OperatorSet& ops() const { return *ops_; }
    const SchemeConfig& config() const { return cfg_; }

    double assembly_seconds() const { return assembly_seconds_; }
    double solve_seconds() const { return solve_seconds_; }

private:
    struct VelocitySolve {
        Field u1, u2;
        int iterations = 0;
    };
    /// Shared segregated velocity solve with pressure-like source pi:
    /// [(1/k) M + N(w) + nu K] u_a = (1/k) M u_a^m - G_a pi + b_a.
    VelocitySolve solve_velocity(const SchemeState& state, const Vector& pi);
    VelocitySolve solve_velocity_block(const SchemeState& state,
                                       const Vector& pi);
    void fill_system_values(const SchemeState& state);
    void forcing_at(double t);
    Field project_div(const Field& u1, const Field& u2);
    Vector extrapolated_pressure(const SchemeState& state) const;

    StepDiagnostics step_incremental(SchemeState& state);
    StepDiagnostics step_rotational(SchemeState& state);
    StepDiagnostics step_consistent(SchemeState& state);
    StepDiagnostics step_penalty(SchemeState& state);

    SolveReport solve_pressure_poisson(const CsrMatrix& A, const Vector& rhs,
                                       Vector& x);

    const FeSpace* vspace_;
    const FeSpace* pspace_;
    const OperatorSet* ops_;
    SchemeConfig cfg_;
    VectorFn2 force_;

    CsrMatrix A_;          // per-step velocity system, velocity pattern
    CsrMatrix A_pressure_; // k * K_p, fixed for the whole run
    std::vector<double> conv_values_;
    ConvectionAssembler convection_;

    // penalty block system (built lazily)
    bool block_ready_ = false;
    CsrMatrix A_block_;
    CsrMatrix gd_yx_;
    std::vector<int> block_boundary_dofs_;
    void ensure_block();

    Vector b1_, b2_;       // forcing at t_{m+1}
    double assembly_seconds_ = 0.0;
    double solve_seconds_ = 0.0;
};

/// The explicit auxiliary start: from (u~0, p0) compute (u~1, p1) with
/// grad p0 in place of the extrapolation, leaving a state whose
/// 2 p^1 - p^0 is well defined for step 2.
SchemeState auxiliary_initial_step(Stepper& stepper, const Field& ut0_1,
                                   const Field& ut0_2, const Field& p0);

}  // namespace projfem

#endif
