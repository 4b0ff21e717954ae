#include "projfem/schemes.hpp"

#include <chrono>
#include <cmath>

namespace projfem {

namespace {

class Stopwatch {
public:
    explicit Stopwatch(double& sink)
        : sink_(sink), start_(std::chrono::steady_clock::now()) {}
    ~Stopwatch() {
        sink_ += std::chrono::duration<double>(
                     std::chrono::steady_clock::now() - start_)
                     .count();
    }

private:
    double& sink_;
    std::chrono::steady_clock::time_point start_;
};

}  // namespace

SchemeKind scheme_from_string(const std::string& name) {
    if (name == "incremental") return SchemeKind::Incremental;
    if (name == "rotational") return SchemeKind::Rotational;
    if (name == "consistent") return SchemeKind::Consistent;
    if (name == "penalty") return SchemeKind::Penalty;
    throw std::invalid_argument("unknown scheme: " + name);
}

std::string to_string(SchemeKind s) {
    switch (s) {
        case SchemeKind::Incremental: return "incremental";
        case SchemeKind::Rotational: return "rotational";
        case SchemeKind::Consistent: return "consistent";
        case SchemeKind::Penalty: return "penalty";
    }
    return "incremental";
}

FePair pair_from_string(const std::string& name) {
    if (name == "th" || name == "taylor-hood") return FePair::TaylorHood;
    if (name == "mini") return FePair::Mini;
    throw std::invalid_argument("unknown FE pair: " + name);
}

std::string to_string(FePair p) {
    return p == FePair::TaylorHood ? "th" : "mini";
}

FeKind velocity_kind(FePair p) {
    return p == FePair::TaylorHood ? FeKind::P2 : FeKind::P1Bubble;
}

void SchemeConfig::validate() const {
    if (n < 1) throw std::invalid_argument("config: n must be >= 1");
    if (k <= 0.0) throw std::invalid_argument("config: k must be positive");
    if (T < k) throw std::invalid_argument("config: T must be >= k");
    if (nu <= 0.0) throw std::invalid_argument("config: nu must be positive");
    if (velocity_tol <= 0.0 || pressure_tol <= 0.0) {
        throw std::invalid_argument("config: tolerances must be positive");
    }
    steps();
}

int SchemeConfig::steps() const {
    const double ratio = T / k;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * rounded) {
        throw std::invalid_argument("config: k must divide T evenly");
    }
    return static_cast<int>(rounded);
}

Field l2_project_div(const Field& u1, const Field& u2, const OperatorSet& ops,
                     double tol, int max_iter_factor) {
    const FeSpace& pspace = *ops.pspace;
    // (div u, q) = -(D_x u1 + D_y u2) for boundary-zero u, with D_a the
    // stored transpose of G_a
    Vector rhs = ops.D_x.multiply(u1.values);
    Vector ry = ops.D_y.multiply(u2.values);
    for (int i = 0; i < pspace.n_dofs(); ++i) rhs[i] = -(rhs[i] + ry[i]);
    Field out(pspace);
    SolveReport report =
        cg_solve(ops.M_p, rhs, out.values, tol,
                 max_iter_factor * pspace.n_dofs());
    if (!report.converged) {
        throw SolverFailure("l2_project_div: mass solve did not converge",
                            report);
    }
    return out;
}

Stepper::Stepper(const FeSpace& vspace, const FeSpace& pspace,
                 const OperatorSet& ops, SchemeConfig cfg, VectorFn2 force)
    : vspace_(&vspace),
      pspace_(&pspace),
      ops_(&ops),
      cfg_(std::move(cfg)),
      force_(std::move(force)),
      convection_(vspace, ops.pat_v) {
    cfg_.validate();
    A_ = ops.pat_v.zero_matrix();
    A_pressure_ = ops.K_p;
    A_pressure_.scale(cfg_.k);
    conv_values_.assign(ops.pat_v.col_idx.size(), 0.0);
}

SchemeState Stepper::interpolated_initial_state() const {
    Field u1 = interpolate(*vspace_, [](double x, double y) {
        return exact_solution(0.0, x, y).u1;
    });
    Field u2 = interpolate(*vspace_, [](double x, double y) {
        return exact_solution(0.0, x, y).u2;
    });
    Field p = interpolate(*pspace_, [](double x, double y) {
        return exact_solution(0.0, x, y).p;
    });
    return make_state(u1, u2, p);
}

SchemeState Stepper::make_state(const Field& u1, const Field& u2,
                                const Field& p0) const {
    if (u1.space != vspace_ || u2.space != vspace_ || p0.space != pspace_) {
        throw std::invalid_argument("make_state: fields on wrong spaces");
    }
    SchemeState state;
    state.u1 = u1;
    state.u2 = u2;
    for (int d : vspace_->boundary_dofs()) {
        state.u1.values[d] = 0.0;
        state.u2.values[d] = 0.0;
    }
    state.p_curr = p0;
    project_mean_zero(state.p_curr.values, ops_->mass_vector_p);
    state.p_prev = state.p_curr;
    state.step = 0;
    state.t = 0.0;
    return state;
}

void Stepper::forcing_at(double t) {
    Stopwatch timer(assembly_seconds_);
    if (force_) {
        auto [b1, b2] = forcing_vector(*vspace_, force_, t);
        b1_ = std::move(b1);
        b2_ = std::move(b2);
    } else {
        b1_.assign(vspace_->n_dofs(), 0.0);
        b2_.assign(vspace_->n_dofs(), 0.0);
    }
}

Field Stepper::project_div(const Field& u1, const Field& u2) {
    Stopwatch timer(solve_seconds_);
    return l2_project_div(u1, u2, *ops_, cfg_.pressure_tol,
                          cfg_.max_iter_factor);
}

Vector Stepper::extrapolated_pressure(const SchemeState& state) const {
    Vector pi(pspace_->n_dofs());
    for (int i = 0; i < pspace_->n_dofs(); ++i) {
        pi[i] = 2.0 * state.p_curr.values[i] - state.p_prev.values[i];
    }
    return pi;
}

void Stepper::fill_system_values(const SchemeState& state) {
    Stopwatch timer(assembly_seconds_);
    if (cfg_.with_convection) {
        convection_.fill(state.u1, state.u2, conv_values_);
    } else {
        std::fill(conv_values_.begin(), conv_values_.end(), 0.0);
    }
    const double inv_k = 1.0 / cfg_.k;
    const auto& mv = ops_->M_v.values();
    const auto& kv = ops_->K_v.values();
    auto& av = A_.values();
    for (std::size_t i = 0; i < av.size(); ++i) {
        av[i] = inv_k * mv[i] + cfg_.nu * kv[i] + conv_values_[i];
    }
}

Stepper::VelocitySolve Stepper::solve_velocity(const SchemeState& state,
                                               const Vector& pi) {
    fill_system_values(state);
    const auto& bdofs = vspace_->boundary_dofs();
    Vector rhs1, rhs2;
    {
        Stopwatch timer(assembly_seconds_);
        apply_dirichlet_matrix(A_, bdofs);
        const double inv_k = 1.0 / cfg_.k;
        rhs1 = ops_->M_v.multiply(state.u1.values);
        rhs2 = ops_->M_v.multiply(state.u2.values);
        const Vector gx = ops_->G_x.multiply(pi);
        const Vector gy = ops_->G_y.multiply(pi);
        for (int i = 0; i < vspace_->n_dofs(); ++i) {
            rhs1[i] = inv_k * rhs1[i] - gx[i] + b1_[i];
            rhs2[i] = inv_k * rhs2[i] - gy[i] + b2_[i];
        }
        apply_dirichlet_rhs(rhs1, bdofs);
        apply_dirichlet_rhs(rhs2, bdofs);
    }
    VelocitySolve out{state.u1, state.u2, 0};
    Stopwatch timer(solve_seconds_);
    const int max_iter = cfg_.max_iter_factor * vspace_->n_dofs();
    // the system is the same for both components: factor the Jacobi
    // preconditioner once, solve two right-hand sides
    Vector inv_diag = A_.diagonal();
    for (double& d : inv_diag) d = (d != 0.0) ? 1.0 / d : 1.0;
    SolveReport r1 = bicgstab_solve(A_, rhs1, out.u1.values, cfg_.velocity_tol,
                                    max_iter, std::span<const double>(inv_diag));
    if (!r1.converged) {
        throw SolverFailure("velocity solve (component 1) did not converge", r1);
    }
    SolveReport r2 = bicgstab_solve(A_, rhs2, out.u2.values, cfg_.velocity_tol,
                                    max_iter, std::span<const double>(inv_diag));
    if (!r2.converged) {
        throw SolverFailure("velocity solve (component 2) did not converge", r2);
    }
    out.iterations = std::max(r1.iterations, r2.iterations);
    return out;
}

void Stepper::ensure_block() {
    if (block_ready_) return;
    const int n = vspace_->n_dofs();
    const auto& pat = ops_->pat_v;
    std::vector<int> row_ptr(2 * n + 1, 0);
    for (int r = 0; r < n; ++r) {
        const int len = pat.row_ptr[r + 1] - pat.row_ptr[r];
        row_ptr[r + 1] = row_ptr[r] + 2 * len;
        row_ptr[n + r + 1] = 0;  // fill second half below
    }
    for (int r = 0; r < n; ++r) {
        const int len = pat.row_ptr[r + 1] - pat.row_ptr[r];
        row_ptr[n + r + 1] = row_ptr[n + r] + 2 * len;
    }
    std::vector<int> col_idx(row_ptr.back());
    for (int half = 0; half < 2; ++half) {
        for (int r = 0; r < n; ++r) {
            int pos = row_ptr[half * n + r];
            for (int k = pat.row_ptr[r]; k < pat.row_ptr[r + 1]; ++k) {
                col_idx[pos++] = pat.col_idx[k];
            }
            for (int k = pat.row_ptr[r]; k < pat.row_ptr[r + 1]; ++k) {
                col_idx[pos++] = pat.col_idx[k] + n;
            }
        }
    }
    const std::size_t nnz = col_idx.size();
    A_block_ = CsrMatrix(2 * n, 2 * n, std::move(row_ptr), std::move(col_idx),
                         std::vector<double>(nnz, 0.0));
    // GD_yx is the transpose of GD_xy; the velocity pattern is symmetric
    // so the transpose lands on the same layout
    gd_yx_ = ops_->GD_xy.transposed();
    block_boundary_dofs_ = vspace_->boundary_dofs();
    for (int d : vspace_->boundary_dofs()) {
        block_boundary_dofs_.push_back(d + n);
    }
    block_ready_ = true;
}

Stepper::VelocitySolve Stepper::solve_velocity_block(const SchemeState& state,
                                                     const Vector& pi) {
    ensure_block();
    fill_system_values(state);
    const int n = vspace_->n_dofs();
    const auto& pat = ops_->pat_v;
    Vector rhs(2 * n);
    {
        Stopwatch timer(assembly_seconds_);
        auto& bv = A_block_.values();
        const auto& av = A_.values();
        const auto& xx = ops_->GD_xx.values();
        const auto& xy = ops_->GD_xy.values();
        const auto& yx = gd_yx_.values();
        const auto& yy = ops_->GD_yy.values();
        for (int r = 0; r < n; ++r) {
            int pos = A_block_.row_ptr()[r];
            for (int k = pat.row_ptr[r]; k < pat.row_ptr[r + 1]; ++k) {
                bv[pos++] = av[k] + cfg_.nu * xx[k];
            }
            for (int k = pat.row_ptr[r]; k < pat.row_ptr[r + 1]; ++k) {
                bv[pos++] = cfg_.nu * xy[k];
            }
        }
        for (int r = 0; r < n; ++r) {
            int pos = A_block_.row_ptr()[n + r];
            for (int k = pat.row_ptr[r]; k < pat.row_ptr[r + 1]; ++k) {
                bv[pos++] = cfg_.nu * yx[k];
            }
            for (int k = pat.row_ptr[r]; k < pat.row_ptr[r + 1]; ++k) {
                bv[pos++] = av[k] + cfg_.nu * yy[k];
            }
        }
        apply_dirichlet_matrix(A_block_, block_boundary_dofs_);

        const double inv_k = 1.0 / cfg_.k;
        const Vector m1 = ops_->M_v.multiply(state.u1.values);
        const Vector m2 = ops_->M_v.multiply(state.u2.values);
        const Vector gx = ops_->G_x.multiply(pi);
        const Vector gy = ops_->G_y.multiply(pi);
        for (int i = 0; i < n; ++i) {
            rhs[i] = inv_k * m1[i] - gx[i] + b1_[i];
            rhs[n + i] = inv_k * m2[i] - gy[i] + b2_[i];
        }
        apply_dirichlet_rhs(rhs, block_boundary_dofs_);
    }

    Vector x(2 * n);
    std::copy(state.u1.values.begin(), state.u1.values.end(), x.begin());
    std::copy(state.u2.values.begin(), state.u2.values.end(), x.begin() + n);
    SolveReport report;
    {
        Stopwatch timer(solve_seconds_);
        report = bicgstab_solve(A_block_, rhs, x, cfg_.velocity_tol,
                                cfg_.max_iter_factor * 2 * n);
    }
    if (!report.converged) {
        throw SolverFailure("penalty velocity block solve did not converge",
                            report);
    }
    VelocitySolve out{Field(*vspace_), Field(*vspace_), report.iterations};
    std::copy(x.begin(), x.begin() + n, out.u1.values.begin());
    std::copy(x.begin() + n, x.end(), out.u2.values.begin());
    return out;
}

SolveReport Stepper::solve_pressure_poisson(const CsrMatrix& A,
                                            const Vector& rhs, Vector& x) {
    Stopwatch timer(solve_seconds_);
    NullspaceMeanZero nullspace{ops_->mass_vector_p};
    SolveReport report =
        cg_solve(A, rhs, x, cfg_.pressure_tol,
                 cfg_.max_iter_factor * pspace_->n_dofs(), &nullspace);
    if (!report.converged) {
        throw SolverFailure("pressure Poisson solve did not converge", report);
    }
    return report;
}

std::pair<Field, Field> Stepper::incremental_velocity_step(
    const SchemeState& state, int* iterations) {
    forcing_at(state.t + cfg_.k);
    VelocitySolve v = solve_velocity(state, extrapolated_pressure(state));
    if (iterations) *iterations = v.iterations;
    return {std::move(v.u1), std::move(v.u2)};
}

Stepper::PressureStep Stepper::incremental_pressure_step(
    const Field& ut1, const Field& ut2, const SchemeState& state) {
    Vector rhs;
    {
        Stopwatch timer(assembly_seconds_);
        rhs = ops_->D_x.multiply(ut1.values);
        const Vector ry = ops_->D_y.multiply(ut2.values);
        for (int i = 0; i < pspace_->n_dofs(); ++i) rhs[i] += ry[i];
    }
    PressureStep out;
    out.delta_p = Field(*pspace_);
    out.report = solve_pressure_poisson(A_pressure_, rhs, out.delta_p.values);
    out.p_next = state.p_curr;
    axpy(1.0, out.delta_p.values, out.p_next.values);
    project_mean_zero(out.p_next.values, ops_->mass_vector_p);
    return out;
}

StepDiagnostics Stepper::advance(SchemeState& state) {
    switch (cfg_.scheme) {
        case SchemeKind::Incremental: return step_incremental(state);
        case SchemeKind::Rotational: return step_rotational(state);
        case SchemeKind::Consistent: return step_consistent(state);
        case SchemeKind::Penalty: return step_penalty(state);
    }
    throw std::logic_error("unreachable");
}

StepDiagnostics Stepper::step_incremental(SchemeState& state) {
    StepDiagnostics diag;
    diag.step = state.step + 1;
    diag.t = state.t + cfg_.k;

    auto [ut1, ut2] = incremental_velocity_step(state, &diag.velocity_iterations);
    PressureStep ps = incremental_pressure_step(ut1, ut2, state);
    diag.pressure_iterations = ps.report.iterations;

    // projection identity and discrete divergence orthogonality, checked
    // at the linear-algebra level from (S2)_b: u = u~ - k grad(dp)
    const double k = cfg_.k;
    Vector r_p = ops_->D_x.multiply(ut1.values);
    {
        const Vector ry = ops_->D_y.multiply(ut2.values);
        for (int i = 0; i < pspace_->n_dofs(); ++i) r_p[i] += ry[i];
    }
    const Vector K_dp = ops_->K_p.multiply(ps.delta_p.values);
    Vector orthog(pspace_->n_dofs());
    for (int i = 0; i < pspace_->n_dofs(); ++i) {
        orthog[i] = r_p[i] - k * K_dp[i];
    }
    diag.div_orthog_inf = norm_inf(orthog);

    const double ut_sq = dot(ut1.values, ops_->M_v.multiply(ut1.values)) +
                         dot(ut2.values, ops_->M_v.multiply(ut2.values));
    const double dp_r = dot(ps.delta_p.values, r_p);
    const double dp_K_dp = dot(ps.delta_p.values, K_dp);
    const double u_sq = ut_sq - 2.0 * k * dp_r + k * k * dp_K_dp;
    diag.proj_identity_rel =
        ut_sq > 0.0 ? std::abs(ut_sq - u_sq - k * k * dp_K_dp) / ut_sq : 0.0;
    diag.energy =
        u_sq + k * k * dot(ps.p_next.values, ops_->K_p.multiply(ps.p_next.values));

    state.u1 = std::move(ut1);
    state.u2 = std::move(ut2);
    state.p_prev = std::move(state.p_curr);
    state.p_curr = std::move(ps.p_next);
    state.step += 1;
    state.t = diag.t;
    return diag;
}

StepDiagnostics Stepper::step_rotational(SchemeState& state) {
    StepDiagnostics diag;
    diag.step = state.step + 1;
    diag.t = state.t + cfg_.k;
    forcing_at(diag.t);

    Field div_m = project_div(state.u1, state.u2);
    Vector q = extrapolated_pressure(state);
    axpy(cfg_.nu, div_m.values, q);

    VelocitySolve v = solve_velocity(state, q);
    diag.velocity_iterations = v.iterations;

    Field div_next = project_div(v.u1, v.u2);
    diag.div_norm = std::sqrt(std::max(
        0.0, dot(div_next.values, ops_->M_p.multiply(div_next.values))));

    Vector rhs = ops_->D_x.multiply(v.u1.values);
    {
        Stopwatch timer(assembly_seconds_);
        const Vector ry = ops_->D_y.multiply(v.u2.values);
        for (int i = 0; i < pspace_->n_dofs(); ++i) rhs[i] += ry[i];
    }
    Vector zeta(pspace_->n_dofs(), 0.0);
    SolveReport pr = solve_pressure_poisson(A_pressure_, rhs, zeta);
    diag.pressure_iterations = pr.iterations;

    Field p_next = state.p_curr;
    axpy(-cfg_.nu, div_next.values, p_next.values);
    axpy(1.0, zeta, p_next.values);
    project_mean_zero(p_next.values, ops_->mass_vector_p);

    state.u1 = std::move(v.u1);
    state.u2 = std::move(v.u2);
    state.p_prev = std::move(state.p_curr);
    state.p_curr = std::move(p_next);
    state.step += 1;
    state.t = diag.t;
    return diag;
}

StepDiagnostics Stepper::step_consistent(SchemeState& state) {
    StepDiagnostics diag;
    diag.step = state.step + 1;
    diag.t = state.t + cfg_.k;
    forcing_at(diag.t);

    VelocitySolve v = solve_velocity(state, state.p_curr.values);
    diag.velocity_iterations = v.iterations;

    Field div_next = project_div(v.u1, v.u2);
    diag.div_norm = std::sqrt(std::max(
        0.0, dot(div_next.values, ops_->M_p.multiply(div_next.values))));

    // pressure update as printed: no k scaling on the left, the discrete
    // acceleration against grad q on the right
    Vector du1(vspace_->n_dofs()), du2(vspace_->n_dofs());
    for (int i = 0; i < vspace_->n_dofs(); ++i) {
        du1[i] = (v.u1.values[i] - state.u1.values[i]) / cfg_.k;
        du2[i] = (v.u2.values[i] - state.u2.values[i]) / cfg_.k;
    }
    Vector rhs = ops_->D_x.multiply(du1);
    {
        const Vector ry = ops_->D_y.multiply(du2);
        for (int i = 0; i < pspace_->n_dofs(); ++i) rhs[i] += ry[i];
    }
    Vector zeta(pspace_->n_dofs(), 0.0);
    SolveReport pr = solve_pressure_poisson(ops_->K_p, rhs, zeta);
    diag.pressure_iterations = pr.iterations;

    Field p_next = state.p_curr;
    axpy(-cfg_.nu, div_next.values, p_next.values);
    axpy(1.0, zeta, p_next.values);
    project_mean_zero(p_next.values, ops_->mass_vector_p);

    state.u1 = std::move(v.u1);
    state.u2 = std::move(v.u2);
    state.p_prev = std::move(state.p_curr);
    state.p_curr = std::move(p_next);
    state.step += 1;
    state.t = diag.t;
    return diag;
}

StepDiagnostics Stepper::step_penalty(SchemeState& state) {
    StepDiagnostics diag;
    diag.step = state.step + 1;
    diag.t = state.t + cfg_.k;
    forcing_at(diag.t);

    Field div_m = project_div(state.u1, state.u2);
    Vector q = extrapolated_pressure(state);
    axpy(cfg_.nu, div_m.values, q);

    VelocitySolve v = solve_velocity_block(state, q);
    diag.velocity_iterations = v.iterations;

    Field div_next = project_div(v.u1, v.u2);
    diag.div_norm = std::sqrt(std::max(
        0.0, dot(div_next.values, ops_->M_p.multiply(div_next.values))));

    Vector rhs = ops_->D_x.multiply(v.u1.values);
    {
        const Vector ry = ops_->D_y.multiply(v.u2.values);
        for (int i = 0; i < pspace_->n_dofs(); ++i) rhs[i] += ry[i];
    }
    Vector zeta(pspace_->n_dofs(), 0.0);
    SolveReport pr = solve_pressure_poisson(A_pressure_, rhs, zeta);
    diag.pressure_iterations = pr.iterations;

    Field p_next = state.p_curr;
    axpy(-cfg_.nu, div_next.values, p_next.values);
    axpy(1.0, zeta, p_next.values);
    project_mean_zero(p_next.values, ops_->mass_vector_p);

    state.u1 = std::move(v.u1);
    state.u2 = std::move(v.u2);
    state.p_prev = std::move(state.p_curr);
    state.p_curr = std::move(p_next);
    state.step += 1;
    state.t = diag.t;
    return diag;
}

SchemeState auxiliary_initial_step(Stepper& stepper, const Field& ut0_1,
                                   const Field& ut0_2, const Field& p0) {
    SchemeState state = stepper.make_state(ut0_1, ut0_2, p0);
    stepper.advance(state);
    return state;
}

}  // namespace projfem
