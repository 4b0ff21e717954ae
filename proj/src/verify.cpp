#include "projfem/verify.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace projfem {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

ExactValue exact_solution(double t, double x, double y) {
    const double et = std::exp(-t);
    const double cx = std::cos(kTwoPi * x), sx = std::sin(kTwoPi * x);
    const double cy = std::cos(kTwoPi * y), sy = std::sin(kTwoPi * y);
    return {et * (cx - 1.0) * sy, -et * (cy - 1.0) * sx,
            kTwoPi * et * (sx + sy)};
}

ExactGradient exact_gradient(double t, double x, double y) {
    const double et = std::exp(-t);
    const double cx = std::cos(kTwoPi * x), sx = std::sin(kTwoPi * x);
    const double cy = std::cos(kTwoPi * y), sy = std::sin(kTwoPi * y);
    ExactGradient g;
    g.u1 = {-kTwoPi * et * sx * sy, kTwoPi * et * (cx - 1.0) * cy};
    g.u2 = {-kTwoPi * et * (cy - 1.0) * cx, kTwoPi * et * sx * sy};
    return g;
}

std::pair<double, double> forcing(double t, double x, double y, double nu) {
    const double et = std::exp(-t);
    const double cx = std::cos(kTwoPi * x), sx = std::sin(kTwoPi * x);
    const double cy = std::cos(kTwoPi * y), sy = std::sin(kTwoPi * y);
    const double u1 = et * (cx - 1.0) * sy;
    const double u2 = -et * (cy - 1.0) * sx;
    const ExactGradient g = exact_gradient(t, x, y);
    const double fourpi2 = kTwoPi * kTwoPi;
    // Lap u1 = -4 pi^2 e^{-t} sin(2 pi y) (2 cos(2 pi x) - 1), and the
    // symmetric expression for u2
    const double lap_u1 = -fourpi2 * et * sy * (2.0 * cx - 1.0);
    const double lap_u2 = fourpi2 * et * sx * (2.0 * cy - 1.0);
    const double px = fourpi2 * et * cx;
    const double py = fourpi2 * et * cy;
    const double conv1 = u1 * g.u1[0] + u2 * g.u1[1];
    const double conv2 = u1 * g.u2[0] + u2 * g.u2[1];
    return {-u1 + conv1 - nu * lap_u1 + px, -u2 + conv2 - nu * lap_u2 + py};
}

double SummaryNorms::get(const std::string& name) const {
    if (name == "u1_linf_l2") return u1_linf_l2;
    if (name == "u1_linf_h1") return u1_linf_h1;
    if (name == "u2_linf_l2") return u2_linf_l2;
    if (name == "u2_linf_h1") return u2_linf_h1;
    if (name == "p_l2_l2") return p_l2_l2;
    if (name == "p_linf_l2") return p_linf_l2;
    throw std::invalid_argument("unknown norm name: " + name);
}

const std::vector<std::string>& SummaryNorms::names() {
    static const std::vector<std::string> n = {"u1_linf_l2", "u1_linf_h1",
                                               "u2_linf_l2", "u2_linf_h1",
                                               "p_l2_l2",    "p_linf_l2"};
    return n;
}

StepErrors step_errors(const Field& u1, const Field& u2, const Field& p,
                       const Vector& mass_vector_p, double t) {
    const FeSpace& vspace = *u1.space;
    const FeSpace& pspace = *p.space;
    const TriMesh& mesh = vspace.mesh();
    const QuadratureRule& rule = quadrature_rule(kVelocityQuadDegree);

    // mass-weighted means; the exact pressure has zero analytic mean but
    // both sides are centered to keep the comparison clean
    double p_mean = dot(mass_vector_p, p.values);
    double mass = 0.0;
    for (double m : mass_vector_p) mass += m;
    p_mean /= mass;

    double exact_p_mean = 0.0;
    for (int tri = 0; tri < mesh.n_triangles(); ++tri) {
        const double scale = 0.5 * mesh.map(tri).det;
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const auto& l = rule.points[q];
            const auto& tv = mesh.triangle(tri);
            const double x = l[0] * mesh.vertex(tv[0]).x +
                             l[1] * mesh.vertex(tv[1]).x +
                             l[2] * mesh.vertex(tv[2]).x;
            const double y = l[0] * mesh.vertex(tv[0]).y +
                             l[1] * mesh.vertex(tv[1]).y +
                             l[2] * mesh.vertex(tv[2]).y;
            exact_p_mean +=
                rule.weights[q] * scale * exact_solution(t, x, y).p;
        }
    }

    StepErrors err;
    err.t = t;
    double e_u1_l2 = 0.0, e_u1_h1 = 0.0, e_u2_l2 = 0.0, e_u2_h1 = 0.0,
           e_p = 0.0;
    for (int tri = 0; tri < mesh.n_triangles(); ++tri) {
        const double scale = 0.5 * mesh.map(tri).det;
        const auto& tv = mesh.triangle(tri);
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const auto& l = rule.points[q];
            const double x = l[0] * mesh.vertex(tv[0]).x +
                             l[1] * mesh.vertex(tv[1]).x +
                             l[2] * mesh.vertex(tv[2]).x;
            const double y = l[0] * mesh.vertex(tv[0]).y +
                             l[1] * mesh.vertex(tv[1]).y +
                             l[2] * mesh.vertex(tv[2]).y;
            const double w = rule.weights[q] * scale;
            const ExactValue ex = exact_solution(t, x, y);
            const ExactGradient eg = exact_gradient(t, x, y);
            const FieldValue v1 = eval_field(u1, tri, l);
            const FieldValue v2 = eval_field(u2, tri, l);
            const FieldValue vp = eval_field(p, tri, l);
            const double d1 = v1.value - ex.u1;
            const double d2 = v2.value - ex.u2;
            const double dp = (vp.value - p_mean) - (ex.p - exact_p_mean);
            e_u1_l2 += w * d1 * d1;
            e_u2_l2 += w * d2 * d2;
            e_p += w * dp * dp;
            const double g1x = v1.gradient[0] - eg.u1[0];
            const double g1y = v1.gradient[1] - eg.u1[1];
            const double g2x = v2.gradient[0] - eg.u2[0];
            const double g2y = v2.gradient[1] - eg.u2[1];
            e_u1_h1 += w * (g1x * g1x + g1y * g1y);
            e_u2_h1 += w * (g2x * g2x + g2y * g2y);
        }
    }
    err.u1_l2 = std::sqrt(e_u1_l2);
    err.u1_h1 = std::sqrt(e_u1_h1);
    err.u2_l2 = std::sqrt(e_u2_l2);
    err.u2_h1 = std::sqrt(e_u2_h1);
    err.p_l2 = std::sqrt(e_p);
    return err;
}

SummaryNorms summarize(const ErrorSeries& series, double k) {
    SummaryNorms s;
    double p_sq_sum = 0.0;
    for (const StepErrors& e : series.steps) {
        s.u1_linf_l2 = std::max(s.u1_linf_l2, e.u1_l2);
        s.u1_linf_h1 = std::max(s.u1_linf_h1, e.u1_h1);
        s.u2_linf_l2 = std::max(s.u2_linf_l2, e.u2_l2);
        s.u2_linf_h1 = std::max(s.u2_linf_h1, e.u2_h1);
        s.p_linf_l2 = std::max(s.p_linf_l2, e.p_l2);
        p_sq_sum += e.p_l2 * e.p_l2;
    }
    s.p_l2_l2 = std::sqrt(k * p_sq_sum);
    return s;
}

ErrorSeries error_norms(const std::vector<StepFields>& history,
                        const Vector& mass_vector_p, double k) {
    if (history.empty()) {
        throw std::invalid_argument("error_norms: empty history");
    }
    ErrorSeries series;
    series.steps.reserve(history.size());
    for (std::size_t m = 0; m < history.size(); ++m) {
        const auto& fields = history[m];
        series.steps.push_back(step_errors(fields.u1, fields.u2, fields.p,
                                           mass_vector_p,
                                           static_cast<double>(m) * k));
    }
    return series;
}

double observed_order(double e_coarse, double e_fine, double k_coarse,
                      double k_fine) {
    if (e_coarse <= 0.0 || e_fine <= 0.0) {
        throw std::invalid_argument("observed_order: nonpositive error");
    }
    if (k_coarse <= k_fine || k_fine <= 0.0) {
        throw std::invalid_argument("observed_order: need k_coarse > k_fine > 0");
    }
    return std::log(e_coarse / e_fine) / std::log(k_coarse / k_fine);
}

void compute_orders(ConvergenceReport& report) {
    report.orders.clear();
    for (std::size_t i = 0; i + 1 < report.entries.size(); ++i) {
        const ConvergenceEntry& coarse = report.entries[i];
        const ConvergenceEntry& fine = report.entries[i + 1];
        SummaryNorms o;
        o.u1_linf_l2 = observed_order(coarse.norms.u1_linf_l2,
                                      fine.norms.u1_linf_l2, coarse.k, fine.k);
        o.u1_linf_h1 = observed_order(coarse.norms.u1_linf_h1,
                                      fine.norms.u1_linf_h1, coarse.k, fine.k);
        o.u2_linf_l2 = observed_order(coarse.norms.u2_linf_l2,
                                      fine.norms.u2_linf_l2, coarse.k, fine.k);
        o.u2_linf_h1 = observed_order(coarse.norms.u2_linf_h1,
                                      fine.norms.u2_linf_h1, coarse.k, fine.k);
        o.p_l2_l2 =
            observed_order(coarse.norms.p_l2_l2, fine.norms.p_l2_l2, coarse.k,
                           fine.k);
        o.p_linf_l2 = observed_order(coarse.norms.p_linf_l2,
                                     fine.norms.p_linf_l2, coarse.k, fine.k);
        report.orders.push_back(o);
    }
}

}  // namespace projfem
