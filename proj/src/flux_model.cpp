#include "fronttrack/flux_model.hpp"

#include <cmath>
#include <limits>

#include "fronttrack/errors.hpp"

namespace fronttrack {

FluxModel make_decoupled_burgers() {
    FluxModel m;
    m.name = "decoupled_burgers";
    m.delta = 0.4;
    m.flux = [](Vec2 u) {
        return Vec2{u.u1 + 0.5 * u.u1 * u.u1, 2.0 * u.u2 + 0.5 * u.u2 * u.u2};
    };
    m.jacobian = [](Vec2 u) { return Mat2{1.0 + u.u1, 0.0, 0.0, 2.0 + u.u2}; };
    return m;
}

FluxModel make_coupled_drift() {
    FluxModel m;
    m.name = "coupled_drift";
    m.delta = 0.4;
    m.flux = [](Vec2 u) {
        const double c = 1.0 + u.u1;
        return Vec2{2.0 * u.u1 + u.u2, c * c * c / 3.0 - 1.0 / 3.0 + 2.0 * u.u2};
    };
    m.jacobian = [](Vec2 u) {
        const double c = 1.0 + u.u1;
        return Mat2{2.0, 1.0, c * c, 2.0};
    };
    return m;
}

FluxModel make_linear(const Mat2& a, double delta) {
    FluxModel m;
    m.name = "linear";
    m.delta = delta;
    m.flux = [a](Vec2 u) { return a * u; };
    m.jacobian = [a](Vec2) { return a; };
    return m;
}

FluxModel make_model(const std::string& name) {
    if (name == "decoupled_burgers") return make_decoupled_burgers();
    if (name == "coupled_drift") return make_coupled_drift();
    throw ValidationError("model", "unknown model '" + name + "'");
}

namespace detail {

void eigenvalues_of(const Mat2& a, double& lambda1, double& lambda2) {
    const double scale = inf_norm(a) + 1.0;
    const double disc = (a.m11 - a.m22) * (a.m11 - a.m22) + 4.0 * a.m12 * a.m21;
    if (disc < 0.0)
        throw NotHyperbolic("complex eigenvalues, disc = " + std::to_string(disc));
    const double root = std::sqrt(disc);
    if (root <= 1e-12 * scale)
        throw NotHyperbolic("coincident eigenvalues within tolerance");
    const double half_tr = 0.5 * (a.m11 + a.m22);
    lambda1 = half_tr - 0.5 * root;
    lambda2 = half_tr + 0.5 * root;
}

}  // namespace detail

using detail::eigenvalues_of;

void eigenvalues(const FluxModel& model, Vec2 u, double& lambda1, double& lambda2) {
    eigenvalues_of(model.jacobian(u), lambda1, lambda2);
    if (lambda1 <= 0.0)
        throw NotPositive("lambda1 = " + std::to_string(lambda1) + " <= 0");
}

namespace detail {

Vec2 raw_eigenvector(const Mat2& a, double lambda1, double lambda2, int family) {
    const double lambda = family == 1 ? lambda1 : lambda2;
    const double tiny = 1e-13 * (inf_norm(a) + 1.0);
    if (std::fabs(a.m12) <= tiny && std::fabs(a.m21) <= tiny) {
        // Diagonal matrix: the eigenvector is an exact axis.
        const bool first_axis = std::fabs(lambda - a.m11) <= std::fabs(lambda - a.m22);
        return first_axis ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
    }
    const Vec2 v1{a.m12, lambda - a.m11};
    const Vec2 v2{lambda - a.m22, a.m21};
    return inf_norm(v1) >= inf_norm(v2) ? v1 : v2;
}

double dlambda_dot(const FluxModel& model, Vec2 u, Vec2 dir, int family) {
    const double eps = 1e-6;
    double lp1, lp2, lm1, lm2;
    eigenvalues_of(model.jacobian(u + eps * dir), lp1, lp2);
    eigenvalues_of(model.jacobian(u - eps * dir), lm1, lm2);
    return family == 1 ? (lp1 - lm1) / (2.0 * eps) : (lp2 - lm2) / (2.0 * eps);
}

}  // namespace detail

EigenStructure eigen_structure(const FluxModel& model, Vec2 u) {
    if (inf_norm(u) > model.delta * (1.0 + 1e-12))
        throw OutOfDomain("eigen_structure: |u| = " + std::to_string(inf_norm(u)) +
                          " > delta = " + std::to_string(model.delta));
    const Mat2 a = model.jacobian(u);
    EigenStructure e;
    eigenvalues_of(a, e.lambda1, e.lambda2);
    if (e.lambda1 <= 0.0)
        throw NotPositive("lambda1 = " + std::to_string(e.lambda1) + " <= 0");

    Vec2 r[2];
    for (int k = 1; k <= 2; ++k) {
        Vec2 raw = detail::raw_eigenvector(a, e.lambda1, e.lambda2, k);
        double g = detail::dlambda_dot(model, u, raw, k);
        if (std::fabs(g) < 1e-10 * (inf_norm(raw) + 1.0))
            throw DegenerateEigenbasis("family " + std::to_string(k) +
                                       " is linearly degenerate at this state");
        if (g < 0.0) {
            raw = -1.0 * raw;
            g = -g;
        }
        r[k - 1] = raw / g;
    }
    e.r1 = r[0];
    e.r2 = r[1];

    const double det = e.r1.u1 * e.r2.u2 - e.r1.u2 * e.r2.u1;
    if (std::fabs(det) < 1e-14)
        throw DegenerateEigenbasis("eigenvectors are numerically parallel");
    e.l1 = Vec2{e.r2.u2, -e.r2.u1} / det;
    e.l2 = Vec2{-e.r1.u2, e.r1.u1} / det;
    return e;
}

Mat2 averaged_matrix_unchecked(const FluxModel& model, Vec2 uL, Vec2 uR) {
    // 5-point Gauss-Legendre nodes/weights on [0, 1].
    static const double nodes[5] = {
        0.5 - 0.5 * 0.906179845938663992797626878299,
        0.5 - 0.5 * 0.538469310105683091036314420700,
        0.5,
        0.5 + 0.5 * 0.538469310105683091036314420700,
        0.5 + 0.5 * 0.906179845938663992797626878299};
    static const double weights[5] = {0.5 * 0.236926885056189087514264040720,
                                      0.5 * 0.478628670499366468041291514836,
                                      0.5 * 0.568888888888888888888888888889,
                                      0.5 * 0.478628670499366468041291514836,
                                      0.5 * 0.236926885056189087514264040720};
    Mat2 acc{};
    for (int i = 0; i < 5; ++i)
        acc = acc + weights[i] * model.jacobian(uL + nodes[i] * (uR - uL));
    return acc;
}

Mat2 averaged_matrix(const FluxModel& model, Vec2 uL, Vec2 uR) {
    const double tol = model.delta * (1.0 + 1e-12);
    if (inf_norm(uL) > tol || inf_norm(uR) > tol)
        throw OutOfDomain("averaged_matrix: endpoint outside the domain box");
    return averaged_matrix_unchecked(model, uL, uR);
}

GenuineNonlinearityReport check_genuine_nonlinearity(const FluxModel& model,
                                                     int samples) {
    GenuineNonlinearityReport rep;
    rep.min_family1 = rep.min_family2 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        for (int j = 0; j < samples; ++j) {
            const Vec2 u{
                samples == 1 ? 0.0 : -model.delta + 2.0 * model.delta * i / (samples - 1),
                samples == 1 ? 0.0 : -model.delta + 2.0 * model.delta * j / (samples - 1)};
            const Mat2 a = model.jacobian(u);
            double l1, l2;
            eigenvalues_of(a, l1, l2);
            for (int k = 1; k <= 2; ++k) {
                const Vec2 raw = detail::raw_eigenvector(a, l1, l2, k);
                const double g = std::fabs(detail::dlambda_dot(model, u, raw, k));
                double& slot = k == 1 ? rep.min_family1 : rep.min_family2;
                slot = std::min(slot, g);
            }
        }
    }
    rep.pass = rep.min_family1 > 0.0 && rep.min_family2 > 0.0;
    return rep;
}

}  // namespace fronttrack
