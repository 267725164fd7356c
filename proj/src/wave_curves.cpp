#include "fronttrack/wave_curves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fronttrack/errors.hpp"

namespace fronttrack {

namespace {

Vec2 eigvec(const FluxModel& model, int family, Vec2 u) {
    EigenStructure es = eigen_structure(model, u);
    return family == 1 ? es.r1 : es.r2;
}

// Family-k eigenvector of the averaged matrix between u and v, normalized so
// that Dlambda_k(u) . r = 1 (base-point normalization keeps the map smooth
// in v and reduces to r_k(u) at v = u).
Vec2 averaged_eigvec(const FluxModel& model, int family, Vec2 u, Vec2 v,
                     double* speed_out) {
    Mat2 a = averaged_matrix_unchecked(model, u, v);
    double l1, l2;
    detail::eigenvalues_of(a, l1, l2);
    Vec2 raw = detail::raw_eigenvector(a, l1, l2, family);
    // Scale to unit inf-norm before the finite-difference normalization:
    // the FD error in g grows with |raw|^2, so without this the result
    // jumps by ~1e-12 wherever the representative choice inside
    // raw_eigenvector flips, and a Newton iteration whose root lands on
    // such a flip boundary two-cycles instead of converging.
    raw = (1.0 / inf_norm(raw)) * raw;
    double g = detail::dlambda_dot(model, u, raw, family);
    if (g < 0.0) {
        raw = -1.0 * raw;
        g = -g;
    }
    if (std::abs(g) < 1e-10 * (inf_norm(raw) + 1.0))
        throw DegenerateEigenbasis("averaged eigenvector has vanishing "
                                   "directional derivative of the eigenvalue");
    if (speed_out) *speed_out = family == 1 ? l1 : l2;
    return (1.0 / g) * raw;
}

}  // namespace

Vec2 rarefaction_curve(const FluxModel& model, int family, double sigma, Vec2 u) {
    double len = std::abs(sigma);
    if (len == 0.0) return u;
    int n = static_cast<int>(std::ceil(len / 1e-3));
    double hs = sigma / n;
    Vec2 x = u;
    for (int i = 0; i < n; ++i) {
        Vec2 k1 = eigvec(model, family, x);
        Vec2 k2 = eigvec(model, family, x + (hs / 2.0) * k1);
        Vec2 k3 = eigvec(model, family, x + (hs / 2.0) * k2);
        Vec2 k4 = eigvec(model, family, x + hs * k3);
        x = x + (hs / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    // One more evaluation so a state that drifted outside the box is caught
    // even when every RK stage stayed inside.
    (void)eigen_structure(model, x);
    return x;
}

ShockResult shock_curve(const FluxModel& model, int family, double sigma, Vec2 u) {
    if (sigma == 0.0) {
        double l1, l2;
        eigenvalues(model, u, l1, l2);
        return {u, family == 1 ? l1 : l2};
    }
    EigenStructure base = eigen_structure(model, u);
    Vec2 r0 = family == 1 ? base.r1 : base.r2;
    Vec2 v = u + sigma * r0;

    // Iterate well past the acceptance tolerance: leftover solver error in the
    // outgoing states feeds straight into the functional monitors, so stop only
    // at the rounding floor (or when the iteration stalls there). The stall
    // floor scales with |sigma|: the eigenvalue finite difference inside the
    // normalization has a rounding granularity of ulp(lambda) / (2 eps), about
    // 2e-10 relative, which enters the residual multiplied by sigma, so below
    // |sigma| * 1e-9 the residual is pure evaluation noise and a stalled
    // iterate there is as converged as the function can express.
    const double fd = 1e-7;
    const double accept = std::max(1e-12, 1e-9 * std::abs(sigma));
    const double floor_tol = 1e-15 * (1.0 + inf_norm(u));
    double speed = 0.0;
    double best_rn = std::numeric_limits<double>::infinity();
    ShockResult best{v, 0.0};
    for (int it = 0; it < 50; ++it) {
        Vec2 res = v - u - sigma * averaged_eigvec(model, family, u, v, &speed);
        double rn = inf_norm(res);
        if (rn < best_rn) {
            best_rn = rn;
            best = {v, speed};
        } else if (best_rn <= accept) {
            return best;
        }
        if (rn <= floor_tol) return {v, speed};

        auto residual_at = [&](Vec2 w) {
            return w - u - sigma * averaged_eigvec(model, family, u, w, nullptr);
        };
        Vec2 rx = residual_at({v.u1 + fd, v.u2});
        Vec2 ry = residual_at({v.u1, v.u2 + fd});
        Mat2 jac{(rx.u1 - res.u1) / fd, (ry.u1 - res.u1) / fd,
                 (rx.u2 - res.u2) / fd, (ry.u2 - res.u2) / fd};
        double d = jac.det();
        if (std::abs(d) < 1e-14)
            throw NoConvergence("singular Jacobian in shock-curve Newton");
        Vec2 step{(jac.m22 * res.u1 - jac.m12 * res.u2) / d,
                  (jac.m11 * res.u2 - jac.m21 * res.u1) / d};
        v = v - step;
    }
    if (best_rn <= accept) return best;
    throw NoConvergence(
        "shock-curve Newton stalled above its acceptance tolerance");
}

Vec2 lax_curve(const FluxModel& model, int family, double sigma, Vec2 u) {
    if (sigma < 0.0) return shock_curve(model, family, sigma, u).state;
    return rarefaction_curve(model, family, sigma, u);
}

RiemannSolution solve_riemann(const FluxModel& model, Vec2 uL, Vec2 uR) {
    EigenStructure es = eigen_structure(model, uL);
    Vec2 d = uR - uL;
    Vec2 s{dot(es.l1, d), dot(es.l2, d)};

    const double fd = 1e-7;
    const double inf = std::numeric_limits<double>::infinity();

    auto residual = [&](Vec2 sig, Vec2* mid) -> Vec2 {
        Vec2 m = lax_curve(model, 1, sig.u1, uL);
        if (mid) *mid = m;
        return lax_curve(model, 2, sig.u2, m) - uR;
    };
    // Same stopping policy as the shock curve: the contract tolerance is
    // 1e-10, but run the iteration down to the rounding floor so outgoing
    // strengths of weak interactions are exact to machine precision.
    const double accept = 1e-10;
    const double floor_tol = 1e-15 * (1.0 + inf_norm(uL) + inf_norm(uR));

    auto package = [&](Vec2 sig, Vec2 m) {
        RiemannSolution sol;
        sol.sigma1 = sig.u1;
        sol.sigma2 = sig.u2;
        sol.middle_state = m;
        double jump = inf_norm(uR - uL);
        double waves = std::abs(sig.u1) + std::abs(sig.u2);
        if (jump > 0.0 && waves > 0.0)
            sol.equivalence_C = std::max(waves / jump, jump / waves);
        return sol;
    };

    Vec2 mid;
    Vec2 res = residual(s, &mid);
    double rn = inf_norm(res);
    for (int it = 0; it < 50; ++it) {
        if (rn <= floor_tol) return package(s, mid);

        Vec2 r1 = residual({s.u1 + fd, s.u2}, nullptr);
        Vec2 r2 = residual({s.u1, s.u2 + fd}, nullptr);
        Mat2 jac{(r1.u1 - res.u1) / fd, (r2.u1 - res.u1) / fd,
                 (r1.u2 - res.u2) / fd, (r2.u2 - res.u2) / fd};
        double dj = jac.det();
        if (std::abs(dj) < 1e-14) {
            if (rn <= accept) return package(s, mid);
            throw NoConvergence("singular Jacobian in Riemann-problem Newton");
        }
        Vec2 step{(jac.m22 * res.u1 - jac.m12 * res.u2) / dj,
                  (jac.m11 * res.u2 - jac.m21 * res.u1) / dj};

        // Damped update: halve the step until the residual shrinks (at most
        // 20 halvings; out-of-domain trials count as infinite). A stall means
        // the iterate sits at its floor: accept it if within tolerance.
        double t = 1.0;
        bool accepted = false;
        for (int half = 0; half < 20; ++half) {
            Vec2 trial = s - t * step;
            Vec2 tm;
            Vec2 tr;
            double tn;
            try {
                tr = residual(trial, &tm);
                tn = inf_norm(tr);
            } catch (const OutOfDomain&) {
                tn = inf;
            }
            if (tn < rn) {
                s = trial;
                res = tr;
                mid = tm;
                rn = tn;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            if (rn <= accept) return package(s, mid);
            throw NoConvergence("Riemann-problem Newton stalled under damping");
        }
    }
    if (rn <= accept) return package(s, mid);
    throw NoConvergence("Riemann-problem Newton did not reach 1e-10 in 50 iterations");
}

RiemannSolution solve_boundary_riemann(const FluxModel& model, const Mat2& k,
                                       Vec2 uL_trace, Vec2 u0_trace) {
    return solve_riemann(model, k * uL_trace, u0_trace);
}

bool check_lax_admissibility(const FluxModel& model, int family, Vec2 uL, Vec2 uR,
                             double speed) {
    double l1L, l2L, l1R, l2R;
    eigenvalues(model, uL, l1L, l2L);
    eigenvalues(model, uR, l1R, l2R);
    double lamL = family == 1 ? l1L : l2L;
    double lamR = family == 1 ? l1R : l2R;
    const double tol = 1e-10;
    return lamR < speed + tol && speed < lamL + tol;
}

double front_speed(const FluxModel& model, int family, double sigma, Vec2 uL,
                   Vec2 uR) {
    if (sigma < 0.0) {
        double speed;
        averaged_eigvec(model, family, uL, uR, &speed);
        return speed;
    }
    double l1, l2;
    eigenvalues(model, uR, l1, l2);
    return family == 1 ? l1 : l2;
}

}  // namespace fronttrack
