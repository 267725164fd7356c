#pragma once

#include "fronttrack/flux_model.hpp"

namespace fronttrack {

struct ShockResult {
    Vec2 state;    // right state u+
    double speed;  // family-k eigenvalue of the averaged matrix
};

// Integrates dR/ds = r_k(R) from u over [0, sigma] with classical RK4,
// fixed step <= 1e-3. Throws OutOfDomain if the trajectory leaves the box.
Vec2 rarefaction_curve(const FluxModel& model, int family, double sigma, Vec2 u);

// Newton-solves u+ - u = sigma * r~_k(u, u+) where r~_k is the family-k
// eigenvector of averaged_matrix(u, u+) normalized against Dlambda_k at the
// base point; residual tolerance 1e-12, max 50 iterations.
ShockResult shock_curve(const FluxModel& model, int family, double sigma, Vec2 u);

// Admissible-branch gluing: shock branch for sigma < 0, rarefaction branch
// for sigma >= 0.
Vec2 lax_curve(const FluxModel& model, int family, double sigma, Vec2 u);

struct RiemannSolution {
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    Vec2 middle_state;           // Psi_1(sigma1, uL)
    double equivalence_C = 1.0;  // max of (|s1|+|s2|)/|jump| and its inverse
};

// Two-unknown Newton for Psi_2(s2, Psi_1(s1, uL)) = uR; finite-difference
// Jacobian (step 1e-7), initial guess s_k = l_k(uL).(uR - uL), residual
// tolerance 1e-10 in the sup norm.
RiemannSolution solve_riemann(const FluxModel& model, Vec2 uL, Vec2 uR);

// Boundary Riemann problem at x = 0: solve_riemann(K uL_trace, u0_trace).
// All wave speeds are positive, so every wave enters the domain.
RiemannSolution solve_boundary_riemann(const FluxModel& model, const Mat2& k,
                                       Vec2 uL_trace, Vec2 u0_trace);

// Lax admissibility for a shock: lambda_k(uR) < speed < lambda_k(uL), with
// 1e-10 tolerance on both inequalities.
bool check_lax_admissibility(const FluxModel& model, int family, Vec2 uL, Vec2 uR,
                             double speed);

// Speed of the single front representing the wave (family, sigma) from uL:
// the shock speed for sigma < 0, lambda_k of the right state for sigma >= 0.
double front_speed(const FluxModel& model, int family, double sigma, Vec2 uL,
                   Vec2 uR);

}  // namespace fronttrack
