#pragma once

#include <functional>
#include <string>

#include "fronttrack/linalg.hpp"

namespace fronttrack {

// A 2x2 system of conservation laws u_t + f(u)_x = 0, valid on the box
// |u|_inf <= delta. Both characteristic speeds must be real, distinct and
// strictly positive on the box, and both fields genuinely nonlinear for the
// wave-curve operations to apply.
struct FluxModel {
    std::string name;
    double delta = 0.0;
    std::function<Vec2(Vec2)> flux;
    std::function<Mat2(Vec2)> jacobian;
};

// f(u) = (u1 + u1^2/2, 2 u2 + u2^2/2): two independent scalar fields with
// speeds 1 + u1 and 2 + u2. delta = 0.4.
FluxModel make_decoupled_burgers();

// f(u) = (2 u1 + u2, (1+u1)^3/3 - 1/3 + 2 u2): fully coupled Jacobian
// [[2, 1], [(1+u1)^2, 2]] with speeds 1 - u1 and 3 + u1. delta = 0.4.
FluxModel make_coupled_drift();

// f(u) = A u; constant characteristic speeds, so both fields are linearly
// degenerate. Only averaged_matrix / genuine-nonlinearity checks and the
// weak-residual machinery accept it; curve operations reject it.
FluxModel make_linear(const Mat2& a, double delta = 1.0);

// Lookup by config name ("decoupled_burgers" | "coupled_drift").
FluxModel make_model(const std::string& name);

struct EigenStructure {
    double lambda1 = 0.0, lambda2 = 0.0;  // lambda1 < lambda2
    Vec2 r1, r2;                          // right eigenvectors, Dlambda_k . r_k = 1
    Vec2 l1, l2;                          // dual basis: l_i . r_j = delta_ij
};

// Sorted eigenvalues of jacobian(u); throws NotHyperbolic / NotPositive.
// Cheap path used by inner loops that do not need eigenvectors.
void eigenvalues(const FluxModel& model, Vec2 u, double& lambda1, double& lambda2);

// Full eigenstructure with the normalization Dlambda_k . r_k = 1 (directional
// derivative by central differences, step 1e-6). Throws OutOfDomain,
// NotHyperbolic, NotPositive, DegenerateEigenbasis (linearly degenerate field).
EigenStructure eigen_structure(const FluxModel& model, Vec2 u);

// Path-averaged Jacobian int_0^1 Df(uL + t (uR - uL)) dt by 5-point
// Gauss-Legendre quadrature (exact for polynomial Jacobians).
Mat2 averaged_matrix(const FluxModel& model, Vec2 uL, Vec2 uR);

// Same quadrature without the domain check; used inside Newton loops whose
// trial states may transiently leave the box.
Mat2 averaged_matrix_unchecked(const FluxModel& model, Vec2 uL, Vec2 uR);

struct GenuineNonlinearityReport {
    double min_family1 = 0.0;  // min over the grid of |Dlambda_k . r_k| with the
    double min_family2 = 0.0;  // pre-normalization eigenvector representative
    bool pass = false;         // true iff both minima are strictly positive
};

// Samples a samples x samples grid of the domain box and reports the smallest
// directional derivative magnitude per family.
GenuineNonlinearityReport check_genuine_nonlinearity(const FluxModel& model,
                                                     int samples);

namespace detail {
// Sorted real eigenvalues of a 2x2 matrix; throws NotHyperbolic when the
// discriminant is negative or the gap collapses.
void eigenvalues_of(const Mat2& a, double& lambda1, double& lambda2);

// Pre-normalization eigenvector representative for family k (1 or 2) of a,
// chosen so the builtin models yield the natural algebraic vectors:
// exact axis vectors for (numerically) diagonal matrices, otherwise the
// larger-inf-norm of the candidates (a12, lambda-a11) and (lambda-a22, a21).
Vec2 raw_eigenvector(const Mat2& a, double lambda1, double lambda2, int family);

// Directional derivative of sorted lambda_k at u along dir (central
// difference, step 1e-6).
double dlambda_dot(const FluxModel& model, Vec2 u, Vec2 dir, int family);
}  // namespace detail

}  // namespace fronttrack
