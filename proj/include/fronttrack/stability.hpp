#pragma once

#include <complex>
#include <vector>

#include "fronttrack/linalg.hpp"

namespace fronttrack {

// Spectral radius of |K| (entrywise absolute values), in closed form.
double rho1(const Mat2& k);

// Matrix norms with the index convention used throughout this project:
// p = 1 is the max row sum, p = 2 the largest singular value, and p = 0
// stands for p = infinity, the max column sum. The 1/infinity labels are
// swapped relative to the operator-norm convention; every result derived
// from them (the rho_p bounds) is invariant under the relabeling.
double norm_p(const Mat2& m, int p);

// rho_p(K) = min over d > 0 of norm_p(diag(1, d) K diag(1, d)^{-1}).
double rho_p(const Mat2& k, int p);

// max over unit-modulus phases w1, w2 of the spectral radius of
// diag(w1, w2) K: the sup of the delayed-loop gain over the torus.
double rho0(const Mat2& k);

struct Condition12 {
    double value = 0.0;       // min over alpha of the weighted reflection sums
    bool satisfied = false;   // value < 1
    double margin = 0.0;      // 1 - value
    double alpha_star = 1.0;
    double rho1_cross = 0.0;  // closed form the minimum must equal (to 1e-8)
};

// min over alpha > 0 of max(|k11| + alpha |k21|, |k12|/alpha + |k22|); the
// smallness condition the weight selection enforces at u = 0. Equal to
// rho1(K) by the Collatz-Wielandt characterization with weights (1, alpha).
Condition12 condition12(const Mat2& k);

struct SpectralCheckResult {
    bool stable = false;
    bool found_any = false;           // any root located in the scan window
    std::complex<double> worst_root;  // largest real part among located roots
    std::vector<std::complex<double>> roots;
};

// Characteristic roots of the linearized feedback loop with frozen speeds
// lambda1, lambda2 on a unit-length line: zeros of
//   F(z) = 1 - k11 e^{-z/l1} - k22 e^{-z/l2} + det(K) e^{-z/l1 - z/l2}
// located on [-delta, 10] x [-200, 200] by argument-principle winding counts
// over grid cells, then Newton-polished to |F| <= 1e-12. stable iff no root
// with Re z > -delta + 1e-6 exists in the window; a polished root within
// 1e-6 of the line Re z = -delta throws InconclusiveNearBoundary.
SpectralCheckResult linear_spectral_check(double l1, double l2, const Mat2& k,
                                          double delta);

}  // namespace fronttrack
