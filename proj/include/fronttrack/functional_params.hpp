#pragma once

namespace fronttrack {

// Run-wide constants selected once per (model, K, L): the sup-norm guard
// radius delta0, the uniform speed bounds c_star <= lambda <= M, the spatial
// weight rate gamma, the boundary dissipation margin epsilon, the empirical
// interaction constant C_delta with its coupling c0 = 2 C_delta e^{2 gamma L},
// and the expected decay rate nu = c_star * gamma.
struct FunctionalParams {
    double delta0 = 0.0;
    double c_star = 0.0;
    double gamma = 0.0;
    double epsilon = 0.0;
    double c0 = 0.0;
    double C_delta = 0.0;
    double nu = 0.0;
    double M = 0.0;
    double alpha_star = 1.0;  // eigenbasis rescaling applied during selection
    double grid_max = 0.0;    // worst boundary reflection sum on the state grid
    double L = 1.0;
};

struct FunctionalValues {
    double V = 0.0;
    double Q = 0.0;
    double J = 0.0;
    double TVstar = 0.0;
    double t = 0.0;
};

}  // namespace fronttrack
