#pragma once

#include <utility>
#include <vector>

#include "fronttrack/linalg.hpp"

namespace fronttrack {

// Piecewise-constant function on [0, length]: `left` on [0, x_1), then the
// value attached to each breakpoint on [x_j, x_{j+1}). Breakpoints ascending.
struct Piecewise {
    Vec2 left;
    std::vector<std::pair<double, Vec2>> breaks;  // (x, value to the right)
    double length = 1.0;
};

Vec2 piecewise_eval(const Piecewise& f, double x);

// Sum of |jump|_inf across the interior discontinuities.
double piecewise_tv(const Piecewise& f);

// TV plus the boundary mismatch |K f(L-) - f(0+)|_inf.
double tv_star(const Mat2& k, const Piecewise& f);

// Exact integral of |f - g|_inf over [0, min(length)], evaluated on the
// merged breakpoint set (no sampling error).
double l1_distance(const Piecewise& f, const Piecewise& g);

// Exact mean value of f over [a, b].
Vec2 piecewise_average(const Piecewise& f, double a, double b);

}  // namespace fronttrack
