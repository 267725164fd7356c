#pragma once

namespace fronttrack {

// Golden-section minimum of a unimodal f on [lo, hi]; tol is on the argument.
template <typename F>
double golden_min(F&& f, double lo, double hi, double tol, double* argmin = nullptr) {
    const double phi = 0.6180339887498949;  // (sqrt(5) - 1) / 2
    double a = lo, b = hi;
    double x1 = b - phi * (b - a);
    double x2 = a + phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        }
    }
    double xm = 0.5 * (a + b);
    double fm = f(xm);
    if (argmin) *argmin = xm;
    return fm;
}

}  // namespace fronttrack
