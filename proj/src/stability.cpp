#include "fronttrack/stability.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "fronttrack/errors.hpp"
#include "fronttrack/optimize.hpp"

namespace fronttrack {

namespace {

Mat2 abs_entries(const Mat2& m) {
    return {std::fabs(m.m11), std::fabs(m.m12), std::fabs(m.m21), std::fabs(m.m22)};
}

}  // namespace

double rho1(const Mat2& k) {
    Mat2 b = abs_entries(k);
    double tr = b.m11 + b.m22;
    double disc = (b.m11 - b.m22) * (b.m11 - b.m22) + 4.0 * b.m12 * b.m21;
    return 0.5 * (tr + std::sqrt(disc));
}

double norm_p(const Mat2& m, int p) {
    Mat2 b = abs_entries(m);
    switch (p) {
        case 1:
            return std::max(b.m11 + b.m12, b.m21 + b.m22);
        case 2:
            return sigma_max(m);
        case 0:  // infinity
            return std::max(b.m11 + b.m21, b.m12 + b.m22);
        default:
            throw ValidationError("p", "must be 1, 2, or 0 (infinity)");
    }
}

double rho_p(const Mat2& k, int p) {
    auto obj = [&](double ld) {
        double d = std::exp(ld);
        return norm_p({k.m11, k.m12 / d, d * k.m21, k.m22}, p);
    };
    double best = golden_min(obj, -12.0, 12.0, 1e-8);
    return std::min(best, obj(0.0));
}

double rho0(const Mat2& k) {
    const int n = 720;
    const double step = 2.0 * M_PI / n;
    std::vector<double> cs(n), sn(n);
    for (int i = 0; i < n; ++i) {
        cs[i] = std::cos(step * i);
        sn[i] = std::sin(step * i);
    }
    double best = 0.0;
    int bi = 0, bj = 0;
    for (int i = 0; i < n; ++i) {
        std::complex<double> p1{cs[i], sn[i]};
        for (int j = 0; j < n; ++j) {
            double r = phased_spectral_radius(k, p1, {cs[j], sn[j]});
            if (r > best) {
                best = r;
                bi = i;
                bj = j;
            }
        }
    }
    // one refinement pass around the coarse argmax: +-1 cell, 41 x 41
    double t1c = step * bi, t2c = step * bj;
    for (int a = 0; a <= 40; ++a) {
        double t1 = t1c + (a - 20) * step / 20.0;
        std::complex<double> p1{std::cos(t1), std::sin(t1)};
        for (int b = 0; b <= 40; ++b) {
            double t2 = t2c + (b - 20) * step / 20.0;
            double r = phased_spectral_radius(k, p1, {std::cos(t2), std::sin(t2)});
            if (r > best) best = r;
        }
    }
    return best;
}

Condition12 condition12(const Mat2& k) {
    Mat2 b = abs_entries(k);
    auto obj = [&](double la) {
        double alpha = std::exp(la);
        return std::max(b.m11 + alpha * b.m21, b.m12 / alpha + b.m22);
    };
    double la_best = 0.0;
    double m_gold = golden_min(obj, -12.0, 12.0, 1e-8, &la_best);
    double at_one = obj(0.0);

    Condition12 c;
    if (at_one <= m_gold * (1.0 + 1e-9) + 1e-12) {
        c.alpha_star = 1.0;
        c.value = at_one;
    } else {
        c.alpha_star = std::exp(la_best);
        c.value = m_gold;
    }
    c.satisfied = c.value < 1.0;
    c.margin = 1.0 - c.value;
    c.rho1_cross = rho1(k);
    return c;
}

namespace {

struct CharacteristicFn {
    double l1, l2;
    double k11, k22, detk;

    std::complex<double> operator()(std::complex<double> z) const {
        std::complex<double> w1 = std::exp(-z / l1);
        std::complex<double> w2 = std::exp(-z / l2);
        return 1.0 - k11 * w1 - k22 * w2 + detk * w1 * w2;
    }
    std::complex<double> deriv(std::complex<double> z) const {
        std::complex<double> w1 = std::exp(-z / l1);
        std::complex<double> w2 = std::exp(-z / l2);
        return k11 * w1 / l1 + k22 * w2 / l2 -
               detk * (1.0 / l1 + 1.0 / l2) * w1 * w2;
    }
};

// Signed phase change of F along the straight edge a -> b, subdividing until
// each step turns by at most pi/2 (safe winding accumulation).
double edge_phase(const CharacteristicFn& F, std::complex<double> za,
                  std::complex<double> fa, std::complex<double> zb,
                  std::complex<double> fb, int depth) {
    double dphi = std::arg(fb / fa);
    if (std::fabs(dphi) <= M_PI / 2.0 || depth <= 0) return dphi;
    std::complex<double> zm = 0.5 * (za + zb);
    std::complex<double> fm = F(zm);
    if (std::abs(fm) == 0.0) fm = F(zm + std::complex<double>(1e-12, 1e-12));
    return edge_phase(F, za, fa, zm, fm, depth - 1) +
           edge_phase(F, zm, fm, zb, fb, depth - 1);
}

}  // namespace

SpectralCheckResult linear_spectral_check(double l1, double l2, const Mat2& k,
                                          double delta) {
    if (l1 <= 0.0 || l2 <= 0.0)
        throw ValidationError("lambdas", "must be positive");
    if (delta < 0.0) throw ValidationError("delta", "must be nonnegative");

    CharacteristicFn F{l1, l2, k.m11, k.m22, k.det()};

    const double re_lo = -delta, re_hi = 10.0;
    const double im_lo = -200.0, im_hi = 200.0;
    const int nx = 400;  // cells in Re
    const int ny = 401;  // cells in Im; odd keeps Im = 0 off the gridlines
    const double dx = (re_hi - re_lo) / nx;
    const double dy = (im_hi - im_lo) / ny;

    // Deterministic grid nudge: shift the whole lattice when a node lands
    // (numerically) on a zero, so every edge phase is well defined.
    double ox = 0.0, oy = 0.0;
    std::vector<std::complex<double>> fv;
    auto node = [&](int i, int j) {
        return std::complex<double>(re_lo + ox + dx * i, im_lo + oy + dy * j);
    };
    for (int attempt = 0; attempt < 4; ++attempt) {
        fv.assign(static_cast<std::size_t>(nx + 1) * (ny + 1), {});
        bool hit = false;
        for (int i = 0; i <= nx && !hit; ++i)
            for (int j = 0; j <= ny; ++j) {
                fv[static_cast<std::size_t>(i) * (ny + 1) + j] = F(node(i, j));
                if (std::abs(fv[static_cast<std::size_t>(i) * (ny + 1) + j]) < 1e-14) {
                    hit = true;
                    break;
                }
            }
        if (!hit) break;
        ox += 1e-9 * dx;
        oy += 1e-9 * dy;
    }
    auto fat = [&](int i, int j) {
        return fv[static_cast<std::size_t>(i) * (ny + 1) + j];
    };

    std::vector<std::complex<double>> roots;
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            std::complex<double> z00 = node(i, j), z10 = node(i + 1, j);
            std::complex<double> z11 = node(i + 1, j + 1), z01 = node(i, j + 1);
            std::complex<double> f00 = fat(i, j), f10 = fat(i + 1, j);
            std::complex<double> f11 = fat(i + 1, j + 1), f01 = fat(i, j + 1);
            double total = edge_phase(F, z00, f00, z10, f10, 24) +
                           edge_phase(F, z10, f10, z11, f11, 24) +
                           edge_phase(F, z11, f11, z01, f01, 24) +
                           edge_phase(F, z01, f01, z00, f00, 24);
            int w = static_cast<int>(std::lround(total / (2.0 * M_PI)));
            if (w == 0) continue;

            // polish from the cell center (and quarter points as fallback)
            std::complex<double> starts[5] = {
                0.25 * (z00 + z10 + z11 + z01),
                0.5 * (z00 + 0.25 * (z00 + z10 + z11 + z01)),
                0.5 * (z10 + 0.25 * (z00 + z10 + z11 + z01)),
                0.5 * (z11 + 0.25 * (z00 + z10 + z11 + z01)),
                0.5 * (z01 + 0.25 * (z00 + z10 + z11 + z01))};
            bool converged = false;
            std::complex<double> zr;
            for (const auto& s0 : starts) {
                std::complex<double> z = s0;
                for (int it = 0; it < 60; ++it) {
                    std::complex<double> f = F(z);
                    if (std::abs(f) <= 1e-12) {
                        converged = true;
                        zr = z;
                        break;
                    }
                    std::complex<double> d = F.deriv(z);
                    if (std::abs(d) == 0.0) break;
                    z -= f / d;
                }
                if (converged) break;
            }
            if (!converged)
                throw NoConvergence("root polish failed in cell near Re = " +
                                    std::to_string(0.5 * (z00.real() + z10.real())));
            roots.push_back(zr);
        }
    }

    // dedupe: adjacent cells may polish to one root
    std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    std::vector<std::complex<double>> unique_roots;
    for (const auto& z : roots) {
        bool dup = false;
        for (const auto& u : unique_roots)
            if (std::abs(z - u) <= 1e-6) {
                dup = true;
                break;
            }
        if (!dup) unique_roots.push_back(z);
    }

    SpectralCheckResult res;
    for (const auto& z : unique_roots) {
        if (std::fabs(z.real() + delta) <= 1e-6)
            throw InconclusiveNearBoundary(
                "characteristic root within 1e-6 of Re z = " +
                    std::to_string(-delta),
                z.real(), z.imag());
        if (z.real() < -delta) continue;  // polished onto the stable side
        if (z.real() > re_hi + 1e-6 || std::fabs(z.imag()) > im_hi + 1e-6) continue;
        res.roots.push_back(z);
    }
    res.found_any = !res.roots.empty();
    if (res.found_any) {
        res.worst_root = *std::max_element(
            res.roots.begin(), res.roots.end(),
            [](const auto& a, const auto& b) { return a.real() < b.real(); });
    }
    res.stable = !res.found_any;
    return res;
}

}  // namespace fronttrack
