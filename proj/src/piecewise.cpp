#include "fronttrack/piecewise.hpp"

#include <algorithm>
#include <cmath>

namespace fronttrack {

Vec2 piecewise_eval(const Piecewise& f, double x) {
    Vec2 v = f.left;
    for (const auto& [bx, bv] : f.breaks) {
        if (bx > x) break;
        v = bv;
    }
    return v;
}

double piecewise_tv(const Piecewise& f) {
    double tv = 0.0;
    Vec2 prev = f.left;
    for (const auto& [bx, bv] : f.breaks) {
        tv += inf_norm(bv - prev);
        prev = bv;
    }
    return tv;
}

double tv_star(const Mat2& k, const Piecewise& f) {
    Vec2 right = f.breaks.empty() ? f.left : f.breaks.back().second;
    return piecewise_tv(f) + inf_norm(k * right - f.left);
}

double l1_distance(const Piecewise& f, const Piecewise& g) {
    const double len = std::min(f.length, g.length);
    double total = 0.0;
    double x = 0.0;
    Vec2 fv = f.left;
    Vec2 gv = g.left;
    std::size_t i = 0, j = 0;
    while (x < len) {
        double next = len;
        if (i < f.breaks.size()) next = std::min(next, f.breaks[i].first);
        if (j < g.breaks.size()) next = std::min(next, g.breaks[j].first);
        if (next > x) total += inf_norm(fv - gv) * (next - x);
        while (i < f.breaks.size() && f.breaks[i].first <= next) fv = f.breaks[i++].second;
        while (j < g.breaks.size() && g.breaks[j].first <= next) gv = g.breaks[j++].second;
        x = next;
    }
    return total;
}

Vec2 piecewise_average(const Piecewise& f, double a, double b) {
    Vec2 acc{0.0, 0.0};
    double x = a;
    Vec2 v = f.left;
    std::size_t i = 0;
    while (i < f.breaks.size() && f.breaks[i].first <= a) v = f.breaks[i++].second;
    while (x < b) {
        double next = b;
        if (i < f.breaks.size()) next = std::min(next, f.breaks[i].first);
        acc += (next - x) * v;
        if (i < f.breaks.size() && f.breaks[i].first <= next) v = f.breaks[i++].second;
        x = next;
    }
    return (1.0 / (b - a)) * acc;
}

}  // namespace fronttrack
