#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <queue>
#include <span>
#include <stdexcept>
#include <vector>

namespace banditlab::quad {

struct QuadResult {
    double value = 0.0;
    double abs_error = 0.0;
    bool converged = false;
    int intervals = 0;
};

namespace detail {

// Gauss7/Kronrod15 nodes and weights on [-1,1] (positive half).
inline constexpr double kNodes[8] = {
    0.000000000000000000, 0.207784955007898468, 0.405845151377397167,
    0.586087235467691130, 0.741531185599394440, 0.864864423359769073,
    0.949107912342758525, 0.991455371120812639};
inline constexpr double kWeightsK15[8] = {
    0.209482141084727828, 0.204432940075298892, 0.190350578064785410,
    0.169004726639267903, 0.140653259715525919, 0.104790010322250184,
    0.063092092629978553, 0.022935322010529225};
inline constexpr double kWeightsG7[8] = {
    0.417959183673469388, 0.0, 0.381830050505118945,
    0.0,                  0.279705391489276668, 0.0,
    0.129484966168869693, 0.0};

template <class F>
inline void gk15(const F& f, double a, double b, double& value, double& err) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double fc = f(mid);
    double g7 = kWeightsG7[0] * fc;
    double k15 = kWeightsK15[0] * fc;
    for (int i = 1; i < 8; ++i) {
        const double dx = half * kNodes[i];
        const double fs = f(mid + dx) + f(mid - dx);
        k15 += kWeightsK15[i] * fs;
        g7 += kWeightsG7[i] * fs;
    }
    value = k15 * half;
    // Conservative error estimate: the raw Gauss-Kronrod difference.
    err = std::fmax(std::fabs(k15 - g7) * half, 1e-300);
}

struct Interval {
    double err;
    double a, b, value;
    bool operator<(const Interval& o) const { return err < o.err; }
};

}  // namespace detail

// Globally adaptive Gauss-Kronrod integration: repeatedly bisects the
// interval with the largest error estimate until the total estimated error
// meets max(abs_tol, rel_tol*|integral|) or the interval budget runs out.
template <class F>
QuadResult integrate(const F& f, double a, double b, double abs_tol,
                     double rel_tol, int max_intervals = 4000) {
    QuadResult out;
    if (!(b > a)) {
        out.converged = true;
        return out;
    }
    std::priority_queue<detail::Interval> heap;
    double v, e;
    detail::gk15(f, a, b, v, e);
    heap.push({e, a, b, v});
    double total = v;
    double total_err = e;
    int n = 1;
    while (n < max_intervals) {
        const double tol = std::fmax(abs_tol, rel_tol * std::fabs(total));
        if (total_err <= tol) break;
        detail::Interval worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // interval no longer splittable in double precision
            heap.push(worst);
            break;
        }
        double v1, e1, v2, e2;
        detail::gk15(f, worst.a, mid, v1, e1);
        detail::gk15(f, mid, worst.b, v2, e2);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.err;
        heap.push({e1, worst.a, mid, v1});
        heap.push({e2, mid, worst.b, v2});
        ++n;
    }
    out.value = total;
    out.abs_error = total_err;
    out.intervals = n;
    out.converged = total_err <= std::fmax(abs_tol, rel_tol * std::fabs(total));
    return out;
}

// Integrates over [pts[0], pts.back()] treating the interior points as
// mandatory breakpoints (kinks, support edges).
template <class F>
QuadResult integrate_segments(const F& f, std::span<const double> pts,
                              double abs_tol, double rel_tol,
                              int max_intervals = 4000) {
    if (pts.size() < 2) throw std::invalid_argument("need at least two breakpoints");
    QuadResult out;
    out.converged = true;
    const double seg_tol = abs_tol / static_cast<double>(pts.size() - 1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        QuadResult r = integrate(f, pts[i], pts[i + 1], seg_tol, rel_tol, max_intervals);
        out.value += r.value;
        out.abs_error += r.abs_error;
        out.intervals += r.intervals;
        out.converged = out.converged && r.converged;
    }
    return out;
}

}  // namespace banditlab::quad
