#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "stochtop/core.hpp"

namespace stochtop {

/// Volume of the d-dimensional unit Euclidean ball, via the two-step
/// recurrence w_d = 2*pi*w_{d-2}/d (exact in the cases we use).
inline double unit_ball_volume(int d) {
    if (d < 0) throw DomainError("unit_ball_volume: negative dimension");
    double w_even = 1.0;  // w_0
    double w_odd = 2.0;   // w_1
    if (d == 0) return w_even;
    for (int k = 2; k <= d; ++k) {
        if (k % 2 == 0)
            w_even = 2.0 * std::numbers::pi * w_even / k;
        else
            w_odd = 2.0 * std::numbers::pi * w_odd / k;
    }
    return d % 2 == 0 ? w_even : w_odd;
}

namespace detail {

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                                   double b, double fa, double fm, double fb, double whole,
                                   double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature with absolute tolerance `tol`.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int max_depth = 48) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

/// G_d(u) = integral_0^u (1 - t^2)^{(d-1)/2} dt for u in [0,1].  Closed form
/// for d <= 3, quadrature above.
inline double g_function(int d, double u) {
    if (d < 1) throw DomainError("g_function: d must be >= 1");
    if (!(u >= 0.0 && u <= 1.0)) throw DomainError("g_function: u outside [0,1]");
    switch (d) {
        case 1:
            return u;
        case 2:
            return 0.5 * (u * std::sqrt(1.0 - u * u) + std::asin(u));
        case 3:
            return u - u * u * u / 3.0;
        default: {
            const double expnt = 0.5 * (d - 1);
            auto f = [expnt](double t) { return std::pow(1.0 - t * t, expnt); };
            return adaptive_simpson(f, 0.0, u, 1e-13 * (u > 0 ? u : 1.0));
        }
    }
}

/// Volume of a d-ball of radius r capped by a hyperplane at signed distance
/// `delta` from the centre (delta = r gives the full ball, delta = 0 a half
/// ball): w_d r^d * (1/2) * (1 + G_d(delta/r) / G_d(1)).
inline double ball_volume_capped(int d, double r, double delta) {
    if (r < 0.0) throw DomainError("ball_volume_capped: negative radius");
    if (delta < 0.0 || delta > r) throw DomainError("ball_volume_capped: delta outside [0, r]");
    if (r == 0.0) return 0.0;
    const double q = delta / r;
    const double frac = 0.5 * (1.0 + g_function(d, q) / g_function(d, 1.0));
    return unit_ball_volume(d) * std::pow(r, d) * frac;
}

/// Upper incomplete gamma for integer order:
/// Gamma(k, x) = (k-1)! e^{-x} sum_{i=0}^{k-1} x^i / i!.
inline double upper_incomplete_gamma(int k, double x) {
    if (k < 1) throw DomainError("upper_incomplete_gamma: k must be >= 1");
    if (x < 0.0) throw DomainError("upper_incomplete_gamma: x must be >= 0");
    double factorial = 1.0;
    for (int i = 2; i <= k - 1; ++i) factorial *= i;
    double term = 1.0;  // x^i / i! at i = 0
    double sum = 1.0;
    for (int i = 1; i <= k - 1; ++i) {
        term *= x / static_cast<double>(i);
        sum += term;
    }
    return factorial * std::exp(-x) * sum;
}

/// Lambda = n * w_d * r^d, the expected number of points of an intensity-n
/// uniform Poisson process inside a radius-r ball.
inline double lambda_param(double n, int d, double r) {
    if (!(n > 0.0) || !(r > 0.0)) throw DomainError("lambda_param: inputs must be positive");
    return n * unit_ball_volume(d) * std::pow(r, d);
}

/// Exact inverse of lambda_param in r.
inline double radius_for_lambda(double n, int d, double lambda) {
    if (!(n > 0.0) || !(lambda > 0.0))
        throw DomainError("radius_for_lambda: inputs must be positive");
    return std::pow(lambda / (n * unit_ball_volume(d)), 1.0 / static_cast<double>(d));
}

}  // namespace stochtop
