#pragma once

// Independent numerical oracles the tests compare library values against:
// finite differences for derivatives, direct series summation for diagonal
// kernels, and the binomial expansion of (1-q)^{-alpha}.

#include <cmath>
#include <functional>

#include "kervature/kernel.hpp"

namespace kervature::oracle {

using Fn = std::function<Complex(const Point&, const Point&)>;

inline Fn wrap(const KernelPtr& k) {
    return [k](const Point& z, const Point& w) { return eval_kernel(*k, z, w); };
}

// holomorphic derivative in z_i: central difference plus one Richardson step
inline Complex fd_d(const Fn& f, const Point& z, const Point& w, int i, double h = 1e-4) {
    auto at = [&](double hh) {
        Point a = z, b = z, c = z, d = z;
        a(i) += hh;
        b(i) -= hh;
        c(i) += Complex(0.0, hh);
        d(i) -= Complex(0.0, hh);
        const Complex du = (f(a, w) - f(b, w)) / (2.0 * hh);
        const Complex dv = (f(c, w) - f(d, w)) / (2.0 * hh);
        return 0.5 * (du - Complex(0.0, 1.0) * dv);
    };
    return (4.0 * at(h / 2.0) - at(h)) / 3.0;
}

// anti-holomorphic derivative in w_j (K is anti-holomorphic in w)
inline Complex fd_dbar(const Fn& f, const Point& z, const Point& w, int j, double h = 1e-4) {
    auto at = [&](double hh) {
        Point a = w, b = w, c = w, d = w;
        a(j) += hh;
        b(j) -= hh;
        c(j) += Complex(0.0, hh);
        d(j) -= Complex(0.0, hh);
        const Complex du = (f(z, a) - f(z, b)) / (2.0 * hh);
        const Complex dv = (f(z, c) - f(z, d)) / (2.0 * hh);
        return 0.5 * (du + Complex(0.0, 1.0) * dv);
    };
    return (4.0 * at(h / 2.0) - at(h)) / 3.0;
}

inline Complex fd_ddbar(const Fn& f, const Point& z, const Point& w, int i, int j,
                        double h = 1e-4) {
    Fn g = [&f, i, h](const Point& zz, const Point& ww) { return fd_d(f, zz, ww, i, h); };
    return fd_dbar(g, z, w, j, h);
}

// d^a dbar^b of a univariate diagonal series by direct summation; terms decay
// geometrically, so 400 of them push the tail far below double rounding for
// |z|, |w| <= 0.8.
inline Complex series_jet(const DiagonalSeries& s, Complex z, Complex w, int a, int b,
                          Index terms = 400) {
    const Complex wb = std::conj(w);
    Complex sum = 0.0;
    for (Index n = std::max(a, b); n < terms; ++n) {
        double falling = 1.0;
        for (Index k = 0; k < a; ++k) falling *= double(n - k);
        for (Index k = 0; k < b; ++k) falling *= double(n - k);
        sum += s.coeff(n) * falling * std::pow(z, double(n - a)) * std::pow(wb, double(n - b));
    }
    return sum;
}

// coefficients of (1-q)^{-alpha}
inline RVector binom_series(double alpha, Index n) {
    RVector c(n + 1);
    c[0] = 1.0;
    for (Index k = 1; k <= n; ++k) c[k] = c[k - 1] * (alpha + double(k) - 1.0) / double(k);
    return c;
}

inline bool close(Complex a, Complex b, double tol) {
    return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

}  // namespace kervature::oracle
