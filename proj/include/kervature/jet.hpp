#pragma once

#include <vector>

#include "kervature/types.hpp"

namespace kervature {

/**
 * Index space for truncated sesqui-analytic Taylor expansions in m holomorphic
 * directions s and m anti-holomorphic directions conj(t): multi-indices a with
 * |a| <= order, ordered by total degree then lexicographically.  Shared and
 * cached per (vars, order).
 */
struct JetSpace {
    int vars = 1;
    int order = 0;
    std::vector<std::vector<int>> midx;
    Eigen::MatrixXi combine;            // combine(i,j) = position of midx[i]+midx[j], -1 on overflow
    std::vector<double> fact;           // fact[i] = product of component factorials of midx[i]

    int size() const { return int(midx.size()); }
    int index_of(const std::vector<int>& a) const;
    static const JetSpace& get(int vars, int order);
};

/**
 * Element of the truncated algebra: K(z+s, w+t) expanded as a polynomial in
 * (s, conj(t)), both blocks cut at total degree <= order.  Products truncate;
 * elements without constant term are nilpotent, which keeps log/exp finite.
 */
struct JetPoly {
    const JetSpace* sp = nullptr;
    CMatrix c;   // c(i,j): coefficient of s^midx[i] * conj(t)^midx[j]

    static JetPoly zero(const JetSpace& s) { return {&s, CMatrix::Zero(s.size(), s.size())}; }
    static JetPoly constant(const JetSpace& s, Complex v) {
        JetPoly p = zero(s);
        p.c(0, 0) = v;
        return p;
    }
    Complex value() const { return c(0, 0); }
};

JetPoly operator+(const JetPoly& a, const JetPoly& b);
JetPoly operator-(const JetPoly& a, const JetPoly& b);
JetPoly operator*(const JetPoly& a, const JetPoly& b);
JetPoly operator*(Complex s, const JetPoly& a);
JetPoly operator+(const JetPoly& a, Complex s);
JetPoly operator-(Complex s, const JetPoly& a);

/// 1/P via the Neumann series; requires P(0,0) != 0.
JetPoly jp_recip(const JetPoly& p);

/// P^t with the principal branch at the constant term; requires P(0,0) != 0.
JetPoly jp_pow(const JetPoly& p, double t);

/// Integer power by binary exponentiation, n >= 0.
JetPoly jp_int_pow(const JetPoly& p, long n);

/**
 * Derivative table of a kernel at a point pair: deriv(i,j) holds
 * (d/dz)^a (d/d conj(w))^b K for the multi-index pair (a,b) = (midx[i], midx[j]).
 */
struct Jet {
    int vars = 1;
    int order = 0;
    std::vector<std::vector<int>> midx;
    CMatrix deriv;

    Complex value() const { return deriv(0, 0); }
    /// d_i K  (holomorphic slot, first order)
    Complex d(int i) const;
    /// d-bar_j K
    Complex dbar(int j) const;
    /// d_i d-bar_j K
    Complex ddbar(int i, int j) const;
    Complex entry(const std::vector<int>& a, const std::vector<int>& b) const;
};

/// Converts Taylor coefficients to derivative values (multiplies a! b!).
Jet jet_from_poly(const JetPoly& p);

}  // namespace kervature
