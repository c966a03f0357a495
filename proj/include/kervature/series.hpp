#pragma once

#include <optional>

#include "kervature/types.hpp"

namespace kervature {

/**
 * Diagonal kernel on the unit disc in coefficient form,
 *
 *     K(z, w) = sum_n  a_n (z conj(w))^n .
 *
 * The coefficient list is finite.  Without a tail rule the object *is* the
 * polynomial kernel of degree N; with a constant tail the coefficients
 * continue as a_n = tail_value for every n > N, which keeps evaluation in
 * closed form (polynomial plus a geometric tail).
 *
 * Invariant: every stored coefficient is a true coefficient of the series
 * the object stands for.  When `exact` is true the tail rule accounts for
 * every coefficient past degree(), so the representation is complete.  When
 * `exact` is false the object is a trusted prefix of a longer series: the
 * stored values remain correct, but nothing is claimed beyond degree() and
 * the tail is forced to None.  Operations that would have to read past the
 * trusted prefix of an inexact operand shorten their result instead of
 * fabricating coefficients.
 */
struct DiagonalSeries {
    enum class Tail { None, Constant };

    RVector coeffs;             // a_0 .. a_N
    Tail tail = Tail::None;
    double tail_value = 0.0;    // a_n for n > N when tail == Constant
    double declared_radius = 1.0;
    bool exact = true;          // false: prefix only, no knowledge past degree()

    DiagonalSeries() = default;
    explicit DiagonalSeries(RVector c) : coeffs(std::move(c)) {
        if (coeffs.size() == 0) throw std::invalid_argument("empty coefficient list");
    }
    DiagonalSeries(RVector c, double tail_val) : DiagonalSeries(std::move(c)) {
        tail = Tail::Constant;
        tail_value = tail_val;
    }

    Index degree() const { return coeffs.size() - 1; }
    bool has_tail() const { return tail == Tail::Constant; }

    /// a_n for any n >= 0, extended through the tail rule (0 past the end
    /// when there is none).
    double coeff(Index n) const {
        if (n < coeffs.size()) return coeffs[n];
        return has_tail() ? tail_value : 0.0;
    }

    /// Coefficients materialized out to degree n inclusive.
    RVector materialize(Index n) const;
};

/// Exact evaluation of the represented function at q = z conj(w), |q| < 1.
Complex series_eval(const DiagonalSeries& k, Complex q);

/// Scaled derivative f^(j)(q)/j! for j = 0..jmax, exact (closed-form tail).
Eigen::VectorXcd series_scaled_derivatives(const DiagonalSeries& k, Complex q, int jmax);

/// Coefficientwise sum.  Constant tails add; a one-sided tail survives only
/// if the other operand has run out of explicit coefficients with value zero.
/// An inexact operand caps the result at its trusted degree.
DiagonalSeries series_sum(const DiagonalSeries& a, const DiagonalSeries& b);

/// Cauchy product through degree n (less if an inexact operand runs out
/// sooner).  The result is exact only when both operands are genuinely
/// polynomial and n covers the full product.
DiagonalSeries series_product(const DiagonalSeries& a, const DiagonalSeries& b, Index n);

/// Coefficients of K^alpha through degree n via the exp/log power recursion
/// anchored at a_0 > 0 (principal branch).  alpha may be any real; the
/// public kernel operations use alpha > 0.  The result is a prefix: the
/// power of a polynomial rarely terminates, so it never claims exactness.
DiagonalSeries series_power(const DiagonalSeries& k, double alpha, Index n);

/// Coefficients of the Gaussian-curvature kernel
///     G(z,w) = K d d-bar K - (d K)(d-bar K),
/// which for a diagonal K has the manifestly sign-revealing form
///     g_N = (1/2) sum_{i+j=N+1} a_i a_j (i - j)^2 ,
/// through degree n.  g_N needs input coefficients up to N+1, so an inexact
/// input of degree D caps the result at D-1.  Exact only for a genuinely
/// polynomial input whose full Gaussian expansion fits below n.
DiagonalSeries series_gaussian_coeffs(const DiagonalSeries& k, Index n);

/// Coefficients of K^{alpha+beta} * (d d-bar log K) through degree n.
/// Requires a_0 > 0.  Depends on alpha and beta only through the sum.
/// Always a prefix (built on series_power).
DiagonalSeries series_kab_coeffs(const DiagonalSeries& k, double alpha, double beta, Index n);

/// Coefficients of (1 - z conj(w)) K(z, w):  b_n = a_n - a_{n-1}.  For an
/// exact input the result is exact and a constant input tail turns into a
/// zero tail one slot past the end.  For a prefix of degree D only
/// b_0 .. b_D are known (b_{D+1} would need the unknown a_{D+1}).
DiagonalSeries series_one_minus_q(const DiagonalSeries& k);

struct CoeffVerdict {
    bool nonneg = false;
    std::optional<Index> first_negative;   // set when nonneg is false
};

/// Exact nonnegativity scan of all coefficients including the tail rule.
/// For diagonal kernels this decides positive definiteness outright.
CoeffVerdict coefficient_nnd(const DiagonalSeries& k);

}  // namespace kervature
