#pragma once

#include <cstdint>

#include "kervature/curvature.hpp"

namespace kervature {

/// Bivariate polynomial sum F(i,j) z1^i z2^j as a dense coefficient matrix.
using BivPoly = Eigen::MatrixXcd;

/**
 * Degree-N truncation of the tensor product (H, K^alpha) (x) (H, K^beta) for a
 * diagonal base kernel K on the disc.  Monomials z1^i z2^j (i + j <= N) are
 * orthogonal with squared norm mu(i,j) = 1/(a^(alpha)_i a^(beta)_j).
 *
 * The submodule A0 of polynomials vanishing on the diagonal z1 = z2 is spanned
 * degreewise by (z1 - z2) z1^i z2^j (i + j <= N - 1), A1 by the same with the
 * factor squared (i + j <= N - 2).  Because vanishing on the diagonal is a
 * degreewise property, the truncated A0 (-) A1 sits inside the untruncated one,
 * which is what makes the isometry check exact up to rounding.
 *
 * Gram matrices are block-diagonal per total degree; the A0 blocks are
 * tridiagonal and positive definite.  Factorizations are computed once.
 */
struct TruncatedTensorSpace {
    double alpha = 1.0;
    double beta = 1.0;
    Index N = 0;
    KernelPtr base;
    DiagonalSeries base_series;
    RVector a_alpha;   // coefficients of K^alpha, 0..N
    RVector a_beta;    // coefficients of K^beta, 0..N
    RVector kab;       // coefficients of K^{alpha+beta} d dbar log K, 0..N

    // A0 generator blocks: index n-1 holds total degree n (generators
    // (z1-z2) z1^i z2^{n-1-i}, i = 0..n-1).
    std::vector<Eigen::MatrixXd> a0_gram;
    std::vector<Eigen::LDLT<Eigen::MatrixXd>> a0_factor;
    // A1 generator blocks: index n-2 holds total degree n (generators
    // (z1-z2)^2 z1^i z2^{n-2-i}, i = 0..n-2).
    std::vector<Eigen::MatrixXd> a1_gram;
    std::vector<Eigen::LDLT<Eigen::MatrixXd>> a1_factor;

    double gram_condition = 1.0;   // over the A0 blocks

    double mu(Index i, Index j) const { return 1.0 / (a_alpha[i] * a_beta[j]); }
};

/// Builds the truncated space; the kernel must be a diagonal series on the
/// disc with strictly positive power coefficients through degree N.
TruncatedTensorSpace build_truncated_space(const KernelPtr& k, double alpha, double beta, Index N);

/// <F, G> under the monomial weights; support must stay within total degree N.
Complex biv_inner(const TruncatedTensorSpace& sp, const BivPoly& f, const BivPoly& g);
double biv_norm2(const TruncatedTensorSpace& sp, const BivPoly& f);

/// Projection of the reproducing section of K^alpha (x) K^beta at (w, rho)
/// onto the truncated A0 span: per-degree coefficient vectors on the
/// generators, solvable exactly because <p, section> = conj(p(w, rho)).
struct A0Projection {
    Complex w, rho;
    std::vector<Eigen::VectorXcd> coeffs;   // index n-1: degree-n generator block
};

A0Projection project_kernel_onto_a0(const TruncatedTensorSpace& sp, Complex w, Complex rho);
Complex a0_projection_eval(const TruncatedTensorSpace& sp, const A0Projection& p,
                           Complex z, Complex zeta);

/// K_{A0}^{(N)}(z, zeta; w, rho), the projected-section value in one call.
Complex a0_kernel_value(const TruncatedTensorSpace& sp, Complex z, Complex zeta,
                        Complex w, Complex rho);

/// Projection of an arbitrary polynomial onto the truncated A1 span.
BivPoly project_onto_a1(const TruncatedTensorSpace& sp, const BivPoly& f);

/// Closed form of the Hardy-bidisc diagonal value
///     K_{S0}(z, z) = log( |1-z1 conj(z2)|^2 / ((1-|z1|^2)(1-|z2|^2)) ) / |z1-z2|^2,
/// evaluated stably; the z2 -> z1 limit is 1/(1-|z1|^2)^2.
double hardy_s0_closed_form(Complex z1, Complex z2);

struct LimitPath {
    double t0 = 0.2;
    double shrink = 0.5;
    int steps = 6;
};

struct LimitSample {
    double t;
    double ratio;
};

/**
 * Estimate of lim_{zeta -> z} K_{A0}(z,zeta;z,zeta)/|z-zeta|^2 along the real
 * path zeta = z - t.  The extrapolation interpolates a quadratic through the
 * three smallest t and reads it at t = 0; error_estimate is the spread against
 * the neighboring triple.  target holds alpha beta/(alpha+beta) times the
 * K^{alpha+beta} d dbar log K value at z, computed from exact jets.
 */
struct LimitEstimate {
    double alpha = 0.0;
    double beta = 0.0;
    Complex z;
    std::vector<LimitSample> samples;
    double extrapolated = 0.0;
    double error_estimate = 0.0;
    double target = 0.0;
    double abs_error = 0.0;
    Index truncation = 0;
    double gram_condition = 1.0;
};

LimitEstimate limit_ratio(const TruncatedTensorSpace& sp, Complex z, LimitPath path = {});

/// R1 f = (beta d1 f - alpha d2 f)|_{z1=z2=z} / sqrt(alpha beta (alpha+beta)),
/// returned as univariate coefficients r_0..r_{deg-1}.
Eigen::VectorXcd r1_apply(const TruncatedTensorSpace& sp, const BivPoly& f);

/// Squared norm of a univariate polynomial in (H, K^{(alpha,beta)}) via the
/// diagonal coefficients of K^{alpha+beta} d dbar log K.
double kab_norm2(const TruncatedTensorSpace& sp, const Eigen::VectorXcd& r);

/// Seeded random element of the truncated S1 = A0 (-) A1: a random combination
/// of A0 generators minus its A1 projection.
BivPoly random_s1_element(const TruncatedTensorSpace& sp, std::uint64_t seed);

struct IsometryReport {
    int count = 0;
    double max_mismatch = 0.0;
};

/// Compares ||f||^2 with ||R1 f||^2 over `count` random S1 elements.
IsometryReport verify_r1_isometry(const TruncatedTensorSpace& sp, int count, std::uint64_t seed);

struct CurvatureViaLimit {
    double from_limit = 0.0;    // (2/K(z,z)^2) * extrapolated limit
    double log_hessian = 0.0;   // d dbar log K(z,z) from exact jets
    double curvature = 0.0;     // sign convention of the curvature module
    LimitEstimate estimate;
};

/// Cross-check of the limit against the log-Hessian for alpha = beta = 1.
CurvatureViaLimit curvature_via_limit(const TruncatedTensorSpace& sp, Complex z);

}  // namespace kervature
