#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kervature/curvature.hpp"

namespace kervature {

enum class Verdict { Pass, Fail, Skipped };

std::string verdict_str(Verdict v);

struct PointMargin {
    Point z;
    double margin;
};

/**
 * Outcome of one inequality check.  Gram-backed checks carry the eigenvalue
 * verdict (with witness on failure); pointwise checks carry per-point margins
 * where margin <= 0 means the inequality holds at that point.  A report with
 * verdict Skipped and hypothesis_failed set means the statement's hypothesis
 * failed on the sample, so no conclusion was tested.
 */
struct InequalityReport {
    std::string name;
    Verdict verdict = Verdict::Fail;
    bool hypothesis_failed = false;
    std::optional<GramVerdict> evidence;
    std::vector<PointMargin> margins;
    double worst_margin = 0.0;
    SampleSet sample;
    double tolerance = kDefaultNndTol;
    std::string note;
};

/// -ddbar log K(z,z) <= -1/(1-|z|^2)^2 pointwise on the disc.
InequalityReport verify_curvature_inequality(const KernelPtr& k, const SampleSet& pts,
                                             double tol = 1e-10);

/// (1-z conj(w))^2 G_K - K^2 is NND (equivalently, the Gaussian-curvature
/// kernel of (1-z conj(w)) K is NND).
InequalityReport verify_strong_inequality(const KernelPtr& k, const SampleSet& pts,
                                          double tol = kDefaultNndTol);

/// (1-z conj(w)) K is NND; diagonal-series inputs also get the exact
/// coefficient criterion, and a negative coefficient is certified by a
/// circulant Gram refutation.
InequalityReport verify_contractivity(const KernelPtr& k, const SampleSet& pts,
                                      double tol = kDefaultNndTol);

/// (1-<z,w>) K is NND on the ball.
InequalityReport verify_row_contraction(const KernelPtr& k, const SampleSet& pts,
                                        double tol = kDefaultNndTol);

/// (1-<z,w>)^2 [G_K - K^2 ((d_i dbar_j log B_m))] is NND, gated on the row
/// contraction hypothesis.
InequalityReport verify_row_inequality(const KernelPtr& k, const SampleSet& pts,
                                       double tol = kDefaultNndTol);

/// K1 - K2 NND (hypothesis) implies G_{K1} - G_{K2} NND (conclusion).
InequalityReport verify_monotonicity(const KernelPtr& k1, const KernelPtr& k2,
                                     const SampleSet& pts, double tol = kDefaultNndTol);

/// For K normalized at 0 with a row contraction: G_K - G_{B_m} NND.
InequalityReport verify_normalized_row(const KernelPtr& k, const SampleSet& pts,
                                       double tol = kDefaultNndTol);

/// (1/a_0) G_K - ((d dbar K)) is NND for diagonal-series K with a_0 > 0.
InequalityReport verify_constant_gaussian_bound(const KernelPtr& k, const SampleSet& pts,
                              double tol = kDefaultNndTol);

/// Differentiation bound: ||f'|| in the Gaussian-coefficient norm is at most
/// (1/sqrt(a_0)) ||f||_K for polynomials f.
InequalityReport verify_derivative_norm_bound(const KernelPtr& k, const Eigen::VectorXcd& f,
                               double tol = 1e-12);

/**
 * Circulant sample on a circle whose Gram for the given diagonal series has a
 * provably negative eigenvalue, when some radius in (0,1) exhibits one.  The
 * Gram of a diagonal series on the points r e^{2 pi i s/M} is circulant with
 * eigenvalues M sum_{n = s mod M} a_n r^{2n}, so the search is exact.
 */
std::optional<SampleSet> circulant_refutation(const DiagonalSeries& s, int points = 12);

}  // namespace kervature
