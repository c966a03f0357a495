#pragma once

#include <functional>

#include "kervature/psd.hpp"

namespace kervature {

/**
 * Matrix-valued sesqui-analytic kernel M(z,w) in C^{m x m} with the block
 * hermitian symmetry M(z,w) = M(w,z)^*.  Carried as an evaluator plus the
 * metadata Gram assembly and reports need.
 */
struct MatrixKernel {
    int m = 1;
    Domain domain;
    std::string tag;
    std::function<CMatrix(const Point&, const Point&)> eval;
};

/// Curvature -((d_i dbar_j log K))(z,z); hermitian negative definite for the
/// kernels of interest.
struct CurvatureMatrix {
    Point at;
    CMatrix entries;
};

CurvatureMatrix curvature_matrix(const KernelExpr& k, const Point& z);

/// G_K(z,w)_{ij} = K d_i dbar_j K - (d_i K)(dbar_j K); the Gaussian-curvature
/// kernel, non-negative definite whenever K is.
MatrixKernel gaussian_curvature_kernel(KernelPtr k);

/// ((d_i dbar_j K(z,w))).
MatrixKernel derivative_kernel(KernelPtr k);

/// Polarized log-Hessian ((d_i dbar_j log K))(z,w) = G_K / K^2.
MatrixKernel log_hessian_kernel(KernelPtr k);

/// K^{alpha+beta} ((d_i dbar_j log K)); depends on (alpha, beta) only through
/// the sum.  Requires K^{alpha+beta} to be representable.
MatrixKernel kab_kernel(KernelPtr k, double alpha, double beta);

/**
 * Two-dimensional local model of the adjoint multiplication operator at w:
 * the strictly upper triangular matrix with entry (-curvature(conj(w)))^{-1/2},
 * and the contractivity flag of N(w) + conj(w) I, which holds exactly when
 * the entry is at most 1 - |w|^2.
 */
struct LocalOperator {
    Complex at;
    Eigen::Matrix2cd entries;
    double lambda = 0.0;
    bool contractive = false;
};

LocalOperator local_operator(const KernelExpr& k, Complex w);

struct TraceCheckPoint {
    Point z;
    double residual;
};

struct TraceCheckReport {
    double mesh = 1e-3;
    double max_residual = 0.0;
    std::vector<TraceCheckPoint> points;
};

/**
 * Numerical check of the curvature trace identity for the metric
 * H(z) = kab(z,z): the bundle trace of dbar_j(H^{-1} d_i H) equals
 * m (alpha+beta) d_i dbar_j log K + d_i dbar_j log |det((d dbar log K))|.
 * The left side is pure central differencing (mesh h, Richardson once); the
 * right side uses exact jets plus the same differencing for the determinant
 * term.  Reports the largest entrywise residual over the grid.
 */
TraceCheckReport bundle_curvature_trace_check(KernelPtr k, double alpha, double beta,
                                              const SampleSet& grid, double mesh = 1e-3);

/// Block Gram matrix: entry (i m + r, j m + c) = M(x_i, x_j)(r, c).
CMatrix gram_matrix(const MatrixKernel& k, const SampleSet& s);
GramVerdict check_nnd(const MatrixKernel& k, const SampleSet& s, double tol = kDefaultNndTol);
GramVerdict check_order(const MatrixKernel& a, const MatrixKernel& b, const SampleSet& s,
                        double tol = kDefaultNndTol);

}  // namespace kervature
