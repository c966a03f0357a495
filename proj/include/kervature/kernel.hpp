#pragma once

#include <memory>
#include <string>
#include <vector>

#include "kervature/jet.hpp"
#include "kervature/series.hpp"
#include "kervature/types.hpp"

namespace kervature {

enum class KernelKind {
    InversePower,     // (1 - <z,w>)^{-t} on the disc or a ball
    WitnessK0,          // (8 + 8 q - q^2)/(1 - q), q = z conj(w), on the disc
    Rational,         // P(q)/Q(q) with real polynomial coefficients, on the disc
    SeriesAtom,       // diagonal series kernel on the disc
    Sum,              // pointwise sum, same domain
    Product,          // pointwise product, same domain
    Power,            // child^alpha, alpha > 0, representable bases only
    Scale,            // c * child, c > 0
    OneMinusZw,       // (1 - <z,w>) * child, disc or ball
    NormalizeAt,      // K(w0,w0) K(z,w) / (K(z,w0) K(w0,w))
    Tensor,           // K1 (x) K2 on the product domain
    PullbackSzegoSq,  // f'(z) conj(f'(w)) / (1 - f(z) conj(f(w)))^2, polynomial f
};

struct KernelExpr;
using KernelPtr = std::shared_ptr<const KernelExpr>;

/**
 * Immutable kernel expression tree.  Every node evaluates to a sesqui-analytic
 * hermitian kernel on its domain; jets (mixed holomorphic/anti-holomorphic
 * derivatives) are exact, computed through the truncated Taylor algebra rather
 * than numerical differencing.
 */
struct KernelExpr {
    KernelKind kind;
    Domain domain;
    std::string tag;               // serialization type tag, preserved on round trips

    double expo = 1.0;             // InversePower t, Power alpha, Scale c
    DiagonalSeries series;         // SeriesAtom
    RVector rat_num, rat_den;      // Rational
    Eigen::VectorXcd poly_f;       // PullbackSzegoSq
    Point w0;                      // NormalizeAt
    std::vector<KernelPtr> children;

    int m() const { return domain.dim; }
};

// ---- atoms ----
KernelPtr szego();
KernelPtr szego_power(double alpha);
KernelPtr bergman();
KernelPtr drury_arveson(int m);
/// (1 - <z,w>)^{-t}; the common generalization of the four atoms above.
KernelPtr inverse_power(double t, Domain d);
KernelPtr witness_k0();
KernelPtr rational_kernel(RVector num, RVector den);
KernelPtr diagonal_series_kernel(DiagonalSeries s);
KernelPtr pullback_szego_sq(Eigen::VectorXcd f_coeffs);

// ---- composites ----
KernelPtr k_sum(KernelPtr a, KernelPtr b);
KernelPtr k_sum(std::vector<KernelPtr> children);
KernelPtr k_product(KernelPtr a, KernelPtr b);
KernelPtr k_product(std::vector<KernelPtr> children);
KernelPtr k_power(KernelPtr base, double alpha);
KernelPtr k_scale(double c, KernelPtr child);
KernelPtr one_minus_zw(KernelPtr child);
KernelPtr normalize_at(KernelPtr child, Point w0);
KernelPtr tensor_product(KernelPtr a, KernelPtr b);

// ---- evaluation ----
Complex eval_kernel(const KernelExpr& k, const Point& z, const Point& w);

/// Exact derivative table up to the given order (0, 1 or 2 are the supported
/// sizes everything downstream needs; higher orders work for the closed-form
/// atoms).  Entries are indexed by multi-index pairs; see Jet.
Jet eval_jet(const KernelExpr& k, const Point& z, const Point& w, int order);

/// True when K^t has either a closed form (inverse-power family and products,
/// scalings, tensors of such) or an exact coefficient recursion (diagonal
/// representable bases with a_0 > 0).
bool pow_representable(const KernelExpr& k);

/// K^t as a kernel expression; throws std::invalid_argument when the base is
/// not representable.  t may be any real for the closed-form family, t > 0
/// otherwise.
KernelPtr pow_expr(const KernelPtr& k, double t);

/// True when the kernel is a diagonal series in q = z conj(w) with exactly
/// recoverable coefficients (m = 1).
bool diagonal_representable(const KernelExpr& k);

/// Exact coefficients through degree n for diagonal-representable kernels.
DiagonalSeries diagonal_series_of(const KernelExpr& k, Index n);

}  // namespace kervature
