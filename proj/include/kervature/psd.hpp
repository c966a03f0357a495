#pragma once

#include <cstdint>
#include <optional>

#include "kervature/kernel.hpp"

namespace kervature {

/// Default relative eigenvalue tolerance for Gram verdicts.
constexpr double kDefaultNndTol = 1e-9;

/// Minimum pairwise separation between sample points.
constexpr double kMinSeparation = 1e-6;

/**
 * Finite point configuration used for Gram-matrix checks.  Construction
 * recipes are recorded so reports can say where the points came from.
 * Points are pairwise separated by at least kMinSeparation.
 */
struct SampleSet {
    enum class Recipe { Explicit, RadialGrid, Random };
    Recipe recipe = Recipe::Explicit;
    std::vector<Point> points;

    RVector radii, angles;          // RadialGrid
    std::uint64_t seed = 0;         // Random
    int count = 0;
    double max_radius = 0.95;

    int dim() const { return points.empty() ? 1 : int(points[0].size()); }
    std::size_t size() const { return points.size(); }
};

SampleSet sample_explicit(std::vector<Point> pts);

/// Polar grid on the disc: every radius paired with every angle; radius zero
/// contributes the origin once.
SampleSet sample_radial_grid(RVector radii, RVector angles);
SampleSet sample_radial_grid(RVector radii, int n_angles);

/// Seeded uniform draw from the domain scaled to max_radius (< 1).  The
/// generator is fixed so the same seed reproduces the same points everywhere.
SampleSet sample_random(std::uint64_t seed, int count, double max_radius, const Domain& d);

/// The documented default: radii 0.1, 0.3, 0.5, 0.7, 0.9 by 8 angles.
SampleSet default_disc_sample();

/// Deterministic stride subsample with at most cap points, applied before
/// Gram assembly to bound conditioning.  Pointwise checks use the full set.
SampleSet capped(const SampleSet& s, std::size_t cap = 12);

/// Throws when points collide, leave the domain, or the set is empty.
void validate(const SampleSet& s, const Domain& d);

struct GramVerdict {
    bool is_nnd = false;
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
    double tolerance_used = 0.0;
    std::optional<Eigen::VectorXcd> witness;   // eigenvector of the most negative eigenvalue
};

/// Gram matrix ((K(x_i, x_j)))_{ij}; evaluation runs in parallel over entries,
/// the result is hermitized after a deviation check of 1e-12 relative.
CMatrix gram_matrix(const KernelExpr& k, const SampleSet& s);

/// Eigenvalue verdict for a hermitian matrix:
/// is_nnd iff min_eig >= -tol * max(1, max_eig).
GramVerdict verdict_from_gram(const CMatrix& g, double tol);

GramVerdict check_nnd(const KernelExpr& k, const SampleSet& s, double tol = kDefaultNndTol);

/// Order comparison K1 >= K2 through the Gram difference on the samples.
GramVerdict check_order(const KernelExpr& k1, const KernelExpr& k2, const SampleSet& s,
                        double tol = kDefaultNndTol);

}  // namespace kervature
