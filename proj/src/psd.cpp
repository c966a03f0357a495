#include "kervature/psd.hpp"

#include <cmath>
#include <random>

#include "kervature/parallel.hpp"

namespace kervature {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Uniform double in [0, 1) from raw 64-bit output; avoids the distribution
// classes whose streams are implementation defined.
double unit_uniform(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

}  // namespace

SampleSet sample_explicit(std::vector<Point> pts) {
    SampleSet s;
    s.recipe = SampleSet::Recipe::Explicit;
    s.points = std::move(pts);
    return s;
}

SampleSet sample_radial_grid(RVector radii, RVector angles) {
    SampleSet s;
    s.recipe = SampleSet::Recipe::RadialGrid;
    s.radii = radii;
    s.angles = angles;
    for (Index i = 0; i < radii.size(); ++i) {
        if (radii[i] == 0.0) {
            s.points.push_back(point1(0.0));
            continue;
        }
        for (Index j = 0; j < angles.size(); ++j)
            s.points.push_back(point1(std::polar(radii[i], angles[j])));
    }
    return s;
}

SampleSet sample_radial_grid(RVector radii, int n_angles) {
    if (n_angles < 1) throw std::invalid_argument("need at least one angle");
    RVector angles(n_angles);
    for (int j = 0; j < n_angles; ++j) angles[j] = 2.0 * kPi * j / n_angles;
    return sample_radial_grid(std::move(radii), std::move(angles));
}

SampleSet sample_random(std::uint64_t seed, int count, double max_radius, const Domain& d) {
    if (!(max_radius > 0.0 && max_radius < 1.0))
        throw std::invalid_argument("max_radius must lie in (0, 1)");
    SampleSet s;
    s.recipe = SampleSet::Recipe::Random;
    s.seed = seed;
    s.count = count;
    s.max_radius = max_radius;
    std::mt19937_64 rng(seed);
    while (int(s.points.size()) < count) {
        Point p(d.dim);
        for (int i = 0; i < d.dim; ++i)
            p[i] = Complex(2.0 * unit_uniform(rng) - 1.0, 2.0 * unit_uniform(rng) - 1.0);
        // Rejection against the unit domain, then shrink to max_radius.
        if (!d.contains(p)) continue;
        p *= max_radius;
        bool separated = true;
        for (const Point& q : s.points)
            if ((p - q).norm() < kMinSeparation) separated = false;
        if (separated) s.points.push_back(std::move(p));
    }
    return s;
}

SampleSet default_disc_sample() {
    RVector radii(5);
    radii << 0.1, 0.3, 0.5, 0.7, 0.9;
    return sample_radial_grid(radii, 8);
}

SampleSet capped(const SampleSet& s, std::size_t cap) {
    if (s.size() <= cap) return s;
    SampleSet out;
    out.recipe = SampleSet::Recipe::Explicit;
    const std::size_t stride = (s.size() + cap - 1) / cap;
    for (std::size_t i = 0; i < s.size(); i += stride) out.points.push_back(s.points[i]);
    return out;
}

void validate(const SampleSet& s, const Domain& d) {
    if (s.points.empty()) throw std::invalid_argument("sample set is empty");
    for (const Point& p : s.points) {
        if (p.size() != d.dim)
            throw std::invalid_argument("sample point dimension does not match " + d.str());
        if (!d.contains(p)) throw std::domain_error("sample point outside " + d.str());
    }
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            if ((s.points[i] - s.points[j]).norm() < kMinSeparation)
                throw std::invalid_argument("sample points closer than the minimum separation");
}

CMatrix gram_matrix(const KernelExpr& k, const SampleSet& s) {
    validate(s, k.domain);
    const Index n = Index(s.size());
    CMatrix g(n, n);
    parallel_for(n * n, [&](std::ptrdiff_t idx) {
        const Index i = idx / n, j = idx % n;
        try {
            g(i, j) = eval_kernel(k, s.points[i], s.points[j]);
        } catch (const std::exception& e) {
            throw std::runtime_error("kernel evaluation failed at sample pair (" +
                                     std::to_string(i) + ", " + std::to_string(j) + "): " + e.what());
        }
    });
    const double dev = (g - g.adjoint()).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
    if (dev > 1e-12 * scale)
        throw std::runtime_error("Gram matrix failed the hermitian symmetry check");
    g = ((g + CMatrix(g.adjoint())) / 2.0).eval();
    return g;
}

GramVerdict verdict_from_gram(const CMatrix& g, double tol) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(g);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
    GramVerdict v;
    v.min_eigenvalue = es.eigenvalues().minCoeff();
    v.max_eigenvalue = es.eigenvalues().maxCoeff();
    v.tolerance_used = tol;
    v.is_nnd = v.min_eigenvalue >= -tol * std::max(1.0, v.max_eigenvalue);
    if (!v.is_nnd) v.witness = es.eigenvectors().col(0);
    return v;
}

GramVerdict check_nnd(const KernelExpr& k, const SampleSet& s, double tol) {
    return verdict_from_gram(gram_matrix(k, s), tol);
}

GramVerdict check_order(const KernelExpr& k1, const KernelExpr& k2, const SampleSet& s, double tol) {
    if (!(k1.domain == k2.domain))
        throw std::invalid_argument("order comparison needs a common domain");
    return verdict_from_gram(gram_matrix(k1, s) - gram_matrix(k2, s), tol);
}

}  // namespace kervature
