#include "kervature/tensor_modules.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace kervature {

namespace {

void check_support(const TruncatedTensorSpace& sp, const BivPoly& f, const char* who) {
    for (Index i = 0; i < f.rows(); ++i)
        for (Index j = 0; j < f.cols(); ++j)
            if (f(i, j) != Complex(0.0, 0.0) && i + j > sp.N)
                throw std::invalid_argument(std::string(who) +
                                            ": polynomial support exceeds the truncation degree");
}

// LDLT solve with one refinement pass, applied to real and imaginary parts.
Eigen::VectorXd solve_real_refined(const Eigen::MatrixXd& g, const Eigen::LDLT<Eigen::MatrixXd>& f,
                                   const Eigen::VectorXd& b) {
    Eigen::VectorXd x = f.solve(b);
    x += f.solve(b - g * x);
    return x;
}

Eigen::VectorXcd solve_refined(const Eigen::MatrixXd& g, const Eigen::LDLT<Eigen::MatrixXd>& f,
                               const Eigen::VectorXcd& rhs) {
    const Eigen::VectorXd xr = solve_real_refined(g, f, rhs.real());
    const Eigen::VectorXd xi = solve_real_refined(g, f, rhs.imag());
    return xr.cast<Complex>() + Complex(0.0, 1.0) * xi.cast<Complex>();
}

// Monomial support of the degree-n A1 generator (z1-z2)^2 z1^a z2^{n-2-a}.
struct A1Gen {
    Index e1[3];
    Index e2[3];
    double c[3];
};

A1Gen a1_generator(Index a, Index n) {
    const Index j = n - 2 - a;
    return A1Gen{{a + 2, a + 1, a}, {j, j + 1, j + 2}, {1.0, -2.0, 1.0}};
}

double uniform01(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

// Quadratic interpolation through three (t, r) pairs, read off at t = 0.
double quad_at_zero(const LimitSample& s0, const LimitSample& s1, const LimitSample& s2) {
    const LimitSample s[3] = {s0, s1, s2};
    double acc = 0.0;
    for (int i = 0; i < 3; ++i) {
        double w = 1.0;
        for (int j = 0; j < 3; ++j)
            if (j != i) w *= s[j].t / (s[j].t - s[i].t);
        acc += w * s[i].ratio;
    }
    return acc;
}

}  // namespace

TruncatedTensorSpace build_truncated_space(const KernelPtr& k, double alpha, double beta, Index N) {
    if (!k) throw std::invalid_argument("build_truncated_space: null kernel");
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw std::invalid_argument("build_truncated_space: exponents must be positive");
    if (N < 1) throw std::invalid_argument("build_truncated_space: truncation degree must be >= 1");
    if (k->domain.dim != 1 || !diagonal_representable(*k))
        throw std::invalid_argument("build_truncated_space: needs a diagonal-series kernel on the disc");

    TruncatedTensorSpace sp;
    sp.alpha = alpha;
    sp.beta = beta;
    sp.N = N;
    sp.base = k;
    sp.base_series = diagonal_series_of(*k, N + 2);
    sp.a_alpha = series_power(sp.base_series, alpha, N).materialize(N);
    sp.a_beta = series_power(sp.base_series, beta, N).materialize(N);
    for (Index i = 0; i <= N; ++i)
        if (!(sp.a_alpha[i] > 0.0) || !(sp.a_beta[i] > 0.0))
            throw std::domain_error("build_truncated_space: nonpositive power coefficient at degree " +
                                    std::to_string(i));
    sp.kab = series_kab_coeffs(sp.base_series, alpha, beta, N).materialize(N);

    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    sp.a0_gram.reserve(static_cast<std::size_t>(N));
    sp.a0_factor.reserve(static_cast<std::size_t>(N));
    for (Index n = 1; n <= N; ++n) {
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
        for (Index i = 0; i < n; ++i) {
            const Index j = n - 1 - i;
            g(i, i) = sp.mu(i + 1, j) + sp.mu(i, j + 1);
            if (i + 1 < n) {
                const double off = -sp.mu(i + 1, j);
                g(i, i + 1) = off;
                g(i + 1, i) = off;
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
        lo = std::min(lo, es.eigenvalues().minCoeff());
        hi = std::max(hi, es.eigenvalues().maxCoeff());
        sp.a0_gram.push_back(g);
        sp.a0_factor.emplace_back(g);
    }
    if (!(lo > 0.0))
        throw std::runtime_error("build_truncated_space: generator Gram is not positive definite");
    sp.gram_condition = hi / lo;
    if (sp.gram_condition > 1e10)
        throw std::runtime_error("build_truncated_space: ill-conditioned Gram (condition " +
                                 std::to_string(sp.gram_condition) + ")");

    if (N >= 2) {
        sp.a1_gram.reserve(static_cast<std::size_t>(N - 1));
        sp.a1_factor.reserve(static_cast<std::size_t>(N - 1));
        for (Index n = 2; n <= N; ++n) {
            const Index s = n - 1;
            Eigen::MatrixXd g = Eigen::MatrixXd::Zero(s, s);
            for (Index a = 0; a < s; ++a) {
                const A1Gen qa = a1_generator(a, n);
                for (Index b = a; b < s; ++b) {
                    const A1Gen qb = a1_generator(b, n);
                    double acc = 0.0;
                    for (int x = 0; x < 3; ++x)
                        for (int y = 0; y < 3; ++y)
                            if (qa.e1[x] == qb.e1[y])
                                acc += qa.c[x] * qb.c[y] * sp.mu(qa.e1[x], qa.e2[x]);
                    g(a, b) = acc;
                    g(b, a) = acc;
                }
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
            if (!(es.eigenvalues().minCoeff() > 0.0))
                throw std::runtime_error(
                    "build_truncated_space: diagonal-square Gram is not positive definite");
            sp.a1_gram.push_back(g);
            sp.a1_factor.emplace_back(g);
        }
    }
    return sp;
}

Complex biv_inner(const TruncatedTensorSpace& sp, const BivPoly& f, const BivPoly& g) {
    check_support(sp, f, "biv_inner");
    check_support(sp, g, "biv_inner");
    const Index rows = std::min(f.rows(), g.rows());
    const Index cols = std::min(f.cols(), g.cols());
    Complex acc(0.0, 0.0);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j)
            if (i + j <= sp.N) acc += f(i, j) * std::conj(g(i, j)) * sp.mu(i, j);
    return acc;
}

double biv_norm2(const TruncatedTensorSpace& sp, const BivPoly& f) {
    check_support(sp, f, "biv_norm2");
    double acc = 0.0;
    for (Index i = 0; i < f.rows(); ++i)
        for (Index j = 0; j < f.cols(); ++j)
            if (i + j <= sp.N) acc += std::norm(f(i, j)) * sp.mu(i, j);
    return acc;
}

A0Projection project_kernel_onto_a0(const TruncatedTensorSpace& sp, Complex w, Complex rho) {
    if (!sp.base->domain.contains(point1(w)) || !sp.base->domain.contains(point1(rho)))
        throw std::domain_error("project_kernel_onto_a0: point outside the bidisc");
    A0Projection p;
    p.w = w;
    p.rho = rho;
    p.coeffs.reserve(static_cast<std::size_t>(sp.N));
    Eigen::VectorXcd wpow(sp.N + 1), rpow(sp.N + 1);
    wpow[0] = rpow[0] = Complex(1.0, 0.0);
    for (Index i = 1; i <= sp.N; ++i) {
        wpow[i] = wpow[i - 1] * w;
        rpow[i] = rpow[i - 1] * rho;
    }
    const Complex lead = w - rho;
    for (Index n = 1; n <= sp.N; ++n) {
        Eigen::VectorXcd rhs(n);
        for (Index i = 0; i < n; ++i) rhs[i] = std::conj(lead * wpow[i] * rpow[n - 1 - i]);
        p.coeffs.push_back(solve_refined(sp.a0_gram[n - 1], sp.a0_factor[n - 1], rhs));
    }
    return p;
}

Complex a0_projection_eval(const TruncatedTensorSpace& sp, const A0Projection& p,
                           Complex z, Complex zeta) {
    Eigen::VectorXcd zpow(sp.N + 1), cpow(sp.N + 1);
    zpow[0] = cpow[0] = Complex(1.0, 0.0);
    for (Index i = 1; i <= sp.N; ++i) {
        zpow[i] = zpow[i - 1] * z;
        cpow[i] = cpow[i - 1] * zeta;
    }
    const Complex lead = z - zeta;
    Complex acc(0.0, 0.0);
    for (Index n = 1; n <= sp.N; ++n) {
        const Eigen::VectorXcd& c = p.coeffs[n - 1];
        for (Index i = 0; i < n; ++i) acc += c[i] * lead * zpow[i] * cpow[n - 1 - i];
    }
    return acc;
}

Complex a0_kernel_value(const TruncatedTensorSpace& sp, Complex z, Complex zeta,
                        Complex w, Complex rho) {
    return a0_projection_eval(sp, project_kernel_onto_a0(sp, w, rho), z, zeta);
}

BivPoly project_onto_a1(const TruncatedTensorSpace& sp, const BivPoly& f) {
    check_support(sp, f, "project_onto_a1");
    BivPoly out = BivPoly::Zero(sp.N + 1, sp.N + 1);
    auto coeff_at = [&](Index i, Index j) -> Complex {
        if (i < f.rows() && j < f.cols()) return f(i, j);
        return Complex(0.0, 0.0);
    };
    for (Index n = 2; n <= sp.N; ++n) {
        const Index s = n - 1;
        Eigen::VectorXcd rhs(s);
        for (Index b = 0; b < s; ++b) {
            const A1Gen qb = a1_generator(b, n);
            Complex acc(0.0, 0.0);
            for (int x = 0; x < 3; ++x)
                acc += coeff_at(qb.e1[x], qb.e2[x]) * qb.c[x] * sp.mu(qb.e1[x], qb.e2[x]);
            rhs[b] = acc;
        }
        const Eigen::VectorXcd d = solve_refined(sp.a1_gram[n - 2], sp.a1_factor[n - 2], rhs);
        for (Index a = 0; a < s; ++a) {
            const A1Gen qa = a1_generator(a, n);
            for (int x = 0; x < 3; ++x) out(qa.e1[x], qa.e2[x]) += d[a] * qa.c[x];
        }
    }
    return out;
}

double hardy_s0_closed_form(Complex z1, Complex z2) {
    if (!(std::abs(z1) < 1.0) || !(std::abs(z2) < 1.0))
        throw std::domain_error("hardy_s0_closed_form: points must lie in the unit disc");
    const double sep2 = std::norm(z1 - z2);
    const double cross = std::norm(Complex(1.0, 0.0) - z1 * std::conj(z2));
    // The singularity at z1 = z2 is removable: -log(1 - u)/sep2 -> 1/cross.
    if (sep2 == 0.0) return 1.0 / cross;
    // 1 - sep2/cross = (1-|z1|^2)(1-|z2|^2)/cross, so log1p keeps precision
    // when the points are close.
    return -std::log1p(-sep2 / cross) / sep2;
}

LimitEstimate limit_ratio(const TruncatedTensorSpace& sp, Complex z, LimitPath path) {
    if (!(path.t0 > 0.0) || !(path.shrink > 0.0) || !(path.shrink < 1.0) || path.steps < 3)
        throw std::invalid_argument("limit_ratio: bad path parameters");
    LimitEstimate est;
    est.alpha = sp.alpha;
    est.beta = sp.beta;
    est.z = z;
    est.truncation = sp.N;
    est.gram_condition = sp.gram_condition;
    est.samples.reserve(static_cast<std::size_t>(path.steps));
    double t = path.t0;
    for (int k = 0; k < path.steps; ++k, t *= path.shrink) {
        const Complex zeta = z - t;
        if (!sp.base->domain.contains(point1(zeta)))
            throw std::domain_error("limit_ratio: the approach path leaves the disc");
        const double val = a0_kernel_value(sp, z, zeta, z, zeta).real();
        est.samples.push_back(LimitSample{t, val / (t * t)});
    }
    const std::size_t last = est.samples.size() - 1;
    est.extrapolated =
        quad_at_zero(est.samples[last - 2], est.samples[last - 1], est.samples[last]);
    if (est.samples.size() >= 4) {
        const double alt =
            quad_at_zero(est.samples[last - 3], est.samples[last - 2], est.samples[last - 1]);
        est.error_estimate = std::abs(est.extrapolated - alt);
    }
    if (est.error_estimate > 0.05 * std::max(1.0, std::abs(est.extrapolated)))
        throw std::runtime_error("limit_ratio: extrapolation did not stabilize along the path");

    const MatrixKernel kk = kab_kernel(sp.base, sp.alpha, sp.beta);
    const Point pz = point1(z);
    est.target = sp.alpha * sp.beta / (sp.alpha + sp.beta) * kk.eval(pz, pz)(0, 0).real();
    est.abs_error = std::abs(est.extrapolated - est.target);
    return est;
}

Eigen::VectorXcd r1_apply(const TruncatedTensorSpace& sp, const BivPoly& f) {
    check_support(sp, f, "r1_apply");
    Eigen::VectorXcd r = Eigen::VectorXcd::Zero(std::max<Index>(sp.N, 1));
    for (Index i = 0; i < f.rows(); ++i)
        for (Index j = 0; j < f.cols(); ++j) {
            if (i + j == 0 || f(i, j) == Complex(0.0, 0.0)) continue;
            r[i + j - 1] += (sp.beta * double(i) - sp.alpha * double(j)) * f(i, j);
        }
    r /= std::sqrt(sp.alpha * sp.beta * (sp.alpha + sp.beta));
    return r;
}

double kab_norm2(const TruncatedTensorSpace& sp, const Eigen::VectorXcd& r) {
    if (r.size() > sp.kab.size())
        throw std::invalid_argument("kab_norm2: polynomial degree exceeds the truncation");
    double acc = 0.0;
    for (Index n = 0; n < r.size(); ++n) {
        if (std::norm(r[n]) == 0.0) continue;
        if (!(sp.kab[n] > 0.0))
            throw std::domain_error("kab_norm2: nonpositive coefficient at degree " +
                                    std::to_string(n));
        acc += std::norm(r[n]) / sp.kab[n];
    }
    return acc;
}

BivPoly random_s1_element(const TruncatedTensorSpace& sp, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    BivPoly f = BivPoly::Zero(sp.N + 1, sp.N + 1);
    for (Index n = 1; n <= sp.N; ++n)
        for (Index i = 0; i < n; ++i) {
            const Index j = n - 1 - i;
            const Complex c(uniform01(rng) - 0.5, uniform01(rng) - 0.5);
            f(i + 1, j) += c;
            f(i, j + 1) -= c;
        }
    f -= project_onto_a1(sp, f);
    return f;
}

IsometryReport verify_r1_isometry(const TruncatedTensorSpace& sp, int count, std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("verify_r1_isometry: count must be positive");
    IsometryReport rep;
    rep.count = count;
    for (int k = 0; k < count; ++k) {
        const BivPoly f = random_s1_element(sp, seed + std::uint64_t(k));
        const double n2 = biv_norm2(sp, f);
        const double m2 = kab_norm2(sp, r1_apply(sp, f));
        rep.max_mismatch = std::max(rep.max_mismatch, std::abs(n2 - m2) / std::max(1.0, n2));
    }
    return rep;
}

CurvatureViaLimit curvature_via_limit(const TruncatedTensorSpace& sp, Complex z) {
    if (sp.alpha != 1.0 || sp.beta != 1.0)
        throw std::invalid_argument("curvature_via_limit: needs alpha = beta = 1");
    CurvatureViaLimit out;
    out.estimate = limit_ratio(sp, z);
    const Point pz = point1(z);
    const double kzz = eval_kernel(*sp.base, pz, pz).real();
    out.from_limit = 2.0 * out.estimate.extrapolated / (kzz * kzz);
    out.log_hessian = -curvature_matrix(*sp.base, pz).entries(0, 0).real();
    out.curvature = -out.from_limit;
    return out;
}

}  // namespace kervature
