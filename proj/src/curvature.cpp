#include "kervature/curvature.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <utility>

#include "kervature/parallel.hpp"

namespace kervature {

namespace {

// G_K entries from an order-1 jet: K ddbar K - dK dbarK.
CMatrix gaussian_entries(const Jet& j, Index m) {
    CMatrix out(m, m);
    const Complex kv = j.value();
    for (Index a = 0; a < m; ++a)
        for (Index b = 0; b < m; ++b)
            out(a, b) = kv * j.ddbar(static_cast<int>(a), static_cast<int>(b)) -
                        j.d(static_cast<int>(a)) * j.dbar(static_cast<int>(b));
    return out;
}

void require_kernel(const KernelPtr& k, const char* who) {
    if (!k) throw std::invalid_argument(std::string(who) + ": null kernel");
}

using Field = std::function<CMatrix(const Point&)>;

// Wirtinger derivatives of a matrix field by central differences in the real
// coordinates of variable i, one Richardson step (O(h^4)).
CMatrix holo_diff(const Field& f, const Point& x, Index i, double h) {
    Point a = x, b = x, c = x, d = x;
    a(i) += h;
    b(i) -= h;
    c(i) += Complex(0.0, h);
    d(i) -= Complex(0.0, h);
    const CMatrix gx = (f(a) - f(b)) / (2.0 * h);
    const CMatrix gy = (f(c) - f(d)) / (2.0 * h);
    return 0.5 * (gx - Complex(0.0, 1.0) * gy);
}

CMatrix antiholo_diff(const Field& f, const Point& x, Index j, double h) {
    Point a = x, b = x, c = x, d = x;
    a(j) += h;
    b(j) -= h;
    c(j) += Complex(0.0, h);
    d(j) -= Complex(0.0, h);
    const CMatrix gx = (f(a) - f(b)) / (2.0 * h);
    const CMatrix gy = (f(c) - f(d)) / (2.0 * h);
    return 0.5 * (gx + Complex(0.0, 1.0) * gy);
}

CMatrix holo_diff_r(const Field& f, const Point& x, Index i, double h) {
    return (4.0 * holo_diff(f, x, i, h / 2.0) - holo_diff(f, x, i, h)) / 3.0;
}

CMatrix antiholo_diff_r(const Field& f, const Point& x, Index j, double h) {
    return (4.0 * antiholo_diff(f, x, j, h / 2.0) - antiholo_diff(f, x, j, h)) / 3.0;
}

}  // namespace

CurvatureMatrix curvature_matrix(const KernelExpr& k, const Point& z) {
    const Index m = k.domain.dim;
    const Jet j = eval_jet(k, z, z, 1);
    const Complex kv = j.value();
    if (!(kv.real() > 0.0) || std::abs(kv.imag()) > 1e-10 * kv.real())
        throw std::domain_error("curvature_matrix: kernel is not positive at the diagonal point");
    CMatrix out(m, m);
    const Complex k2 = kv * kv;
    for (Index a = 0; a < m; ++a)
        for (Index b = 0; b < m; ++b)
            out(a, b) = -(kv * j.ddbar(static_cast<int>(a), static_cast<int>(b)) -
                          j.d(static_cast<int>(a)) * j.dbar(static_cast<int>(b))) /
                        k2;
    const CMatrix adj = out.adjoint();
    out = 0.5 * (out + adj);
    return CurvatureMatrix{z, std::move(out)};
}

MatrixKernel gaussian_curvature_kernel(KernelPtr k) {
    require_kernel(k, "gaussian_curvature_kernel");
    MatrixKernel mk;
    mk.m = k->domain.dim;
    mk.domain = k->domain;
    mk.tag = "gaussian(" + k->tag + ")";
    const Index m = mk.m;
    mk.eval = [k, m](const Point& z, const Point& w) {
        return gaussian_entries(eval_jet(*k, z, w, 1), m);
    };
    return mk;
}

MatrixKernel derivative_kernel(KernelPtr k) {
    require_kernel(k, "derivative_kernel");
    MatrixKernel mk;
    mk.m = k->domain.dim;
    mk.domain = k->domain;
    mk.tag = "ddbar(" + k->tag + ")";
    const Index m = mk.m;
    mk.eval = [k, m](const Point& z, const Point& w) {
        const Jet j = eval_jet(*k, z, w, 1);
        CMatrix out(m, m);
        for (Index a = 0; a < m; ++a)
            for (Index b = 0; b < m; ++b)
                out(a, b) = j.ddbar(static_cast<int>(a), static_cast<int>(b));
        return out;
    };
    return mk;
}

MatrixKernel log_hessian_kernel(KernelPtr k) {
    require_kernel(k, "log_hessian_kernel");
    MatrixKernel mk;
    mk.m = k->domain.dim;
    mk.domain = k->domain;
    mk.tag = "ddbar-log(" + k->tag + ")";
    const Index m = mk.m;
    mk.eval = [k, m](const Point& z, const Point& w) -> CMatrix {
        const Jet j = eval_jet(*k, z, w, 1);
        const Complex kv = j.value();
        if (std::abs(kv) == 0.0)
            throw std::domain_error("log_hessian_kernel: kernel vanishes at the evaluation pair");
        return CMatrix(gaussian_entries(j, m) / (kv * kv));
    };
    return mk;
}

MatrixKernel kab_kernel(KernelPtr k, double alpha, double beta) {
    require_kernel(k, "kab_kernel");
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw std::invalid_argument("kab_kernel: alpha and beta must be positive");
    const double s = alpha + beta;
    const KernelPtr powered = pow_expr(k, s);  // throws when K^s has no representation
    MatrixKernel mk;
    mk.m = k->domain.dim;
    mk.domain = k->domain;
    mk.tag = "kab(" + k->tag + "," + std::to_string(alpha) + "," + std::to_string(beta) + ")";
    const Index m = mk.m;
    // K^s ddbar log K = G_{K^s} / (s K^s): one jet of the powered kernel.
    mk.eval = [powered, s, m](const Point& z, const Point& w) -> CMatrix {
        const Jet j = eval_jet(*powered, z, w, 1);
        const Complex lv = j.value();
        if (std::abs(lv) == 0.0)
            throw std::domain_error("kab_kernel: powered kernel vanishes at the evaluation pair");
        return CMatrix(gaussian_entries(j, m) / (s * lv));
    };
    return mk;
}

LocalOperator local_operator(const KernelExpr& k, Complex w) {
    if (k.domain.dim != 1)
        throw std::invalid_argument("local_operator: needs a one-variable kernel");
    const Point p = point1(std::conj(w));
    if (!k.domain.contains(p))
        throw std::domain_error("local_operator: point outside the domain");
    const CurvatureMatrix c = curvature_matrix(k, p);
    const double curv = c.entries(0, 0).real();
    if (!(curv < 0.0))
        throw std::domain_error("local_operator: curvature is degenerate at the requested point");
    LocalOperator op;
    op.at = w;
    op.lambda = 1.0 / std::sqrt(-curv);
    op.entries.setZero();
    op.entries(0, 1) = op.lambda;
    op.contractive = op.lambda <= (1.0 - std::norm(w)) + 1e-12 * std::max(1.0, op.lambda);
    return op;
}

TraceCheckReport bundle_curvature_trace_check(KernelPtr k, double alpha, double beta,
                                              const SampleSet& grid, double mesh) {
    require_kernel(k, "bundle_curvature_trace_check");
    if (!(mesh > 0.0)) throw std::invalid_argument("bundle_curvature_trace_check: mesh must be positive");
    validate(grid, k->domain);
    const Index m = k->domain.dim;
    const double s = alpha + beta;

    const MatrixKernel metric = kab_kernel(k, alpha, beta);
    const MatrixKernel logh = log_hessian_kernel(k);

    const Field hfield = [&metric](const Point& x) { return metric.eval(x, x); };
    // log |det ddbar log K| as a 1x1 field, so it shares the difference helpers.
    const Field psi = [&logh](const Point& x) {
        CMatrix v(1, 1);
        v(0, 0) = std::log(std::abs(logh.eval(x, x).determinant()));
        return v;
    };

    TraceCheckReport report;
    report.mesh = mesh;
    report.points.reserve(grid.size());
    for (const Point& z : grid.points) {
        const Jet base = eval_jet(*k, z, z, 1);
        const Complex kv = base.value();
        double worst = 0.0;
        for (Index i = 0; i < m; ++i) {
            const Field connection = [&hfield, i, mesh](const Point& x) {
                const CMatrix h = hfield(x);
                return CMatrix(h.inverse() * holo_diff_r(hfield, x, i, mesh));
            };
            for (Index j = 0; j < m; ++j) {
                const Complex lhs = antiholo_diff_r(connection, z, j, mesh).trace();
                const Complex loghess =
                    (kv * base.ddbar(static_cast<int>(i), static_cast<int>(j)) -
                     base.d(static_cast<int>(i)) * base.dbar(static_cast<int>(j))) /
                    (kv * kv);
                const Field dpsi = [&psi, i, mesh](const Point& x) {
                    return holo_diff_r(psi, x, i, mesh);
                };
                const Complex rhs = static_cast<double>(m) * s * loghess +
                                    antiholo_diff_r(dpsi, z, j, mesh)(0, 0);
                worst = std::max(worst, std::abs(lhs - rhs));
            }
        }
        report.points.push_back(TraceCheckPoint{z, worst});
        report.max_residual = std::max(report.max_residual, worst);
    }
    return report;
}

CMatrix gram_matrix(const MatrixKernel& k, const SampleSet& s) {
    if (!k.eval) throw std::invalid_argument("gram_matrix: kernel has no evaluator");
    validate(s, k.domain);
    const Index n = static_cast<Index>(s.size());
    const Index m = k.m;
    CMatrix g(n * m, n * m);
    std::string first_error;
    std::mutex err_mutex;
    parallel_for(static_cast<std::size_t>(n * n), [&](std::size_t flat) {
        const Index i = static_cast<Index>(flat) / n;
        const Index j = static_cast<Index>(flat) % n;
        try {
            const CMatrix block = k.eval(s.points[static_cast<std::size_t>(i)],
                                         s.points[static_cast<std::size_t>(j)]);
            if (block.rows() != m || block.cols() != m)
                throw std::runtime_error("evaluator returned a block of the wrong shape");
            g.block(i * m, j * m, m, m) = block;
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(err_mutex);
            if (first_error.empty())
                first_error = "gram_matrix: block (" + std::to_string(i) + ", " + std::to_string(j) +
                              "): " + e.what();
        }
    });
    if (!first_error.empty()) throw std::runtime_error(first_error);

    const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
    const double dev = (g - CMatrix(g.adjoint())).cwiseAbs().maxCoeff();
    if (dev > 1e-12 * scale)
        throw std::runtime_error("gram_matrix: block matrix is not hermitian (deviation " +
                                 std::to_string(dev) + ")");
    const CMatrix adj = g.adjoint();
    g = 0.5 * (g + adj);
    return g;
}

GramVerdict check_nnd(const MatrixKernel& k, const SampleSet& s, double tol) {
    return verdict_from_gram(gram_matrix(k, s), tol);
}

GramVerdict check_order(const MatrixKernel& a, const MatrixKernel& b, const SampleSet& s, double tol) {
    if (a.m != b.m) throw std::invalid_argument("check_order: block sizes differ");
    const CMatrix diff = gram_matrix(a, s) - gram_matrix(b, s);
    return verdict_from_gram(diff, tol);
}

}  // namespace kervature
