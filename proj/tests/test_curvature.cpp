#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kervature/curvature.hpp"
#include "oracles.hpp"

using namespace kervature;
namespace oc = kervature::oracle;

TEST_CASE("curvature of the classical kernels at the origin") {
    CHECK(curvature_matrix(*szego(), point1(0.0)).entries(0, 0).real() ==
          doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(curvature_matrix(*bergman(), point1(0.0)).entries(0, 0).real() ==
          doctest::Approx(-2.0).epsilon(1e-14));
    const CMatrix da = curvature_matrix(*drury_arveson(2), point2(0.0, 0.0)).entries;
    CHECK(da(0, 0).real() == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(da(1, 1).real() == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(std::abs(da(0, 1)) < 1e-13);
}

TEST_CASE("szego curvature closed form away from the origin") {
    for (Complex z : {Complex(0.3, 0.2), Complex(-0.5, 0.1), Complex(0.0, 0.7)}) {
        const double s2 = 1.0 / std::pow(1.0 - std::norm(z), 2);
        CHECK(curvature_matrix(*szego(), point1(z)).entries(0, 0).real() ==
              doctest::Approx(-s2).epsilon(1e-12));
        CHECK(curvature_matrix(*bergman(), point1(z)).entries(0, 0).real() ==
              doctest::Approx(-2.0 * s2).epsilon(1e-12));
    }
}

TEST_CASE("pull-back curvature via the change-of-variable formula") {
    // K(z,w) = f'(z) conj(f'(w)) szego(f(z), f(w))^2 with f(z) = z^2:
    // d dbar log K(z,z) = 2 |f'(z)|^2 / (1-|f(z)|^2)^2
    Eigen::VectorXcd f(3);
    f << Complex(0, 0), Complex(0, 0), Complex(1, 0);
    const KernelPtr k = pullback_szego_sq(f);
    const Complex z(0.5, 0.0);
    const double expect = 2.0 * std::norm(2.0 * z) / std::pow(1.0 - std::norm(z * z), 2);
    CHECK(curvature_matrix(*k, point1(z)).entries(0, 0).real() ==
          doctest::Approx(-expect).epsilon(1e-10));
    CHECK(eval_kernel(*k, point1(z), point1(z)).real() ==
          doctest::Approx(std::norm(2.0 * z) / std::pow(0.9375, 2)).epsilon(1e-13));
}

TEST_CASE("Gaussian-curvature kernel: closed forms and the series path") {
    const MatrixKernel g = gaussian_curvature_kernel(szego());
    const Point z = point1(Complex(0.3, 0.0)), w = point1(Complex(0.1, -0.2));
    // G_szego = (1-q)^{-4}
    const Complex q = z(0) * std::conj(w(0));
    CHECK(oc::close(g.eval(z, w)(0, 0), std::pow(1.0 - q, -4.0), 1e-13));

    const MatrixKernel g0 = gaussian_curvature_kernel(witness_k0());
    CHECK(g0.eval(point1(0.0), point1(0.0))(0, 0).real() ==
          doctest::Approx(128.0).epsilon(1e-14));

    // the jet path agrees with the exact coefficient path for diagonal kernels
    const DiagonalSeries gs = series_gaussian_coeffs(diagonal_series_of(*witness_k0(), 70), 68);
    for (Complex zz : {Complex(0.5, 0.2), Complex(-0.3, 0.4)})
        for (Complex ww : {Complex(0.2, -0.6), Complex(0.45, 0.0)}) {
            const Complex via_jet = g0.eval(point1(zz), point1(ww))(0, 0);
            const Complex via_series = series_eval(gs, zz * std::conj(ww));
            CHECK(oc::close(via_jet, via_series, 1e-9));
        }
}

TEST_CASE("derivative and log-Hessian kernels on szego") {
    const Point z = point1(Complex(0.25, 0.1)), w = point1(Complex(-0.3, 0.05));
    const Complex q = z(0) * std::conj(w(0));
    // d dbar (1-q)^{-1} = (1+q)(1-q)^{-3}
    CHECK(oc::close(derivative_kernel(szego()).eval(z, w)(0, 0),
                    (1.0 + q) * std::pow(1.0 - q, -3.0), 1e-13));
    // d dbar log szego = (1-q)^{-2}
    CHECK(oc::close(log_hessian_kernel(szego()).eval(z, w)(0, 0), std::pow(1.0 - q, -2.0),
                    1e-13));
}

TEST_CASE("kab kernel depends only on alpha + beta and has the szego closed form") {
    const Point z = point1(Complex(0.4, 0.1)), w = point1(Complex(0.1, 0.3));
    const Complex q = z(0) * std::conj(w(0));
    // szego: K^{a+b} d dbar log K = (1-q)^{-(a+b+2)}
    CHECK(oc::close(kab_kernel(szego(), 1.0, 1.0).eval(z, w)(0, 0), std::pow(1.0 - q, -4.0),
                    1e-13));
    CHECK(oc::close(kab_kernel(szego(), 1.5, 2.5).eval(z, w)(0, 0), std::pow(1.0 - q, -6.0),
                    1e-13));

    const MatrixKernel a = kab_kernel(witness_k0(), 1.0, 2.0);
    const MatrixKernel b = kab_kernel(witness_k0(), 0.5, 2.5);
    const Point pts[] = {point1(Complex(0.0, 0.0)), point1(Complex(0.3, 0.1)),
                         point1(Complex(-0.4, 0.2)), point1(Complex(0.1, -0.5)),
                         point1(Complex(0.6, 0.0))};
    for (const Point& p : pts)
        for (const Point& r : pts) {
            const Complex va = a.eval(p, r)(0, 0), vb = b.eval(p, r)(0, 0);
            CHECK(std::abs(va - vb) <= 1e-10 * std::max(1.0, std::abs(vb)));
        }
}

TEST_CASE("kab of a tensor kernel is a 2x2 matrix kernel") {
    const KernelPtr t = tensor_product(szego(), szego());
    const MatrixKernel k = kab_kernel(t, 1.0, 1.0);
    const Point z = point2(Complex(0.2, 0.1), Complex(-0.1, 0.3));
    const CMatrix v = k.eval(z, z);
    REQUIRE(v.rows() == 2);
    // diagonal entries K^2 s_i^2, off-diagonal zero (log K splits)
    const double k2 = std::norm(eval_kernel(*t, z, z));  // K(z,z)^2, K real positive
    const double s1 = 1.0 / std::pow(1.0 - std::norm(z(0)), 2);
    const double s2 = 1.0 / std::pow(1.0 - std::norm(z(1)), 2);
    CHECK(v(0, 0).real() == doctest::Approx(k2 * s1).epsilon(1e-12));
    CHECK(v(1, 1).real() == doctest::Approx(k2 * s2).epsilon(1e-12));
    CHECK(std::abs(v(0, 1)) < 1e-12 * k2);
}

TEST_CASE("matrix Gram assembly is blockwise hermitian and NND for szego's Gaussian kernel") {
    const MatrixKernel g = gaussian_curvature_kernel(szego());
    const SampleSet s = default_disc_sample();
    const CMatrix gram = gram_matrix(g, s);
    CHECK(gram.rows() == 40);
    CHECK((gram - gram.adjoint()).norm() < 1e-12 * gram.norm());
    CHECK(check_nnd(g, s).is_nnd);

    const MatrixKernel gda = gaussian_curvature_kernel(drury_arveson(2));
    const SampleSet sb = sample_random(5u, 8, 0.6, Domain::ball(2));
    const CMatrix gb = gram_matrix(gda, sb);
    CHECK(gb.rows() == 16);
    CHECK(check_nnd(gda, sb).is_nnd);
}

TEST_CASE("local operator at pinned points") {
    const LocalOperator s0 = local_operator(*szego(), Complex(0.0, 0.0));
    CHECK(s0.lambda == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(s0.contractive);
    CHECK(std::abs(s0.entries(0, 1) - Complex(s0.lambda, 0.0)) < 1e-13);
    CHECK(std::abs(s0.entries(0, 0)) + std::abs(s0.entries(1, 0)) + std::abs(s0.entries(1, 1)) <
          1e-13);

    const LocalOperator b0 = local_operator(*bergman(), Complex(0.0, 0.0));
    CHECK(b0.lambda == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-13));
    CHECK(b0.contractive);

    const LocalOperator k0 = local_operator(*witness_k0(), Complex(0.0, 0.0));
    CHECK(k0.lambda == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-13));
    CHECK(k0.contractive);

    // szego saturates the bound at every point
    const LocalOperator s6 = local_operator(*szego(), Complex(0.6, 0.0));
    CHECK(s6.lambda == doctest::Approx(1.0 - 0.36).epsilon(1e-12));
    CHECK(s6.contractive);
}

TEST_CASE("bundle curvature trace identity") {
    const SampleSet one = sample_explicit({point1(Complex(0.1, 0.0)),
                                           point1(Complex(-0.2, 0.1))});
    const TraceCheckReport r1 = bundle_curvature_trace_check(szego(), 1.0, 1.0, one);
    CHECK(r1.max_residual < 1e-7);
    const TraceCheckReport rb = bundle_curvature_trace_check(bergman(), 1.0, 1.0, one);
    CHECK(rb.max_residual < 1e-7);

    const SampleSet two = sample_explicit(
        {point2(Complex(0.1, 0.0), Complex(-0.15, 0.0)), point2(Complex(0.05, 0.1), Complex(0.2, 0.0))});
    const TraceCheckReport r2 =
        bundle_curvature_trace_check(tensor_product(szego(), szego()), 1.0, 1.0, two);
    CHECK(r2.max_residual < 1e-5);
}

TEST_CASE("curvature rejects kernels that vanish at the point") {
    RVector c(2);
    c << 1.0, -2.0;  // K(z,z) = 1 - 2|z|^2 < 0 for |z|^2 > 1/2
    const KernelPtr k = diagonal_series_kernel(DiagonalSeries(c));
    CHECK_THROWS_AS(curvature_matrix(*k, point1(Complex(0.8, 0.0))), std::domain_error);
}
