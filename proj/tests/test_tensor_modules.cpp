#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kervature/tensor_modules.hpp"
#include "oracles.hpp"

using namespace kervature;

namespace {

double binom3(Index n) { return double((n + 1) * (n + 2) * (n + 3)) / 6.0; }

}  // namespace

TEST_CASE("hardy closed form: frozen values, diagonal limit, symmetry") {
    // log(1/(1-q1)(1-q2)) / |z1-z2|^2 at (0.5, 0): log(4/3)/0.25 = 4 log(4/3)
    CHECK(hardy_s0_closed_form(Complex(0.5, 0), Complex(0, 0)) ==
          doctest::Approx(4.0 * std::log(4.0 / 3.0)).epsilon(1e-13));
    // z2 -> z1 limit is (1-|z1|^2)^{-2}
    CHECK(hardy_s0_closed_form(Complex(0.4, 0), Complex(0.4, 0)) ==
          doctest::Approx(1.0 / std::pow(1.0 - 0.16, 2)).epsilon(1e-12));
    const Complex z1(0.3, 0.2), z2(-0.1, 0.45);
    CHECK(hardy_s0_closed_form(z1, z2) ==
          doctest::Approx(hardy_s0_closed_form(z2, z1)).epsilon(1e-13));
    // continuity across the near-diagonal switch
    CHECK(hardy_s0_closed_form(z1, z1 + Complex(1e-8, 0)) ==
          doctest::Approx(hardy_s0_closed_form(z1, z1)).epsilon(1e-6));
    CHECK_THROWS_AS(hardy_s0_closed_form(Complex(1.2, 0), Complex(0, 0)), std::domain_error);
}

TEST_CASE("truncated szego tensor space has the expected weights") {
    const TruncatedTensorSpace sp = build_truncated_space(szego(), 1.0, 1.0, 20);
    for (Index n = 0; n <= 20; ++n) {
        CHECK(sp.a_alpha[n] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(sp.a_beta[n] == doctest::Approx(1.0).epsilon(1e-14));
        // K^2 d dbar log K = (1-q)^{-4}
        CHECK(sp.kab[n] == doctest::Approx(binom3(n)).epsilon(1e-12));
    }
    CHECK(sp.mu(3, 5) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sp.gram_condition >= 1.0);

    CHECK_THROWS_AS(build_truncated_space(drury_arveson(2), 1.0, 1.0, 10),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_truncated_space(szego(), 0.0, 1.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(build_truncated_space(szego(), 1.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("bivariate inner product matches the weights and guards its support") {
    const TruncatedTensorSpace sp = build_truncated_space(szego(), 2.0, 3.0, 12);
    // single monomial z1^2 z2^1
    BivPoly f = BivPoly::Zero(4, 4);
    f(2, 1) = Complex(2.0, -1.0);
    CHECK(biv_norm2(sp, f) == doctest::Approx(5.0 * sp.mu(2, 1)).epsilon(1e-13));
    // distinct monomials are orthogonal
    BivPoly g = BivPoly::Zero(4, 4);
    g(1, 2) = Complex(1.0, 0.0);
    CHECK(std::abs(biv_inner(sp, f, g)) < 1e-15);

    BivPoly big = BivPoly::Zero(14, 14);
    big(13, 0) = 1.0;
    CHECK_THROWS_AS(biv_norm2(sp, big), std::invalid_argument);
}

TEST_CASE("A1 projection fixes A1 generators and annihilates their complement in A0") {
    const TruncatedTensorSpace sp = build_truncated_space(szego(), 1.0, 1.0, 12);
    // (z1-z2)^2 z1 = z1^3 - 2 z1^2 z2 + z1 z2^2 lies in A1
    BivPoly gen = BivPoly::Zero(4, 4);
    gen(3, 0) = 1.0;
    gen(2, 1) = -2.0;
    gen(1, 2) = 1.0;
    const BivPoly proj = project_onto_a1(sp, gen);
    CHECK((proj - gen).cwiseAbs().maxCoeff() < 1e-12);

    // a random S1 element is orthogonal to A1 by construction
    const BivPoly s1 = random_s1_element(sp, 424242u);
    const BivPoly back = project_onto_a1(sp, s1);
    CHECK(back.cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, s1.cwiseAbs().maxCoeff()));

    // and it vanishes on the diagonal z1 = z2
    const Complex z(0.3, 0.0);
    Complex on_diag = 0.0;
    for (Index i = 0; i < s1.rows(); ++i)
        for (Index j = 0; j < s1.cols(); ++j)
            if (s1(i, j) != Complex(0.0)) on_diag += s1(i, j) * std::pow(z, double(i + j));
    CHECK(std::abs(on_diag) < 1e-10);
}

TEST_CASE("projected section: hand value at N = 1 and evaluation consistency") {
    const TruncatedTensorSpace sp1 = build_truncated_space(szego(), 1.0, 1.0, 1);
    // span{z1 - z2}, ||z1-z2||^2 = 2: projected value at equal arguments is |z - zeta|^2 / 2
    const Complex z(0.35, 0.1), zeta(-0.2, 0.05);
    CHECK(a0_kernel_value(sp1, z, zeta, z, zeta).real() ==
          doctest::Approx(std::norm(z - zeta) / 2.0).epsilon(1e-13));

    const TruncatedTensorSpace sp = build_truncated_space(szego(), 1.0, 1.0, 24);
    const A0Projection p = project_kernel_onto_a0(sp, z, zeta);
    const Complex via_proj = a0_projection_eval(sp, p, Complex(0.1, -0.3), Complex(0.2, 0.0));
    const Complex direct = a0_kernel_value(sp, Complex(0.1, -0.3), Complex(0.2, 0.0), z, zeta);
    CHECK(std::abs(via_proj - direct) < 1e-12);

    // kernel symmetry K(x, y) = conj(K(y, x))
    const Complex xy = a0_kernel_value(sp, z, zeta, Complex(0.1, -0.3), Complex(0.2, 0.0));
    CHECK(std::abs(xy - std::conj(direct)) < 1e-12);

    CHECK_THROWS_AS(project_kernel_onto_a0(sp, Complex(1.5, 0), zeta), std::domain_error);
}

TEST_CASE("projected-section values increase with the truncation degree") {
    const Complex z(0.45, 0.1), zeta(0.2, -0.3);
    double prev = -1.0;
    double n30 = 0.0, n40 = 0.0;
    for (Index n : {10, 20, 30, 40}) {
        const TruncatedTensorSpace sp = build_truncated_space(szego(), 1.0, 1.0, n);
        const double v = a0_kernel_value(sp, z, zeta, z, zeta).real();
        CHECK(v >= prev - 1e-12);
        prev = v;
        if (n == 30) n30 = v;
        if (n == 40) n40 = v;
    }
    CHECK(std::abs(n40 - n30) < 1e-8);

    // the projection never exceeds the full tensor norm of the section
    const double full = 1.0 / ((1.0 - std::norm(z)) * (1.0 - std::norm(zeta)));
    CHECK(n40 <= full + 1e-12);
}

TEST_CASE("hardy-bidisc complement matches the closed form") {
    const TruncatedTensorSpace sp = build_truncated_space(szego(), 1.0, 1.0, 40);
    const std::vector<std::pair<Complex, Complex>> pts = {
        {Complex(0.0, 0.0), Complex(0.2, 0.0)},  {Complex(0.3, 0.0), Complex(-0.1, 0.0)},
        {Complex(0.55, 0.0), Complex(0.3, 0.0)}, {Complex(0.2, 0.3), Complex(-0.1, 0.1)},
        {Complex(0.0, 0.5), Complex(0.25, 0.0)}, {Complex(0.4, 0.0), Complex(0.4, 0.0)}};
    for (const auto& [z, zeta] : pts) {
        const double kk = 1.0 / ((1.0 - std::norm(z)) * (1.0 - std::norm(zeta)));
        const double numeric = kk - a0_kernel_value(sp, z, zeta, z, zeta).real();
        CHECK(std::abs(numeric - hardy_s0_closed_form(z, zeta)) < 1e-6);
    }
}

TEST_CASE("limit of the normalized projected section at the origin") {
    const TruncatedTensorSpace sp = build_truncated_space(szego(), 1.0, 1.0, 40);
    const LimitEstimate est = limit_ratio(sp, Complex(0.0, 0.0));
    CHECK(est.target == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(est.extrapolated - 0.5) <= 1e-4);
    CHECK(est.abs_error == doctest::Approx(std::abs(est.extrapolated - est.target)));
    CHECK(est.samples.size() == 6);
    CHECK(est.truncation == 40);
    CHECK(est.error_estimate >= 0.0);
}

TEST_CASE("first-order part: frozen value and norm identity") {
    const TruncatedTensorSpace sp = build_truncated_space(szego(), 1.0, 1.0, 16);
    BivPoly f = BivPoly::Zero(2, 2);
    f(1, 0) = 1.0;
    f(0, 1) = -1.0;
    const Eigen::VectorXcd r = r1_apply(sp, f);
    REQUIRE(r.size() == 16);
    CHECK(std::abs(r[0] - Complex(std::sqrt(2.0), 0.0)) < 1e-14);
    CHECK(r.tail(15).cwiseAbs().maxCoeff() == 0.0);
    CHECK(kab_norm2(sp, r) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(biv_norm2(sp, f) == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("first-order part is an isometry on random elements") {
    const TruncatedTensorSpace sp = build_truncated_space(szego(), 1.0, 1.0, 20);
    const IsometryReport rep = verify_r1_isometry(sp, 10, 90125u);
    CHECK(rep.count == 10);
    CHECK(rep.max_mismatch < 1e-9);

    const TruncatedTensorSpace sp23 = build_truncated_space(szego(), 2.0, 3.0, 24);
    CHECK(verify_r1_isometry(sp23, 10, 90126u).max_mismatch < 1e-6);

    // a K0 base exercises nonconstant coefficients
    const TruncatedTensorSpace spk0 = build_truncated_space(witness_k0(), 1.0, 2.0, 18);
    CHECK(verify_r1_isometry(spk0, 8, 31337u).max_mismatch < 1e-6);
}

TEST_CASE("limit reproduces the curvature for szego and bergman") {
    for (const KernelPtr& k : {szego(), bergman()}) {
        const TruncatedTensorSpace sp = build_truncated_space(k, 1.0, 1.0, 40);
        for (const Complex z : {Complex(0.0, 0.0), Complex(0.3, 0.0), Complex(0.2, 0.2)}) {
            const CurvatureViaLimit cv = curvature_via_limit(sp, z);
            CHECK(std::abs(cv.from_limit - cv.log_hessian) < 1e-3);
            CHECK(cv.curvature == -cv.from_limit);
        }
    }
    const TruncatedTensorSpace sp = build_truncated_space(szego(), 1.0, 1.0, 40);
    const CurvatureViaLimit cv = curvature_via_limit(sp, Complex(0.3, 0.0));
    CHECK(cv.log_hessian == doctest::Approx(1.0 / std::pow(1.0 - 0.09, 2)).epsilon(1e-12));
    CHECK(sp.gram_condition < 1e4);

    const TruncatedTensorSpace sp23 = build_truncated_space(szego(), 2.0, 3.0, 12);
    CHECK_THROWS_AS(curvature_via_limit(sp23, Complex(0.0, 0.0)), std::invalid_argument);
}

TEST_CASE("the second quotient adds one curvature step") {
    // The limit kernel of the first quotient restricted to the diagonal is
    // K^2 d dbar log K up to a constant factor; for szego that is (1-z conj(w))^{-4},
    // whose metric is 4 s^2 against 2 s^2 for the first, s = 1/(1-|z|^2).
    const MatrixKernel mk = kab_kernel(szego(), 1.0, 1.0);
    const oracle::Fn logk = [&mk](const Point& z, const Point& w) {
        return std::log(mk.eval(z, w)(0, 0));
    };
    const Complex z(0.3, 0.1);
    const Point pz = point1(z);
    const double s2 = 1.0 / std::pow(1.0 - std::norm(z), 2);
    const Complex hess = oracle::fd_ddbar(logk, pz, pz, 0, 0);
    CHECK(std::abs(hess - Complex(4.0 * s2, 0.0)) < 1e-4 * 4.0 * s2);

    // first quotient: metric of K^2 exactly
    const CMatrix first = curvature_matrix(*k_power(szego(), 2.0), pz).entries;
    CHECK(std::abs(first(0, 0) - Complex(-2.0 * s2, 0.0)) < 1e-10 * s2);
    // difference of the two metrics is one szego metric
    CHECK(std::abs((-hess) - first(0, 0) - Complex(-2.0 * s2, 0.0)) < 2e-4 * s2);
}
