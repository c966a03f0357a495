#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "kervature/verifiers.hpp"
#include "oracles.hpp"

using namespace kervature;

TEST_CASE("K0 satisfies the curvature bound with the closed-form margin") {
    const SampleSet s = default_disc_sample();
    const InequalityReport r = verify_curvature_inequality(witness_k0(), s);
    CHECK(r.verdict == Verdict::Pass);
    REQUIRE(r.margins.size() == s.size());
    for (const PointMargin& m : r.margins) {
        CHECK(m.margin <= 1e-10);
        // margin = 1/(1-q)^2 - d dbar log K0 = -8(8 - 4q - q^2)/(8 + 8q - q^2)^2, q = |z|^2
        const double q = std::norm(m.z(0));
        const double expect = -8.0 * (8.0 - 4.0 * q - q * q) / std::pow(8.0 + 8.0 * q - q * q, 2);
        CHECK(m.margin == doctest::Approx(expect).epsilon(1e-10));
    }
    CHECK(r.worst_margin <= 1e-10);
    // at the origin the margin is exactly 1 - d dbar log K0(0) = 1 - 2 = -1
    const InequalityReport r0 =
        verify_curvature_inequality(witness_k0(), sample_explicit({point1(0.0)}));
    CHECK(r0.margins[0].margin == doctest::Approx(-1.0).epsilon(1e-13));
}

TEST_CASE("K0 fails contractivity with exact coefficient evidence and a small Gram certificate") {
    const InequalityReport r = verify_contractivity(witness_k0(), default_disc_sample());
    CHECK(r.verdict == Verdict::Fail);
    CHECK_FALSE(r.hypothesis_failed);
    REQUIRE(r.evidence.has_value());
    CHECK_FALSE(r.evidence->is_nnd);
    CHECK(r.sample.size() <= 12);
    CHECK(r.note.find("coefficient") != std::string::npos);
}

TEST_CASE("K0 fails the strong Gaussian bound; szego and bergman satisfy it") {
    const SampleSet s = default_disc_sample();
    const InequalityReport k0 = verify_strong_inequality(witness_k0(), s);
    CHECK(k0.verdict == Verdict::Fail);

    CHECK(verify_strong_inequality(szego(), s).verdict == Verdict::Pass);
    CHECK(verify_strong_inequality(bergman(), s).verdict == Verdict::Pass);

    // the strong difference kernel of bergman is the Gaussian kernel of szego,
    // (1-q)^{-4}; check the reduction numerically through the report's Gram
    const InequalityReport rb = verify_strong_inequality(bergman(), s);
    REQUIRE(rb.evidence.has_value());
    CHECK(rb.evidence->is_nnd);
}

TEST_CASE("contractivity passes for szego, bergman and the scaled family") {
    const SampleSet s = default_disc_sample();
    CHECK(verify_contractivity(szego(), s).verdict == Verdict::Pass);
    CHECK(verify_contractivity(bergman(), s).verdict == Verdict::Pass);
    CHECK(verify_contractivity(k_scale(2.0, szego_power(1.5)), s).verdict == Verdict::Pass);
}

TEST_CASE("contraction implies the curvature bound across a seeded family") {
    // K = szego * G with G a nonnegative-coefficient series: (1-q)K = G is NND,
    // so multiplication by z is a contraction and the curvature bound must hold
    std::mt19937_64 rng(271828u);
    auto u01 = [&rng] { return double(rng() >> 11) * 0x1.0p-53; };
    const SampleSet s = default_disc_sample();
    for (int trial = 0; trial < 20; ++trial) {
        const int deg = 2 + int(u01() * 12);
        RVector c(deg + 1);
        for (Index i = 0; i <= deg; ++i) c[i] = 0.05 + u01();
        const KernelPtr k = k_product(szego(), diagonal_series_kernel(DiagonalSeries(c)));
        const InequalityReport contract = verify_contractivity(k, s);
        REQUIRE(contract.verdict == Verdict::Pass);
        const InequalityReport curv = verify_curvature_inequality(k, s);
        CHECK(curv.verdict == Verdict::Pass);
    }
}

TEST_CASE("row contraction and the row Gaussian bound") {
    const SampleSet disc = default_disc_sample();
    CHECK(verify_row_contraction(szego(), disc).verdict == Verdict::Pass);
    const InequalityReport rg = verify_row_inequality(szego(), disc);
    CHECK(rg.verdict == Verdict::Pass);
    CHECK_FALSE(rg.hypothesis_failed);

    // K0 is not a row contraction (same as contractivity in one variable),
    // so the row Gaussian bound is skipped, not refuted
    const InequalityReport k0 = verify_row_inequality(witness_k0(), disc);
    CHECK(k0.verdict == Verdict::Skipped);
    CHECK(k0.hypothesis_failed);
    CHECK(k0.note.find("not a counterexample") != std::string::npos);

    const SampleSet ball = sample_random(23u, 10, 0.6, Domain::ball(2));
    CHECK(verify_row_contraction(drury_arveson(2), ball).verdict == Verdict::Pass);
    CHECK(verify_row_inequality(drury_arveson(2), ball).verdict == Verdict::Pass);
}

TEST_CASE("the constant kernel on the 2-ball is not a row contraction") {
    // (1 - <z,w>) * 1 is not NND: its 2-point Gram at (r,0), (0,r) has a
    // negative eigenvalue -r^2.  The hypothesis fails honestly.
    const KernelPtr one = inverse_power(0.0, Domain::ball(2));
    const SampleSet s = sample_explicit(
        {point2(Complex(0.5, 0.0), Complex(0.0, 0.0)), point2(Complex(0.0, 0.0), Complex(0.5, 0.0))});
    const InequalityReport rc = verify_row_contraction(one, s);
    CHECK(rc.verdict == Verdict::Fail);
    const InequalityReport rg = verify_row_inequality(one, s);
    CHECK(rg.verdict == Verdict::Skipped);
    CHECK(rg.hypothesis_failed);
}

TEST_CASE("monotonicity: K0 dominates szego and the Gaussian order follows") {
    const SampleSet s = default_disc_sample();
    const InequalityReport r = verify_monotonicity(witness_k0(), szego(), s);
    CHECK(r.verdict == Verdict::Pass);
    CHECK_FALSE(r.hypothesis_failed);

    // reversed order: hypothesis fails, verdict is Skipped
    const InequalityReport rev = verify_monotonicity(szego(), witness_k0(), s);
    CHECK(rev.verdict == Verdict::Skipped);
    CHECK(rev.hypothesis_failed);

    // random order pairs: K1 = K2 + Delta
    std::mt19937_64 rng(16180u);
    auto u01 = [&rng] { return double(rng() >> 11) * 0x1.0p-53; };
    for (int trial = 0; trial < 10; ++trial) {
        const int deg = 3 + int(u01() * 20);
        RVector base(deg + 1), delta(deg + 1);
        for (Index i = 0; i <= deg; ++i) {
            base[i] = u01();
            delta[i] = 0.5 * u01();
        }
        const KernelPtr k2 = diagonal_series_kernel(DiagonalSeries(base));
        const KernelPtr k1 =
            diagonal_series_kernel(DiagonalSeries(RVector(base + delta)));
        const SampleSet pts = sample_random(555u + trial, 8, 0.85, Domain::disc());
        CHECK(verify_monotonicity(k1, k2, pts).verdict == Verdict::Pass);
    }
}

TEST_CASE("normalized row bound") {
    const SampleSet disc = default_disc_sample();
    CHECK(verify_normalized_row(szego(), disc).verdict == Verdict::Pass);
    CHECK(verify_normalized_row(bergman(), disc).verdict == Verdict::Pass);
    const SampleSet ball = sample_random(29u, 10, 0.6, Domain::ball(2));
    CHECK(verify_normalized_row(drury_arveson(2), ball).verdict == Verdict::Pass);

    // K0 is not normalized at 0 (K0(z,0) = 8): hypothesis fails
    const InequalityReport k0 = verify_normalized_row(witness_k0(), disc);
    CHECK(k0.verdict == Verdict::Skipped);
    CHECK(k0.hypothesis_failed);
}

TEST_CASE("constant multiplier bound: the szego difference is q^2 (1-q)^{-4}") {
    // c = 1/a_0 = 1; difference coefficients c*g_n - d_n where g_n = C(n+3,3)
    // and d_n = (n+1)^2; the result is C(n+1,3), nonnegative, 0 for n < 2
    const DiagonalSeries g = series_gaussian_coeffs(diagonal_series_of(*szego(), 66), 64);
    for (Index n = 0; n <= 60; ++n) {
        const double diff = g.coeff(n) - double((n + 1) * (n + 1));
        const double expect = n < 2 ? 0.0 : double((n + 1) * n * (n - 1)) / 6.0;
        CHECK(diff == doctest::Approx(expect).epsilon(1e-10));
    }
    const SampleSet s = default_disc_sample();
    CHECK(verify_constant_gaussian_bound(szego(), s).verdict == Verdict::Pass);
    CHECK(verify_constant_gaussian_bound(bergman(), s).verdict == Verdict::Pass);
    CHECK(verify_constant_gaussian_bound(witness_k0(), s).verdict == Verdict::Pass);

    // a_0 = 0 means the constant function is missing from the space
    RVector c(2);
    c << 0.0, 1.0;
    CHECK_THROWS_AS(verify_constant_gaussian_bound(diagonal_series_kernel(DiagonalSeries(c)), s),
                    std::domain_error);
}

TEST_CASE("derivative norm bound on szego") {
    // equality at f(z) = z
    Eigen::VectorXcd fz(2);
    fz << Complex(0, 0), Complex(1, 0);
    const InequalityReport eq = verify_derivative_norm_bound(szego(), fz);
    CHECK(eq.verdict == Verdict::Pass);
    CHECK(std::abs(eq.worst_margin) <= 1e-12);

    // random degree-10 polynomials satisfy the bound strictly
    std::mt19937_64 rng(141421u);
    auto u01 = [&rng] { return double(rng() >> 11) * 0x1.0p-53; };
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXcd f(11);
        for (Index n = 0; n < 11; ++n) f[n] = Complex(u01() - 0.5, u01() - 0.5);
        const InequalityReport r = verify_derivative_norm_bound(szego(), f);
        CHECK(r.verdict == Verdict::Pass);
    }

    // a kernel missing a coefficient slot cannot norm that monomial
    RVector c(3);
    c << 1.0, 0.0, 1.0;
    Eigen::VectorXcd needs_z(2);
    needs_z << Complex(0, 0), Complex(1, 0);
    CHECK_THROWS_AS(verify_derivative_norm_bound(diagonal_series_kernel(DiagonalSeries(c)), needs_z),
                    std::domain_error);
}

TEST_CASE("reports serialize their sample and margins consistently") {
    const SampleSet s = default_disc_sample();
    const InequalityReport r = verify_curvature_inequality(szego(), s);
    CHECK(r.name == "curvature-bound");
    CHECK(r.margins.size() == s.size());
    double worst = -1e300;
    for (const PointMargin& m : r.margins) worst = std::max(worst, m.margin);
    CHECK(r.worst_margin == doctest::Approx(worst));
}
