#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kervature/series.hpp"
#include "oracles.hpp"

using namespace kervature;

namespace {
RVector vec(std::initializer_list<double> v) {
    RVector r(static_cast<Index>(v.size()));
    Index i = 0;
    for (double x : v) r[i++] = x;
    return r;
}
const DiagonalSeries kSzego(vec({1.0}), 1.0);             // all coefficients 1
const DiagonalSeries kK0(vec({8.0, 16.0, 15.0}), 15.0);   // (8 + 8q - q^2)/(1-q)
}  // namespace

TEST_CASE("coefficient access and the constant tail") {
    DiagonalSeries s(vec({1, 2, 3}), 5.0);
    CHECK(s.degree() == 2);
    CHECK(s.has_tail());
    CHECK(s.coeff(0) == 1.0);
    CHECK(s.coeff(2) == 3.0);
    CHECK(s.coeff(7) == 5.0);
    const RVector m = s.materialize(5);
    CHECK(m.size() == 6);
    CHECK(m[3] == 5.0);
    CHECK(m[5] == 5.0);

    DiagonalSeries p(vec({4, 0, 1}));
    CHECK_FALSE(p.has_tail());
    CHECK(p.coeff(3) == 0.0);
    CHECK_THROWS_AS(DiagonalSeries(RVector(0)), std::invalid_argument);
}

TEST_CASE("evaluation is exact for polynomial plus geometric tail") {
    CHECK(series_eval(kSzego, Complex(0.5, 0.0)).real() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(series_eval(kSzego, Complex(0.0, 0.0)) == Complex(1.0, 0.0));
    // polynomial: 8 + 8q - q^2 at q = 0.5
    DiagonalSeries p(vec({8, 8, -1}));
    CHECK(series_eval(p, Complex(0.5, 0.0)).real() == doctest::Approx(11.75).epsilon(1e-15));
    // K0 against its rational closed form at a complex q
    const Complex q(0.31, -0.22);
    const Complex expect = (8.0 + 8.0 * q - q * q) / (1.0 - q);
    CHECK(oracle::close(series_eval(kK0, q), expect, 1e-14));
    CHECK_THROWS_AS(series_eval(kSzego, Complex(1.0, 0.0)), std::domain_error);
}

TEST_CASE("scaled derivatives match the inverse-power closed form") {
    // f = (1-q)^{-1}: f^{(j)}(q)/j! = (1-q)^{-(j+1)}
    const Complex q(0.3, 0.1);
    const Eigen::VectorXcd d = series_scaled_derivatives(kSzego, q, 4);
    for (int j = 0; j <= 4; ++j) {
        const Complex expect = std::pow(1.0 - q, -double(j + 1));
        CHECK(oracle::close(d[j], expect, 1e-13));
    }
}

TEST_CASE("sum pads and adds tails") {
    const DiagonalSeries s = series_sum(DiagonalSeries(vec({1, 2})), DiagonalSeries(vec({3, 4, 5})));
    CHECK(s.coeff(0) == 4.0);
    CHECK(s.coeff(1) == 6.0);
    CHECK(s.coeff(2) == 5.0);
    CHECK(s.coeff(3) == 0.0);
    const DiagonalSeries t = series_sum(DiagonalSeries(vec({1}), 2.0), DiagonalSeries(vec({3}), 4.0));
    CHECK(t.coeff(0) == 4.0);
    CHECK(t.coeff(9) == 6.0);
}

TEST_CASE("Cauchy product") {
    // (1 + 2q)(3 + q) = 3 + 7q + 2q^2
    const DiagonalSeries p =
        series_product(DiagonalSeries(vec({1, 2})), DiagonalSeries(vec({3, 1})), 4);
    CHECK(p.coeff(0) == 3.0);
    CHECK(p.coeff(1) == 7.0);
    CHECK(p.coeff(2) == 2.0);
    CHECK(p.coeff(3) == 0.0);
    // szego^2 = bergman: coefficients n+1
    const DiagonalSeries b = series_product(kSzego, kSzego, 6);
    for (Index n = 0; n <= 6; ++n) CHECK(b.coeff(n) == doctest::Approx(double(n + 1)).epsilon(1e-15));
}

TEST_CASE("power recursion against the binomial series") {
    const DiagonalSeries b2 = series_power(kSzego, 2.0, 6);
    for (Index n = 0; n <= 6; ++n) CHECK(b2.coeff(n) == doctest::Approx(double(n + 1)).epsilon(1e-14));

    const DiagonalSeries frac = series_power(kSzego, 2.5, 40);
    const RVector expect = oracle::binom_series(2.5, 40);
    for (Index n = 0; n <= 40; ++n)
        CHECK(frac.coeff(n) == doctest::Approx(expect[n]).epsilon(1e-12));

    // exact square root of a perfect square
    const DiagonalSeries r = series_power(DiagonalSeries(vec({1, 2, 1})), 0.5, 5);
    CHECK(r.coeff(0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.coeff(1) == doctest::Approx(1.0).epsilon(1e-15));
    for (Index n = 2; n <= 5; ++n) CHECK(std::abs(r.coeff(n)) < 1e-14);

    // reciprocal
    const DiagonalSeries inv = series_power(kSzego, -1.0, 5);
    CHECK(inv.coeff(0) == doctest::Approx(1.0));
    CHECK(inv.coeff(1) == doctest::Approx(-1.0));
    for (Index n = 2; n <= 5; ++n) CHECK(std::abs(inv.coeff(n)) < 1e-14);

    // round trip with a general exponent
    const DiagonalSeries s(vec({2.0, 0.3, 0.7, 0.1, 0.5}));
    const DiagonalSeries rt = series_power(series_power(s, 2.7, 12), 1.0 / 2.7, 12);
    for (Index n = 0; n <= 4; ++n)
        CHECK(rt.coeff(n) == doctest::Approx(s.coeff(n)).epsilon(1e-12));
    for (Index n = 5; n <= 12; ++n) CHECK(std::abs(rt.coeff(n)) < 1e-12);

    CHECK_THROWS_AS(series_power(DiagonalSeries(vec({0, 1})), 0.5, 3), std::domain_error);
}

TEST_CASE("Gaussian-curvature coefficients") {
    // szego: g_N = C(N+3, 3)
    const DiagonalSeries g = series_gaussian_coeffs(kSzego, 6);
    const double expect[] = {1, 4, 10, 20, 35, 56, 84};
    for (Index n = 0; n <= 6; ++n) CHECK(g.coeff(n) == doctest::Approx(expect[n]).epsilon(1e-14));

    // hand formula g_N = (1/2) sum_{i+j=N+1} a_i a_j (i-j)^2 on (8, 8, -1):
    // exactly 64 - 32q - 8q^2, zero beyond
    const DiagonalSeries gc = series_gaussian_coeffs(DiagonalSeries(vec({8, 8, -1})), 8);
    CHECK(gc.coeff(0) == 64.0);
    CHECK(gc.coeff(1) == -32.0);
    CHECK(gc.coeff(2) == -8.0);
    for (Index n = 3; n <= 8; ++n) CHECK(gc.coeff(n) == 0.0);
}

TEST_CASE("kab coefficients depend only on alpha + beta") {
    // szego, alpha+beta = 2: K^2 d dbar log K = (1-q)^{-4}
    const DiagonalSeries k11 = series_kab_coeffs(kSzego, 1.0, 1.0, 8);
    const RVector expect = oracle::binom_series(4.0, 8);
    for (Index n = 0; n <= 8; ++n)
        CHECK(k11.coeff(n) == doctest::Approx(expect[n]).epsilon(1e-12));

    const DiagonalSeries a = series_kab_coeffs(kK0, 1.0, 2.0, 10);
    const DiagonalSeries b = series_kab_coeffs(kK0, 0.5, 2.5, 10);
    for (Index n = 0; n <= 10; ++n)
        CHECK(a.coeff(n) == doctest::Approx(b.coeff(n)).epsilon(1e-13));
}

TEST_CASE("multiplying by (1 - q)") {
    const DiagonalSeries c = series_one_minus_q(kK0);
    CHECK(c.coeff(0) == 8.0);
    CHECK(c.coeff(1) == 8.0);
    CHECK(c.coeff(2) == -1.0);
    for (Index n = 3; n <= 10; ++n) CHECK(c.coeff(n) == 0.0);

    const Complex q(0.4, -0.1);
    CHECK(oracle::close(series_eval(c, q), (1.0 - q) * series_eval(kK0, q), 1e-14));

    const DiagonalSeries s = series_one_minus_q(kSzego);
    CHECK(s.coeff(0) == 1.0);
    for (Index n = 1; n <= 6; ++n) CHECK(s.coeff(n) == 0.0);
}

TEST_CASE("coefficient nonnegativity scan") {
    CHECK(coefficient_nnd(kK0).nonneg);
    CHECK(coefficient_nnd(kSzego).nonneg);
    const CoeffVerdict bad = coefficient_nnd(DiagonalSeries(vec({8, 8, -1})));
    CHECK_FALSE(bad.nonneg);
    REQUIRE(bad.first_negative.has_value());
    CHECK(*bad.first_negative == 2);
    const CoeffVerdict tail = coefficient_nnd(DiagonalSeries(vec({1, 1}), -0.5));
    CHECK_FALSE(tail.nonneg);
    REQUIRE(tail.first_negative.has_value());
    CHECK(*tail.first_negative == 2);
}

TEST_CASE("prefix series never fabricate coefficients") {
    // a trusted prefix of a longer series: stored values are true, nothing
    // past degree() is known
    DiagonalSeries p(vec({1, 2, 3, 4}));
    p.exact = false;

    // b_4 = a_4 - a_3 would need the unknown a_4, so the result stops at 3
    // instead of inventing a phantom -4 there
    const DiagonalSeries d = series_one_minus_q(p);
    CHECK(d.degree() == 3);
    CHECK(d.coeff(3) == 1.0);
    CHECK_FALSE(d.exact);
    CHECK_FALSE(d.has_tail());
    CHECK(coefficient_nnd(d).nonneg);

    // g_m reads a_{m+1}, so the Gaussian expansion of a degree-3 prefix
    // stops at 2 regardless of the requested depth
    const DiagonalSeries g = series_gaussian_coeffs(p, 10);
    CHECK(g.degree() == 2);
    CHECK_FALSE(g.exact);

    const DiagonalSeries s = series_sum(p, DiagonalSeries(RVector::Ones(9), 1.0));
    CHECK(s.degree() == 3);
    CHECK_FALSE(s.exact);
    CHECK_FALSE(s.has_tail());

    const DiagonalSeries pr = series_product(p, p, 10);
    CHECK(pr.degree() == 3);
    CHECK_FALSE(pr.exact);

    const DiagonalSeries pw = series_power(p, 2.0, 10);
    CHECK(pw.degree() == 3);
    CHECK_FALSE(pw.exact);

    // a genuinely polynomial input keeps its completeness when the requested
    // depth covers the whole expansion
    const DiagonalSeries flat(vec({8, 8, -1}));
    CHECK(series_gaussian_coeffs(flat, 10).exact);
    CHECK(series_one_minus_q(flat).exact);
    CHECK(series_product(flat, flat, 10).exact);
    CHECK_FALSE(series_product(flat, flat, 3).exact);
}
