#include "kervature/series.hpp"

#include <cmath>
#include <limits>

namespace kervature {

namespace {

// C(n, k) as a double; exact for the modest ranges used here, 0 when k > n.
double binom(Index n, Index k) {
    if (k < 0 || k > n) return 0.0;
    if (k > n - k) k = n - k;
    double r = 1.0;
    for (Index i = 1; i <= k; ++i) r *= double(n - k + i) / double(i);
    return r;
}

// declared_radius is the convergence radius in q = z conj(w).
void require_inside(const DiagonalSeries& k, Complex q) {
    const double aq = std::abs(q);
    if (!(aq < 1.0) || !(aq < k.declared_radius) || !std::isfinite(aq))
        throw std::domain_error("series argument outside the declared radius");
}

// Highest index whose coefficient may be taken at face value.  An exact
// series can be read anywhere (the tail rule covers the rest), a prefix
// only through its stored degree.
Index trusted_degree(const DiagonalSeries& s) {
    return s.exact ? std::numeric_limits<Index>::max() : s.degree();
}

// True when the stored coefficients are the whole story: exact and either
// no tail or a tail of zeros.
bool genuinely_polynomial(const DiagonalSeries& s) {
    return s.exact && (!s.has_tail() || s.tail_value == 0.0);
}

}  // namespace

RVector DiagonalSeries::materialize(Index n) const {
    RVector out(n + 1);
    for (Index i = 0; i <= n; ++i) out[i] = coeff(i);
    return out;
}

Complex series_eval(const DiagonalSeries& k, Complex q) {
    require_inside(k, q);
    // Horner on the explicit part.
    Complex acc = 0.0;
    for (Index n = k.degree(); n >= 0; --n) acc = acc * q + k.coeffs[n];
    if (k.has_tail() && k.tail_value != 0.0) {
        // Exact geometric tail: c q^{N+1} / (1 - q).
        acc += k.tail_value * std::pow(q, double(k.degree() + 1)) / (1.0 - q);
    }
    return acc;
}

Eigen::VectorXcd series_scaled_derivatives(const DiagonalSeries& k, Complex q, int jmax) {
    require_inside(k, q);
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(jmax + 1);
    const Index N = k.degree();
    for (int j = 0; j <= jmax; ++j) {
        // sum_{n=j}^{N} a_n C(n,j) q^{n-j}, running binomial update.
        double c = 1.0;  // C(j, j)
        Complex qp = 1.0, s = 0.0;
        for (Index n = j; n <= N; ++n) {
            s += k.coeffs[n] * c * qp;
            c *= double(n + 1) / double(n + 1 - j);
            qp *= q;
        }
        out[j] = s;
    }
    if (k.has_tail() && k.tail_value != 0.0) {
        // Tail h(q) = c q^{N+1}/(1-q); scaled derivatives via the product rule:
        // h^(j)/j! = c sum_{i+l=j} C(N+1,i) q^{N+1-i} (1-q)^{-(l+1)}.
        const Complex r = 1.0 / (1.0 - q);
        for (int j = 0; j <= jmax; ++j) {
            Complex s = 0.0;
            for (int i = 0; i <= j; ++i) {
                if (i > N + 1) break;
                s += binom(N + 1, i) * std::pow(q, double(N + 1 - i)) * std::pow(r, double(j - i + 1));
            }
            out[j] += k.tail_value * s;
        }
    }
    return out;
}

DiagonalSeries series_sum(const DiagonalSeries& a, const DiagonalSeries& b) {
    const Index n = std::min(std::max(a.degree(), b.degree()),
                             std::min(trusted_degree(a), trusted_degree(b)));
    RVector c(n + 1);
    for (Index i = 0; i <= n; ++i) c[i] = a.coeff(i) + b.coeff(i);
    DiagonalSeries out(std::move(c));
    out.exact = a.exact && b.exact;
    if (out.exact && (a.has_tail() || b.has_tail())) {
        out.tail = DiagonalSeries::Tail::Constant;
        out.tail_value = (a.has_tail() ? a.tail_value : 0.0) + (b.has_tail() ? b.tail_value : 0.0);
    }
    out.declared_radius = std::min(a.declared_radius, b.declared_radius);
    return out;
}

DiagonalSeries series_product(const DiagonalSeries& a, const DiagonalSeries& b, Index n) {
    const Index nn = std::min(n, std::min(trusted_degree(a), trusted_degree(b)));
    const RVector av = a.materialize(nn), bv = b.materialize(nn);
    RVector c = RVector::Zero(nn + 1);
    for (Index i = 0; i <= nn; ++i)
        for (Index j = 0; i + j <= nn; ++j) c[i + j] += av[i] * bv[j];
    DiagonalSeries out(std::move(c));
    out.exact = genuinely_polynomial(a) && genuinely_polynomial(b) &&
                a.degree() + b.degree() <= nn;
    out.declared_radius = std::min(a.declared_radius, b.declared_radius);
    return out;
}

DiagonalSeries series_power(const DiagonalSeries& k, double alpha, Index n) {
    const double a0 = k.coeff(0);
    if (!(a0 > 0.0)) throw std::domain_error("power recursion needs a_0 > 0");
    const Index nn = std::min(n, trusted_degree(k));
    const RVector a = k.materialize(nn);
    RVector b(nn + 1);
    b[0] = std::pow(a0, alpha);
    for (Index m = 1; m <= nn; ++m) {
        double s = 0.0;
        for (Index j = 1; j <= m; ++j) s += ((alpha + 1.0) * double(j) - double(m)) * a[j] * b[m - j];
        b[m] = s / (double(m) * a0);
    }
    DiagonalSeries out(std::move(b));
    out.exact = false;
    out.declared_radius = k.declared_radius;
    return out;
}

DiagonalSeries series_gaussian_coeffs(const DiagonalSeries& k, Index n) {
    // g_m reads a_0 .. a_{m+1}, so a prefix of degree D supports m <= D - 1.
    const Index nn = k.exact ? n : std::min(n, k.degree() - 1);
    if (nn < 0) throw std::invalid_argument("series prefix too short for the Gaussian expansion");
    const RVector a = k.materialize(nn + 1);
    RVector g = RVector::Zero(nn + 1);
    for (Index m = 0; m <= nn; ++m) {
        double s = 0.0;
        for (Index i = 0; i <= m + 1; ++i) {
            const Index j = m + 1 - i;
            const double d = double(i - j);
            s += a[i] * a[j] * d * d;
        }
        g[m] = 0.5 * s;
    }
    DiagonalSeries out(std::move(g));
    // A polynomial of degree D has Gaussian coefficients supported below 2D,
    // so covering that range makes the zero tail genuine.
    out.exact = genuinely_polynomial(k) && nn >= 2 * k.degree() - 1;
    out.declared_radius = k.declared_radius;
    return out;
}

DiagonalSeries series_kab_coeffs(const DiagonalSeries& k, double alpha, double beta, Index n) {
    if (!(alpha > 0.0) || !(beta > 0.0)) throw std::invalid_argument("alpha, beta must be > 0");
    // K^{a+b} d d-bar log K  =  K^{a+b-2} * G_K, which keeps every factor a
    // plain coefficient computation.
    const DiagonalSeries p = series_power(k, alpha + beta - 2.0, n);
    const DiagonalSeries g = series_gaussian_coeffs(k, n);
    return series_product(p, g, n);
}

DiagonalSeries series_one_minus_q(const DiagonalSeries& k) {
    const Index N = k.degree();
    // b_{N+1} = a_{N+1} - a_N needs a_{N+1}: known for an exact series (tail
    // rule or a true zero), unknown for a prefix, which therefore stops at N.
    const Index M = k.exact ? N + 1 : N;
    RVector b(M + 1);
    b[0] = k.coeff(0);
    for (Index i = 1; i <= M; ++i) b[i] = k.coeff(i) - k.coeff(i - 1);
    DiagonalSeries out(std::move(b));
    out.exact = k.exact;
    if (out.exact && k.has_tail()) {
        out.tail = DiagonalSeries::Tail::Constant;  // differences vanish past N+1
        out.tail_value = 0.0;
    }
    out.declared_radius = k.declared_radius;
    return out;
}

CoeffVerdict coefficient_nnd(const DiagonalSeries& k) {
    for (Index i = 0; i <= k.degree(); ++i)
        if (k.coeffs[i] < 0.0) return {false, i};
    if (k.has_tail() && k.tail_value < 0.0) return {false, k.degree() + 1};
    return {true, std::nullopt};
}

}  // namespace kervature
