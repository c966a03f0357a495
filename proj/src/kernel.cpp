#include "kervature/kernel.hpp"

#include <algorithm>
#include <cmath>

namespace kervature {

namespace {

double binom(Index n, Index k) {
    if (k < 0 || k > n) return 0.0;
    if (k > n - k) k = n - k;
    double r = 1.0;
    for (Index i = 1; i <= k; ++i) r *= double(n - k + i) / double(i);
    return r;
}

int unit_index(const JetSpace& sp, int v) {
    std::vector<int> e(sp.vars, 0);
    e[v] = 1;
    return sp.index_of(e);
}

// Jet of <z+s, w+t> restricted to coordinates [off, off+n).
JetPoly inner_jet(const Point& z, const Point& w, const JetSpace& sp, int off, int n) {
    JetPoly p = JetPoly::zero(sp);
    Complex q0 = 0.0;
    for (int i = 0; i < n; ++i) q0 += z[off + i] * std::conj(w[off + i]);
    p.c(0, 0) = q0;
    if (sp.order >= 1) {
        for (int i = 0; i < n; ++i) {
            const int e = unit_index(sp, off + i);
            p.c(e, 0) += std::conj(w[off + i]);
            p.c(0, e) += z[off + i];
            p.c(e, e) += 1.0;
        }
    }
    return p;
}

// Scaled derivatives p^(k)(z)/k! of a polynomial, k = 0..kmax.
Eigen::VectorXcd poly_scaled_derivs(const Eigen::VectorXcd& c, Complex z, int kmax) {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(kmax + 1);
    for (int k = 0; k <= kmax; ++k) {
        double b = 1.0;  // C(n, k) running
        Complex zp = 1.0, s = 0.0;
        for (Index n = k; n < c.size(); ++n) {
            s += c[n] * b * zp;
            b *= double(n + 1) / double(n + 1 - k);
            zp *= z;
        }
        out[k] = s;
    }
    return out;
}

JetPoly horner(const RVector& c, const JetPoly& u) {
    JetPoly acc = JetPoly::constant(*u.sp, c[c.size() - 1]);
    for (Index n = c.size() - 2; n >= 0; --n) acc = acc * u + c[n];
    return acc;
}

// sum_k T[k] du^k for a du without constant term.
JetPoly substitute(const Eigen::VectorXcd& T, const JetPoly& du) {
    JetPoly acc = JetPoly::constant(*du.sp, T[0]);
    JetPoly p = JetPoly::constant(*du.sp, 1.0);
    for (Index k = 1; k < T.size(); ++k) {
        p = p * du;
        acc = acc + T[k] * p;
    }
    return acc;
}

JetPoly node_jet(const KernelExpr& k, const Point& z, const Point& w, const JetSpace& sp, int off);

// Scaled derivatives of K^t at q0 for a diagonal-representable base, summed to
// a length where an empirical geometric bound certifies the remainder below
// 1e-10 relative; grows the truncation and gives up rather than truncate
// silently.
Eigen::VectorXcd certified_power_derivs(const KernelExpr& base, double t, Complex q0, int jmax) {
    const double rho = std::abs(q0);
    if (!(rho < 1.0)) throw std::domain_error("series argument outside the unit disc");
    constexpr double kTolRel = 1e-10;
    for (Index N = 64; N <= 16384; N *= 2) {
        const DiagonalSeries bs = diagonal_series_of(base, N);
        if (!(bs.coeff(0) > 0.0)) throw std::domain_error("power recursion needs a_0 > 0");
        const DiagonalSeries pw = series_power(bs, t, N);
        // A prefix-limited base caps the usable depth; the doubling loop then
        // bails out honestly instead of certifying from fabricated zeros.
        const Index M = std::min(N, pw.degree());

        Eigen::VectorXcd T = Eigen::VectorXcd::Zero(jmax + 1);
        for (int j = 0; j <= jmax; ++j) {
            double b = 1.0;
            Complex qp = 1.0, s = 0.0;
            for (Index n = j; n <= M; ++n) {
                s += pw.coeffs[n] * b * qp;
                b *= double(n + 1) / double(n + 1 - j);
                qp *= q0;
            }
            T[j] = s;
        }

        // Ratio certificate on the worst-growing term sequence (j = jmax).
        double rmax = 0.0;
        bool window_zero = true, ratio_ok = true;
        double prev = -1.0;
        for (Index n = M - 8; n <= M; ++n) {
            const double u = std::abs(pw.coeffs[n]) * binom(n, jmax) * std::pow(rho, double(n - jmax));
            if (u != 0.0) window_zero = false;
            if (prev > 0.0 && u > 0.0)
                rmax = std::max(rmax, u / prev);
            else if (prev == 0.0 && u > 0.0)
                ratio_ok = false;  // resurgent terms: no geometric handle this window
            prev = u;
        }
        if (M < N) continue;        // prefix ran out before the requested depth
        if (window_zero) return T;  // series terminated: remainder is exactly zero
        if (!ratio_ok || rmax >= 0.97) continue;

        double scale = 1.0;
        for (int j = 0; j <= jmax; ++j) scale = std::max(scale, std::abs(T[j]));
        bool certified = true;
        for (int j = 0; j <= jmax && certified; ++j) {
            const double ulast = std::abs(pw.coeffs[M]) * binom(M, j) * std::pow(rho, double(M - j));
            if (ulast * rmax / (1.0 - rmax) > kTolRel * scale) certified = false;
        }
        if (certified) return T;
    }
    throw std::runtime_error("series tail bound not certified at the requested point");
}

// K^t of a node, used by Power nodes and by closed-form power folding.
JetPoly powered_jet(const KernelExpr& k, double t, const Point& z, const Point& w,
                    const JetSpace& sp, int off) {
    switch (k.kind) {
        case KernelKind::InversePower: {
            const JetPoly u = inner_jet(z, w, sp, off, k.m());
            return jp_pow(1.0 - u, -k.expo * t);
        }
        case KernelKind::Scale:
            return std::pow(k.expo, t) * powered_jet(*k.children[0], t, z, w, sp, off);
        case KernelKind::Product: {
            JetPoly acc = JetPoly::constant(sp, 1.0);
            for (const auto& c : k.children) acc = acc * powered_jet(*c, t, z, w, sp, off);
            return acc;
        }
        case KernelKind::Tensor: {
            const int ml = k.children[0]->m();
            return powered_jet(*k.children[0], t, z, w, sp, off) *
                   powered_jet(*k.children[1], t, z, w, sp, off + ml);
        }
        case KernelKind::Power:
            return powered_jet(*k.children[0], k.expo * t, z, w, sp, off);
        default: {
            if (!diagonal_representable(k))
                throw std::invalid_argument("power not representable for this kernel");
            const Complex q0 = z[off] * std::conj(w[off]);
            const Eigen::VectorXcd T = certified_power_derivs(k, t, q0, 2 * sp.order);
            JetPoly du = inner_jet(z, w, sp, off, 1);
            du.c(0, 0) = 0.0;
            return substitute(T, du);
        }
    }
}

JetPoly node_jet(const KernelExpr& k, const Point& z, const Point& w, const JetSpace& sp, int off) {
    switch (k.kind) {
        case KernelKind::InversePower: {
            const JetPoly u = inner_jet(z, w, sp, off, k.m());
            return jp_pow(1.0 - u, -k.expo);
        }
        case KernelKind::WitnessK0: {
            const JetPoly q = inner_jet(z, w, sp, off, 1);
            const JetPoly num = ((8.0 * q) + 8.0) - (q * q);
            return num * jp_recip(1.0 - q);
        }
        case KernelKind::Rational: {
            const JetPoly q = inner_jet(z, w, sp, off, 1);
            return horner(k.rat_num, q) * jp_recip(horner(k.rat_den, q));
        }
        case KernelKind::SeriesAtom: {
            const Complex q0 = z[off] * std::conj(w[off]);
            const Eigen::VectorXcd T = series_scaled_derivatives(k.series, q0, 2 * sp.order);
            JetPoly du = inner_jet(z, w, sp, off, 1);
            du.c(0, 0) = 0.0;
            return substitute(T, du);
        }
        case KernelKind::Sum: {
            JetPoly acc = node_jet(*k.children[0], z, w, sp, off);
            for (size_t i = 1; i < k.children.size(); ++i)
                acc = acc + node_jet(*k.children[i], z, w, sp, off);
            return acc;
        }
        case KernelKind::Product: {
            JetPoly acc = node_jet(*k.children[0], z, w, sp, off);
            for (size_t i = 1; i < k.children.size(); ++i)
                acc = acc * node_jet(*k.children[i], z, w, sp, off);
            return acc;
        }
        case KernelKind::Power:
            return powered_jet(*k.children[0], k.expo, z, w, sp, off);
        case KernelKind::Scale:
            return k.expo * node_jet(*k.children[0], z, w, sp, off);
        case KernelKind::OneMinusZw: {
            const JetPoly u = inner_jet(z, w, sp, off, k.m());
            return (1.0 - u) * node_jet(*k.children[0], z, w, sp, off);
        }
        case KernelKind::NormalizeAt: {
            const KernelExpr& c = *k.children[0];
            Point zmod = z, wmod = w;
            for (int i = 0; i < k.m(); ++i) {
                zmod[off + i] = k.w0[i];
                wmod[off + i] = k.w0[i];
            }
            // K(z, w0): keep the s-block of the jet at (z, w0); K(w0, w) likewise.
            JetPoly a = node_jet(c, z, wmod, sp, off);
            for (int i = 0; i < sp.size(); ++i)
                for (int j = 1; j < sp.size(); ++j) a.c(i, j) = 0.0;
            JetPoly b = node_jet(c, zmod, w, sp, off);
            for (int i = 1; i < sp.size(); ++i)
                for (int j = 0; j < sp.size(); ++j) b.c(i, j) = 0.0;
            if (a.value() == 0.0 || b.value() == 0.0)
                throw std::domain_error("normalization hit a zero of K(., w0)");
            const Complex c0(eval_kernel(c, k.w0, k.w0).real(), 0.0);
            return c0 * (node_jet(c, z, w, sp, off) * jp_recip(a) * jp_recip(b));
        }
        case KernelKind::Tensor: {
            const int ml = k.children[0]->m();
            return node_jet(*k.children[0], z, w, sp, off) *
                   node_jet(*k.children[1], z, w, sp, off + ml);
        }
        case KernelKind::PullbackSzegoSq: {
            const Complex zz = z[off], ww = w[off];
            const Eigen::VectorXcd fz = poly_scaled_derivs(k.poly_f, zz, sp.order + 1);
            const Eigen::VectorXcd fw = poly_scaled_derivs(k.poly_f, ww, sp.order + 1);
            if (std::abs(fz[0]) >= 1.0 || std::abs(fw[0]) >= 1.0)
                throw std::domain_error("pull-back needs |f| < 1 at both points");
            if (fz[1] == 0.0 || fw[1] == 0.0)
                throw std::domain_error("pull-back metric degenerates where f' vanishes");
            // Scaled derivatives of f' from those of f: (f')^(d)/d! = (d+1) f^(d+1)/(d+1)!.
            auto shift_to_derivative = [&](const Eigen::VectorXcd& taylor) {
                Eigen::VectorXcd out(taylor.size() - 1);
                for (Index d = 0; d + 1 < taylor.size(); ++d) out[d] = double(d + 1) * taylor[d + 1];
                return out;
            };
            // Embeds a one-variable Taylor list as a jet in s (holo) or conj(t).
            auto expand = [&](const Eigen::VectorXcd& taylor, bool holo) {
                JetPoly p = JetPoly::zero(sp);
                std::vector<int> mi(sp.vars, 0);
                for (int d = 0; d < taylor.size() && d <= sp.order; ++d) {
                    mi[off] = d;
                    const int at = sp.index_of(mi);
                    if (holo)
                        p.c(at, 0) = taylor[d];
                    else
                        p.c(0, at) = std::conj(taylor[d]);
                }
                return p;
            };
            const JetPoly F = expand(fz, true);
            const JetPoly G = expand(fw, false);
            const JetPoly Fp = expand(shift_to_derivative(fz), true);
            const JetPoly Gp = expand(shift_to_derivative(fw), false);
            const JetPoly D = 1.0 - (F * G);
            return Fp * Gp * jp_recip(D * D);
        }
    }
    throw std::logic_error("unhandled kernel kind");
}

void check_point(const KernelExpr& k, const Point& p, const char* which) {
    if (p.size() != k.m())
        throw std::invalid_argument(std::string(which) + ": wrong dimension for " + k.domain.str());
    if (!k.domain.contains(p))
        throw std::domain_error(std::string(which) + ": point outside " + k.domain.str());
}

KernelPtr make(KernelExpr e) { return std::make_shared<const KernelExpr>(std::move(e)); }

bool closed_pow(const KernelExpr& k) {
    switch (k.kind) {
        case KernelKind::InversePower: return true;
        case KernelKind::Scale: return closed_pow(*k.children[0]);
        case KernelKind::Power: return true;  // folds onto its (validated) base
        case KernelKind::Product:
        case KernelKind::Tensor:
            for (const auto& c : k.children)
                if (!closed_pow(*c)) return false;
            return true;
        default: return false;
    }
}

}  // namespace

Complex eval_kernel(const KernelExpr& k, const Point& z, const Point& w) {
    check_point(k, z, "z");
    check_point(k, w, "w");
    const JetSpace& sp = JetSpace::get(k.m(), 0);
    return node_jet(k, z, w, sp, 0).value();
}

Jet eval_jet(const KernelExpr& k, const Point& z, const Point& w, int order) {
    if (order < 0) throw std::invalid_argument("jet order must be >= 0");
    check_point(k, z, "z");
    check_point(k, w, "w");
    const JetSpace& sp = JetSpace::get(k.m(), order);
    return jet_from_poly(node_jet(k, z, w, sp, 0));
}

// ---- factories ----

namespace {

KernelExpr node(KernelKind kind, Domain d, const char* tag) {
    KernelExpr e;
    e.kind = kind;
    e.domain = d;
    e.tag = tag;
    return e;
}

}  // namespace

KernelPtr inverse_power(double t, Domain d) {
    // t = 0 is the constant kernel 1; useful on the ball where no series atom exists.
    if (!(t >= 0.0)) throw std::invalid_argument("inverse-power exponent must be >= 0");
    if (d.kind == Domain::Kind::Polydisc) throw std::invalid_argument("inverse-power lives on a disc or ball");
    KernelExpr e = node(KernelKind::InversePower, d, "inner-power");
    e.expo = t;
    return make(std::move(e));
}

KernelPtr szego() {
    KernelExpr e = node(KernelKind::InversePower, Domain::disc(), "szego");
    e.expo = 1.0;
    return make(std::move(e));
}

KernelPtr szego_power(double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("szego power needs alpha > 0");
    KernelExpr e = node(KernelKind::InversePower, Domain::disc(), "szego-power");
    e.expo = alpha;
    return make(std::move(e));
}

KernelPtr bergman() {
    KernelExpr e = node(KernelKind::InversePower, Domain::disc(), "bergman");
    e.expo = 2.0;
    return make(std::move(e));
}

KernelPtr drury_arveson(int m) {
    KernelExpr e = node(KernelKind::InversePower, Domain::ball(m), "drury-arveson");
    e.expo = 1.0;
    return make(std::move(e));
}

KernelPtr witness_k0() {
    KernelExpr e = node(KernelKind::WitnessK0, Domain::disc(), "witness-k0");
    return make(std::move(e));
}

KernelPtr rational_kernel(RVector num, RVector den) {
    if (num.size() == 0 || den.size() == 0) throw std::invalid_argument("empty polynomial");
    if (den[0] == 0.0) throw std::invalid_argument("rational kernel needs Q(0) != 0");
    KernelExpr e = node(KernelKind::Rational, Domain::disc(), "explicit-rational");
    e.rat_num = std::move(num);
    e.rat_den = std::move(den);
    return make(std::move(e));
}

KernelPtr diagonal_series_kernel(DiagonalSeries s) {
    KernelExpr e = node(KernelKind::SeriesAtom, Domain::disc(), "diagonal-series");
    e.series = std::move(s);
    return make(std::move(e));
}

KernelPtr pullback_szego_sq(Eigen::VectorXcd f_coeffs) {
    bool nonconstant = false;
    for (Index i = 1; i < f_coeffs.size(); ++i)
        if (f_coeffs[i] != 0.0) nonconstant = true;
    if (!nonconstant) throw std::invalid_argument("constant f gives a degenerate pull-back");
    KernelExpr e = node(KernelKind::PullbackSzegoSq, Domain::disc(), "pullback-szego-sq");
    e.poly_f = std::move(f_coeffs);
    return make(std::move(e));
}

KernelPtr k_sum(std::vector<KernelPtr> children) {
    if (children.empty()) throw std::invalid_argument("sum needs at least one term");
    for (const auto& c : children)
        if (!(c->domain == children[0]->domain))
            throw std::invalid_argument("sum terms must share a domain");
    KernelExpr e = node(KernelKind::Sum, children[0]->domain, "sum");
    e.children = std::move(children);
    return make(std::move(e));
}

KernelPtr k_sum(KernelPtr a, KernelPtr b) { return k_sum(std::vector<KernelPtr>{a, b}); }

KernelPtr k_product(std::vector<KernelPtr> children) {
    if (children.empty()) throw std::invalid_argument("product needs at least one factor");
    for (const auto& c : children)
        if (!(c->domain == children[0]->domain))
            throw std::invalid_argument("product factors must share a domain");
    KernelExpr e = node(KernelKind::Product, children[0]->domain, "product");
    e.children = std::move(children);
    return make(std::move(e));
}

KernelPtr k_product(KernelPtr a, KernelPtr b) { return k_product(std::vector<KernelPtr>{a, b}); }

KernelPtr k_power(KernelPtr base, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("power needs alpha > 0");
    if (!pow_representable(*base))
        throw std::invalid_argument("power not representable: base is neither closed form nor a diagonal series");
    KernelExpr e = node(KernelKind::Power, base->domain, "power");
    e.expo = alpha;
    e.children = {std::move(base)};
    return make(std::move(e));
}

KernelPtr k_scale(double c, KernelPtr child) {
    if (!(c > 0.0)) throw std::invalid_argument("scale factor must be > 0");
    KernelExpr e = node(KernelKind::Scale, child->domain, "scale");
    e.expo = c;
    e.children = {std::move(child)};
    return make(std::move(e));
}

KernelPtr one_minus_zw(KernelPtr child) {
    if (child->domain.kind == Domain::Kind::Polydisc)
        throw std::invalid_argument("(1 - <z,w>) multiplier needs a disc or ball domain");
    KernelExpr e = node(KernelKind::OneMinusZw, child->domain, "one-minus-zw");
    e.children = {std::move(child)};
    return make(std::move(e));
}

KernelPtr normalize_at(KernelPtr child, Point w0) {
    if (w0.size() != child->m() || !child->domain.contains(w0))
        throw std::invalid_argument("normalization point must lie in the domain");
    const Complex kww = eval_kernel(*child, w0, w0);
    if (!(kww.real() > 0.0) || std::abs(kww.imag()) > 1e-12 * std::abs(kww))
        throw std::domain_error("normalization needs K(w0, w0) > 0");
    KernelExpr e = node(KernelKind::NormalizeAt, child->domain, "normalize");
    e.w0 = std::move(w0);
    e.children = {std::move(child)};
    return make(std::move(e));
}

KernelPtr tensor_product(KernelPtr a, KernelPtr b) {
    KernelExpr e = node(KernelKind::Tensor, domain_product(a->domain, b->domain), "tensor");
    e.children = {std::move(a), std::move(b)};
    return make(std::move(e));
}

bool pow_representable(const KernelExpr& k) {
    if (closed_pow(k)) return true;
    if (!diagonal_representable(k)) return false;
    return diagonal_series_of(k, 0).coeff(0) > 0.0;
}

KernelPtr pow_expr(const KernelPtr& k, double t) {
    switch (k->kind) {
        case KernelKind::InversePower: return inverse_power(k->expo * t, k->domain);
        case KernelKind::Scale: return k_scale(std::pow(k->expo, t), pow_expr(k->children[0], t));
        case KernelKind::Product: {
            std::vector<KernelPtr> ch;
            for (const auto& c : k->children) ch.push_back(pow_expr(c, t));
            return k_product(std::move(ch));
        }
        case KernelKind::Tensor:
            return tensor_product(pow_expr(k->children[0], t), pow_expr(k->children[1], t));
        case KernelKind::Power: return pow_expr(k->children[0], k->expo * t);
        default:
            if (diagonal_representable(*k)) return k_power(k, t);
            throw std::invalid_argument("power not representable for this kernel");
    }
}

bool diagonal_representable(const KernelExpr& k) {
    switch (k.kind) {
        case KernelKind::InversePower: return k.domain == Domain::disc();
        case KernelKind::WitnessK0:
        case KernelKind::Rational:
        case KernelKind::SeriesAtom: return true;
        case KernelKind::Sum:
        case KernelKind::Product:
            for (const auto& c : k.children)
                if (!diagonal_representable(*c)) return false;
            return true;
        case KernelKind::Power:
        case KernelKind::Scale:
        case KernelKind::OneMinusZw: return diagonal_representable(*k.children[0]);
        case KernelKind::NormalizeAt:
            return k.w0[0] == 0.0 && diagonal_representable(*k.children[0]);
        default: return false;
    }
}

DiagonalSeries diagonal_series_of(const KernelExpr& k, Index n) {
    switch (k.kind) {
        case KernelKind::InversePower: {
            if (!(k.domain == Domain::disc()))
                throw std::invalid_argument("kernel is not a diagonal series");
            if (k.expo == 1.0) return DiagonalSeries(RVector::Ones(n + 1), 1.0);
            RVector b(n + 1);
            b[0] = 1.0;
            for (Index i = 1; i <= n; ++i) b[i] = b[i - 1] * (k.expo + double(i - 1)) / double(i);
            DiagonalSeries out(std::move(b));
            out.exact = false;  // binomial coefficients continue past n
            return out;
        }
        case KernelKind::WitnessK0: {
            RVector c(2);
            c << 8.0, 16.0;
            return DiagonalSeries(std::move(c), 15.0);
        }
        case KernelKind::Rational: {
            RVector c(n + 1);
            for (Index i = 0; i <= n; ++i) {
                double s = i < k.rat_num.size() ? k.rat_num[i] : 0.0;
                for (Index j = 1; j <= std::min(i, k.rat_den.size() - 1); ++j)
                    s -= k.rat_den[j] * c[i - j];
                c[i] = s / k.rat_den[0];
            }
            DiagonalSeries out(std::move(c));
            // A constant denominator leaves a polynomial; anything else has
            // an expansion continuing past n.
            out.exact = k.rat_den.size() == 1 && k.rat_num.size() <= n + 1;
            return out;
        }
        case KernelKind::SeriesAtom: return k.series;
        case KernelKind::Sum: {
            DiagonalSeries acc = diagonal_series_of(*k.children[0], n);
            for (size_t i = 1; i < k.children.size(); ++i)
                acc = series_sum(acc, diagonal_series_of(*k.children[i], n));
            return acc;
        }
        case KernelKind::Product: {
            DiagonalSeries acc = diagonal_series_of(*k.children[0], n);
            for (size_t i = 1; i < k.children.size(); ++i)
                acc = series_product(acc, diagonal_series_of(*k.children[i], n), n);
            return acc;
        }
        case KernelKind::Power:
            return series_power(diagonal_series_of(*k.children[0], n), k.expo, n);
        case KernelKind::Scale: {
            DiagonalSeries s = diagonal_series_of(*k.children[0], n);
            s.coeffs *= k.expo;
            s.tail_value *= k.expo;
            return s;
        }
        case KernelKind::OneMinusZw:
            return series_one_minus_q(diagonal_series_of(*k.children[0], n));
        case KernelKind::NormalizeAt: {
            if (k.w0[0] != 0.0) throw std::invalid_argument("kernel is not a diagonal series");
            DiagonalSeries s = diagonal_series_of(*k.children[0], n);
            const double a0 = s.coeff(0);
            s.coeffs /= a0;
            s.tail_value /= a0;
            return s;
        }
        default: throw std::invalid_argument("kernel is not a diagonal series");
    }
}

}  // namespace kervature
