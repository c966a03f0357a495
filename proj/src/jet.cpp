#include "kervature/jet.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace kervature {

namespace {

void enumerate(int vars, int order, std::vector<int>& cur, int pos, int left,
               std::vector<std::vector<int>>& out) {
    if (pos == vars) {
        out.push_back(cur);
        return;
    }
    for (int d = 0; d <= left; ++d) {
        cur[pos] = d;
        enumerate(vars, order, cur, pos + 1, left - d, out);
    }
    cur[pos] = 0;
}

JetSpace build_space(int vars, int order) {
    JetSpace s;
    s.vars = vars;
    s.order = order;
    std::vector<int> cur(vars, 0);
    enumerate(vars, order, cur, 0, order, s.midx);
    std::sort(s.midx.begin(), s.midx.end(), [](const auto& a, const auto& b) {
        int ta = 0, tb = 0;
        for (int x : a) ta += x;
        for (int x : b) tb += x;
        if (ta != tb) return ta < tb;
        return a < b;
    });
    const int n = s.size();
    s.combine.setConstant(n, n, -1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::vector<int> sum(vars);
            int tot = 0;
            for (int v = 0; v < vars; ++v) {
                sum[v] = s.midx[i][v] + s.midx[j][v];
                tot += sum[v];
            }
            if (tot <= order) s.combine(i, j) = s.index_of(sum);
        }
    s.fact.resize(n);
    for (int i = 0; i < n; ++i) {
        double f = 1.0;
        for (int v : s.midx[i])
            for (int k = 2; k <= v; ++k) f *= k;
        s.fact[i] = f;
    }
    return s;
}

}  // namespace

int JetSpace::index_of(const std::vector<int>& a) const {
    for (int i = 0; i < size(); ++i)
        if (midx[i] == a) return i;
    return -1;
}

const JetSpace& JetSpace::get(int vars, int order) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, JetSpace> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(vars, order);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, build_space(vars, order)).first;
    return it->second;
}

JetPoly operator+(const JetPoly& a, const JetPoly& b) { return {a.sp, a.c + b.c}; }
JetPoly operator-(const JetPoly& a, const JetPoly& b) { return {a.sp, a.c - b.c}; }
JetPoly operator*(Complex s, const JetPoly& a) { return {a.sp, s * a.c}; }

JetPoly operator+(const JetPoly& a, Complex s) {
    JetPoly r = a;
    r.c(0, 0) += s;
    return r;
}

JetPoly operator-(Complex s, const JetPoly& a) {
    JetPoly r = {a.sp, -a.c};
    r.c(0, 0) += s;
    return r;
}

JetPoly operator*(const JetPoly& a, const JetPoly& b) {
    const JetSpace& s = *a.sp;
    JetPoly r = JetPoly::zero(s);
    const int n = s.size();
    for (int i1 = 0; i1 < n; ++i1)
        for (int j1 = 0; j1 < n; ++j1) {
            const Complex v1 = a.c(i1, j1);
            if (v1 == 0.0) continue;
            for (int i2 = 0; i2 < n; ++i2) {
                const int i = s.combine(i1, i2);
                if (i < 0) continue;
                for (int j2 = 0; j2 < n; ++j2) {
                    const int j = s.combine(j1, j2);
                    if (j < 0) continue;
                    r.c(i, j) += v1 * b.c(i2, j2);
                }
            }
        }
    return r;
}

JetPoly jp_recip(const JetPoly& p) {
    const Complex c0 = p.value();
    if (c0 == 0.0) throw std::domain_error("reciprocal of a jet with zero constant term");
    // 1/(c(1+X)) = (1/c) sum (-X)^k; X is nilpotent past 2*order.
    const JetSpace& s = *p.sp;
    JetPoly x = (1.0 / c0) * p;
    x.c(0, 0) -= 1.0;
    JetPoly acc = JetPoly::constant(s, 1.0);
    JetPoly pw = JetPoly::constant(s, 1.0);
    for (int k = 1; k <= 2 * s.order; ++k) {
        pw = pw * x;
        acc = acc + ((k % 2) ? -1.0 : 1.0) * pw;
    }
    return (1.0 / c0) * acc;
}

JetPoly jp_pow(const JetPoly& p, double t) {
    const Complex c0 = p.value();
    if (c0 == 0.0) throw std::domain_error("power of a jet with zero constant term");
    const JetSpace& s = *p.sp;
    JetPoly x = (1.0 / c0) * p;
    x.c(0, 0) -= 1.0;
    // log(1+X), then exp(t log(1+X)); both series terminate by nilpotency.
    JetPoly lg = JetPoly::zero(s);
    JetPoly pw = JetPoly::constant(s, 1.0);
    for (int k = 1; k <= 2 * s.order; ++k) {
        pw = pw * x;
        lg = lg + (((k % 2) ? 1.0 : -1.0) / double(k)) * pw;
    }
    JetPoly z = t * lg;
    JetPoly acc = JetPoly::constant(s, 1.0);
    JetPoly term = JetPoly::constant(s, 1.0);
    for (int k = 1; k <= 2 * s.order; ++k) {
        term = (1.0 / double(k)) * (term * z);
        acc = acc + term;
    }
    return std::pow(c0, t) * acc;
}

JetPoly jp_int_pow(const JetPoly& p, long n) {
    if (n < 0) throw std::invalid_argument("negative integer power");
    JetPoly acc = JetPoly::constant(*p.sp, 1.0);
    JetPoly base = p;
    while (n > 0) {
        if (n & 1) acc = acc * base;
        base = base * base;
        n >>= 1;
    }
    return acc;
}

Complex Jet::d(int i) const {
    std::vector<int> a(vars, 0), b(vars, 0);
    a[i] = 1;
    return entry(a, b);
}

Complex Jet::dbar(int j) const {
    std::vector<int> a(vars, 0), b(vars, 0);
    b[j] = 1;
    return entry(a, b);
}

Complex Jet::ddbar(int i, int j) const {
    std::vector<int> a(vars, 0), b(vars, 0);
    a[i] = 1;
    b[j] = 1;
    return entry(a, b);
}

Complex Jet::entry(const std::vector<int>& a, const std::vector<int>& b) const {
    const JetSpace& s = JetSpace::get(vars, order);
    const int i = s.index_of(a), j = s.index_of(b);
    if (i < 0 || j < 0) throw std::out_of_range("multi-index outside the jet order");
    return deriv(i, j);
}

Jet jet_from_poly(const JetPoly& p) {
    const JetSpace& s = *p.sp;
    Jet out;
    out.vars = s.vars;
    out.order = s.order;
    out.midx = s.midx;
    out.deriv = p.c;
    for (int i = 0; i < s.size(); ++i)
        for (int j = 0; j < s.size(); ++j) out.deriv(i, j) *= s.fact[i] * s.fact[j];
    return out;
}

}  // namespace kervature
