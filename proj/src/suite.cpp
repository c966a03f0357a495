#include "kervature/suite.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <chrono>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <thread>

#include "kervature/curvature.hpp"
#include "kervature/parallel.hpp"
#include "kervature/tensor_modules.hpp"
#include "kervature/verifiers.hpp"

#include "reference_suite_config.hpp"

namespace kervature {

namespace {

const std::set<std::string> kKnownChecks = {
    "coefficient-nnd",      "nnd",
    "gaussian-nnd",         "kab-nnd",
    "contractivity",        "curvature-bound",
    "strong-gaussian-bound", "row-contraction",
    "row-gaussian-bound",   "normalized-row",
    "monotonicity",         "order",
    "constant-gaussian-bound", "derivative-norm-bound",
    "isometry",             "limit",
    "hardy-s0",             "trace-identity",
    "curvature-via-limit",  "random-gaussian-suite",
    "random-order-suite",   "random-derivative-suite",
};

// Family checks draw their kernels internally.
bool needs_kernel(const std::string& check) {
    return check != "random-gaussian-suite" && check != "random-order-suite";
}

double dparam(const Json& p, const char* key, double fallback) {
    return p.contains(key) ? number_from(p.at(key)) : fallback;
}

int iparam(const Json& p, const char* key, int fallback) {
    if (!p.contains(key)) return fallback;
    const Json& v = p.at(key);
    if (v.is_number_integer()) return v.get<int>();
    return static_cast<int>(number_from(v));
}

std::uint64_t seed_param(const Json& p, const char* key, std::uint64_t fallback) {
    if (!p.contains(key)) return fallback;
    return p.at(key).get<std::uint64_t>();
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct CheckContext {
    const SuiteConfig& cfg;
    const CheckSpec& spec;
    KernelPtr kernel;  // resolved, may be null for family checks
};

KernelPtr find_kernel(const SuiteConfig& cfg, const std::string& name) {
    for (const auto& [n, k] : cfg.kernels)
        if (n == name) return k;
    throw std::invalid_argument("check references unknown kernel '" + name + "'");
}

// A 'versus' parameter is either a kernel name or an inline kernel spec.
KernelPtr versus_kernel(const CheckContext& ctx) {
    if (!ctx.spec.params.contains("versus"))
        throw std::invalid_argument("check '" + ctx.spec.name + "' needs a 'versus' kernel");
    const Json& v = ctx.spec.params.at("versus");
    if (v.is_string()) return find_kernel(ctx.cfg, v.get<std::string>());
    return parse_kernel(v);
}

SampleSet sample_for(const CheckContext& ctx, const Domain& d) {
    if (ctx.spec.params.contains("sample")) return parse_sample(ctx.spec.params.at("sample"), d);
    if (d.dim == 1) return default_disc_sample();
    return sample_random(20260816u, 10, 0.6, d);
}

void from_gram(CheckResult& out, const GramVerdict& v, const SampleSet& s) {
    out.outcome = v.is_nnd ? "pass" : "fail";
    out.report = gram_verdict_json(v);
    out.report["sample"] = sample_json(s);
}

void from_inequality(CheckResult& out, const InequalityReport& r) {
    out.outcome = verdict_str(r.verdict);
    out.report = inequality_report_json(r);
}

void run_coefficient_nnd(const CheckContext& ctx, CheckResult& out) {
    const int depth = iparam(ctx.spec.params, "depth", 64);
    if (depth < 0) throw std::invalid_argument("coefficient-nnd depth must be >= 0");
    const DiagonalSeries s = diagonal_series_of(*ctx.kernel, depth);
    const CoeffVerdict v = coefficient_nnd(s);
    out.outcome = v.nonneg ? "pass" : "fail";
    out.report["depth"] = depth;
    out.report["nonneg"] = v.nonneg;
    if (v.first_negative) out.report["first_negative"] = *v.first_negative;
    Json head = Json::array();
    const Index shown = std::min<Index>(8, depth + 1);
    for (Index n = 0; n < shown; ++n) head.push_back(to_decimal(s.coeff(n)));
    out.report["coeffs_head"] = head;
}

void run_nnd(const CheckContext& ctx, CheckResult& out) {
    const SampleSet s = sample_for(ctx, ctx.kernel->domain);
    const double tol = dparam(ctx.spec.params, "tolerance", kDefaultNndTol);
    from_gram(out, check_nnd(*ctx.kernel, s, tol), s);
}

void run_matrix_nnd(const CheckContext& ctx, CheckResult& out, const MatrixKernel& mk) {
    const SampleSet s = sample_for(ctx, mk.domain);
    const double tol = dparam(ctx.spec.params, "tolerance", kDefaultNndTol);
    from_gram(out, check_nnd(mk, s, tol), s);
}

void run_order(const CheckContext& ctx, CheckResult& out) {
    const KernelPtr other = versus_kernel(ctx);
    const SampleSet s = sample_for(ctx, ctx.kernel->domain);
    const double tol = dparam(ctx.spec.params, "tolerance", kDefaultNndTol);
    from_gram(out, check_order(*ctx.kernel, *other, s, tol), s);
}

void run_isometry(const CheckContext& ctx, CheckResult& out) {
    const Json& p = ctx.spec.params;
    const double alpha = dparam(p, "alpha", 1.0), beta = dparam(p, "beta", 1.0);
    const Index n = iparam(p, "N", 24);
    const int count = iparam(p, "count", 10);
    const std::uint64_t seed = seed_param(p, "seed", 20260816u);
    const double tol = dparam(p, "tolerance", 1e-6);
    const TruncatedTensorSpace sp = build_truncated_space(ctx.kernel, alpha, beta, n);
    const IsometryReport rep = verify_r1_isometry(sp, count, seed);
    out.outcome = rep.max_mismatch < tol ? "pass" : "fail";
    out.report["alpha"] = to_decimal(alpha);
    out.report["beta"] = to_decimal(beta);
    out.report["N"] = n;
    out.report["count"] = rep.count;
    out.report["seed"] = seed;
    out.report["max_mismatch"] = to_decimal(rep.max_mismatch);
    out.report["tolerance"] = to_decimal(tol);
    out.report["gram_condition"] = to_decimal(sp.gram_condition);
}

std::vector<Complex> complex_list(const Json& p, const char* key) {
    if (!p.contains(key) || !p.at(key).is_array() || p.at(key).empty())
        throw std::invalid_argument(std::string("expected a nonempty '") + key +
                                    "' array of complex values");
    std::vector<Complex> out;
    for (const Json& e : p.at(key)) out.push_back(parse_complex(e));
    return out;
}

void run_limit(const CheckContext& ctx, CheckResult& out) {
    const Json& p = ctx.spec.params;
    const double alpha = dparam(p, "alpha", 1.0), beta = dparam(p, "beta", 1.0);
    const Index n = iparam(p, "N", 40);
    const double tol = dparam(p, "tolerance", 1e-3);
    const std::vector<Complex> zs = complex_list(p, "points");
    const TruncatedTensorSpace sp = build_truncated_space(ctx.kernel, alpha, beta, n);
    double worst = 0.0;
    Json rows = Json::array();
    for (Complex z : zs) {
        const LimitEstimate est = limit_ratio(sp, z);
        worst = std::max(worst, est.abs_error);
        rows.push_back(limit_estimate_json(est));
    }
    out.outcome = worst < tol ? "pass" : "fail";
    out.report["alpha"] = to_decimal(alpha);
    out.report["beta"] = to_decimal(beta);
    out.report["N"] = n;
    out.report["tolerance"] = to_decimal(tol);
    out.report["worst_abs_error"] = to_decimal(worst);
    out.report["estimates"] = rows;
}

void run_hardy_s0(const CheckContext& ctx, CheckResult& out) {
    if (ctx.kernel->tag != "szego")
        throw std::invalid_argument("hardy-s0 compares the bidisc tensor square of the szego "
                                    "kernel against its closed form");
    const Json& p = ctx.spec.params;
    const Index n = iparam(p, "N", 40);
    const double tol = dparam(p, "tolerance", 1e-6);
    if (!p.contains("points") || !p.at("points").is_array() || p.at("points").empty())
        throw std::invalid_argument("hardy-s0 needs a 'points' array of bidisc points");
    const TruncatedTensorSpace sp = build_truncated_space(ctx.kernel, 1.0, 1.0, n);
    double worst = 0.0;
    Json rows = Json::array();
    for (const Json& e : p.at("points")) {
        const Point pt = parse_point(e);
        if (pt.size() != 2) throw std::invalid_argument("hardy-s0 points live on the bidisc");
        const Complex z = pt(0), zeta = pt(1);
        const double kz = eval_kernel(*ctx.kernel, point1(z), point1(z)).real();
        const double kzeta = eval_kernel(*ctx.kernel, point1(zeta), point1(zeta)).real();
        const double numeric = kz * kzeta - a0_kernel_value(sp, z, zeta, z, zeta).real();
        const double closed = hardy_s0_closed_form(z, zeta);
        const double err = std::abs(numeric - closed);
        worst = std::max(worst, err);
        Json row;
        row["z"] = point_json(pt);
        row["numeric"] = to_decimal(numeric);
        row["closed_form"] = to_decimal(closed);
        row["abs_error"] = to_decimal(err);
        rows.push_back(row);
    }
    out.outcome = worst < tol ? "pass" : "fail";
    out.report["N"] = n;
    out.report["tolerance"] = to_decimal(tol);
    out.report["max_abs_error"] = to_decimal(worst);
    out.report["points"] = rows;
}

void run_trace_identity(const CheckContext& ctx, CheckResult& out) {
    const Json& p = ctx.spec.params;
    const double alpha = dparam(p, "alpha", 1.0), beta = dparam(p, "beta", 1.0);
    const double mesh = dparam(p, "mesh", 1e-3);
    const double tol = dparam(p, "tolerance", ctx.kernel->m() == 1 ? 1e-5 : 1e-4);
    const SampleSet s = sample_for(ctx, ctx.kernel->domain);
    const TraceCheckReport rep = bundle_curvature_trace_check(ctx.kernel, alpha, beta, s, mesh);
    out.outcome = rep.max_residual < tol ? "pass" : "fail";
    out.report = trace_report_json(rep);
    out.report["tolerance"] = to_decimal(tol);
}

void run_curvature_via_limit(const CheckContext& ctx, CheckResult& out) {
    const Json& p = ctx.spec.params;
    const Index n = iparam(p, "N", 40);
    const double tol = dparam(p, "tolerance", 1e-3);
    const std::vector<Complex> zs = complex_list(p, "points");
    const TruncatedTensorSpace sp = build_truncated_space(ctx.kernel, 1.0, 1.0, n);
    double worst = 0.0;
    Json rows = Json::array();
    for (Complex z : zs) {
        const CurvatureViaLimit cv = curvature_via_limit(sp, z);
        const double err = std::abs(cv.from_limit - cv.log_hessian);
        worst = std::max(worst, err);
        Json row;
        row["z"] = complex_json(z);
        row["from_limit"] = to_decimal(cv.from_limit);
        row["log_hessian"] = to_decimal(cv.log_hessian);
        row["abs_error"] = to_decimal(err);
        rows.push_back(row);
    }
    out.outcome = worst < tol ? "pass" : "fail";
    out.report["N"] = n;
    out.report["tolerance"] = to_decimal(tol);
    out.report["worst_abs_error"] = to_decimal(worst);
    out.report["points"] = rows;
}

DiagonalSeries random_series(std::mt19937_64& rng, int max_degree, double scale) {
    const int deg = 5 + static_cast<int>(uniform01(rng) * (max_degree - 4));
    RVector c(std::min(deg, max_degree) + 1);
    for (Index i = 0; i < c.size(); ++i) c[i] = scale * uniform01(rng);
    return DiagonalSeries(c);
}

void run_random_gaussian_suite(const CheckContext& ctx, CheckResult& out) {
    const Json& p = ctx.spec.params;
    const int count = iparam(p, "count", 50);
    const int degree = iparam(p, "degree", 30);
    const int points = iparam(p, "points", 8);
    const double max_radius = dparam(p, "max_radius", 0.9);
    const std::uint64_t seed = seed_param(p, "seed", 2026u);
    const double tol = dparam(p, "tolerance", kDefaultNndTol);
    int failures = 0;
    double worst_min = 0.0;
    for (int i = 0; i < count; ++i) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(i));
        const KernelPtr k = diagonal_series_kernel(random_series(rng, degree, 1.0));
        const SampleSet s =
            sample_random(seed * 1000003u + static_cast<std::uint64_t>(i), points, max_radius,
                          Domain::disc());
        const GramVerdict v = check_nnd(gaussian_curvature_kernel(k), s, tol);
        worst_min = std::min(worst_min, v.min_eigenvalue);
        if (!v.is_nnd) ++failures;
    }
    out.outcome = failures == 0 ? "pass" : "fail";
    out.report["count"] = count;
    out.report["seed"] = seed;
    out.report["max_degree"] = degree;
    out.report["points_per_set"] = points;
    out.report["failures"] = failures;
    out.report["worst_min_eigenvalue"] = to_decimal(worst_min);
    out.report["tolerance"] = to_decimal(tol);
}

void run_random_order_suite(const CheckContext& ctx, CheckResult& out) {
    const Json& p = ctx.spec.params;
    const int count = iparam(p, "count", 25);
    const int degree = iparam(p, "degree", 30);
    const std::uint64_t seed = seed_param(p, "seed", 7101u);
    int failures = 0, hypothesis_failures = 0;
    for (int i = 0; i < count; ++i) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(i));
        const DiagonalSeries base = random_series(rng, degree, 1.0);
        const DiagonalSeries delta = random_series(rng, degree, 0.5);
        const Index len = std::max(base.coeffs.size(), delta.coeffs.size());
        RVector sum = RVector::Zero(len);
        for (Index n = 0; n < len; ++n) sum[n] = base.coeff(n) + delta.coeff(n);
        const KernelPtr k2 = diagonal_series_kernel(base);
        const KernelPtr k1 = diagonal_series_kernel(DiagonalSeries(sum));
        const SampleSet s =
            sample_random(seed * 1000003u + static_cast<std::uint64_t>(i), 8, 0.85,
                          Domain::disc());
        const InequalityReport r = verify_monotonicity(k1, k2, s);
        if (r.hypothesis_failed) ++hypothesis_failures;
        if (r.verdict != Verdict::Pass) ++failures;
    }
    out.outcome = failures == 0 ? "pass" : "fail";
    out.report["count"] = count;
    out.report["seed"] = seed;
    out.report["max_degree"] = degree;
    out.report["failures"] = failures;
    out.report["hypothesis_failures"] = hypothesis_failures;
}

void run_random_derivative_suite(const CheckContext& ctx, CheckResult& out) {
    const Json& p = ctx.spec.params;
    const int count = iparam(p, "count", 20);
    const int degree = iparam(p, "degree", 10);
    const std::uint64_t seed = seed_param(p, "seed", 5150u);
    const double tol = dparam(p, "tolerance", 1e-12);
    int failures = 0;
    double worst_margin = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < count; ++i) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(i));
        Eigen::VectorXcd f(degree + 1);
        for (Index n = 0; n <= degree; ++n)
            f[n] = Complex(uniform01(rng) - 0.5, uniform01(rng) - 0.5);
        const InequalityReport r = verify_derivative_norm_bound(ctx.kernel, f, tol);
        worst_margin = std::max(worst_margin, r.worst_margin);
        if (r.verdict != Verdict::Pass) ++failures;
    }
    // equality witness: f(z) = z saturates the bound
    Eigen::VectorXcd fz = Eigen::VectorXcd::Zero(2);
    fz[1] = Complex(1.0, 0.0);
    const InequalityReport eq = verify_derivative_norm_bound(ctx.kernel, fz, tol);
    const double equality_gap = std::abs(eq.worst_margin);
    const bool eq_ok = equality_gap <= 1e-12;
    out.outcome = (failures == 0 && eq_ok) ? "pass" : "fail";
    out.report["count"] = count;
    out.report["seed"] = seed;
    out.report["degree"] = degree;
    out.report["failures"] = failures;
    out.report["worst_margin"] = to_decimal(worst_margin);
    out.report["equality_gap"] = to_decimal(equality_gap);
}

void run_check(const CheckContext& ctx, CheckResult& out) {
    const std::string& c = ctx.spec.check;
    const Json& p = ctx.spec.params;
    if (c == "coefficient-nnd") return run_coefficient_nnd(ctx, out);
    if (c == "nnd") return run_nnd(ctx, out);
    if (c == "gaussian-nnd") return run_matrix_nnd(ctx, out, gaussian_curvature_kernel(ctx.kernel));
    if (c == "kab-nnd")
        return run_matrix_nnd(
            ctx, out, kab_kernel(ctx.kernel, dparam(p, "alpha", 1.0), dparam(p, "beta", 1.0)));
    if (c == "contractivity")
        return from_inequality(out, verify_contractivity(ctx.kernel,
                                                         sample_for(ctx, ctx.kernel->domain),
                                                         dparam(p, "tolerance", kDefaultNndTol)));
    if (c == "curvature-bound")
        return from_inequality(
            out, verify_curvature_inequality(ctx.kernel, sample_for(ctx, ctx.kernel->domain),
                                             dparam(p, "tolerance", 1e-10)));
    if (c == "strong-gaussian-bound")
        return from_inequality(out,
                               verify_strong_inequality(ctx.kernel,
                                                        sample_for(ctx, ctx.kernel->domain),
                                                        dparam(p, "tolerance", kDefaultNndTol)));
    if (c == "row-contraction")
        return from_inequality(out, verify_row_contraction(ctx.kernel,
                                                           sample_for(ctx, ctx.kernel->domain),
                                                           dparam(p, "tolerance", kDefaultNndTol)));
    if (c == "row-gaussian-bound")
        return from_inequality(out, verify_row_inequality(ctx.kernel,
                                                          sample_for(ctx, ctx.kernel->domain),
                                                          dparam(p, "tolerance", kDefaultNndTol)));
    if (c == "normalized-row")
        return from_inequality(out, verify_normalized_row(ctx.kernel,
                                                          sample_for(ctx, ctx.kernel->domain),
                                                          dparam(p, "tolerance", kDefaultNndTol)));
    if (c == "monotonicity")
        return from_inequality(
            out, verify_monotonicity(ctx.kernel, versus_kernel(ctx),
                                     sample_for(ctx, ctx.kernel->domain),
                                     dparam(p, "tolerance", kDefaultNndTol)));
    if (c == "order") return run_order(ctx, out);
    if (c == "constant-gaussian-bound")
        return from_inequality(out, verify_constant_gaussian_bound(ctx.kernel, sample_for(ctx, ctx.kernel->domain),
                                                 dparam(p, "tolerance", kDefaultNndTol)));
    if (c == "derivative-norm-bound") {
        const std::vector<Complex> coeffs = complex_list(p, "f");
        Eigen::VectorXcd f(coeffs.size());
        for (std::size_t i = 0; i < coeffs.size(); ++i) f[static_cast<Index>(i)] = coeffs[i];
        return from_inequality(out, verify_derivative_norm_bound(ctx.kernel, f, dparam(p, "tolerance", 1e-12)));
    }
    if (c == "isometry") return run_isometry(ctx, out);
    if (c == "limit") return run_limit(ctx, out);
    if (c == "hardy-s0") return run_hardy_s0(ctx, out);
    if (c == "trace-identity") return run_trace_identity(ctx, out);
    if (c == "curvature-via-limit") return run_curvature_via_limit(ctx, out);
    if (c == "random-gaussian-suite") return run_random_gaussian_suite(ctx, out);
    if (c == "random-order-suite") return run_random_order_suite(ctx, out);
    if (c == "random-derivative-suite") return run_random_derivative_suite(ctx, out);
    throw std::invalid_argument("unknown check '" + c + "'");
}

std::string iso_timestamp_utc() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

std::string expect_str(Expect e) {
    switch (e) {
        case Expect::Pass: return "pass";
        case Expect::Fail: return "fail";
        case Expect::Skipped: return "skipped";
        case Expect::ReportOnly: return "report-only";
    }
    return "report-only";
}

Expect parse_expect(const std::string& s) {
    if (s == "pass") return Expect::Pass;
    if (s == "fail") return Expect::Fail;
    if (s == "skipped") return Expect::Skipped;
    if (s == "report-only") return Expect::ReportOnly;
    throw std::invalid_argument("unknown expect value '" + s +
                                "' (pass|fail|skipped|report-only)");
}

SuiteConfig parse_suite_config(const Json& j) {
    if (!j.is_object()) throw std::invalid_argument("suite config must be a JSON object");
    SuiteConfig cfg;
    if (j.contains("workers")) {
        cfg.workers = j.at("workers").get<int>();
        if (cfg.workers < 1 || cfg.workers > 32)
            throw std::invalid_argument("workers must be in [1, 32]");
    }
    if (j.contains("output")) cfg.output = j.at("output").get<std::string>();
    if (j.contains("format")) {
        cfg.format = j.at("format").get<std::string>();
        if (cfg.format != "json" && cfg.format != "csv" && cfg.format != "both")
            throw std::invalid_argument("format must be json, csv or both");
    }
    std::set<std::string> kernel_names;
    if (j.contains("kernels")) {
        for (const Json& e : j.at("kernels")) {
            const std::string name = e.at("name").get<std::string>();
            if (name.empty() || !kernel_names.insert(name).second)
                throw std::invalid_argument("kernel names must be unique and nonempty");
            cfg.kernels.emplace_back(name, parse_kernel(e.at("spec")));
        }
    }
    std::set<std::string> check_names;
    if (j.contains("checks")) {
        for (const Json& e : j.at("checks")) {
            CheckSpec spec;
            spec.name = e.at("name").get<std::string>();
            if (spec.name.empty() || !check_names.insert(spec.name).second)
                throw std::invalid_argument("check names must be unique and nonempty");
            spec.check = e.at("check").get<std::string>();
            if (kKnownChecks.find(spec.check) == kKnownChecks.end())
                throw std::invalid_argument("unknown check '" + spec.check + "' in '" +
                                            spec.name + "'");
            if (e.contains("kernel")) spec.kernel = e.at("kernel").get<std::string>();
            if (needs_kernel(spec.check)) {
                if (spec.kernel.empty())
                    throw std::invalid_argument("check '" + spec.name + "' needs a kernel");
                if (kernel_names.find(spec.kernel) == kernel_names.end())
                    throw std::invalid_argument("check '" + spec.name +
                                                "' references unknown kernel '" + spec.kernel +
                                                "'");
            }
            if (e.contains("expect")) spec.expect = parse_expect(e.at("expect").get<std::string>());
            for (auto it = e.begin(); it != e.end(); ++it) {
                const std::string& key = it.key();
                if (key == "name" || key == "check" || key == "kernel" || key == "expect")
                    continue;
                spec.params[key] = it.value();
            }
            if (spec.params.contains("tolerance") &&
                !(number_from(spec.params.at("tolerance")) > 0.0))
                throw std::invalid_argument("tolerance must be positive in '" + spec.name + "'");
            cfg.checks.push_back(std::move(spec));
        }
    }
    return cfg;
}

const char* builtin_config(const std::string& name) {
    if (name == "reference-suite") return kReferenceSuiteConfig;
    return nullptr;
}

SuiteResult run_suite(const SuiteConfig& cfg) {
    SuiteResult result;
    result.workers = worker_count();
    if (cfg.workers > 0 && std::getenv("KERVATURE_WORKERS") == nullptr)
        result.workers = cfg.workers;

    const std::size_t n = cfg.checks.size();
    result.checks.resize(n);
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> infra(std::max<std::size_t>(1, result.workers));
    auto body = [&](std::size_t slot) {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            const CheckSpec& spec = cfg.checks[i];
            CheckResult& out = result.checks[i];
            out.name = spec.name;
            out.check = spec.check;
            out.kernel = spec.kernel;
            out.expect = spec.expect;
            try {
                CheckContext ctx{cfg, spec,
                                 spec.kernel.empty() ? nullptr : find_kernel(cfg, spec.kernel)};
                run_check(ctx, out);
            } catch (const std::exception& ex) {
                out.outcome = "error";
                out.error = ex.what();
                out.report = Json::object();
            }
            out.matched = spec.expect == Expect::ReportOnly || out.outcome == expect_str(spec.expect);
            (void)slot;
        }
    };

    const int workers = std::max(1, std::min<int>(result.workers, static_cast<int>(n)));
    if (workers <= 1) {
        body(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                try {
                    body(static_cast<std::size_t>(w));
                } catch (...) {
                    infra[w] = std::current_exception();
                }
            });
        for (std::thread& t : pool) t.join();
        for (const std::exception_ptr& e : infra)
            if (e) std::rethrow_exception(e);
    }

    for (const CheckResult& c : result.checks) {
        if (c.matched) ++result.matched; else ++result.mismatched;
        if (c.outcome == "error") ++result.errors;
    }
    return result;
}

Json suite_report_json(const SuiteResult& r, bool with_timestamp) {
    Json j;
    if (with_timestamp) j["generated_at"] = iso_timestamp_utc();
    j["workers"] = r.workers;
    Json checks = Json::array();
    for (const CheckResult& c : r.checks) {
        Json e;
        e["name"] = c.name;
        e["check"] = c.check;
        if (!c.kernel.empty()) e["kernel"] = c.kernel;
        e["expect"] = expect_str(c.expect);
        e["outcome"] = c.outcome;
        e["matched"] = c.matched;
        if (c.outcome == "error") e["error"] = c.error;
        else e["report"] = c.report;
        checks.push_back(e);
    }
    j["checks"] = checks;
    Json summary;
    summary["total"] = r.checks.size();
    summary["matched"] = r.matched;
    summary["mismatched"] = r.mismatched;
    summary["errors"] = r.errors;
    j["summary"] = summary;
    return j;
}

std::string csv_summary(const SuiteResult& r) {
    std::string out = "name,check,kernel,expect,outcome,matched\n";
    for (const CheckResult& c : r.checks) {
        out += c.name + "," + c.check + "," + c.kernel + "," + expect_str(c.expect) + "," +
               c.outcome + "," + (c.matched ? "true" : "false") + "\n";
    }
    return out;
}

GridQuantity parse_quantity(const std::string& s) {
    if (s == "K" || s == "k") return GridQuantity::K;
    if (s == "curvature") return GridQuantity::Curvature;
    if (s == "gaussian") return GridQuantity::Gaussian;
    if (s == "ratio") return GridQuantity::Ratio;
    if (s == "margin") return GridQuantity::Margin;
    throw std::invalid_argument("unknown grid quantity '" + s +
                                "' (K|curvature|gaussian|ratio|margin)");
}

std::string emit_grid(const KernelPtr& k, GridQuantity q, const SampleSet& s) {
    validate(s, k->domain);
    const Index m = k->m();
    if ((q == GridQuantity::Ratio || q == GridQuantity::Margin) && m != 1)
        throw std::invalid_argument("ratio and margin grids are defined on the disc");

    std::string header;
    for (Index i = 1; i <= m; ++i) {
        if (!header.empty()) header += ",";
        header += "re_z" + std::to_string(i) + ",im_z" + std::to_string(i);
    }
    auto matrix_header = [&](const char* name) {
        for (Index i = 0; i < m; ++i)
            for (Index j = 0; j < m; ++j)
                header += "," + std::string(name) + "_" + std::to_string(i) + std::to_string(j) +
                          "_re," + std::string(name) + "_" + std::to_string(i) +
                          std::to_string(j) + "_im";
    };
    switch (q) {
        case GridQuantity::K: header += ",K_re,K_im"; break;
        case GridQuantity::Curvature: matrix_header("curvature"); break;
        case GridQuantity::Gaussian: matrix_header("gaussian"); break;
        case GridQuantity::Ratio: header += ",ratio"; break;
        case GridQuantity::Margin: header += ",margin"; break;
    }

    const MatrixKernel gk = q == GridQuantity::Gaussian ? gaussian_curvature_kernel(k)
                                                        : MatrixKernel{};
    std::string out = header + "\n";
    for (const Point& z : s.points) {
        std::string row;
        for (Index i = 0; i < m; ++i) {
            if (!row.empty()) row += ",";
            row += to_decimal(z(i).real()) + "," + to_decimal(z(i).imag());
        }
        auto push = [&row](double v) {
            if (!std::isfinite(v)) throw std::runtime_error("grid value is not finite");
            row += "," + to_decimal(v);
        };
        switch (q) {
            case GridQuantity::K: {
                const Complex v = eval_kernel(*k, z, z);
                push(v.real());
                push(v.imag());
                break;
            }
            case GridQuantity::Curvature: {
                const CMatrix c = curvature_matrix(*k, z).entries;
                for (Index i = 0; i < m; ++i)
                    for (Index j = 0; j < m; ++j) {
                        push(c(i, j).real());
                        push(c(i, j).imag());
                    }
                break;
            }
            case GridQuantity::Gaussian: {
                const CMatrix g = gk.eval(z, z);
                for (Index i = 0; i < m; ++i)
                    for (Index j = 0; j < m; ++j) {
                        push(g(i, j).real());
                        push(g(i, j).imag());
                    }
                break;
            }
            case GridQuantity::Ratio: {
                const double hess = -curvature_matrix(*k, z).entries(0, 0).real();
                const double w = 1.0 - std::norm(z(0));
                push(hess * w * w);
                break;
            }
            case GridQuantity::Margin: {
                const double hess = -curvature_matrix(*k, z).entries(0, 0).real();
                const double w = 1.0 - std::norm(z(0));
                push(1.0 / (w * w) - hess);
                break;
            }
        }
        out += row + "\n";
    }
    return out;
}

}  // namespace kervature
