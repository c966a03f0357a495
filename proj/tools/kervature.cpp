// kervature: command-line front end for the kernel/curvature library.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kervature/curvature.hpp"
#include "kervature/json_io.hpp"
#include "kervature/suite.hpp"
#include "kervature/tensor_modules.hpp"
#include "kervature/verifiers.hpp"

namespace kv = kervature;

namespace {

// Accepts "0.4", "-0.2+0.3i", "0.5i", "i", "-i".
kv::Complex parse_complex_text(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw std::invalid_argument("empty complex literal");
    const bool imag = s.back() == 'i' || s.back() == 'I';
    if (imag) s.pop_back();
    // split at the last sign that is not an exponent sign and not leading
    std::size_t split = std::string::npos;
    for (std::size_t i = 1; i < s.size(); ++i)
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') split = i;
    // parse_decimal takes canonical decimals only; a literal may carry an
    // explicit leading plus
    auto dec = [](const std::string& t) -> double {
        return kv::parse_decimal(t[0] == '+' ? t.substr(1) : t);
    };
    auto num = [&dec](const std::string& t) -> double {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        return dec(t);
    };
    if (!imag) {
        if (split != std::string::npos)
            throw std::invalid_argument("complex literal '" + raw + "' must end in i");
        return kv::Complex(dec(s), 0.0);
    }
    if (split == std::string::npos) return kv::Complex(0.0, num(s));
    return kv::Complex(dec(s.substr(0, split)), num(s.substr(split)));
}

kv::Point parse_point_text(const std::string& raw) {
    std::vector<kv::Complex> coords;
    std::string cur;
    for (char c : raw) {
        if (c == ',') {
            coords.push_back(parse_complex_text(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    coords.push_back(parse_complex_text(cur));
    kv::Point p(static_cast<kv::Index>(coords.size()));
    for (std::size_t i = 0; i < coords.size(); ++i) p(static_cast<kv::Index>(i)) = coords[i];
    return p;
}

// A spec argument is inline JSON when it starts with '{', otherwise a path.
kv::Json load_json_arg(const std::string& arg) {
    std::string text = arg;
    if (arg.empty() || arg[0] != '{') {
        std::ifstream in(arg);
        if (!in) throw std::runtime_error("cannot open '" + arg + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    return kv::Json::parse(text);
}

kv::KernelPtr load_kernel(const std::string& arg) { return kv::parse_kernel(load_json_arg(arg)); }

kv::SampleSet load_sample(const std::string& arg, const kv::Domain& d) {
    if (arg.empty())
        return d.dim == 1 ? kv::default_disc_sample() : kv::sample_random(20260816u, 10, 0.6, d);
    return kv::parse_sample(load_json_arg(arg), d);
}

void print_json(const kv::Json& j) { std::cout << j.dump(2) << "\n"; }

int exit_for(kv::Verdict v) {
    switch (v) {
        case kv::Verdict::Pass: return 0;
        case kv::Verdict::Fail: return 1;
        case kv::Verdict::Skipped: return 3;
    }
    return 1;
}

struct Args {
    std::string spec, versus, sample, config, output, quantity = "curvature";
    std::string z, w, f, format;
    std::optional<double> tol;
    double alpha = 1.0, beta = 1.0;
    int jet = -1, n_trunc = 40, angles = 8;
    std::vector<double> radii;
};

int cmd_kernel_eval(const Args& a) {
    const kv::KernelPtr k = load_kernel(a.spec);
    const kv::Point z = parse_point_text(a.z);
    const kv::Point w = a.w.empty() ? z : parse_point_text(a.w);
    kv::Json out;
    out["kernel"] = kv::kernel_json(*k);
    out["z"] = kv::point_json(z);
    out["w"] = kv::point_json(w);
    out["value"] = kv::complex_json(kv::eval_kernel(*k, z, w));
    if (a.jet >= 0) {
        if (k->m() != 1)
            throw std::invalid_argument("the jet table printout is univariate; use m = 1");
        const kv::Jet jet = kv::eval_jet(*k, z, w, a.jet);
        kv::Json rows = kv::Json::array();
        for (int i = 0; i <= a.jet; ++i) {
            kv::Json row = kv::Json::array();
            for (int j = 0; j <= a.jet; ++j) row.push_back(kv::complex_json(jet.entry({i}, {j})));
            rows.push_back(row);
        }
        out["jet"] = rows;
    }
    print_json(out);
    return 0;
}

int cmd_psd_check(const Args& a) {
    const kv::KernelPtr k = load_kernel(a.spec);
    const kv::SampleSet s = load_sample(a.sample, k->domain);
    const kv::GramVerdict v = kv::check_nnd(*k, s, a.tol.value_or(kv::kDefaultNndTol));
    kv::Json out = kv::gram_verdict_json(v);
    out["sample"] = kv::sample_json(s);
    print_json(out);
    return v.is_nnd ? 0 : 1;
}

int cmd_psd_order(const Args& a) {
    const kv::KernelPtr k1 = load_kernel(a.spec);
    const kv::KernelPtr k2 = load_kernel(a.versus);
    const kv::SampleSet s = load_sample(a.sample, k1->domain);
    const kv::GramVerdict v = kv::check_order(*k1, *k2, s, a.tol.value_or(kv::kDefaultNndTol));
    kv::Json out = kv::gram_verdict_json(v);
    out["sample"] = kv::sample_json(s);
    print_json(out);
    return v.is_nnd ? 0 : 1;
}

int cmd_curvature_grid(const Args& a) {
    const kv::KernelPtr k = load_kernel(a.spec);
    kv::SampleSet s;
    if (!a.sample.empty()) {
        s = kv::parse_sample(load_json_arg(a.sample), k->domain);
    } else {
        kv::RVector radii;
        if (a.radii.empty()) {
            radii = kv::RVector(5);
            radii << 0.1, 0.3, 0.5, 0.7, 0.9;
        } else {
            radii = kv::RVector(static_cast<kv::Index>(a.radii.size()));
            for (std::size_t i = 0; i < a.radii.size(); ++i)
                radii[static_cast<kv::Index>(i)] = a.radii[i];
        }
        if (k->m() != 1)
            throw std::invalid_argument("the radial grid is univariate; pass --points for m > 1");
        s = kv::sample_radial_grid(radii, a.angles);
    }
    const std::string csv = kv::emit_grid(k, kv::parse_quantity(a.quantity), s);
    if (a.output.empty()) {
        std::cout << csv;
    } else {
        std::ofstream out(a.output);
        if (!out) throw std::runtime_error("cannot write '" + a.output + "'");
        out << csv;
    }
    return 0;
}

int cmd_verify(const std::string& name, const Args& a) {
    const kv::KernelPtr k = load_kernel(a.spec);
    const kv::SampleSet s = load_sample(a.sample, k->domain);
    kv::InequalityReport r;
    if (name == "curvature-bound")
        r = kv::verify_curvature_inequality(k, s, a.tol.value_or(1e-10));
    else if (name == "strong-gaussian-bound")
        r = kv::verify_strong_inequality(k, s, a.tol.value_or(kv::kDefaultNndTol));
    else if (name == "contractivity")
        r = kv::verify_contractivity(k, s, a.tol.value_or(kv::kDefaultNndTol));
    else if (name == "row-contraction")
        r = kv::verify_row_contraction(k, s, a.tol.value_or(kv::kDefaultNndTol));
    else if (name == "row-gaussian-bound")
        r = kv::verify_row_inequality(k, s, a.tol.value_or(kv::kDefaultNndTol));
    else if (name == "normalized-row")
        r = kv::verify_normalized_row(k, s, a.tol.value_or(kv::kDefaultNndTol));
    else if (name == "monotonicity") {
        if (a.versus.empty()) throw std::invalid_argument("monotonicity needs --versus");
        r = kv::verify_monotonicity(k, load_kernel(a.versus), s,
                                    a.tol.value_or(kv::kDefaultNndTol));
    } else if (name == "constant-gaussian-bound")
        r = kv::verify_constant_gaussian_bound(k, s, a.tol.value_or(kv::kDefaultNndTol));
    else if (name == "derivative-norm-bound") {
        if (a.f.empty()) throw std::invalid_argument("derivative-norm-bound needs --f");
        const kv::Point coeffs = parse_point_text(a.f);
        r = kv::verify_derivative_norm_bound(k, coeffs, a.tol.value_or(1e-12));
    } else {
        throw std::invalid_argument("unknown verifier '" + name + "'");
    }
    print_json(kv::inequality_report_json(r));
    return exit_for(r.verdict);
}

int cmd_decompose_limit(const Args& a) {
    const kv::KernelPtr k = load_kernel(a.spec);
    const kv::Complex z = parse_complex_text(a.z);
    const kv::TruncatedTensorSpace sp =
        kv::build_truncated_space(k, a.alpha, a.beta, a.n_trunc);
    const kv::LimitEstimate est = kv::limit_ratio(sp, z);
    print_json(kv::limit_estimate_json(est));
    return 0;
}

int cmd_suite_run(const Args& a) {
    std::string text;
    if (const char* builtin = kv::builtin_config(a.config)) {
        text = builtin;
    } else {
        std::ifstream in(a.config);
        if (!in) throw std::runtime_error("cannot open config '" + a.config + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    kv::SuiteConfig cfg = kv::parse_suite_config(kv::Json::parse(text));
    if (!a.output.empty()) cfg.output = a.output;
    if (!a.format.empty()) cfg.format = a.format;
    const kv::SuiteResult result = kv::run_suite(cfg);
    const kv::Json report = kv::suite_report_json(result);
    print_json(report);
    if (!cfg.output.empty() && !result.checks.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(cfg.output);
        if (cfg.format == "json" || cfg.format == "both") {
            std::ofstream out(fs::path(cfg.output) / "suite_report.json");
            if (!out) throw std::runtime_error("cannot write the suite report");
            out << report.dump(2) << "\n";
        }
        if (cfg.format == "csv" || cfg.format == "both") {
            std::ofstream out(fs::path(cfg.output) / "suite_summary.csv");
            if (!out) throw std::runtime_error("cannot write the suite summary");
            out << kv::csv_summary(result);
        }
    }
    return result.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sesqui-analytic kernel curvature toolkit"};
    app.require_subcommand(1);
    Args a;

    CLI::App* kernel = app.add_subcommand("kernel", "kernel evaluation");
    CLI::App* kernel_eval = kernel->add_subcommand("eval", "evaluate K (and its jet) at a point");
    kernel_eval->add_option("--spec", a.spec, "kernel spec (JSON or file)")->required();
    kernel_eval->add_option("--z", a.z, "first argument, e.g. 0.4+0.3i or 0.1,0.2")->required();
    kernel_eval->add_option("--w", a.w, "second argument (defaults to z)");
    kernel_eval->add_option("--jet", a.jet, "also print the jet table up to this order");

    CLI::App* psd = app.add_subcommand("psd", "Gram positivity checks");
    CLI::App* psd_check = psd->add_subcommand("check", "finite-sample NND check");
    psd_check->add_option("--spec", a.spec, "kernel spec (JSON or file)")->required();
    psd_check->add_option("--sample", a.sample, "sample spec (JSON or file)");
    psd_check->add_option("--tol", a.tol, "relative eigenvalue tolerance");
    CLI::App* psd_order = psd->add_subcommand("order", "kernel order check K1 >= K2");
    psd_order->add_option("--spec", a.spec, "kernel spec (JSON or file)")->required();
    psd_order->add_option("--versus", a.versus, "comparison kernel spec")->required();
    psd_order->add_option("--sample", a.sample, "sample spec (JSON or file)");
    psd_order->add_option("--tol", a.tol, "relative eigenvalue tolerance");

    CLI::App* curv = app.add_subcommand("curvature", "curvature quantities");
    CLI::App* curv_grid = curv->add_subcommand("grid", "emit a CSV grid of a quantity");
    curv_grid->add_option("--spec", a.spec, "kernel spec (JSON or file)")->required();
    curv_grid->add_option("--quantity", a.quantity, "K|curvature|gaussian|ratio|margin");
    curv_grid->add_option("--radii", a.radii, "radial grid radii")->delimiter(',');
    curv_grid->add_option("--angles", a.angles, "angles per radius");
    curv_grid->add_option("--points", a.sample, "explicit sample spec instead of a radial grid");
    curv_grid->add_option("--output", a.output, "write the CSV here instead of stdout");

    CLI::App* verify = app.add_subcommand("verify", "inequality verifiers");
    std::string verifier_name;
    verify->add_option("name", verifier_name, "verifier name")->required();
    verify->add_option("--spec", a.spec, "kernel spec (JSON or file)")->required();
    verify->add_option("--versus", a.versus, "comparison kernel (monotonicity)");
    verify->add_option("--sample", a.sample, "sample spec (JSON or file)");
    verify->add_option("--tol", a.tol, "margin tolerance");
    verify->add_option("--f", a.f, "polynomial coefficients c0,c1,... (derivative bound)");

    CLI::App* decompose = app.add_subcommand("decompose", "tensor-module decompositions");
    CLI::App* dec_limit = decompose->add_subcommand("limit", "diagonal limit of the A0 kernel");
    dec_limit->add_option("--spec", a.spec, "kernel spec (JSON or file)")->required();
    dec_limit->add_option("--alpha", a.alpha, "first power")->required();
    dec_limit->add_option("--beta", a.beta, "second power")->required();
    dec_limit->add_option("--z", a.z, "base point")->required();
    dec_limit->add_option("--N", a.n_trunc, "truncation degree");

    CLI::App* suite = app.add_subcommand("suite", "verification suites");
    CLI::App* suite_run = suite->add_subcommand("run", "run a suite config");
    suite_run->add_option("--config", a.config, "config file or built-in name (reference-suite)")
        ->required();
    suite_run->add_option("--output", a.output, "report directory");
    suite_run->add_option("--format", a.format, "json|csv|both");

    try {
        app.parse(argc, argv);
        if (kernel_eval->parsed()) return cmd_kernel_eval(a);
        if (psd_check->parsed()) return cmd_psd_check(a);
        if (psd_order->parsed()) return cmd_psd_order(a);
        if (curv_grid->parsed()) return cmd_curvature_grid(a);
        if (verify->parsed()) return cmd_verify(verifier_name, a);
        if (dec_limit->parsed()) return cmd_decompose_limit(a);
        if (suite_run->parsed()) return cmd_suite_run(a);
        std::cerr << app.help();
        return 2;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        kv::Json err;
        err["error"] = e.what();
        std::cerr << err.dump(2) << "\n";
        return 2;
    }
}
