#include "kervature/json_io.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>
#include <system_error>

namespace kervature {

namespace {

Json decimal_array(const RVector& v) {
    Json a = Json::array();
    for (Index i = 0; i < v.size(); ++i) a.push_back(to_decimal(v[i]));
    return a;
}

RVector parse_decimal_array(const Json& j, const char* what) {
    if (!j.is_array() || j.empty())
        throw std::invalid_argument(std::string("expected a nonempty array for ") + what);
    RVector v(j.size());
    Index i = 0;
    for (const Json& e : j) v[i++] = number_from(e);
    return v;
}

Json children_array(const KernelExpr& k) {
    Json a = Json::array();
    for (const KernelPtr& c : k.children) a.push_back(kernel_json(*c));
    return a;
}

std::vector<KernelPtr> parse_children(const Json& j, const char* what) {
    if (!j.is_array() || j.empty())
        throw std::invalid_argument(std::string("expected a nonempty array for ") + what);
    std::vector<KernelPtr> out;
    out.reserve(j.size());
    for (const Json& e : j) out.push_back(parse_kernel(e));
    return out;
}

}  // namespace

std::string to_decimal(double v) {
    char buf[64];
    const std::to_chars_result res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc())
        throw std::runtime_error("to_decimal: conversion failed");
    return std::string(buf, res.ptr);
}

double parse_decimal(const std::string& s) {
    double v = 0.0;
    const char* begin = s.data();
    const char* end = begin + s.size();
    const std::from_chars_result res = std::from_chars(begin, end, v);
    if (res.ec != std::errc() || res.ptr != end)
        throw std::invalid_argument("not a decimal number: '" + s + "'");
    return v;
}

double number_from(const Json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return parse_decimal(j.get<std::string>());
    throw std::invalid_argument("expected a number or decimal string, got: " + j.dump());
}

Json complex_json(Complex v) {
    Json j;
    j["re"] = to_decimal(v.real());
    j["im"] = to_decimal(v.imag());
    return j;
}

Complex parse_complex(const Json& j) {
    if (j.is_number() || j.is_string()) return Complex(number_from(j), 0.0);
    if (j.is_object()) {
        const double re = j.contains("re") ? number_from(j.at("re")) : 0.0;
        const double im = j.contains("im") ? number_from(j.at("im")) : 0.0;
        return Complex(re, im);
    }
    throw std::invalid_argument("expected a complex value {re, im}, got: " + j.dump());
}

Json point_json(const Point& p) {
    Json a = Json::array();
    for (Index i = 0; i < p.size(); ++i) a.push_back(complex_json(p(i)));
    return a;
}

Point parse_point(const Json& j) {
    if (!j.is_array() || j.empty())
        throw std::invalid_argument("expected a nonempty coordinate array for a point");
    Point p(j.size());
    Index i = 0;
    for (const Json& e : j) p(i++) = parse_complex(e);
    return p;
}

Json domain_json(const Domain& d) {
    Json j;
    switch (d.kind) {
        case Domain::Kind::Disc: j["kind"] = "disc"; break;
        case Domain::Kind::Polydisc: j["kind"] = "polydisc"; break;
        case Domain::Kind::Ball: j["kind"] = "ball"; break;
    }
    if (d.kind != Domain::Kind::Disc) j["dim"] = d.dim;
    return j;
}

Domain parse_domain(const Json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "disc") return Domain::disc();
    const int dim = j.at("dim").get<int>();
    if (kind == "polydisc") return Domain::polydisc(dim);
    if (kind == "ball") return Domain::ball(dim);
    throw std::invalid_argument("unknown domain kind: " + kind);
}

Json kernel_json(const KernelExpr& k) {
    Json j;
    j["type"] = k.tag;
    switch (k.kind) {
        case KernelKind::InversePower:
            if (k.tag == "szego-power") j["alpha"] = to_decimal(k.expo);
            else if (k.tag == "drury-arveson") j["m"] = k.domain.dim;
            else if (k.tag == "inner-power") {
                j["t"] = to_decimal(k.expo);
                j["domain"] = domain_json(k.domain);
            }
            break;
        case KernelKind::WitnessK0:
            break;
        case KernelKind::Rational:
            j["num"] = decimal_array(k.rat_num);
            j["den"] = decimal_array(k.rat_den);
            break;
        case KernelKind::SeriesAtom:
            j["coeffs"] = decimal_array(k.series.coeffs);
            if (k.series.has_tail()) j["tail"] = to_decimal(k.series.tail_value);
            if (k.series.declared_radius != 1.0)
                j["radius"] = to_decimal(k.series.declared_radius);
            break;
        case KernelKind::PullbackSzegoSq: {
            Json f = Json::array();
            for (Index i = 0; i < k.poly_f.size(); ++i) f.push_back(complex_json(k.poly_f[i]));
            j["f"] = f;
            break;
        }
        case KernelKind::Sum:
            j["terms"] = children_array(k);
            break;
        case KernelKind::Product:
        case KernelKind::Tensor:
            j["factors"] = children_array(k);
            break;
        case KernelKind::Power:
            j["alpha"] = to_decimal(k.expo);
            j["base"] = kernel_json(*k.children[0]);
            break;
        case KernelKind::Scale:
            j["c"] = to_decimal(k.expo);
            j["base"] = kernel_json(*k.children[0]);
            break;
        case KernelKind::OneMinusZw:
            j["base"] = kernel_json(*k.children[0]);
            break;
        case KernelKind::NormalizeAt:
            j["at"] = point_json(k.w0);
            j["base"] = kernel_json(*k.children[0]);
            break;
    }
    return j;
}

KernelPtr parse_kernel(const Json& j) {
    if (!j.is_object() || !j.contains("type"))
        throw std::invalid_argument("kernel spec must be an object with a 'type' tag");
    const std::string t = j.at("type").get<std::string>();
    if (t == "szego") return szego();
    if (t == "szego-power") return szego_power(number_from(j.at("alpha")));
    if (t == "bergman") return bergman();
    if (t == "drury-arveson") return drury_arveson(j.at("m").get<int>());
    if (t == "inner-power") return inverse_power(number_from(j.at("t")), parse_domain(j.at("domain")));
    if (t == "witness-k0") return witness_k0();
    if (t == "diagonal-series") {
        const RVector c = parse_decimal_array(j.at("coeffs"), "coeffs");
        DiagonalSeries s =
            j.contains("tail") ? DiagonalSeries(c, number_from(j.at("tail"))) : DiagonalSeries(c);
        if (j.contains("radius")) s.declared_radius = number_from(j.at("radius"));
        return diagonal_series_kernel(std::move(s));
    }
    if (t == "explicit-rational")
        return rational_kernel(parse_decimal_array(j.at("num"), "num"),
                               parse_decimal_array(j.at("den"), "den"));
    if (t == "pullback-szego-sq") {
        const Json& f = j.at("f");
        if (!f.is_array() || f.empty())
            throw std::invalid_argument("pullback-szego-sq needs a coefficient array 'f'");
        Eigen::VectorXcd coeffs(f.size());
        Index i = 0;
        for (const Json& e : f) coeffs[i++] = parse_complex(e);
        return pullback_szego_sq(std::move(coeffs));
    }
    if (t == "sum") return k_sum(parse_children(j.at("terms"), "terms"));
    if (t == "product") return k_product(parse_children(j.at("factors"), "factors"));
    if (t == "power") return k_power(parse_kernel(j.at("base")), number_from(j.at("alpha")));
    if (t == "scale") return k_scale(number_from(j.at("c")), parse_kernel(j.at("base")));
    if (t == "one-minus-zw") return one_minus_zw(parse_kernel(j.at("base")));
    if (t == "normalize") return normalize_at(parse_kernel(j.at("base")), parse_point(j.at("at")));
    if (t == "tensor") {
        const std::vector<KernelPtr> factors = parse_children(j.at("factors"), "factors");
        if (factors.size() < 2) throw std::invalid_argument("tensor needs at least two factors");
        KernelPtr acc = factors[0];
        for (std::size_t i = 1; i < factors.size(); ++i) acc = tensor_product(acc, factors[i]);
        return acc;
    }
    throw std::invalid_argument("unknown kernel type tag: " + t);
}

Json sample_json(const SampleSet& s) {
    Json j;
    switch (s.recipe) {
        case SampleSet::Recipe::Explicit: {
            j["recipe"] = "explicit";
            Json pts = Json::array();
            for (const Point& p : s.points) pts.push_back(point_json(p));
            j["points"] = pts;
            break;
        }
        case SampleSet::Recipe::RadialGrid:
            j["recipe"] = "radial-grid";
            j["radii"] = decimal_array(s.radii);
            j["angles"] = decimal_array(s.angles);
            break;
        case SampleSet::Recipe::Random:
            j["recipe"] = "random";
            j["seed"] = s.seed;
            j["count"] = s.count;
            j["max_radius"] = to_decimal(s.max_radius);
            break;
    }
    j["size"] = s.points.size();
    return j;
}

SampleSet parse_sample(const Json& j, const Domain& d) {
    if (!j.is_object() || !j.contains("recipe"))
        throw std::invalid_argument("sample spec must be an object with a 'recipe'");
    const std::string recipe = j.at("recipe").get<std::string>();
    if (recipe == "explicit") {
        std::vector<Point> pts;
        for (const Json& e : j.at("points")) pts.push_back(parse_point(e));
        SampleSet s = sample_explicit(std::move(pts));
        validate(s, d);
        return s;
    }
    if (recipe == "radial-grid") {
        if (d.dim != 1)
            throw std::invalid_argument("radial-grid sampling is a disc recipe (dimension 1)");
        const RVector radii = parse_decimal_array(j.at("radii"), "radii");
        const Json& ang = j.at("angles");
        SampleSet s = ang.is_number_integer() ? sample_radial_grid(radii, ang.get<int>())
                                              : sample_radial_grid(radii, parse_decimal_array(ang, "angles"));
        validate(s, d);
        return s;
    }
    if (recipe == "random") {
        const std::uint64_t seed = j.at("seed").get<std::uint64_t>();
        const int count = j.at("count").get<int>();
        const double max_radius = j.contains("max_radius") ? number_from(j.at("max_radius")) : 0.9;
        return sample_random(seed, count, max_radius, d);
    }
    if (recipe == "default") {
        if (d.dim != 1) throw std::invalid_argument("the default sample lives on the disc");
        return default_disc_sample();
    }
    throw std::invalid_argument("unknown sample recipe: " + recipe);
}

Json gram_verdict_json(const GramVerdict& v) {
    Json j;
    j["is_nnd"] = v.is_nnd;
    j["min_eigenvalue"] = to_decimal(v.min_eigenvalue);
    j["max_eigenvalue"] = to_decimal(v.max_eigenvalue);
    j["tolerance"] = to_decimal(v.tolerance_used);
    if (v.witness) {
        Json w = Json::array();
        for (Index i = 0; i < v.witness->size(); ++i) w.push_back(complex_json((*v.witness)[i]));
        j["witness"] = w;
    }
    return j;
}

Json inequality_report_json(const InequalityReport& r) {
    Json j;
    j["name"] = r.name;
    j["verdict"] = verdict_str(r.verdict);
    if (r.hypothesis_failed) j["hypothesis_failed"] = true;
    if (r.evidence) {
        j["min_eigenvalue"] = to_decimal(r.evidence->min_eigenvalue);
        j["max_eigenvalue"] = to_decimal(r.evidence->max_eigenvalue);
    }
    j["tolerance"] = to_decimal(r.tolerance);
    j["sample"] = sample_json(r.sample);
    if (r.evidence && r.evidence->witness) {
        Json w = Json::array();
        for (Index i = 0; i < r.evidence->witness->size(); ++i)
            w.push_back(complex_json((*r.evidence->witness)[i]));
        j["witness"] = w;
    }
    if (!r.margins.empty()) {
        Json ms = Json::array();
        for (const PointMargin& m : r.margins) {
            Json e;
            e["z"] = point_json(m.z);
            e["margin"] = to_decimal(m.margin);
            ms.push_back(e);
        }
        j["margins"] = ms;
        j["worst_margin"] = to_decimal(r.worst_margin);
    } else if (r.worst_margin != 0.0) {
        j["worst_margin"] = to_decimal(r.worst_margin);
    }
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

Json limit_estimate_json(const LimitEstimate& e) {
    Json j;
    j["alpha"] = to_decimal(e.alpha);
    j["beta"] = to_decimal(e.beta);
    j["z"] = complex_json(e.z);
    Json samples = Json::array();
    for (const LimitSample& s : e.samples) {
        Json row;
        row["t"] = to_decimal(s.t);
        row["ratio"] = to_decimal(s.ratio);
        samples.push_back(row);
    }
    j["samples"] = samples;
    j["extrapolated"] = to_decimal(e.extrapolated);
    j["error_estimate"] = to_decimal(e.error_estimate);
    j["target"] = to_decimal(e.target);
    j["abs_error"] = to_decimal(e.abs_error);
    j["truncation_N"] = e.truncation;
    j["gram_condition"] = to_decimal(e.gram_condition);
    return j;
}

Json trace_report_json(const TraceCheckReport& r) {
    Json j;
    j["mesh"] = to_decimal(r.mesh);
    j["max_residual"] = to_decimal(r.max_residual);
    Json pts = Json::array();
    for (const TraceCheckPoint& p : r.points) {
        Json row;
        row["z"] = point_json(p.z);
        row["residual"] = to_decimal(p.residual);
        pts.push_back(row);
    }
    j["points"] = pts;
    return j;
}

}  // namespace kervature
