#pragma once

#include <nlohmann/json.hpp>

#include "kervature/tensor_modules.hpp"
#include "kervature/verifiers.hpp"

namespace kervature {

// Ordered maps keep serialized reports byte-stable across runs.
using Json = nlohmann::ordered_json;

/// Shortest decimal string that round-trips the double exactly.
std::string to_decimal(double v);
double parse_decimal(const std::string& s);
/// Accepts a JSON number or a decimal string.
double number_from(const Json& j);

Json complex_json(Complex v);
Complex parse_complex(const Json& j);

Json point_json(const Point& p);
Point parse_point(const Json& j);

Json domain_json(const Domain& d);
Domain parse_domain(const Json& j);

/// Kernel specs: {"type": tag, ...}.  Serializing a parsed spec reproduces it
/// with all coefficients as bit-exact decimal strings.
Json kernel_json(const KernelExpr& k);
KernelPtr parse_kernel(const Json& j);

Json sample_json(const SampleSet& s);
/// The domain supplies the dimension (and the sampling region for the random
/// recipe).
SampleSet parse_sample(const Json& j, const Domain& d);

Json gram_verdict_json(const GramVerdict& v);
Json inequality_report_json(const InequalityReport& r);
Json limit_estimate_json(const LimitEstimate& e);
Json trace_report_json(const TraceCheckReport& r);

}  // namespace kervature
