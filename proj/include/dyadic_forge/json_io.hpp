#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "dyadic_forge/dilation.hpp"
#include "dyadic_forge/dyadic.hpp"
#include "dyadic_forge/pl_function.hpp"
#include "dyadic_forge/point_set.hpp"
#include "dyadic_forge/quad2.hpp"
#include "dyadic_forge/series.hpp"
#include "dyadic_forge/step_function.hpp"
#include "dyadic_forge/stopping_time.hpp"
#include "dyadic_forge/tree.hpp"
#include "dyadic_forge/wavelet.hpp"

namespace dyadic_forge {

using Json = nlohmann::json;

// Every *_from_json throws PreconditionError with the offending path on malformed input.

Json to_json(const Rational& x);
// Accepts {"num","den"}, "p/q" strings and JSON integers.
Rational rational_from_json(const Json& j);

Json to_json(const Quad2& x);
// Accepts {"a","b"} or anything rational_from_json accepts.
Quad2 quad2_from_json(const Json& j);

Json to_json(const DyadicInterval& I);
DyadicInterval interval_from_json(const Json& j);

Json to_json(const IntervalCollection& U);
IntervalCollection collection_from_json(const Json& j);

Json to_json(const HalfOpen& h);
Json to_json(const PointSet& s);
// Parts are {"a","b"} half-open intervals or dyadic {"m","j"}.
PointSet point_set_from_json(const Json& j);

Json to_json(const StepFunction& f);
StepFunction step_function_from_json(const Json& j);

Json to_json(const PLFunction& f);
// {"xs","start","end"}, {"nodes","values"} or a step function.
PLFunction pl_function_from_json(const Json& j);

Json to_json(const SplitResult& r);
Json to_json(const LayeredDecomposition& d);

Json to_json(const Combination& c);
Combination combination_from_json(const Json& j);

Json to_json(const MotherWavelet& m);
MotherWavelet mother_from_json(const Json& j);
// Git blob SHA-1 of the compact mother JSON.
std::string mother_hash(const MotherWavelet& m);

Json to_json(const Calibration& c);
Calibration calibration_from_json(const Json& j);

Json to_json(const MultiplierSequence& w);
MultiplierSequence multiplier_from_json(const Json& j);

struct TreeInput {
  std::vector<ExplicitNode> nodes;
};

// {"nodes": [{"f", "plus", "minus"}...]} or a bare node array.
TreeInput tree_from_json(const Json& j);
Json to_json(const ExplicitNode& n);

// 1-based on the wire, 0-based in memory.
Json permutation_to_json(const Ordering& o);
Ordering permutation_from_json(const Json& j, std::size_t N);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace dyadic_forge
