#pragma once

#include <json.hpp>

#include "bmkit/block_predual.hpp"
#include "bmkit/bourgain_morrey.hpp"
#include "bmkit/corpus.hpp"
#include "bmkit/wavelet.hpp"

namespace bmkit {

using json = nlohmann::ordered_json;

/// Parses text, throwing ParseError with the byte offset on malformed input.
json parse_json(const std::string& text, const std::string& source = "input");
json read_json_file(const std::string& path);

/// Numbers with "inf" for infinity.
json number_to_json(double x);
double number_from_json(const json& j, const std::string& where);

json to_json(const GridFunction& f);
GridFunction grid_function_from_json(const json& j);

json to_json(const ExponentVector& p);
ExponentVector exponents_from_json(const json& j, const std::string& where);

json to_json(const SpaceParams& sp);
/// {"p": [...], "t": x, "r": x}
SpaceParams space_params_from_json(const json& j);

json to_json(const DyadicCube& q);
json to_json(const NormBreakdown& b);
json to_json(const BlockDecomposition& d);
json to_json(const CoefficientSet& c);

}  // namespace bmkit
