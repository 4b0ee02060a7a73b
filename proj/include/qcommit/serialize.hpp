#pragma once

#include <string>

#include <json.hpp>

#include "qcommit/attacks.hpp"
#include "qcommit/commit.hpp"
#include "qcommit/zk.hpp"

namespace qcommit::io {

using json = nlohmann::json;

// Numbers in reports are rounded to 12 significant digits so the JSON and
// CSV encodings of a run carry identical values.
std::string fmt12(double v);
double rounded12(double v);

json layout_to_json(const RegisterLayout& l);
RegisterLayout layout_from_json(const json& j);

json amps_to_json(const Vec& v);
Vec amps_from_json(const json& j);

json mat_to_json(const Mat& m);
Mat mat_from_json(const json& j);

json strategy_to_json(const CommitterStrategy& c);
CommitterStrategy strategy_from_json(const json& j);

json crs_scheme_to_json(const CrsScheme& s);
CrsScheme crs_scheme_from_json(const json& j);

json correlated_scheme_to_json(const CorrelatedScheme& s);
CorrelatedScheme correlated_scheme_from_json(const json& j);

// {"w": ..., "k": ..., "key": "a:b:...", "modulus": "0x..."}
json family_key_record(const KWiseFamily& family, const HashKey& key);

json graph_to_json(const Graph& g);
Graph graph_from_json(const json& j);
// Edge-list text: first line "n <vertices>", then "i j" per edge.
Graph graph_from_edge_list(const std::string& text);

json load_json_file(const std::string& path);  // throws std::runtime_error

}  // namespace qcommit::io
