#pragma once

// JSON schemas:
//   StepFn        {"breakpoints": [...], "values": [...]}
//   TransportMap  [{"src": [a, b], "dst": c}, ...]  ordered by source start
//   NormResult    {"value", "lo", "hi", "modular", "iters"}
//   DyadicRect    {"levels": [...], "indices": [...]}
// Doubles are written in shortest round-trip form, so every value reads back
// bit-exactly. Schema violations raise ParseError; well-formed but invalid
// objects raise ValidationError.

#include "varlex/construction.hpp"
#include "varlex/diagnostics.hpp"
#include "varlex/interleave.hpp"
#include "varlex/measure.hpp"
#include "varlex/norms.hpp"
#include "varlex/rearrangement.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace varlex {

using Json = nlohmann::json;

/// Parses text, mapping syntax errors to ParseError.
Json parse_json(std::string_view text);

Json to_json(const StepFn& f);
StepFn stepfn_from_json(const Json& j);

Json to_json(const TransportMap& omega);
TransportMap transport_from_json(const Json& j);

Json to_json(const NormResult& r);

Json to_json(const DyadicRect& r);
DyadicRect rect_from_json(const Json& j);

Json to_json(const RatioProfile& p);
Json to_json(const DiagnoseReport& r);

Json to_json(const ScanReport& r);
std::string scan_to_csv(const ScanReport& r);

/// The full trace; stages are included when present.
Json to_json(const ConstructionTrace& t);
ConstructionTrace trace_from_json(const Json& j);

} // namespace varlex
