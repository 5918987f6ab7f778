#pragma once

#include "treelip/multop.hpp"
#include "treelip/verify.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace treelip {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Complex numbers serialize as [re, im].
Json to_json(Complex c);
Json to_json(const DepthProfile& profile);
Json to_json(const NormReport& report);
Json to_json(const TailDiagnostic& diagnostic);
Json to_json(const Classification& classification);
Json to_json(const AnalysisReport& report);
Json to_json(const SpectrumReport& report);
Json to_json(const EssentialNormBounds& bounds);
Json to_json(const EssentialWitness& witness);
Json to_json(const CheckResult& check);
Json to_json(const std::vector<CheckResult>& checks);

/// Indented "key: value" listing for --pretty; long arrays are elided.
std::string render_text(const Json& report);

}  // namespace treelip
