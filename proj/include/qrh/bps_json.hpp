#pragma once

#include <string>

#include "json.hpp"
#include "qrh/bps.hpp"

namespace qrh {

std::string rational_to_string(const Rational& r);
Rational rational_from_string(const std::string& s);

nlohmann::json to_json(const RefinedBPSStructure& b);
RefinedBPSStructure bps_from_json(const nlohmann::json& j);
nlohmann::json to_json(const EMSplitting& s);
EMSplitting splitting_from_json(const nlohmann::json& j);

}  // namespace qrh
