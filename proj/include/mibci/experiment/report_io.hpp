#pragma once

#include <map>

#include <json.hpp>

#include "mibci/experiment/campaign.hpp"
#include "mibci/experiment/ttest.hpp"

namespace mibci::experiment {

nlohmann::json to_json(const ConfusionMatrix& cm);
nlohmann::json to_json(const Metrics& m, const std::vector<ClassLabel>& classes);
nlohmann::json to_json(const RunReport& r, bool with_history = true);
nlohmann::json to_json(const Summary& s);
nlohmann::json to_json(const RepeatedStats& s);
nlohmann::json to_json(const OvaReport& r);
nlohmann::json to_json(const std::map<ClassLabel, OvaReport>& reports);
nlohmann::json to_json(const TTestResult& r);

}  // namespace mibci::experiment
