#pragma once

#include "pairtime/montecarlo.hpp"

#include <json.hpp>

#include <map>
#include <string>

namespace pairtime::cli {

// Everything needed to reproduce a run. Serializes to the config-echo JSON
// and loads back from either that JSON or an INI-style key = value file.
struct RunConfig
{
	mc::RunConfig simulation{};
	double bin_width_ps = 1.0;
	std::string out_path;
};

/// Flat "section.key" -> text map. Unknown keys are a ConfigError.
using KeyValues = std::map<std::string, std::string>;

KeyValues read_key_values(const std::string& path);
KeyValues parse_ini(std::istream& in);
KeyValues flatten_json(const nlohmann::json& j);

/// Applies every key to the config, validating values as it goes.
void apply_key_values(RunConfig& config, const KeyValues& values);

RunConfig load_run_config(const std::string& path);

nlohmann::json to_json(const RunConfig& config);
nlohmann::json to_json(const PhysicalParams& params);

} // namespace pairtime::cli
