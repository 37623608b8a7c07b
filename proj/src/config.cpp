#include "pairtime/config.hpp"

#include "pairtime/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>

namespace pairtime::cli {

namespace {

double parse_number(const std::string& key, const std::string& text)
{
	double value = 0.0;
	const char* first = text.data();
	const char* last = text.data() + text.size();
	const auto res = std::from_chars(first, last, value);
	if (res.ec != std::errc{} || res.ptr != last || !std::isfinite(value))
	{
		throw ConfigError("config: '" + key + "' expects a finite number, got '" + text + "'");
	}
	return value;
}

std::uint64_t parse_count(const std::string& key, const std::string& text)
{
	std::uint64_t value = 0;
	const char* last = text.data() + text.size();
	const auto res = std::from_chars(text.data(), last, value);
	if (res.ec != std::errc{} || res.ptr != last)
	{
		throw ConfigError("config: '" + key + "' expects a non-negative integer, got '" + text + "'");
	}
	return value;
}

mc::Axis parse_axis(const std::string& key, const std::string& text)
{
	if (text == "x")
	{
		return mc::Axis::x;
	}
	if (text == "y")
	{
		return mc::Axis::y;
	}
	if (text == "z")
	{
		return mc::Axis::z;
	}
	throw ConfigError("config: '" + key + "' expects x, y or z, got '" + text + "'");
}

const char* axis_name(mc::Axis a)
{
	switch (a)
	{
	case mc::Axis::x:
		return "x";
	case mc::Axis::y:
		return "y";
	case mc::Axis::z:
		return "z";
	}
	return "z";
}

mc::Injection parse_injection(const std::string& key, const std::string& text)
{
	if (text == "fixed")
	{
		return mc::Injection::fixed;
	}
	if (text == "constant_rate")
	{
		return mc::Injection::constant_rate;
	}
	throw ConfigError("config: '" + key + "' expects fixed or constant_rate, got '" + text + "'");
}

const char* injection_name(mc::Injection i)
{
	return i == mc::Injection::fixed ? "fixed" : "constant_rate";
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

template <typename Ref>
Setter set_number(Ref ref)
{
	return [ref](RunConfig& c, const std::string& k, const std::string& v) { ref(c) = parse_number(k, v); };
}

const std::map<std::string, Setter>& setters()
{
	static const std::map<std::string, Setter> table = {
	    {"physics.alpha", set_number([](RunConfig& c) -> double& { return c.simulation.physics.alpha; })},
	    {"physics.m_e_kev", set_number([](RunConfig& c) -> double& { return c.simulation.physics.m_e_kev; })},
	    {"physics.hbar_kev_ps", set_number([](RunConfig& c) -> double& { return c.simulation.physics.hbar_kev_ps; })},
	    {"physics.c_mm_per_ps", set_number([](RunConfig& c) -> double& { return c.simulation.physics.c_mm_per_ps; })},
	    {"physics.sigma_doppler_kev",
	     set_number([](RunConfig& c) -> double& { return c.simulation.physics.sigma_doppler_kev; })},
	    {"physics.lifetime_override_ps",
	     [](RunConfig& c, const std::string& k, const std::string& v) {
		     if (v.empty() || v == "none" || v == "null")
		     {
			     c.simulation.physics.lifetime_override_ps.reset();
		     }
		     else
		     {
			     c.simulation.physics.lifetime_override_ps = parse_number(k, v);
		     }
	     }},
	    {"source.center_x_mm", set_number([](RunConfig& c) -> double& { return c.simulation.source.center_mm.x; })},
	    {"source.center_y_mm", set_number([](RunConfig& c) -> double& { return c.simulation.source.center_mm.y; })},
	    {"source.center_z_mm", set_number([](RunConfig& c) -> double& { return c.simulation.source.center_mm.z; })},
	    {"source.slab_thickness_mm",
	     set_number([](RunConfig& c) -> double& { return c.simulation.source.slab_thickness_mm; })},
	    {"source.slab_normal",
	     [](RunConfig& c, const std::string& k, const std::string& v) {
		     c.simulation.source.slab_normal = parse_axis(k, v);
	     }},
	    {"source.transverse_extent_mm",
	     set_number([](RunConfig& c) -> double& { return c.simulation.source.transverse_extent_mm; })},
	    {"source.injection",
	     [](RunConfig& c, const std::string& k, const std::string& v) {
		     c.simulation.source.injection = parse_injection(k, v);
	     }},
	    {"source.rate_per_ps", set_number([](RunConfig& c) -> double& { return c.simulation.source.rate_per_ps; })},
	    {"detector.d1_x_mm", set_number([](RunConfig& c) -> double& { return c.simulation.detectors.d1_mm.x; })},
	    {"detector.d1_y_mm", set_number([](RunConfig& c) -> double& { return c.simulation.detectors.d1_mm.y; })},
	    {"detector.d1_z_mm", set_number([](RunConfig& c) -> double& { return c.simulation.detectors.d1_mm.z; })},
	    {"detector.d2_x_mm", set_number([](RunConfig& c) -> double& { return c.simulation.detectors.d2_mm.x; })},
	    {"detector.d2_y_mm", set_number([](RunConfig& c) -> double& { return c.simulation.detectors.d2_mm.y; })},
	    {"detector.d2_z_mm", set_number([](RunConfig& c) -> double& { return c.simulation.detectors.d2_mm.z; })},
	    {"detector.acceptance_half_angle_rad",
	     set_number([](RunConfig& c) -> double& { return c.simulation.detectors.acceptance_half_angle_rad; })},
	    {"detector.jitter_sigma_ps",
	     set_number([](RunConfig& c) -> double& { return c.simulation.detectors.jitter_sigma_ps; })},
	    {"run.events",
	     [](RunConfig& c, const std::string& k, const std::string& v) { c.simulation.n_events = parse_count(k, v); }},
	    {"run.seed",
	     [](RunConfig& c, const std::string& k, const std::string& v) { c.simulation.seed = parse_count(k, v); }},
	    {"run.chunk_size",
	     [](RunConfig& c, const std::string& k, const std::string& v) {
		     c.simulation.chunk_size = static_cast<std::size_t>(parse_count(k, v));
	     }},
	    {"run.workers",
	     [](RunConfig& c, const std::string& k, const std::string& v) {
		     c.simulation.workers = static_cast<unsigned>(parse_count(k, v));
	     }},
	    {"run.model",
	     [](RunConfig& c, const std::string&, const std::string& v) {
		     c.simulation.model = mc::parse_emission_model(v);
	     }},
	    {"run.bin_width_ps", set_number([](RunConfig& c) -> double& { return c.bin_width_ps; })},
	    {"run.out", [](RunConfig& c, const std::string&, const std::string& v) { c.out_path = v; }},
	};
	return table;
}

} // namespace

KeyValues parse_ini(std::istream& in)
{
	boost::property_tree::ptree tree;
	try
	{
		boost::property_tree::ini_parser::read_ini(in, tree);
	}
	catch (const boost::property_tree::ini_parser_error& e)
	{
		throw ConfigError(std::string("config: malformed INI: ") + e.what());
	}
	KeyValues out;
	for (const auto& [section, body] : tree)
	{
		if (body.empty())
		{
			throw ConfigError("config: key '" + section + "' must live inside a [section]");
		}
		for (const auto& [key, value] : body)
		{
			out[section + "." + key] = value.get_value<std::string>();
		}
	}
	return out;
}

KeyValues flatten_json(const nlohmann::json& j)
{
	const nlohmann::json& body = j.contains("config") ? j.at("config") : j;
	if (!body.is_object())
	{
		throw ConfigError("config: JSON root must be an object");
	}
	KeyValues out;
	for (const auto& [section, entries] : body.items())
	{
		if (!entries.is_object())
		{
			throw ConfigError("config: section '" + section + "' must be an object");
		}
		for (const auto& [key, value] : entries.items())
		{
			std::string text;
			if (value.is_string())
			{
				text = value.get<std::string>();
			}
			else if (value.is_null())
			{
				text = "none";
			}
			else if (value.is_number_integer() || value.is_number_unsigned() || value.is_number_float())
			{
				text = value.dump();
			}
			else
			{
				throw ConfigError("config: '" + section + "." + key + "' has an unsupported JSON type");
			}
			out[section + "." + key] = text;
		}
	}
	return out;
}

KeyValues read_key_values(const std::string& path)
{
	std::ifstream in(path);
	if (!in)
	{
		throw ConfigError("config: cannot open '" + path + "'");
	}
	if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
	{
		nlohmann::json j;
		try
		{
			in >> j;
		}
		catch (const nlohmann::json::exception& e)
		{
			throw ConfigError(std::string("config: malformed JSON: ") + e.what());
		}
		return flatten_json(j);
	}
	return parse_ini(in);
}

void apply_key_values(RunConfig& config, const KeyValues& values)
{
	const auto& table = setters();
	for (const auto& [key, value] : values)
	{
		const auto it = table.find(key);
		if (it == table.end())
		{
			throw ConfigError("config: unknown key '" + key + "'");
		}
		it->second(config, key, value);
	}
}

RunConfig load_run_config(const std::string& path)
{
	RunConfig config;
	apply_key_values(config, read_key_values(path));
	return config;
}

nlohmann::json to_json(const PhysicalParams& p)
{
	nlohmann::json j = {
	    {"alpha", p.alpha},
	    {"m_e_kev", p.m_e_kev},
	    {"hbar_kev_ps", p.hbar_kev_ps},
	    {"c_mm_per_ps", p.c_mm_per_ps},
	    {"sigma_doppler_kev", p.sigma_doppler_kev},
	};
	j["lifetime_override_ps"] = p.lifetime_override_ps ? nlohmann::json(*p.lifetime_override_ps) : nlohmann::json();
	return j;
}

nlohmann::json to_json(const RunConfig& c)
{
	const auto& s = c.simulation;
	return {
	    {"physics", to_json(s.physics)},
	    {"source",
	     {
	         {"center_x_mm", s.source.center_mm.x},
	         {"center_y_mm", s.source.center_mm.y},
	         {"center_z_mm", s.source.center_mm.z},
	         {"slab_thickness_mm", s.source.slab_thickness_mm},
	         {"slab_normal", axis_name(s.source.slab_normal)},
	         {"transverse_extent_mm", s.source.transverse_extent_mm},
	         {"injection", injection_name(s.source.injection)},
	         {"rate_per_ps", s.source.rate_per_ps},
	     }},
	    {"detector",
	     {
	         {"d1_x_mm", s.detectors.d1_mm.x},
	         {"d1_y_mm", s.detectors.d1_mm.y},
	         {"d1_z_mm", s.detectors.d1_mm.z},
	         {"d2_x_mm", s.detectors.d2_mm.x},
	         {"d2_y_mm", s.detectors.d2_mm.y},
	         {"d2_z_mm", s.detectors.d2_mm.z},
	         {"acceptance_half_angle_rad", s.detectors.acceptance_half_angle_rad},
	         {"jitter_sigma_ps", s.detectors.jitter_sigma_ps},
	     }},
	    {"run",
	     {
	         {"events", s.n_events},
	         {"seed", s.seed},
	         {"chunk_size", s.chunk_size},
	         {"workers", s.workers},
	         {"model", std::string(mc::emission_model_name(s.model))},
	         {"bin_width_ps", c.bin_width_ps},
	         {"out", c.out_path},
	     }},
	};
}

} // namespace pairtime::cli
