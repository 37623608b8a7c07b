#include "pairtime/units.hpp"

#include "pairtime/errors.hpp"

#include <array>
#include <cmath>
#include <string>

namespace pairtime {

namespace {

void require_positive(double value, const char* name)
{
	if (!std::isfinite(value) || value <= 0.0)
	{
		throw InvalidParameter(std::string(name) + " must be finite and positive, got " +
		                       std::to_string(value));
	}
}

struct UnitInfo
{
	Unit unit;
	std::string_view name;
	Dimension dimension;
	// Multiply by this to reach the canonical unit of the dimension
	// (keV, ps^-1, ps, mm).
	double to_canonical;
};

constexpr std::array<UnitInfo, 12> kUnits{{
    {Unit::kev, "keV", Dimension::energy, 1.0},
    {Unit::ev, "eV", Dimension::energy, 1e-3},
    {Unit::mev, "MeV", Dimension::energy, 1e3},
    {Unit::per_ps, "1/ps", Dimension::inverse_time, 1.0},
    {Unit::per_ns, "1/ns", Dimension::inverse_time, 1e-3},
    {Unit::per_s, "1/s", Dimension::inverse_time, 1e-12},
    {Unit::ps, "ps", Dimension::time, 1.0},
    {Unit::ns, "ns", Dimension::time, 1e3},
    {Unit::s, "s", Dimension::time, 1e12},
    {Unit::mm, "mm", Dimension::length, 1.0},
    {Unit::cm, "cm", Dimension::length, 10.0},
    {Unit::m, "m", Dimension::length, 1e3},
}};

const UnitInfo& info(Unit unit)
{
	for (const auto& entry : kUnits)
	{
		if (entry.unit == unit)
		{
			return entry;
		}
	}
	throw UnitError("unknown unit");
}

} // namespace

double decay_rate(const PhysicalParams& params)
{
	if (params.lifetime_override_ps)
	{
		require_positive(*params.lifetime_override_ps, "lifetime_override_ps");
		return 1.0 / *params.lifetime_override_ps;
	}
	require_positive(params.alpha, "alpha");
	require_positive(params.m_e_kev, "m_e_kev");
	require_positive(params.hbar_kev_ps, "hbar_kev_ps");
	const double alpha5 = std::pow(params.alpha, 5);
	return 0.5 * alpha5 * params.m_e_kev / params.hbar_kev_ps;
}

double PhysicalParams::gamma_per_ps() const
{
	return decay_rate(*this);
}

void PhysicalParams::validate() const
{
	require_positive(alpha, "alpha");
	require_positive(m_e_kev, "m_e_kev");
	require_positive(hbar_kev_ps, "hbar_kev_ps");
	require_positive(c_mm_per_ps, "c_mm_per_ps");
	require_positive(sigma_doppler_kev, "sigma_doppler_kev");
	if (lifetime_override_ps)
	{
		require_positive(*lifetime_override_ps, "lifetime_override_ps");
	}
}

Dimension dimension_of(Unit unit)
{
	return info(unit).dimension;
}

double convert(double value, Unit from, Unit to, const PhysicalParams& params)
{
	const UnitInfo& src = info(from);
	const UnitInfo& dst = info(to);
	if (from == to)
	{
		return value;
	}
	double canonical = value * src.to_canonical;
	if (src.dimension != dst.dimension)
	{
		using enum Dimension;
		const auto a = src.dimension;
		const auto b = dst.dimension;
		if (a == energy && b == inverse_time)
		{
			canonical /= params.hbar_kev_ps;
		}
		else if (a == inverse_time && b == energy)
		{
			canonical *= params.hbar_kev_ps;
		}
		else if (a == length && b == time)
		{
			canonical /= params.c_mm_per_ps;
		}
		else if (a == time && b == length)
		{
			canonical *= params.c_mm_per_ps;
		}
		else
		{
			throw UnitError("cannot convert " + std::string(src.name) + " to " +
			                std::string(dst.name));
		}
	}
	return canonical / dst.to_canonical;
}

Unit parse_unit(std::string_view name)
{
	for (const auto& entry : kUnits)
	{
		if (entry.name == name)
		{
			return entry.unit;
		}
	}
	throw UnitError("unknown unit '" + std::string(name) + "'");
}

std::string_view unit_name(Unit unit)
{
	return info(unit).name;
}

} // namespace pairtime
