#pragma once

#include <optional>
#include <string_view>

namespace pairtime {

// Canonical units throughout the library: ps (time), mm (length), keV
// (energy). Rates are ps^-1.
struct PhysicalParams
{
	double alpha = 1.0 / 137.035999084; // CODATA 2018
	double m_e_kev = 510.99895000;
	double hbar_kev_ps = 6.582119569e-7;
	double c_mm_per_ps = 0.299792458;
	double sigma_doppler_kev = 2.4;
	// Material-dependent para-Ps lifetime; replaces the vacuum rate when set.
	std::optional<double> lifetime_override_ps;

	/// Para-Ps two-photon decay rate in ps^-1. Recomputed on every call.
	double gamma_per_ps() const;
	double lifetime_ps() const { return 1.0 / gamma_per_ps(); }

	/// Throws InvalidParameter if any constant is non-finite or non-positive.
	void validate() const;
};

/// Vacuum para-Ps decay rate (1/2) alpha^5 m_e / hbar in ps^-1, or
/// 1/lifetime_override when an override is set.
double decay_rate(const PhysicalParams& params);

enum class Unit
{
	kev,
	ev,
	mev,
	per_ps,
	per_ns,
	per_s,
	ps,
	ns,
	s,
	mm,
	cm,
	m,
};

enum class Dimension
{
	energy,
	inverse_time,
	time,
	length,
};

Dimension dimension_of(Unit unit);

/// Converts between compatible units. Energy and inverse time are bridged by
/// hbar (E = hbar * omega); length and time by c. Anything else is a
/// UnitError.
double convert(double value, Unit from, Unit to, const PhysicalParams& params = {});

Unit parse_unit(std::string_view name);
std::string_view unit_name(Unit unit);

} // namespace pairtime
