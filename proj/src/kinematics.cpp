#include "pairtime/kinematics.hpp"

#include "pairtime/errors.hpp"

#include <atomic>
#include <cmath>
#include <iostream>
#include <string>

namespace pairtime::kin {

CenterRelative to_center_relative(const Vec3& k1, const Vec3& k2)
{
	return {k1 + k2, 0.5 * (k1 - k2)};
}

std::pair<Vec3, Vec3> from_center_relative(const CenterRelative& cr)
{
	const Vec3 half_center = 0.5 * cr.center;
	return {cr.relative + half_center, half_center - cr.relative};
}

CenterRelative positions_to_center_relative(const Vec3& x1, const Vec3& x2)
{
	return {0.5 * (x1 + x2), x1 - x2};
}

PhotonPair pair_from_direction(const Vec3& khat, const Vec3& kc, double m_kev)
{
	const double len = norm(khat);
	if (!(std::abs(len - 1.0) <= 1e-12))
	{
		throw InvalidParameter("khat must be a unit vector, |khat| = " + std::to_string(len));
	}
	if (!is_finite(kc) || !std::isfinite(m_kev) || m_kev <= 0.0)
	{
		throw InvalidParameter("pair_from_direction: non-finite kc or non-positive mass");
	}

	// The pair is only meaningful for |kc| << m; say so once per process.
	static std::atomic<bool> warned{false};
	if (norm(kc) > 0.1 * m_kev && !warned.exchange(true))
	{
		std::clog << "warning: center momentum " << norm(kc) << " keV exceeds 0.1 m; "
		          << "first-order pair kinematics is inaccurate\n";
	}

	PhotonPair pair;
	pair.khat = khat;
	const Vec3 half_center = 0.5 * kc;
	pair.k1 = m_kev * khat + half_center;
	pair.k2 = half_center - m_kev * khat;
	pair.omega1 = norm(pair.k1);
	pair.omega2 = norm(pair.k2);
	return pair;
}

double ps_total_energy(const Vec3& pc, double m_kev)
{
	return 2.0 * m_kev + dot(pc, pc) / (4.0 * m_kev);
}

double acollinearity(const PhotonPair& pair)
{
	return angle_between(pair.k1, -pair.k2);
}

PhaseInvariant phase_invariant_check(const Vec3& k1, const Vec3& k2, const Vec3& x1, const Vec3& x2)
{
	const CenterRelative k = to_center_relative(k1, k2);
	const CenterRelative x = positions_to_center_relative(x1, x2);
	return {dot(k1, x1) + dot(k2, x2), dot(k.center, x.center) + dot(k.relative, x.relative)};
}

} // namespace pairtime::kin
