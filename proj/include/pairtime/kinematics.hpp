#pragma once

#include "pairtime/vec3.hpp"

#include <utility>

namespace pairtime::kin {

struct CenterRelative
{
	Vec3 center;   // k1 + k2
	Vec3 relative; // (k1 - k2) / 2
};

CenterRelative to_center_relative(const Vec3& k1, const Vec3& k2);
std::pair<Vec3, Vec3> from_center_relative(const CenterRelative& cr);

// Position-space counterpart: x_c = (x1 + x2)/2, x_r = x1 - x2. Conjugate to
// the momentum split above.
CenterRelative positions_to_center_relative(const Vec3& x1, const Vec3& x2);

struct PhotonPair
{
	Vec3 k1;
	Vec3 k2;
	double omega1 = 0.0; // |k1|
	double omega2 = 0.0; // |k2|
	Vec3 khat;           // relative direction, photon 1 travels along +khat
};

/// Builds the photon pair k1 = m khat + kc/2, k2 = -m khat + kc/2. Momentum
/// is conserved exactly; the total energy differs from 2m + |kc|^2/4m at
/// O(|kc|^2/m). Throws InvalidParameter if |khat| deviates from 1 by more
/// than 1e-12.
PhotonPair pair_from_direction(const Vec3& khat, const Vec3& kc, double m_kev);

/// Para-Ps total energy to second order in the Fermion speeds.
double ps_total_energy(const Vec3& pc, double m_kev);

/// Angle in radians between k1 and -k2; zero for exactly back-to-back photons.
double acollinearity(const PhotonPair& pair);

struct PhaseInvariant
{
	double lhs; // k1.x1 + k2.x2
	double rhs; // kc.xc + kr.xr
};

PhaseInvariant phase_invariant_check(const Vec3& k1, const Vec3& k2, const Vec3& x1, const Vec3& x2);

} // namespace pairtime::kin
