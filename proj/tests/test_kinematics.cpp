#include "pairtime/errors.hpp"
#include "pairtime/kinematics.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace pairtime;
using doctest::Approx;

namespace {

constexpr double kM = 510.99895;

bool close(const Vec3& a, const Vec3& b, double tol)
{
	return norm(a - b) <= tol * std::max(1.0, std::max(norm(a), norm(b)));
}

Vec3 random_vec(EventStream& rng, double scale)
{
	return {scale * rng.normal(), scale * rng.normal(), scale * rng.normal()};
}

} // namespace

TEST_CASE("center/relative examples")
{
	auto cr = kin::to_center_relative({0, 0, 511}, {0, 0, -511});
	CHECK(cr.center == Vec3{0, 0, 0});
	CHECK(cr.relative == Vec3{0, 0, 511});

	cr = kin::to_center_relative({0, 0, 512.2}, {0, 0, -509.8});
	CHECK(cr.center.z == Approx(2.4).epsilon(1e-12));
	CHECK(cr.relative.z == Approx(511.0).epsilon(1e-12));
	CHECK(cr.center.x == 0.0);
	CHECK(cr.relative.y == 0.0);
}

TEST_CASE("center/relative round trip on random pairs")
{
	EventStream rng(3, 0);
	for (int i = 0; i < 10000; ++i)
	{
		const Vec3 k1 = random_vec(rng, std::exp(6.0 * rng.uniform()));
		const Vec3 k2 = random_vec(rng, std::exp(6.0 * rng.uniform()));
		const auto [a, b] = kin::from_center_relative(kin::to_center_relative(k1, k2));
		REQUIRE(close(a, k1, 1e-12));
		REQUIRE(close(b, k2, 1e-12));
	}
}

TEST_CASE("position split")
{
	const auto cr = kin::positions_to_center_relative({2, 0, 4}, {0, 2, -4});
	CHECK(cr.center == Vec3{1, 1, 0});
	CHECK(cr.relative == Vec3{2, -2, 8});
}

TEST_CASE("photon pair examples")
{
	auto pair = kin::pair_from_direction({0, 0, 1}, {0, 0, 0}, kM);
	CHECK(pair.omega1 == kM);
	CHECK(pair.omega2 == kM);
	CHECK(pair.k1 == -pair.k2);
	CHECK(kin::acollinearity(pair) == 0.0);

	pair = kin::pair_from_direction({0, 0, 1}, {0, 0, 2.4}, kM);
	CHECK(pair.omega1 - pair.omega2 == Approx(2.4).epsilon(1e-12));

	pair = kin::pair_from_direction({0, 0, 1}, {2.4, 0, 0}, kM);
	const double acol = kin::acollinearity(pair);
	// Exact angle between m z + kc/2 and m z - kc/2.
	CHECK(acol == Approx(2.0 * std::atan(1.2 / kM)).epsilon(1e-12));
	CHECK(acol * 1e3 == Approx(2.4 / kM * 1e3).epsilon(1e-5));
	CHECK(acol * 1e3 == Approx(4.7).epsilon(0.01));
}

TEST_CASE("non-unit direction is rejected")
{
	CHECK_THROWS_AS(kin::pair_from_direction({0, 0, 1.001}, {}, kM), InvalidParameter);
	CHECK_THROWS_AS(kin::pair_from_direction({0, 0, 0}, {}, kM), InvalidParameter);
	CHECK_NOTHROW(kin::pair_from_direction({0, 0, 1.0 + 1e-13}, {}, kM));
}

TEST_CASE("generated pairs satisfy the conservation invariants")
{
	EventStream rng(5, 0);
	const double sd = 2.4 / std::sqrt(2.0);
	double worst_projection = 0.0;
	for (int i = 0; i < 20000; ++i)
	{
		const Vec3 khat = rng.unit_vector();
		const Vec3 kc = random_vec(rng, sd);
		const auto pair = kin::pair_from_direction(khat, kc, kM);
		REQUIRE(norm(pair.k1 + pair.k2 - kc) <= 1e-12 * kM);
		REQUIRE(pair.omega1 == norm(pair.k1));
		REQUIRE(pair.omega2 == norm(pair.k2));
		const double total = pair.omega1 + pair.omega2;
		const double k = norm(kc);
		REQUIRE(total >= 2.0 * kM * (1.0 - 1e-15));
		REQUIRE(total <= 2.0 * kM + k + k * k / (4.0 * kM) + 1e-12);
		// Energy split follows the projection of kc on the emission axis.
		const double residual = std::abs(pair.omega1 - pair.omega2 - dot(khat, kc));
		REQUIRE(residual <= k * k / kM);
		worst_projection = std::max(worst_projection, residual / (k * k / kM));
	}
	CHECK(worst_projection > 0.0);
}

TEST_CASE("Ps total energy")
{
	CHECK(kin::ps_total_energy({0, 0, 0}, kM) == Approx(1021.9979).epsilon(1e-12));
	CHECK(kin::ps_total_energy({0, 2.4, 0}, kM) - 2.0 * kM == Approx(2.818e-3).epsilon(1e-3));
}

TEST_CASE("phase invariant k1.x1 + k2.x2 = kc.xc + kr.xr")
{
	auto ph = kin::phase_invariant_check({1, 0, 0}, {0, 3, 0}, {2, 0, 0}, {0, 4, 0});
	CHECK(ph.lhs == 14.0);
	CHECK(ph.rhs == 14.0);

	ph = kin::phase_invariant_check({}, {}, {}, {});
	CHECK(ph.lhs == 0.0);
	CHECK(ph.rhs == 0.0);

	EventStream rng(9, 0);
	for (int i = 0; i < 5000; ++i)
	{
		const Vec3 k1 = random_vec(rng, 500.0);
		const Vec3 k2 = random_vec(rng, 500.0);
		const Vec3 x1 = random_vec(rng, 100.0);
		const Vec3 x2 = random_vec(rng, 100.0);
		ph = kin::phase_invariant_check(k1, k2, x1, x2);
		const double scale = norm(k1) * norm(x1) + norm(k2) * norm(x2);
		REQUIRE(std::abs(ph.lhs - ph.rhs) < 1e-12 * scale);
	}
}

TEST_CASE("vector helpers")
{
	CHECK(norm(Vec3{1e-200, 1e-200, 0}) == Approx(std::sqrt(2.0) * 1e-200));
	CHECK(norm(Vec3{1e200, 1e200, 0}) == Approx(std::sqrt(2.0) * 1e200));
	CHECK(cross(Vec3{1, 0, 0}, Vec3{0, 1, 0}) == Vec3{0, 0, 1});
	CHECK(angle_between({1, 0, 0}, {0, 1, 0}) == Approx(std::numbers::pi / 2));
	CHECK(angle_between({1, 0, 0}, {1, 1e-9, 0}) == Approx(1e-9).epsilon(1e-9));
}
