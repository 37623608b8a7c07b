#include "pairtime/errors.hpp"
#include "pairtime/units.hpp"

#include "support.hpp"

#include <doctest.h>

#include <array>
#include <limits>

using namespace pairtime;
using doctest::Approx;

TEST_CASE("decay rate from CODATA constants")
{
	const PhysicalParams p;
	// Independent evaluation of alpha^5 m / (2 hbar) in extended precision.
	const long double alpha = 1.0L / 137.035999084L;
	const long double expected = 0.5L * std::pow(alpha, 5.0L) * 510.99895L / 6.582119569e-7L;
	CHECK(decay_rate(p) == Approx(static_cast<double>(expected)).epsilon(1e-13));
	CHECK(p.gamma_per_ps() == Approx(8.032502929e-3).epsilon(1e-9));
	CHECK(p.lifetime_ps() == Approx(124.4942).epsilon(1e-6));
	CHECK(p.lifetime_ps() >= 123.5);
	CHECK(p.lifetime_ps() <= 125.5);
	CHECK(std::abs(p.lifetime_ps() - 125.0) / 125.0 < 0.01);
}

TEST_CASE("lifetime override replaces the vacuum rate")
{
	PhysicalParams p;
	p.lifetime_override_ps = 156.0;
	CHECK(p.gamma_per_ps() == Approx(1.0 / 156.0).epsilon(1e-15));
	CHECK(p.lifetime_ps() == Approx(156.0).epsilon(1e-15));
	p.lifetime_override_ps = 0.0;
	CHECK_THROWS_AS(p.gamma_per_ps(), InvalidParameter);
}

TEST_CASE("decay rate is homogeneous in m and alpha")
{
	EventStream rng(7, 0);
	const PhysicalParams base;
	for (int i = 0; i < 200; ++i)
	{
		const double s = 0.2 + 4.0 * rng.uniform();
		PhysicalParams scaled_m = base;
		scaled_m.m_e_kev *= 2.0;
		CHECK(decay_rate(scaled_m) == Approx(2.0 * decay_rate(base)).epsilon(1e-14));
		PhysicalParams scaled_alpha = base;
		scaled_alpha.alpha *= s;
		CHECK(decay_rate(scaled_alpha) == Approx(std::pow(s, 5.0) * decay_rate(base)).epsilon(1e-12));
	}
}

TEST_CASE("non-finite or non-positive constants are rejected")
{
	const double bad[] = {0.0, -1.0, std::numeric_limits<double>::infinity(), std::numeric_limits<double>::quiet_NaN()};
	for (double v : bad)
	{
		for (double PhysicalParams::*field : {&PhysicalParams::alpha,
		                                      &PhysicalParams::m_e_kev,
		                                      &PhysicalParams::hbar_kev_ps,
		                                      &PhysicalParams::c_mm_per_ps,
		                                      &PhysicalParams::sigma_doppler_kev})
		{
			PhysicalParams p;
			p.*field = v;
			CHECK_THROWS_AS(p.validate(), InvalidParameter);
		}
	}
	PhysicalParams p;
	p.hbar_kev_ps = -1.0;
	CHECK_THROWS_AS(decay_rate(p), InvalidParameter);
}

TEST_CASE("unit conversion examples")
{
	CHECK(convert(1.0, Unit::kev, Unit::per_ps) == Approx(1.0 / 6.582119569e-7).epsilon(1e-14));
	CHECK(convert(1.0, Unit::kev, Unit::per_ps) == Approx(1.51927e6).epsilon(1e-5));
	CHECK(convert(124.5, Unit::ps, Unit::mm) == Approx(37.32416).epsilon(1e-6));
	CHECK(convert(1.0, Unit::ns, Unit::ps) == 1000.0);
	CHECK(convert(1.0, Unit::m, Unit::mm) == 1000.0);
	CHECK(convert(1.0, Unit::mev, Unit::kev) == 1000.0);
	CHECK(convert(1.0, Unit::per_ns, Unit::per_ps) == Approx(1e-3));
	for (int u = 0; u <= static_cast<int>(Unit::m); ++u)
	{
		CHECK(convert(0.0, static_cast<Unit>(u), static_cast<Unit>(u)) == 0.0);
	}
	CHECK(convert(0.0, Unit::kev, Unit::per_s) == 0.0);
	CHECK(convert(0.0, Unit::ps, Unit::cm) == 0.0);
}

TEST_CASE("round trip conversions are identities")
{
	constexpr std::array units{Unit::kev,
	                           Unit::ev,
	                           Unit::mev,
	                           Unit::per_ps,
	                           Unit::per_ns,
	                           Unit::per_s,
	                           Unit::ps,
	                           Unit::ns,
	                           Unit::s,
	                           Unit::mm,
	                           Unit::cm,
	                           Unit::m};
	EventStream rng(11, 0);
	int pairs = 0;
	for (Unit a : units)
	{
		for (Unit b : units)
		{
			double probe = 1.0;
			try
			{
				probe = convert(1.0, a, b);
			}
			catch (const UnitError&)
			{
				continue;
			}
			CHECK(std::isfinite(probe));
			++pairs;
			for (int i = 0; i < 50; ++i)
			{
				const double x = std::exp(40.0 * (rng.uniform() - 0.5));
				const double back = convert(convert(x, a, b), b, a);
				CHECK(std::abs(back - x) <= 1e-12 * x);
			}
		}
	}
	// 6 energy-like units pair among themselves, 6 time-like likewise.
	CHECK(pairs == 72);
}

TEST_CASE("incompatible dimensions raise a unit error")
{
	CHECK_THROWS_AS(convert(1.0, Unit::kev, Unit::mm), UnitError);
	CHECK_THROWS_AS(convert(1.0, Unit::ps, Unit::kev), UnitError);
	CHECK_THROWS_AS(convert(1.0, Unit::per_ps, Unit::ps), UnitError);
	CHECK_THROWS_AS(parse_unit("furlong"), UnitError);
}

TEST_CASE("unit names parse back")
{
	for (int u = 0; u <= static_cast<int>(Unit::m); ++u)
	{
		const auto unit = static_cast<Unit>(u);
		CHECK(parse_unit(unit_name(unit)) == unit);
	}
}
