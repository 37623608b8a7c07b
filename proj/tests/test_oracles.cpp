#include "pairtime/errors.hpp"
#include "pairtime/oracles.hpp"

#include <doctest.h>

using namespace pairtime;
using namespace pairtime::oracles;
using doctest::Approx;

namespace {

const double kGamma = PhysicalParams{}.gamma_per_ps();
const double kC = PhysicalParams{}.c_mm_per_ps;

} // namespace

TEST_CASE("I1 reproduces the truncated pole integral")
{
	double previous_truncation = 1.0;
	for (double cutoff : {1e2, 1e3, 1e4})
	{
		const auto r = verify_I1(1e3, cutoff);
		CAPTURE(cutoff);
		CHECK(r.passed);
		CHECK(r.relative_error < 1e-9);
		CHECK(r.numeric / r.closed_form == Approx(2.0 / std::numbers::pi * std::atan(cutoff)).epsilon(1e-12));
		const double truncation = r.diagnostics.at("truncation");
		CHECK(truncation < previous_truncation);
		// Error decays as 2/(pi cutoff).
		CHECK(r.diagnostics.at("truncation_times_cutoff") == Approx(2.0 / std::numbers::pi).epsilon(1e-3));
		previous_truncation = truncation;
		CHECK(r.node_count > 0);
	}
	CHECK(verify_I1(1e3, 1e4).numeric / verify_I1(1e3, 1e4).closed_form == Approx(0.999936).epsilon(1e-6));
	CHECK_THROWS_AS(verify_I1(1e3, 5.0), ConfigError);
	CHECK_THROWS_AS(verify_I1(1.0, 100.0), ConfigError);
}

TEST_CASE("I1 closed form scales as E^2")
{
	const auto a = verify_I1(100.0, 1e3);
	const auto b = verify_I1(400.0, 1e3);
	CHECK(b.closed_form / a.closed_form == Approx(16.0));
	CHECK(b.numeric / a.numeric == Approx(16.0).epsilon(1e-12));
}

TEST_CASE("I2 matches the dominant pole term")
{
	const double eps[] = {0.01, 0.005, 0.0025, 0.00125};
	const auto r = verify_I2(100.0, 10.0, 5.5, eps);
	CHECK(r.passed);
	CHECK(r.relative_error <= 1e-2);
	CHECK(std::abs(r.diagnostics.at("phase_difference_rad")) < 1e-2);
	CHECK(r.diagnostics.at("subdominant_ratio") == Approx(std::exp(-10.0)).epsilon(1e-12));
	// The variant with the decay exponent halved misses by tens of percent.
	CHECK(r.diagnostics.at("half_rate_variant_rel_error") > 0.1);
}

TEST_CASE("I2 dominant term tracks E")
{
	// Damping is scaled so that eps E / 2 matches the E = 100 sequence.
	const double eps_low[] = {0.02, 0.01, 0.005, 0.0025};
	const double eps_high[] = {0.005, 0.0025, 0.00125, 0.000625};
	const auto a = verify_I2(50.0, 10.0, 5.5, eps_low);
	const auto b = verify_I2(200.0, 10.0, 5.5, eps_high);
	CHECK(a.passed);
	CHECK(b.passed);
	CHECK(b.numeric / a.numeric == Approx(std::abs(std::complex<double>(200.0, -1.0)) /
	                                      std::abs(std::complex<double>(50.0, -1.0)))
	                                   .epsilon(2e-2));
}

TEST_CASE("I2 argument checks")
{
	const double eps[] = {0.01, 0.005, 0.0025};
	const double two[] = {0.01, 0.005};
	CHECK_THROWS_AS(verify_I2(10.0, 10.0, 5.5, eps), ConfigError);
	CHECK_THROWS_AS(verify_I2(100.0, 10.0, 4.0, eps), ConfigError);
	CHECK_THROWS_AS(verify_I2(100.0, 10.0, 5.5, two), ConfigError);
	// Too coarse a damping sequence cannot settle.
	const double coarse[] = {0.8, 0.4, 0.2};
	CHECK_THROWS_AS(verify_I2(100.0, 10.0, 5.5, coarse), OracleFailure);
}

TEST_CASE("I3 coincidence integral")
{
	const double window = 60.0 / kGamma;
	const auto equal = verify_I3(20.0, 20.0, 200.0, kGamma, window, -1.0, kC);
	CHECK(equal.passed);
	CHECK(equal.closed_form == Approx(1.0 / (2.0 * kGamma)).epsilon(1e-15));

	const auto r = verify_I3(0.0, 100.0, 200.0, kGamma, window, -1.0, kC);
	CHECK(r.passed);
	CHECK(r.relative_error < 1e-9);
	CHECK(r.diagnostics.at("two_gamma_I3") == Approx(std::exp(-0.8032)).epsilon(1e-4));
	CHECK(r.diagnostics.at("two_gamma_I3") == Approx(0.4479).epsilon(1e-4));

	const auto swapped = verify_I3(100.0, 0.0, 200.0, kGamma, window, -1.0, kC);
	CHECK(swapped.numeric == Approx(r.numeric).epsilon(1e-13));

	// Independent of detector placement.
	for (double xr : {0.0, 50.0, 400.0})
	{
		for (double x1 : {0.0, 0.3 * xr, xr})
		{
			const auto moved = verify_I3(0.0, 100.0, xr, kGamma, window, x1, kC);
			CHECK(moved.passed);
			CHECK(moved.numeric == Approx(r.numeric).epsilon(1e-12));
		}
	}
	CHECK_THROWS_AS(verify_I3(0.0, 0.0, 200.0, kGamma, 10.0, -1.0, kC), ConfigError);
	CHECK_THROWS_AS(verify_I3(0.0, 1e6, 200.0, kGamma, window, -1.0, kC), ConfigError);
}

TEST_CASE("relative normalization")
{
	const double x[] = {0.5, 1.0, 5.0, 0.5 * std::numbers::ln2, 1e-4};
	const auto reports = verify_normalization(x, PhysicalParams{});
	REQUIRE(reports.size() == 5);
	for (const auto& r : reports)
	{
		CHECK(r.passed);
		CHECK(r.relative_error < 1e-6);
	}
	CHECK(reports[2].closed_form == Approx(0.9999546).epsilon(1e-7));
	CHECK(reports[3].closed_form == Approx(0.5).epsilon(1e-15));
	const double bad[] = {0.0};
	CHECK_THROWS_AS(verify_normalization(bad, PhysicalParams{}), InvalidParameter);
}

TEST_CASE("full suite passes")
{
	const auto reports = run_all();
	CHECK(reports.size() == 11);
	for (const auto& r : reports)
	{
		CAPTURE(r.id);
		CHECK(r.passed);
		CHECK(r.relative_error <= r.target);
	}
}
