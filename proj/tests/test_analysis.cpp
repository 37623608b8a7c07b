#include "pairtime/analysis.hpp"
#include "pairtime/errors.hpp"
#include "pairtime/units.hpp"

#include "support.hpp"

#include <doctest.h>

#include <algorithm>

using namespace pairtime;
using namespace pairtime::analysis;
using pairtime::testing::cauchy_samples;
using pairtime::testing::gaussian_samples;
using pairtime::testing::laplace_samples;
using doctest::Approx;

namespace {

const double kLifetime = PhysicalParams{}.lifetime_ps();

std::vector<ModelKind> order(const std::vector<FitResult>& fits)
{
	std::vector<ModelKind> out;
	for (const auto& f : fits)
	{
		out.push_back(f.model);
	}
	return out;
}

double normal_cdf(double x)
{
	return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

} // namespace

TEST_CASE("histogram basics")
{
	const std::vector<double> three{-1.0, 0.0, 1.0};
	const auto s = histogram(three, 1.0, -1.5, 1.5);
	CHECK(s.counts == std::vector<std::uint64_t>{1, 1, 1});
	CHECK(s.total == 3);
	CHECK(s.underflow == 0);
	CHECK(s.overflow == 0);

	const std::vector<double> outside{-10.0, -2.0, 1.5, 7.0, 9.0};
	const auto o = histogram(outside, 1.0, -1.5, 1.5);
	CHECK(o.underflow == 2);
	CHECK(o.overflow == 3);
	CHECK(o.in_range() == 0);
	CHECK(o.total == 5);

	const auto e = histogram(std::vector<double>{}, 1.0, -1.0, 1.0);
	CHECK(e.total == 0);
	CHECK(e.bins() == 2);

	for (std::size_t i = 0; i + 1 < s.bins(); ++i)
	{
		CHECK(s.edge(i) < s.edge(i + 1));
	}
	CHECK_THROWS_AS(make_spectrum(0.0, 1.0, 0.0), InvalidParameter);
	CHECK_THROWS_AS(make_spectrum(1.0, 1.0, 0.1), InvalidParameter);
}

TEST_CASE("histogram of a large Laplace sample")
{
	const double gamma = 1.0 / kLifetime;
	const auto x = laplace_samples(1'000'000, 0.0, kLifetime, 101);
	const auto s = histogram(x, 1.0, -1000.0, 1000.0);
	std::uint64_t sum = s.underflow + s.overflow;
	for (auto c : s.counts)
	{
		sum += c;
	}
	CHECK(sum == x.size());
	const auto peak = std::max_element(s.counts.begin(), s.counts.end());
	const double peak_center = s.center(static_cast<std::size_t>(peak - s.counts.begin()));
	CHECK(std::abs(peak_center) < 30.0);
	const double central = 0.5 * (s.counts[999] + s.counts[1000]);
	CHECK(central == Approx(1e6 * gamma / 2.0).epsilon(0.05));
}

TEST_CASE("histogram is permutation invariant and mergeable")
{
	auto x = laplace_samples(20000, 3.0, 50.0, 5);
	const auto a = histogram(x, 2.5, -300.0, 300.0);
	EventStream rng(6, 0);
	for (std::size_t i = x.size() - 1; i > 0; --i)
	{
		std::swap(x[i], x[static_cast<std::size_t>(rng.uniform() * static_cast<double>(i + 1))]);
	}
	const auto b = histogram(x, 2.5, -300.0, 300.0);
	CHECK(a.counts == b.counts);
	CHECK(a.underflow == b.underflow);
	CHECK(a.overflow == b.overflow);

	auto left = histogram(std::span(x).first(7000), 2.5, -300.0, 300.0);
	left.merge(histogram(std::span(x).subspan(7000), 2.5, -300.0, 300.0));
	CHECK(left.counts == a.counts);
	CHECK(left.total == a.total);
	CHECK_THROWS_AS(left.merge(make_spectrum(-300.0, 300.0, 5.0)), InvalidParameter);
}

TEST_CASE("double exponential fit")
{
	const double a = 3.0;
	const std::vector<double> sym{-a, 0.0, a};
	const auto f = fit_double_exponential(sym);
	CHECK(f.location == 0.0);
	CHECK(f.scale == Approx(2.0 * a / 3.0).epsilon(1e-15));

	const auto x = laplace_samples(1'000'000, 0.0, 124.5, 102);
	const auto big = fit_double_exponential(x);
	CHECK(big.scale == Approx(124.5).epsilon(0.02));
	CHECK(big.fwhm == Approx(2.0 * std::numbers::ln2 * big.scale).epsilon(1e-15));
	CHECK(big.n_used == x.size());
	CHECK(big.ks_statistic < 0.0025);

	// Truncated fit recovers the same scale.
	const auto windowed = fit_double_exponential(x, FitWindow{-400.0, 400.0});
	CHECK(windowed.scale == Approx(124.5).epsilon(0.02));
	CHECK(windowed.n_used < x.size());
}

TEST_CASE("Laplace fit is shift equivariant")
{
	const auto x = laplace_samples(10001, 0.0, 80.0, 103);
	const auto base = fit_double_exponential(x);
	for (double shift : {-250.0, 0.5, 1e3})
	{
		std::vector<double> y(x);
		for (auto& v : y)
		{
			v += shift;
		}
		const auto moved = fit_double_exponential(y);
		CHECK(moved.location == Approx(base.location + shift).epsilon(1e-12));
		CHECK(moved.scale == Approx(base.scale).epsilon(1e-9));
	}
}

TEST_CASE("Gaussian and Lorentzian self-consistency")
{
	const auto g = gaussian_samples(100000, 0.0, 50.0, 104);
	CHECK(fit_gaussian(g).scale == Approx(50.0).epsilon(0.01));
	const auto l = cauchy_samples(100000, 0.0, 100.0, 105);
	CHECK(fit_lorentzian(l).scale == Approx(100.0).epsilon(0.03));
	const auto refined = fit_lorentzian(l, std::nullopt, {.refine_location = true});
	CHECK(refined.scale == Approx(100.0).epsilon(0.03));
	CHECK(refined.log_likelihood >= fit_lorentzian(l).log_likelihood - 1e-9);
	CHECK(fit_gaussian(g).fwhm == Approx(2.0 * std::sqrt(2.0 * std::numbers::ln2) * fit_gaussian(g).scale));
	CHECK(fit_lorentzian(l).fwhm == Approx(2.0 * fit_lorentzian(l).scale));
}

TEST_CASE("symmetric input gives zero location for every model")
{
	auto x = laplace_samples(5000, 0.0, 100.0, 106);
	const std::size_t n = x.size();
	for (std::size_t i = 0; i < n; ++i)
	{
		x.push_back(-x[i]);
	}
	for (auto kind : {ModelKind::double_exponential, ModelKind::lorentzian, ModelKind::gaussian})
	{
		CHECK(std::abs(fit_model(kind, x).location) < 1e-9);
		CHECK(std::abs(fit_model(kind, x, FitWindow{}).location) < 1e-9);
	}
}

TEST_CASE("degenerate and undersized inputs")
{
	const std::vector<double> same(50, 4.0);
	for (auto kind : {ModelKind::double_exponential, ModelKind::lorentzian, ModelKind::gaussian})
	{
		CHECK_THROWS_AS(fit_model(kind, same), FitError);
		CHECK_THROWS_AS(fit_model(kind, std::vector<double>{1.0}), FitError);
	}
	CHECK_THROWS_AS(model_compare(std::vector<double>{1.0, 2.0, 3.0}), FitError);
}

TEST_CASE("Kolmogorov-Smirnov statistic")
{
	auto cdf = [](double x) { return normal_cdf(x); };
	CHECK(ks_statistic(std::vector<double>{0.0}, cdf) == 0.5);
	const auto g = gaussian_samples(1'000'000, 0.0, 1.0, 107);
	const double d = ks_statistic(g, cdf);
	CHECK(d < 2.5e-3);
	CHECK(d > 1e-4);
}

TEST_CASE("Laplace data are distinguishable from a variance-matched Gaussian")
{
	const double b = 124.5;
	const double sd = std::numbers::sqrt2 * b;
	auto gauss = [&](double x) { return normal_cdf(x / sd); };
	auto laplace = [&](double x) { return x < 0 ? 0.5 * std::exp(x / b) : 1.0 - 0.5 * std::exp(-x / b); };
	// Grid search for the exact sup distance between the two CDFs.
	double sup = 0.0;
	for (double x = -10.0 * b; x <= 10.0 * b; x += 1e-3 * b)
	{
		sup = std::max(sup, std::abs(laplace(x) - gauss(x)));
	}
	CHECK(sup == Approx(0.0617).epsilon(0.01));

	const auto x = laplace_samples(100000, 0.0, b, 108);
	const double d = ks_statistic(x, gauss);
	CHECK(d > 0.01);
	CHECK(d == Approx(sup).epsilon(0.1));
}

TEST_CASE("model ranking on Laplace data")
{
	const auto x = laplace_samples(100000, 0.0, kLifetime, 109);
	const auto windowed = model_compare(x);
	CHECK(order(windowed) ==
	      std::vector{ModelKind::double_exponential, ModelKind::lorentzian, ModelKind::gaussian});
	for (std::size_t i = 0; i + 1 < windowed.size(); ++i)
	{
		CHECK(windowed[i].log_likelihood > windowed[i + 1].log_likelihood);
	}
	// Without a window the Lorentzian pays for its heavy tails on every
	// sample and drops below the Gaussian.
	const auto open = model_compare(x, std::nullopt);
	CHECK(order(open) == std::vector{ModelKind::double_exponential, ModelKind::gaussian, ModelKind::lorentzian});
}

TEST_CASE("model ranking on Gaussian data")
{
	const auto x = gaussian_samples(100000, 0.0, 150.0, 110);
	CHECK(model_compare(x).front().model == ModelKind::gaussian);
	CHECK(model_compare(x, std::nullopt).front().model == ModelKind::gaussian);
}

TEST_CASE("binned fit")
{
	const auto x = laplace_samples(200000, 15.0, kLifetime, 111);
	const auto s = histogram(x, 5.0, -1000.0, 1000.0);
	const auto de = fit_binned(ModelKind::double_exponential, s);
	CHECK(de.scale == Approx(kLifetime).epsilon(0.02));
	CHECK(de.location == Approx(15.0).epsilon(0.1));
	const auto ga = fit_binned(ModelKind::gaussian, s);
	CHECK(de.log_likelihood > ga.log_likelihood);
}

TEST_CASE("exponential tail fit")
{
	const double gamma = 1.0 / kLifetime;
	std::vector<double> delays(1'000'000);
	EventStream rng(112, 0);
	for (auto& d : delays)
	{
		d = rng.exponential(gamma);
	}
	const auto s = histogram(delays, 5.0, 0.0, 2000.0);
	const auto tail = fit_exponential_tail(s, 100.0, 1200.0);
	CHECK(tail.slope == Approx(-gamma).epsilon(0.02));
	CHECK(tail.slope_sd > 0.0);
	CHECK(std::abs(tail.slope + gamma) < 5.0 * tail.slope_sd);
	CHECK_THROWS_AS(fit_exponential_tail(s, 5000.0, 6000.0), FitError);
}

TEST_CASE("scaled model consistency")
{
	for (auto kind : {ModelKind::double_exponential, ModelKind::lorentzian, ModelKind::gaussian})
	{
		const ScaledModel m{kind, 10.0, 40.0};
		CHECK(m.cdf(10.0) == Approx(0.5));
		CHECK(std::log(m.pdf(70.0)) == Approx(m.log_pdf(70.0)));
		const double half = 0.5 * fwhm_from_scale(kind, 40.0);
		CHECK(m.pdf(10.0 + half) == Approx(0.5 * m.pdf(10.0)).epsilon(1e-12));
		const double h = 1e-4;
		CHECK((m.cdf(30.0 + h) - m.cdf(30.0 - h)) / (2 * h) == Approx(m.pdf(30.0)).epsilon(1e-6));
	}
}
