#include "pairtime/analysis.hpp"

#include "pairtime/errors.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>

namespace pairtime::analysis {

namespace {

constexpr std::size_t kMinFitSamples = 2;
constexpr std::size_t kMinCompareSamples = 100;

// Maximizes f on [a, b] with Brent's method; returns the argmax.
template <typename F>
double brent_maximize(F&& f, double a, double b)
{
	constexpr int bits = std::numeric_limits<double>::digits / 2;
	std::uintmax_t iterations = 500;
	const auto res = boost::math::tools::brent_find_minima([&](double x) { return -f(x); }, a, b, bits, iterations);
	return res.first;
}

double median_of(std::vector<double> values)
{
	const std::size_t n = values.size();
	const auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
	std::nth_element(values.begin(), mid, values.end());
	const double upper = *mid;
	if (n % 2 == 1)
	{
		return upper;
	}
	const double lower = *std::max_element(values.begin(), mid);
	return 0.5 * (lower + upper);
}

std::vector<double> select(std::span<const double> samples, const std::optional<FitWindow>& window)
{
	std::vector<double> out;
	out.reserve(samples.size());
	for (double x : samples)
	{
		if (std::isnan(x))
		{
			continue;
		}
		if (window && (x < window->lo || x > window->hi))
		{
			continue;
		}
		out.push_back(x);
	}
	return out;
}

void require_fit_size(std::size_t n, std::size_t minimum, ModelKind kind)
{
	if (n < minimum)
	{
		throw FitError(std::string(dist::model_name(kind)) + " fit needs at least " + std::to_string(minimum) +
		               " samples, got " + std::to_string(n));
	}
}

double window_mass(const ScaledModel& m, const std::optional<FitWindow>& window)
{
	if (!window)
	{
		return 1.0;
	}
	return m.cdf(window->hi) - m.cdf(window->lo);
}

double log_likelihood(const ScaledModel& m, std::span<const double> data, const std::optional<FitWindow>& window)
{
	double ll = 0.0;
	for (double x : data)
	{
		ll += m.log_pdf(x);
	}
	if (window)
	{
		ll -= static_cast<double>(data.size()) * std::log(window_mass(m, window));
	}
	return ll;
}

// Scale maximizing the (possibly truncated) likelihood at fixed location,
// searched over two decades around a starting guess.
double best_scale(ModelKind kind,
                  double location,
                  double guess,
                  std::span<const double> data,
                  const std::optional<FitWindow>& window)
{
	auto ll = [&](double log_scale) {
		return log_likelihood({kind, location, std::exp(log_scale)}, data, window);
	};
	const double log_guess = std::log(guess);
	return std::exp(brent_maximize(ll, log_guess - std::log(100.0), log_guess + std::log(100.0)));
}

FitResult finish(ModelKind kind,
                 double location,
                 double scale,
                 std::vector<double>& data,
                 const std::optional<FitWindow>& window)
{
	const ScaledModel model{kind, location, scale};
	FitResult r;
	r.model = kind;
	r.location = location;
	r.scale = scale;
	r.log_likelihood = log_likelihood(model, data, window);
	r.fwhm = fwhm_from_scale(kind, scale);
	r.n_used = data.size();
	std::sort(data.begin(), data.end());
	if (window)
	{
		const double f_lo = model.cdf(window->lo);
		const double mass = window_mass(model, window);
		r.ks_statistic = ks_statistic_sorted(data, [&](double x) { return (model.cdf(x) - f_lo) / mass; });
	}
	else
	{
		r.ks_statistic = ks_statistic_sorted(data, [&](double x) { return model.cdf(x); });
	}
	return r;
}

// Root of sum gamma^2/(gamma^2 + d^2) = n/2 (Lorentzian profile score).
// The left side increases monotonically from #{d == 0} to n.
double lorentzian_scale_root(std::span<const double> offsets, int max_iterations)
{
	const double n = static_cast<double>(offsets.size());
	double hi = 0.0;
	std::size_t zeros = 0;
	for (double d : offsets)
	{
		hi = std::max(hi, std::abs(d));
		zeros += (d == 0.0);
	}
	if (static_cast<double>(zeros) >= 0.5 * n || hi == 0.0)
	{
		throw FitError("lorentzian fit: zero scale (at least half the samples sit at the location)");
	}

	auto score = [&](double g, double& slope) {
		double s = 0.0;
		slope = 0.0;
		const double g2 = g * g;
		for (double d : offsets)
		{
			const double d2 = d * d;
			const double denom = g2 + d2;
			s += g2 / denom;
			slope += 2.0 * g * d2 / (denom * denom);
		}
		return s - 0.5 * n;
	};

	// Bracket [lo, hi] with score(lo) < 0 <= score(hi).
	double lo = 0.0;
	double g = 0.5 * hi;
	std::ostringstream trace;
	for (int it = 0; it < max_iterations; ++it)
	{
		double slope = 0.0;
		const double s = score(g, slope);
		trace << " [" << it << "] gamma=" << g << " score=" << s;
		if (s < 0.0)
		{
			lo = g;
		}
		else
		{
			hi = g;
		}
		if (hi - lo <= 1e-13 * hi || std::abs(s) <= 1e-12 * n)
		{
			return g;
		}
		double next = (slope > 0.0) ? g - s / slope : 0.5 * (lo + hi);
		if (!(next > lo && next < hi))
		{
			next = 0.5 * (lo + hi);
		}
		g = next;
	}
	throw FitError("lorentzian fit: scale iteration did not converge:" + trace.str());
}

} // namespace

void TimingSpectrum::add(double x)
{
	if (std::isnan(x))
	{
		return;
	}
	++total;
	if (x < lo)
	{
		++underflow;
		return;
	}
	if (x >= hi)
	{
		++overflow;
		return;
	}
	auto idx = static_cast<std::size_t>(std::floor((x - lo) / bin_width));
	idx = std::min(idx, counts.size() - 1);
	++counts[idx];
}

void TimingSpectrum::merge(const TimingSpectrum& other)
{
	if (other.lo != lo || other.hi != hi || other.bin_width != bin_width || other.bins() != bins())
	{
		throw InvalidParameter("cannot merge spectra with different binning");
	}
	for (std::size_t i = 0; i < counts.size(); ++i)
	{
		counts[i] += other.counts[i];
	}
	underflow += other.underflow;
	overflow += other.overflow;
	total += other.total;
}

TimingSpectrum make_spectrum(double lo, double hi, double bin_width)
{
	if (!(bin_width > 0.0) || !std::isfinite(bin_width))
	{
		throw InvalidParameter("bin width must be positive");
	}
	if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi))
	{
		throw InvalidParameter("histogram range must satisfy lo < hi");
	}
	TimingSpectrum s;
	s.lo = lo;
	s.hi = hi;
	s.bin_width = bin_width;
	const double span = (hi - lo) / bin_width;
	const auto n = static_cast<std::size_t>(std::ceil(span - 1e-9 * span));
	s.counts.assign(std::max<std::size_t>(n, 1), 0);
	return s;
}

TimingSpectrum histogram(std::span<const double> samples, double bin_width, double lo, double hi)
{
	TimingSpectrum s = make_spectrum(lo, hi, bin_width);
	for (double x : samples)
	{
		s.add(x);
	}
	return s;
}

double ScaledModel::pdf(double x) const
{
	return std::exp(log_pdf(x));
}

double ScaledModel::log_pdf(double x) const
{
	const double d = x - location;
	switch (kind)
	{
	case ModelKind::double_exponential:
		return -std::log(2.0 * scale) - std::abs(d) / scale;
	case ModelKind::gaussian:
		return -0.5 * std::log(2.0 * std::numbers::pi * scale * scale) - 0.5 * d * d / (scale * scale);
	case ModelKind::lorentzian:
		return std::log(scale / std::numbers::pi) - std::log(d * d + scale * scale);
	}
	throw InvalidParameter("unknown model kind");
}

double ScaledModel::cdf(double x) const
{
	const double d = x - location;
	switch (kind)
	{
	case ModelKind::double_exponential:
		return d < 0.0 ? 0.5 * std::exp(d / scale) : 1.0 - 0.5 * std::exp(-d / scale);
	case ModelKind::gaussian:
		return 0.5 * std::erfc(-d / (scale * std::numbers::sqrt2));
	case ModelKind::lorentzian:
		return 0.5 + std::atan(d / scale) / std::numbers::pi;
	}
	throw InvalidParameter("unknown model kind");
}

double fwhm_from_scale(ModelKind kind, double scale)
{
	switch (kind)
	{
	case ModelKind::double_exponential:
		return 2.0 * std::numbers::ln2 * scale;
	case ModelKind::gaussian:
		return 2.0 * std::sqrt(2.0 * std::numbers::ln2) * scale;
	case ModelKind::lorentzian:
		return 2.0 * scale;
	}
	throw InvalidParameter("unknown model kind");
}

FitResult fit_double_exponential(std::span<const double> samples, std::optional<FitWindow> window)
{
	constexpr auto kind = ModelKind::double_exponential;
	std::vector<double> data = select(samples, window);
	require_fit_size(data.size(), kMinFitSamples, kind);

	const double location = median_of(data);
	double mad = 0.0;
	for (double x : data)
	{
		mad += std::abs(x - location);
	}
	mad /= static_cast<double>(data.size());
	if (!(mad > 0.0))
	{
		throw FitError("double exponential fit: zero scale (all samples equal)");
	}
	const double scale = window ? best_scale(kind, location, mad, data, window) : mad;
	return finish(kind, location, scale, data, window);
}

FitResult fit_gaussian(std::span<const double> samples, std::optional<FitWindow> window)
{
	constexpr auto kind = ModelKind::gaussian;
	std::vector<double> data = select(samples, window);
	require_fit_size(data.size(), kMinFitSamples, kind);

	const double n = static_cast<double>(data.size());
	const double mean = std::accumulate(data.begin(), data.end(), 0.0) / n;
	double ss = 0.0;
	for (double x : data)
	{
		ss += (x - mean) * (x - mean);
	}
	const double sigma = std::sqrt(ss / n);
	if (!(sigma > 0.0))
	{
		throw FitError("gaussian fit: zero scale (all samples equal)");
	}
	const double scale = window ? best_scale(kind, mean, sigma, data, window) : sigma;
	return finish(kind, mean, scale, data, window);
}

FitResult fit_lorentzian(std::span<const double> samples, std::optional<FitWindow> window, LorentzianOptions options)
{
	constexpr auto kind = ModelKind::lorentzian;
	std::vector<double> data = select(samples, window);
	require_fit_size(data.size(), kMinFitSamples, kind);

	auto solve_scale = [&](double location) {
		std::vector<double> offsets(data.size());
		std::transform(data.begin(), data.end(), offsets.begin(), [&](double x) { return x - location; });
		const double root = lorentzian_scale_root(offsets, options.max_iterations);
		return window ? best_scale(kind, location, root, data, window) : root;
	};

	double location = median_of(data);
	double scale = solve_scale(location);

	if (options.refine_location)
	{
		bool converged = false;
		std::ostringstream trace;
		for (int it = 0; it < options.max_iterations && !converged; ++it)
		{
			const double next_location = brent_maximize(
			    [&](double mu) { return log_likelihood({kind, mu, scale}, data, window); },
			    location - 10.0 * scale,
			    location + 10.0 * scale);
			const double next_scale = solve_scale(next_location);
			converged = std::abs(next_location - location) <= 1e-6 * scale &&
			            std::abs(next_scale - scale) <= 1e-6 * scale;
			trace << " [" << it << "] mu=" << next_location << " gamma=" << next_scale;
			location = next_location;
			scale = next_scale;
		}
		if (!converged)
		{
			throw FitError("lorentzian location refinement did not converge:" + trace.str());
		}
	}
	return finish(kind, location, scale, data, window);
}

FitResult fit_model(ModelKind kind, std::span<const double> samples, std::optional<FitWindow> window)
{
	switch (kind)
	{
	case ModelKind::double_exponential:
		return fit_double_exponential(samples, window);
	case ModelKind::gaussian:
		return fit_gaussian(samples, window);
	case ModelKind::lorentzian:
		return fit_lorentzian(samples, window);
	}
	throw InvalidParameter("unknown model kind");
}

std::vector<FitResult> model_compare(std::span<const double> samples, std::optional<FitWindow> window)
{
	const std::size_t n = select(samples, window).size();
	require_fit_size(n, kMinCompareSamples, ModelKind::double_exponential);
	std::vector<FitResult> fits{
	    fit_double_exponential(samples, window),
	    fit_lorentzian(samples, window),
	    fit_gaussian(samples, window),
	};
	std::stable_sort(fits.begin(), fits.end(), [](const FitResult& a, const FitResult& b) {
		return a.log_likelihood > b.log_likelihood;
	});
	return fits;
}

double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf)
{
	std::vector<double> sorted(samples.begin(), samples.end());
	std::sort(sorted.begin(), sorted.end());
	return ks_statistic_sorted(sorted, cdf);
}

double ks_statistic_sorted(std::span<const double> sorted, const std::function<double(double)>& cdf)
{
	const double n = static_cast<double>(sorted.size());
	double d = 0.0;
	for (std::size_t i = 0; i < sorted.size(); ++i)
	{
		const double f = cdf(sorted[i]);
		const double below = static_cast<double>(i) / n;
		const double above = static_cast<double>(i + 1) / n;
		d = std::max({d, above - f, f - below});
	}
	return d;
}

FitResult fit_binned(ModelKind kind, const TimingSpectrum& spectrum)
{
	const std::uint64_t n_in = spectrum.in_range();
	require_fit_size(n_in, kMinFitSamples, kind);

	double mean = 0.0;
	for (std::size_t i = 0; i < spectrum.bins(); ++i)
	{
		mean += static_cast<double>(spectrum.counts[i]) * spectrum.center(i);
	}
	mean /= static_cast<double>(n_in);
	double spread = 0.0;
	for (std::size_t i = 0; i < spectrum.bins(); ++i)
	{
		spread += static_cast<double>(spectrum.counts[i]) * std::abs(spectrum.center(i) - mean);
	}
	spread = std::max(spread / static_cast<double>(n_in), spectrum.bin_width);

	const FitWindow window{spectrum.lo, spectrum.hi};
	auto chi2 = [&](double location, double scale) {
		const ScaledModel m{kind, location, scale};
		const double f_lo = m.cdf(spectrum.lo);
		const double mass = m.cdf(spectrum.hi) - f_lo;
		double sum = 0.0;
		double prev = f_lo;
		for (std::size_t i = 0; i < spectrum.bins(); ++i)
		{
			const double next = m.cdf(std::min(spectrum.edge(i + 1), spectrum.hi));
			const double expected = static_cast<double>(n_in) * (next - prev) / mass;
			const double observed = static_cast<double>(spectrum.counts[i]);
			sum += (observed - expected) * (observed - expected) / std::max(observed, 1.0);
			prev = next;
		}
		return sum;
	};

	const double log_lo = std::log(spectrum.bin_width / 20.0);
	const double log_hi = std::log(spectrum.hi - spectrum.lo);
	auto scale_at = [&](double location) {
		return std::exp(brent_maximize([&](double ls) { return -chi2(location, std::exp(ls)); }, log_lo, log_hi));
	};
	const double location =
	    brent_maximize([&](double mu) { return -chi2(mu, scale_at(mu)); }, mean - 2.0 * spread, mean + 2.0 * spread);
	const double scale = scale_at(location);

	const ScaledModel m{kind, location, scale};
	FitResult r;
	r.model = kind;
	r.location = location;
	r.scale = scale;
	r.log_likelihood = -0.5 * chi2(location, scale);
	r.fwhm = fwhm_from_scale(kind, scale);
	r.n_used = static_cast<std::size_t>(n_in);
	const double f_lo = m.cdf(window.lo);
	const double mass = m.cdf(window.hi) - f_lo;
	std::uint64_t cumulative = 0;
	for (std::size_t i = 0; i < spectrum.bins(); ++i)
	{
		cumulative += spectrum.counts[i];
		const double x = std::min(spectrum.edge(i + 1), spectrum.hi);
		const double empirical = static_cast<double>(cumulative) / static_cast<double>(n_in);
		r.ks_statistic = std::max(r.ks_statistic, std::abs(empirical - (m.cdf(x) - f_lo) / mass));
	}
	return r;
}

TailFit fit_exponential_tail(const TimingSpectrum& spectrum, double from, double to)
{
	double sw = 0.0;
	double swx = 0.0;
	double swy = 0.0;
	TailFit fit;
	for (std::size_t i = 0; i < spectrum.bins(); ++i)
	{
		const double x = spectrum.center(i);
		const auto count = spectrum.counts[i];
		if (x < from || x > to || count == 0)
		{
			continue;
		}
		const double w = static_cast<double>(count);
		sw += w;
		swx += w * x;
		swy += w * std::log(w);
		++fit.bins_used;
	}
	if (fit.bins_used < 3)
	{
		throw FitError("exponential tail fit needs at least 3 populated bins");
	}
	const double xbar = swx / sw;
	const double ybar = swy / sw;
	double sxx = 0.0;
	double sxy = 0.0;
	for (std::size_t i = 0; i < spectrum.bins(); ++i)
	{
		const double x = spectrum.center(i);
		const auto count = spectrum.counts[i];
		if (x < from || x > to || count == 0)
		{
			continue;
		}
		const double w = static_cast<double>(count);
		sxx += w * (x - xbar) * (x - xbar);
		sxy += w * (x - xbar) * (std::log(w) - ybar);
	}
	fit.slope = sxy / sxx;
	fit.intercept = ybar - fit.slope * xbar;
	fit.slope_sd = std::sqrt(1.0 / sxx);
	return fit;
}

} // namespace pairtime::analysis
