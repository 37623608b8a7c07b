#pragma once

#include "pairtime/distributions.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace pairtime::analysis {

using dist::ModelKind;

// Uniformly binned histogram of time differences. Samples outside [lo, hi)
// land in underflow/overflow so that sum(counts) + underflow + overflow ==
// total always holds.
struct TimingSpectrum
{
	double lo = 0.0;
	double hi = 0.0;
	double bin_width = 0.0;
	std::vector<std::uint64_t> counts;
	std::uint64_t underflow = 0;
	std::uint64_t overflow = 0;
	std::uint64_t total = 0;

	std::size_t bins() const { return counts.size(); }
	double edge(std::size_t i) const { return lo + static_cast<double>(i) * bin_width; }
	double center(std::size_t i) const { return edge(i) + 0.5 * bin_width; }
	std::uint64_t in_range() const { return total - underflow - overflow; }

	void add(double x);
	/// Adds another spectrum with identical binning (sharded accumulation).
	void merge(const TimingSpectrum& other);
};

/// Empty spectrum over [lo, hi) with bins of bin_width; the last bin may be
/// cut at hi. Throws InvalidParameter for bin_width <= 0 or hi <= lo.
TimingSpectrum make_spectrum(double lo, double hi, double bin_width);

TimingSpectrum histogram(std::span<const double> samples, double bin_width, double lo, double hi);

// Fit domain. When set, only samples inside [lo, hi] are used and every model
// density is renormalized to the window, as for a spectrum recorded by an
// analyzer with a finite time range.
struct FitWindow
{
	double lo = -1000.0;
	double hi = 1000.0;
};

// Location-scale form of the three fit models:
//   double exponential: (1/2b) exp(-|x-mu|/b)
//   Gaussian:           N(mu, sigma^2)
//   Lorentzian:         (gamma/pi) / ((x-mu)^2 + gamma^2)
struct ScaledModel
{
	ModelKind kind;
	double location;
	double scale;

	double pdf(double x) const;
	double log_pdf(double x) const;
	double cdf(double x) const;
};

/// FWHM implied by a scale parameter: 2 ln2 b, 2 sqrt(2 ln2) sigma, 2 gamma.
double fwhm_from_scale(ModelKind kind, double scale);

struct FitResult
{
	ModelKind model = ModelKind::double_exponential;
	double location = 0.0;
	double scale = 0.0;
	double log_likelihood = 0.0;
	double fwhm = 0.0;
	double ks_statistic = 0.0;
	std::size_t n_used = 0;
};

/// Laplace maximum likelihood. Without a window this is closed form:
/// location = median, scale = mean |x - median|.
FitResult fit_double_exponential(std::span<const double> samples, std::optional<FitWindow> window = {});

/// Gaussian maximum likelihood (moments; population variance).
FitResult fit_gaussian(std::span<const double> samples, std::optional<FitWindow> window = {});

struct LorentzianOptions
{
	// Alternate location and scale maximization after the median-pinned fit.
	bool refine_location = false;
	int max_iterations = 200;
};

/// Lorentzian fit with location pinned at the sample median and the scale
/// solving the profile-likelihood equation sum gamma^2/(gamma^2+d^2) = n/2.
FitResult fit_lorentzian(std::span<const double> samples,
                         std::optional<FitWindow> window = {},
                         LorentzianOptions options = {});

FitResult fit_model(ModelKind kind, std::span<const double> samples, std::optional<FitWindow> window = {});

/// Fits all three models and orders them by log-likelihood, best first.
std::vector<FitResult> model_compare(std::span<const double> samples, std::optional<FitWindow> window = FitWindow{});

/// Kolmogorov-Smirnov distance sup |F_n - F| between the empirical CDF of
/// the samples and cdf. Sorts a copy; O(n log n).
double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf);
double ks_statistic_sorted(std::span<const double> sorted, const std::function<double(double)>& cdf);

/// Least-squares fit of one model to binned counts, for spectra without
/// raw samples. log_likelihood holds -chi^2/2 with Neyman weights.
FitResult fit_binned(ModelKind kind, const TimingSpectrum& spectrum);

struct TailFit
{
	double slope = 0.0;
	double intercept = 0.0;
	double slope_sd = 0.0;
	std::size_t bins_used = 0;
};

/// Weighted least squares of ln(count) against bin center over bins whose
/// center lies in [from, to]. Weights are the counts (var ln n ~ 1/n); empty
/// bins are skipped.
TailFit fit_exponential_tail(const TimingSpectrum& spectrum, double from, double to);

} // namespace pairtime::analysis
