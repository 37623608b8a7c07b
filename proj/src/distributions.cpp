#include "pairtime/distributions.hpp"

#include "pairtime/errors.hpp"
#include "pairtime/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace pairtime::dist {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(double value, const char* name)
{
	if (!std::isfinite(value) || value <= 0.0)
	{
		throw InvalidParameter(std::string(name) + " must be finite and positive");
	}
}

} // namespace

double lorentzian_line(double omega, double center, double width)
{
	require_positive(width, "width");
	const double d = omega - center;
	return (width / kPi) / (d * d + width * width);
}

double relative_density(double r_mm, double dt_ps, double gamma, double c_mm_per_ps)
{
	if (!(r_mm > 0.0))
	{
		throw DomainError("relative_density: r must be positive");
	}
	require_positive(gamma, "gamma");
	require_positive(c_mm_per_ps, "c");
	if (!(dt_ps > 0.0) || r_mm > 2.0 * c_mm_per_ps * dt_ps)
	{
		return 0.0;
	}
	const double exponent = -2.0 * gamma * (dt_ps - r_mm / (2.0 * c_mm_per_ps));
	return gamma / (4.0 * kPi * c_mm_per_ps * r_mm * r_mm) * std::exp(exponent);
}

double relative_norm(double gamma_dt)
{
	if (gamma_dt <= 0.0)
	{
		return 0.0;
	}
	return -std::expm1(-2.0 * gamma_dt);
}

double pal_rate(double dt_ps, double x1_mm, double gamma, double c_mm_per_ps)
{
	require_positive(gamma, "gamma");
	require_positive(c_mm_per_ps, "c");
	const double delay = dt_ps - x1_mm / c_mm_per_ps;
	if (delay < 0.0)
	{
		return 0.0;
	}
	return std::exp(-gamma * delay);
}

double pal_density(double dt_ps, double x1_mm, double gamma, double c_mm_per_ps)
{
	return gamma * pal_rate(dt_ps, x1_mm, gamma, c_mm_per_ps);
}

double pal_marginal(double dt_ps, double x1_mm, double gamma, double c_mm_per_ps)
{
	require_positive(gamma, "gamma");
	require_positive(c_mm_per_ps, "c");
	const double s1 = x1_mm / c_mm_per_ps;
	if (dt_ps < s1 || dt_ps <= 0.0)
	{
		return 0.0;
	}
	// Work in light-travel time: s = |x2|/c. The d^3x2 measure s^2 ds meets the
	// |x_r|^-2 = (s1 + s)^-2 factor of the relative density.
	auto integrand = [&](double s) {
		const double ratio = s / (s1 + s);
		return ratio * ratio * std::exp(-gamma * (dt_ps - s1 - s));
	};
	const double inner = quad::integrate(integrand, 0.0, dt_ps, 1e-12).value;
	return gamma * std::exp(-gamma * dt_ps) * inner;
}

double coincidence_pdf(double dtau_ps, double gamma)
{
	require_positive(gamma, "gamma");
	return 0.5 * gamma * std::exp(-gamma * std::abs(dtau_ps));
}

double coincidence_cdf(double dtau_ps, double gamma)
{
	require_positive(gamma, "gamma");
	if (dtau_ps < 0.0)
	{
		return 0.5 * std::exp(gamma * dtau_ps);
	}
	return 1.0 - 0.5 * std::exp(-gamma * dtau_ps);
}

double CoincidencePdf::fwhm() const
{
	return 2.0 * std::numbers::ln2 / gamma;
}

double doppler_pdf(const Vec3& kc, double sigma_kev)
{
	require_positive(sigma_kev, "sigma");
	const double s2 = sigma_kev * sigma_kev;
	return std::pow(kPi * s2, -1.5) * std::exp(-dot(kc, kc) / s2);
}

double doppler_component_sd(double sigma_kev)
{
	require_positive(sigma_kev, "sigma");
	return sigma_kev / std::numbers::sqrt2;
}

double conditional_second_photon_density(double dt_ps, double x2_mm, double gamma, double c_mm_per_ps)
{
	return pal_rate(dt_ps, x2_mm, gamma, c_mm_per_ps);
}

double model_shape(ModelKind kind, double x, double gamma)
{
	require_positive(gamma, "gamma");
	switch (kind)
	{
	case ModelKind::double_exponential:
		return 0.5 * gamma * std::exp(-gamma * std::abs(x));
	case ModelKind::lorentzian:
		return (gamma / kPi) / (x * x + gamma * gamma);
	case ModelKind::gaussian:
		return gamma * std::numbers::inv_sqrtpi * std::exp(-gamma * gamma * x * x);
	}
	throw InvalidParameter("unknown model kind");
}

double figure_shape(ModelKind kind, double x, double gamma)
{
	require_positive(gamma, "gamma");
	switch (kind)
	{
	case ModelKind::double_exponential:
		return std::exp(-gamma * std::abs(x)) / (2.0 * gamma);
	case ModelKind::lorentzian:
		return 1.0 / (kPi * gamma * gamma * (x * x + gamma * gamma));
	case ModelKind::gaussian:
		return std::pow(gamma * kPi, -1.5) * std::exp(-gamma * gamma * x * x);
	}
	throw InvalidParameter("unknown model kind");
}

ModelKind parse_model_kind(std::string_view name)
{
	if (name == "double_exponential" || name == "laplace")
	{
		return ModelKind::double_exponential;
	}
	if (name == "lorentzian" || name == "cauchy")
	{
		return ModelKind::lorentzian;
	}
	if (name == "gaussian" || name == "normal")
	{
		return ModelKind::gaussian;
	}
	throw InvalidParameter("unknown model kind '" + std::string(name) + "'");
}

std::string_view model_name(ModelKind kind)
{
	switch (kind)
	{
	case ModelKind::double_exponential:
		return "double_exponential";
	case ModelKind::lorentzian:
		return "lorentzian";
	case ModelKind::gaussian:
		return "gaussian";
	}
	throw InvalidParameter("unknown model kind");
}

} // namespace pairtime::dist
