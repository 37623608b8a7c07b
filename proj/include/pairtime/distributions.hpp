#pragma once

#include "pairtime/vec3.hpp"

#include <string_view>

namespace pairtime::dist {

/// Normalized Lorentzian (width/pi) / ((omega - center)^2 + width^2), the
/// modulus squared of the relative-energy amplitude. width is the HWHM.
double lorentzian_line(double omega, double center, double width);

/// Probability density (mm^-3) of the relative photon coordinate at
/// separation r (mm), dt (ps) after injection:
///   Gamma / (4 pi c r^2) * exp(-2 Gamma (dt - r / 2c))  for 0 < r <= 2 c dt,
/// zero outside the causal ball. Throws DomainError for r <= 0.
double relative_density(double r_mm, double dt_ps, double gamma, double c_mm_per_ps);

/// Closed-form integral of relative_density over the causal ball,
/// 1 - exp(-2 Gamma dt).
double relative_norm(double gamma_dt);

/// PAL count rate at a detector x1 mm from the source, relative to its peak:
/// exp(-Gamma (dt - x1/c)) for dt >= x1/c, zero before the light arrives.
double pal_rate(double dt_ps, double x1_mm, double gamma, double c_mm_per_ps);

/// pal_rate normalized as a density in dt over (x1/c, inf).
double pal_density(double dt_ps, double x1_mm, double gamma, double c_mm_per_ps);

/// PAL rate obtained by integrating the relative density over the unobserved
/// second photon, with |x_r| = |x1| + |x2| (collinear photons). Unnormalized;
/// its log-slope in dt approaches -Gamma once Gamma dt >> 1.
double pal_marginal(double dt_ps, double x1_mm, double gamma, double c_mm_per_ps);

/// Coincidence density of the emission-time difference,
/// (Gamma/2) exp(-Gamma |dtau|).
double coincidence_pdf(double dtau_ps, double gamma);
double coincidence_cdf(double dtau_ps, double gamma);

struct CoincidencePdf
{
	double gamma = 0.0;
	double location = 0.0;

	double pdf(double x) const { return coincidence_pdf(x - location, gamma); }
	double cdf(double x) const { return coincidence_cdf(x - location, gamma); }
	double fwhm() const;
};

/// Center-of-mass momentum density (keV^-3): (pi sigma^2)^(-3/2)
/// exp(-|kc|^2 / sigma^2).
double doppler_pdf(const Vec3& kc, double sigma_kev);

/// Standard deviation of one Cartesian component of kc, sigma / sqrt(2).
double doppler_component_sd(double sigma_kev);

/// Density of the second (undetected) photon after the first detection
/// collapses the pair: exp(-Gamma (dt - x2/c)) or zero. Same form as pal_rate.
double conditional_second_photon_density(double dt_ps, double x2_mm, double gamma, double c_mm_per_ps);

enum class ModelKind
{
	double_exponential,
	lorentzian,
	gaussian,
};

/// Unit-normalized comparison shapes sharing one parameter gamma:
///   double exponential  (gamma/2) exp(-gamma |x|)
///   Lorentzian          (gamma/pi) / (x^2 + gamma^2)
///   Gaussian            (gamma/sqrt(pi)) exp(-gamma^2 x^2)
double model_shape(ModelKind kind, double x, double gamma);

/// The same three shapes with plotting prefactors (2 gamma)^-1,
/// (pi gamma^2)^-1 and (gamma pi)^-3/2. Not normalized.
double figure_shape(ModelKind kind, double x, double gamma);

ModelKind parse_model_kind(std::string_view name);
std::string_view model_name(ModelKind kind);

} // namespace pairtime::dist
