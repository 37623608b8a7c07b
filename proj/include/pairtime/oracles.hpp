#pragma once

#include "pairtime/units.hpp"

#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace pairtime::oracles {

// Outcome of one numerical check of a closed-form integral.
struct QuadratureReport
{
	std::string id;          // I1, I2, I3 or NORM
	double numeric = 0.0;    // quadrature result
	double closed_form = 0.0;
	double reference = 0.0;  // value the numeric result is checked against
	double relative_error = 0.0; // |numeric - reference| / |reference|
	double target = 0.0;
	std::size_t node_count = 0;
	bool passed = false;
	std::map<std::string, double> parameters;
	std::map<std::string, double> diagnostics;
};

/// Relative-normalization integral over k. The integrand k^2/((2k-E)^2 +
/// Gamma^2) grows without bound at large k, so what is integrated is its
/// narrow-resonance form (k^2 frozen at (E/2)^2) over eta = 2k - E in
/// [-cutoff Gamma, cutoff Gamma], in units Gamma = 1, V = 1. The closed form
/// is V E^2 / (16 pi Gamma); the reference is that value times
/// (2/pi) arctan(cutoff), the exact truncated-window result. Throws
/// ConfigError for cutoff < 10 or E/Gamma < 10.
QuadratureReport verify_I1(double e_over_gamma, double cutoff, double target = 1e-9);

/// Radial k-integral of the relative wave function,
///   J = int_0^inf dk k (e^{ikr} - e^{-ikr}) e^{-2ikt} / (2k - E + i Gamma),
/// damped by exp(-eps k) for each eps in the sequence and extrapolated to
/// eps -> 0 (Richardson/Neville).
std::complex<double> radial_integral(double e, double gamma, double r, double t, double eps, std::size_t* evaluations = nullptr);

/// Residue evaluation of the pole term of J that survives for t > r/2:
///   -(i pi (E - i Gamma) / 2) exp(-(iE + Gamma)(t - r/2)),
/// and the companion term carrying (t + r/2).
std::complex<double> radial_dominant_term(double e, double gamma, double r, double t);
std::complex<double> radial_subdominant_term(double e, double gamma, double r, double t);

/// Compares |J| extrapolated to eps -> 0 with |dominant term|. r and t are in
/// units of 1/Gamma, eps values in units of Gamma. Throws OracleFailure (with
/// the eps trace) when the extrapolation does not settle.
QuadratureReport verify_I2(double e_over_gamma,
                           double r,
                           double t,
                           std::span<const double> eps_sequence,
                           double target = 1e-2);

/// Injection-time average over t0 in [-T/2, T/2] of
/// exp(-Gamma (2 t_c - 2 t0 - |x_r|/c)) Theta(tau1 - t0) Theta(tau2 - t0),
/// with detector distances x1 and |x_r| - x1 fixing t_j = tau_j + x_j/c.
/// Closed form (2 Gamma)^-1 exp(-Gamma |tau1 - tau2|). Requires T Gamma > 50.
/// x1_mm < 0 selects the midpoint split |x_r|/2.
QuadratureReport verify_I3(double tau1_ps,
                           double tau2_ps,
                           double xr_mm,
                           double gamma,
                           double window_ps,
                           double x1_mm = -1.0,
                           double c_mm_per_ps = 0.299792458,
                           double target = 1e-9);

/// Radial quadrature of the relative density over the causal ball at each
/// Gamma dt, compared with 1 - exp(-2 Gamma dt).
std::vector<QuadratureReport> verify_normalization(std::span<const double> gamma_dt_list,
                                                   const PhysicalParams& params = {},
                                                   double target = 1e-6);

/// The full self-check suite with pinned parameters.
std::vector<QuadratureReport> run_all(const PhysicalParams& params = {});

} // namespace pairtime::oracles
