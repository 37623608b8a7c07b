#pragma once

#include "pairtime/rng.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace pairtime::testing {

inline double relative_difference(double a, double b)
{
	return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

// Laplace(location, scale) as a difference of two exponentials.
inline std::vector<double> laplace_samples(std::size_t n, double location, double scale, std::uint64_t seed)
{
	std::vector<double> out(n);
	EventStream rng(seed, 0);
	for (auto& x : out)
	{
		x = location + scale * (rng.exponential(1.0) - rng.exponential(1.0));
	}
	return out;
}

inline std::vector<double> gaussian_samples(std::size_t n, double location, double sd, std::uint64_t seed)
{
	std::vector<double> out(n);
	EventStream rng(seed, 0);
	for (auto& x : out)
	{
		x = location + sd * rng.normal();
	}
	return out;
}

inline std::vector<double> cauchy_samples(std::size_t n, double location, double scale, std::uint64_t seed)
{
	std::vector<double> out(n);
	EventStream rng(seed, 0);
	for (auto& x : out)
	{
		x = location + scale * std::tan(std::numbers::pi * (rng.uniform_open() - 0.5));
	}
	return out;
}

} // namespace pairtime::testing
