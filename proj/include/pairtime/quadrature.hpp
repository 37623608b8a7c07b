#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cstddef>
#include <utility>

namespace pairtime::quad {

struct Result
{
	double value = 0.0;
	double error_estimate = 0.0;
	std::size_t evaluations = 0;
};

// Adaptive 31-point Gauss-Kronrod on [a, b] with evaluation counting. Thin
// wrapper over Boost.Math so callers get a node count for their reports.
template <typename F>
Result integrate(F&& f, double a, double b, double rel_tol = 1e-12, unsigned max_depth = 15)
{
	Result out;
	auto counted = [&](double x) {
		++out.evaluations;
		return f(x);
	};
	out.value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
	    counted, a, b, max_depth, rel_tol, &out.error_estimate);
	return out;
}

} // namespace pairtime::quad
