#include "pairtime/rng.hpp"

#include "pairtime/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

namespace pairtime {

std::uint64_t splitmix64(std::uint64_t& state)
{
	std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
	z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
	z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
	return z ^ (z >> 31);
}

std::uint64_t stream_key(std::uint64_t seed, std::uint64_t event_id)
{
	std::uint64_t s = seed;
	const std::uint64_t a = splitmix64(s);
	std::uint64_t e = event_id ^ 0x6a09e667f3bcc909ULL;
	const std::uint64_t b = splitmix64(e);
	return a ^ std::rotl(b, 17);
}

EventStream::EventStream(std::uint64_t key)
{
	std::uint64_t s = key;
	for (auto& word : m_state)
	{
		word = splitmix64(s);
	}
}

std::uint64_t EventStream::next()
{
	const std::uint64_t result = std::rotl(m_state[1] * 5, 7) * 9;
	const std::uint64_t t = m_state[1] << 17;
	m_state[2] ^= m_state[0];
	m_state[3] ^= m_state[1];
	m_state[1] ^= m_state[2];
	m_state[0] ^= m_state[3];
	m_state[2] ^= t;
	m_state[3] = std::rotl(m_state[3], 45);
	return result;
}

double EventStream::uniform()
{
	return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double EventStream::uniform_open()
{
	return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
}

double EventStream::exponential(double rate)
{
	if (!(rate > 0.0))
	{
		throw InvalidParameter("exponential rate must be positive");
	}
	return -std::log(uniform_open()) / rate;
}

double EventStream::normal()
{
	if (m_has_spare)
	{
		m_has_spare = false;
		return m_spare;
	}
	const double radius = std::sqrt(-2.0 * std::log(uniform_open()));
	const double phase = 2.0 * std::numbers::pi * uniform();
	m_spare = radius * std::sin(phase);
	m_has_spare = true;
	return radius * std::cos(phase);
}

Vec3 EventStream::unit_vector()
{
	const double z = 2.0 * uniform() - 1.0;
	const double phi = 2.0 * std::numbers::pi * uniform();
	const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
	return {rho * std::cos(phi), rho * std::sin(phi), z};
}

} // namespace pairtime
