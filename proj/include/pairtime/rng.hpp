#pragma once

#include "pairtime/vec3.hpp"

#include <array>
#include <cstdint>

namespace pairtime {

/// SplitMix64 finalizer. Used to derive stream keys; not a generator on its own.
std::uint64_t splitmix64(std::uint64_t& state);

/// Key of the random stream owned by one event: a hash of (seed, event_id).
/// Every event gets its own stream, so the records do not depend on how
/// events are grouped into chunks or spread across workers.
std::uint64_t stream_key(std::uint64_t seed, std::uint64_t event_id);

// xoshiro256** with hand-rolled variate transforms. Standard library
// distributions are implementation-defined; these produce the same bits on
// every platform, which the byte-identical output contract relies on.
class EventStream
{
public:
	explicit EventStream(std::uint64_t key);
	EventStream(std::uint64_t seed, std::uint64_t event_id) : EventStream(stream_key(seed, event_id)) {}

	std::uint64_t next();
	/// Uniform on [0, 1) with 53 random bits.
	double uniform();
	/// Uniform on (0, 1]; safe as a log argument.
	double uniform_open();
	double exponential(double rate);
	/// Standard normal via the Box-Muller transform.
	double normal();
	/// Uniformly distributed direction on the unit sphere.
	Vec3 unit_vector();

private:
	std::array<std::uint64_t, 4> m_state;
	double m_spare = 0.0;
	bool m_has_spare = false;
};

} // namespace pairtime
