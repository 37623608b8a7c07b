#pragma once

#include "pairtime/kinematics.hpp"
#include "pairtime/rng.hpp"
#include "pairtime/units.hpp"
#include "pairtime/vec3.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <string_view>
#include <vector>

namespace pairtime::mc {

enum class EmissionModel
{
	// Per-photon emission times are independent exponentials after injection.
	quantum,
	// Both photons share one exponential emission time.
	semiclassical,
};

EmissionModel parse_emission_model(std::string_view name);
std::string_view emission_model_name(EmissionModel model);

enum class Axis
{
	x,
	y,
	z,
};

enum class Injection
{
	// Every positron is injected at t0 = 0.
	fixed,
	// Constant rate: event i is injected uniformly inside [i T, (i+1) T), T = 1/rate.
	constant_rate,
};

struct SourceConfig
{
	Vec3 center_mm{};
	double slab_thickness_mm = 3.0;
	Axis slab_normal = Axis::z;
	// Side of the square transverse face; 0 gives a line source.
	double transverse_extent_mm = 0.0;
	Injection injection = Injection::fixed;
	double rate_per_ps = 1e-3;

	void validate() const;
	static SourceConfig point(const Vec3& at = {})
	{
		SourceConfig s;
		s.center_mm = at;
		s.slab_thickness_mm = 0.0;
		s.transverse_extent_mm = 0.0;
		return s;
	}
};

struct DetectorConfig
{
	Vec3 d1_mm{0.0, 0.0, 100.0};
	Vec3 d2_mm{0.0, 0.0, -100.0};
	// pi/2 accepts the whole hemisphere facing each detector.
	double acceptance_half_angle_rad = std::numbers::pi / 2.0;
	double jitter_sigma_ps = 0.0;

	void validate() const;
};

struct AnnihilationEvent
{
	std::uint64_t event_id = 0;
	double t0 = 0.0;
	Vec3 source_point{};
	Vec3 pc{};
	Vec3 khat{};
	kin::PhotonPair pair;
	double tau1 = 0.0; // emission time of the photon along +khat
	double tau2 = 0.0; // emission time of the photon along -khat
};

struct CoincidenceRecord
{
	std::uint64_t event_id = 0;
	double t0 = 0.0;
	// Indices refer to detectors: tau1/t1 belong to the photon seen by d1.
	double tau1 = 0.0;
	double tau2 = 0.0;
	double t1 = 0.0;
	double t2 = 0.0;
	double dtau = 0.0;
	double dt = 0.0;
	double omega1 = 0.0;
	double omega2 = 0.0;
	double acol_mrad = 0.0;
	bool detected1 = false;
	bool detected2 = false;

	bool detected() const { return detected1 && detected2; }
	friend bool operator==(const CoincidenceRecord&, const CoincidenceRecord&) = default;
};

/// Draws one event from the stream. Draw order is fixed (injection slot,
/// source point, pc, direction, two emission delays) so that both emission
/// models consume identical random numbers for a given event.
AnnihilationEvent sample_event(EventStream& rng,
                               std::uint64_t event_id,
                               const PhysicalParams& params,
                               const SourceConfig& source,
                               EmissionModel model);

/// Projects an event onto the two detectors. Always consumes two normal
/// variates for jitter, even when jitter is zero.
CoincidenceRecord detect(const AnnihilationEvent& event,
                         const DetectorConfig& detectors,
                         double c_mm_per_ps,
                         EventStream& rng);

struct RunConfig
{
	std::uint64_t n_events = 0;
	std::uint64_t seed = 1;
	std::size_t chunk_size = 65536;
	unsigned workers = 1;
	EmissionModel model = EmissionModel::quantum;
	PhysicalParams physics{};
	SourceConfig source{};
	DetectorConfig detectors{};

	void validate() const;
};

/// Receives consecutive chunks in event_id order.
using ChunkSink =
    std::function<void(std::span<const AnnihilationEvent>, std::span<const CoincidenceRecord>)>;

/// Generates config.n_events events. Output is a pure function of the
/// physics/geometry config and seed; chunk_size and workers only change
/// scheduling.
void run(const RunConfig& config, const ChunkSink& sink);

/// Convenience wrapper collecting every record.
std::vector<CoincidenceRecord> simulate(const RunConfig& config);

} // namespace pairtime::mc
