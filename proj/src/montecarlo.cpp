#include "pairtime/montecarlo.hpp"

#include "pairtime/errors.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <thread>

namespace pairtime::mc {

EmissionModel parse_emission_model(std::string_view name)
{
	if (name == "quantum")
	{
		return EmissionModel::quantum;
	}
	if (name == "semiclassical")
	{
		return EmissionModel::semiclassical;
	}
	throw ConfigError("unknown emission model '" + std::string(name) + "'");
}

std::string_view emission_model_name(EmissionModel model)
{
	switch (model)
	{
	case EmissionModel::quantum:
		return "quantum";
	case EmissionModel::semiclassical:
		return "semiclassical";
	}
	throw ConfigError("unknown emission model");
}

void SourceConfig::validate() const
{
	if (!is_finite(center_mm))
	{
		throw ConfigError("source center must be finite");
	}
	if (!(slab_thickness_mm >= 0.0) || !std::isfinite(slab_thickness_mm))
	{
		throw ConfigError("slab thickness must be finite and >= 0");
	}
	if (!(transverse_extent_mm >= 0.0) || !std::isfinite(transverse_extent_mm))
	{
		throw ConfigError("transverse extent must be finite and >= 0");
	}
	if (!(rate_per_ps > 0.0) || !std::isfinite(rate_per_ps))
	{
		throw ConfigError("injection rate must be finite and > 0");
	}
}

void DetectorConfig::validate() const
{
	if (!is_finite(d1_mm) || !is_finite(d2_mm))
	{
		throw ConfigError("detector positions must be finite");
	}
	if (d1_mm == d2_mm)
	{
		throw ConfigError("detectors must be at distinct positions");
	}
	if (!(acceptance_half_angle_rad > 0.0) || acceptance_half_angle_rad > std::numbers::pi)
	{
		throw ConfigError("acceptance half-angle must be in (0, pi]");
	}
	if (!(jitter_sigma_ps >= 0.0) || !std::isfinite(jitter_sigma_ps))
	{
		throw ConfigError("detector jitter must be finite and >= 0");
	}
}

void RunConfig::validate() const
{
	if (n_events == 0)
	{
		throw ConfigError("n_events must be positive");
	}
	if (chunk_size == 0)
	{
		throw ConfigError("chunk_size must be positive");
	}
	if (workers == 0)
	{
		throw ConfigError("workers must be positive");
	}
	try
	{
		physics.validate();
	}
	catch (const InvalidParameter& e)
	{
		throw ConfigError(e.what());
	}
	source.validate();
	detectors.validate();
}

namespace {

Vec3 slab_offset(const SourceConfig& source, double u_normal, double u_a, double u_b)
{
	const double n = (u_normal - 0.5) * source.slab_thickness_mm;
	const double a = (u_a - 0.5) * source.transverse_extent_mm;
	const double b = (u_b - 0.5) * source.transverse_extent_mm;
	switch (source.slab_normal)
	{
	case Axis::x:
		return {n, a, b};
	case Axis::y:
		return {a, n, b};
	case Axis::z:
		return {a, b, n};
	}
	return {};
}

} // namespace

AnnihilationEvent sample_event(EventStream& rng,
                               std::uint64_t event_id,
                               const PhysicalParams& params,
                               const SourceConfig& source,
                               EmissionModel model)
{
	const double gamma = params.gamma_per_ps();
	const double component_sd = params.sigma_doppler_kev / std::numbers::sqrt2;

	AnnihilationEvent ev;
	ev.event_id = event_id;

	const double u_slot = rng.uniform();
	switch (source.injection)
	{
	case Injection::fixed:
		ev.t0 = 0.0;
		break;
	case Injection::constant_rate:
		ev.t0 = (static_cast<double>(event_id) + u_slot) / source.rate_per_ps;
		break;
	}

	const double u_n = rng.uniform();
	const double u_a = rng.uniform();
	const double u_b = rng.uniform();
	ev.source_point = source.center_mm + slab_offset(source, u_n, u_a, u_b);

	ev.pc.x = component_sd * rng.normal();
	ev.pc.y = component_sd * rng.normal();
	ev.pc.z = component_sd * rng.normal();

	ev.khat = rng.unit_vector();
	ev.pair = kin::pair_from_direction(ev.khat, ev.pc, params.m_e_kev);

	const double delay1 = rng.exponential(gamma);
	const double delay2 = rng.exponential(gamma);
	switch (model)
	{
	case EmissionModel::quantum:
		ev.tau1 = ev.t0 + delay1;
		ev.tau2 = ev.t0 + delay2;
		break;
	case EmissionModel::semiclassical:
		ev.tau1 = ev.t0 + delay1;
		ev.tau2 = ev.tau1;
		break;
	default:
		throw ConfigError("unknown emission model");
	}
	return ev;
}

CoincidenceRecord detect(const AnnihilationEvent& event,
                         const DetectorConfig& detectors,
                         double c_mm_per_ps,
                         EventStream& rng)
{
	const double jitter1 = detectors.jitter_sigma_ps * rng.normal();
	const double jitter2 = detectors.jitter_sigma_ps * rng.normal();

	const Vec3 to_d1 = detectors.d1_mm - event.source_point;
	const Vec3 to_d2 = detectors.d2_mm - event.source_point;

	// Photon directions are taken as +-khat (first order in the Ps velocity);
	// the photon along +khat goes to whichever detector it points at more
	// directly.
	const bool forward = angle_between(event.khat, to_d1) <= angle_between(event.khat, to_d2);
	const Vec3 dir1 = forward ? event.khat : -event.khat;
	const Vec3 dir2 = -dir1;

	CoincidenceRecord rec;
	rec.event_id = event.event_id;
	rec.t0 = event.t0;
	rec.tau1 = forward ? event.tau1 : event.tau2;
	rec.tau2 = forward ? event.tau2 : event.tau1;
	rec.omega1 = forward ? event.pair.omega1 : event.pair.omega2;
	rec.omega2 = forward ? event.pair.omega2 : event.pair.omega1;
	rec.dtau = rec.tau1 - rec.tau2;
	rec.acol_mrad = 1e3 * kin::acollinearity(event.pair);

	rec.detected1 = angle_between(dir1, to_d1) <= detectors.acceptance_half_angle_rad;
	rec.detected2 = angle_between(dir2, to_d2) <= detectors.acceptance_half_angle_rad;

	constexpr double nan = std::numeric_limits<double>::quiet_NaN();
	rec.t1 = rec.detected1 ? rec.tau1 + norm(to_d1) / c_mm_per_ps + jitter1 : nan;
	rec.t2 = rec.detected2 ? rec.tau2 + norm(to_d2) / c_mm_per_ps + jitter2 : nan;
	rec.dt = rec.t1 - rec.t2;
	return rec;
}

namespace {

struct Chunk
{
	std::vector<AnnihilationEvent> events;
	std::vector<CoincidenceRecord> records;
};

void fill_chunk(const RunConfig& config, std::uint64_t first, std::uint64_t count, Chunk& chunk)
{
	chunk.events.resize(count);
	chunk.records.resize(count);
	const double c = config.physics.c_mm_per_ps;
	for (std::uint64_t i = 0; i < count; ++i)
	{
		const std::uint64_t id = first + i;
		EventStream rng(config.seed, id);
		chunk.events[i] = sample_event(rng, id, config.physics, config.source, config.model);
		chunk.records[i] = detect(chunk.events[i], config.detectors, c, rng);
	}
}

} // namespace

void run(const RunConfig& config, const ChunkSink& sink)
{
	config.validate();

	const std::uint64_t n = config.n_events;
	const std::uint64_t chunk_size = config.chunk_size;
	const std::uint64_t n_chunks = (n + chunk_size - 1) / chunk_size;
	const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(config.workers, n_chunks));

	std::vector<Chunk> batch(workers);
	std::vector<std::exception_ptr> failures(workers);
	for (std::uint64_t base = 0; base < n_chunks; base += workers)
	{
		const std::uint64_t in_batch = std::min<std::uint64_t>(workers, n_chunks - base);
		auto work = [&](std::uint64_t slot) {
			const std::uint64_t first = (base + slot) * chunk_size;
			const std::uint64_t count = std::min(chunk_size, n - first);
			try
			{
				fill_chunk(config, first, count, batch[slot]);
			}
			catch (...)
			{
				failures[slot] = std::current_exception();
			}
		};
		if (in_batch == 1)
		{
			work(0);
		}
		else
		{
			std::vector<std::jthread> threads;
			threads.reserve(in_batch);
			for (std::uint64_t slot = 0; slot < in_batch; ++slot)
			{
				threads.emplace_back(work, slot);
			}
		}
		for (std::uint64_t slot = 0; slot < in_batch; ++slot)
		{
			if (failures[slot])
			{
				std::rethrow_exception(failures[slot]);
			}
		}
		for (std::uint64_t slot = 0; slot < in_batch; ++slot)
		{
			sink(batch[slot].events, batch[slot].records);
		}
	}
}

std::vector<CoincidenceRecord> simulate(const RunConfig& config)
{
	std::vector<CoincidenceRecord> out;
	out.reserve(config.n_events);
	run(config, [&](std::span<const AnnihilationEvent>, std::span<const CoincidenceRecord> records) {
		out.insert(out.end(), records.begin(), records.end());
	});
	return out;
}

} // namespace pairtime::mc
