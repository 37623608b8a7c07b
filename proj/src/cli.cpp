#include "pairtime/cli.hpp"

#include "pairtime/analysis.hpp"
#include "pairtime/config.hpp"
#include "pairtime/distributions.hpp"
#include "pairtime/errors.hpp"
#include "pairtime/oracles.hpp"
#include "pairtime/records_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

namespace pairtime::cli {

namespace {

using nlohmann::json;

std::string utc_timestamp()
{
	const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
	std::tm tm{};
	gmtime_r(&now, &tm);
	std::ostringstream s;
	s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
	return s.str();
}

std::ofstream open_output(const std::string& path)
{
	std::ofstream out(path, std::ios::binary);
	if (!out)
	{
		throw IoError("cannot write output file '" + path + "'");
	}
	return out;
}

void close_output(std::ofstream& out, const std::string& path)
{
	out.flush();
	if (!out)
	{
		throw IoError("failed while writing '" + path + "'");
	}
}

// Every file-producing command leaves <output>.config.json next to its main
// output. The timestamp lives only here so the outputs stay byte-stable.
void write_config_echo(const std::string& output_path, const std::string& command, json body)
{
	body["command"] = command;
	body["created_utc"] = utc_timestamp();
	const std::string path = output_path + ".config.json";
	auto out = open_output(path);
	out << body.dump(2) << '\n';
	close_output(out, path);
}

// Physical parameters from an optional config file.
PhysicalParams physics_from(const std::string& config_path)
{
	if (config_path.empty())
	{
		return {};
	}
	return load_run_config(config_path).simulation.physics;
}

json fit_to_json(const analysis::FitResult& f, std::size_t rank)
{
	return {
	    {"model", std::string(dist::model_name(f.model))},
	    {"location_ps", f.location},
	    {"scale_ps", f.scale},
	    {"fwhm_ps", f.fwhm},
	    {"loglik", f.log_likelihood},
	    {"ks", f.ks_statistic},
	    {"n", f.n_used},
	    {"rank", rank},
	};
}

json report_to_json(const oracles::QuadratureReport& r)
{
	return {
	    {"id", r.id},
	    {"numeric", r.numeric},
	    {"closed_form", r.closed_form},
	    {"reference", r.reference},
	    {"relative_error", r.relative_error},
	    {"target", r.target},
	    {"node_count", r.node_count},
	    {"passed", r.passed},
	    {"parameters", r.parameters},
	    {"diagnostics", r.diagnostics},
	};
}

void write_spectrum_csv(std::ostream& out, const analysis::TimingSpectrum& s)
{
	out << "bin_lo_ps,bin_hi_ps,count\n";
	out << "-inf," << io::format_double(s.lo) << ',' << s.underflow << '\n';
	for (std::size_t i = 0; i < s.bins(); ++i)
	{
		const double hi = std::min(s.edge(i + 1), s.hi);
		out << io::format_double(s.edge(i)) << ',' << io::format_double(hi) << ',' << s.counts[i] << '\n';
	}
	out << io::format_double(s.hi) << ",inf," << s.overflow << '\n';
}

analysis::TimingSpectrum read_spectrum_csv(const std::string& path)
{
	std::ifstream in(path);
	if (!in)
	{
		throw IoError("cannot open '" + path + "'");
	}
	std::string line;
	std::getline(in, line);
	struct Row
	{
		double lo, hi;
		std::uint64_t count;
	};
	std::vector<Row> rows;
	while (std::getline(in, line))
	{
		if (line.empty())
		{
			continue;
		}
		std::istringstream cells(line);
		std::string a, b, c;
		if (!std::getline(cells, a, ',') || !std::getline(cells, b, ',') || !std::getline(cells, c))
		{
			throw IoError("malformed spectrum row '" + line + "'");
		}
		try
		{
			rows.push_back({std::stod(a), std::stod(b), std::stoull(c)});
		}
		catch (const std::exception&)
		{
			throw IoError("malformed spectrum row '" + line + "'");
		}
	}
	if (rows.size() < 3 || !std::isinf(rows.front().lo) || !std::isinf(rows.back().hi))
	{
		throw IoError("spectrum file needs underflow, bins and overflow rows");
	}
	const double lo = rows[1].lo;
	const double hi = rows[rows.size() - 2].hi;
	const double width = rows[1].hi - rows[1].lo;
	auto s = analysis::make_spectrum(lo, hi, width);
	if (s.bins() != rows.size() - 2)
	{
		throw IoError("spectrum bins are not uniform");
	}
	s.underflow = rows.front().count;
	s.overflow = rows.back().count;
	s.total = s.underflow + s.overflow;
	for (std::size_t i = 0; i < s.bins(); ++i)
	{
		s.counts[i] = rows[i + 1].count;
		s.total += rows[i + 1].count;
	}
	return s;
}

struct ConstantsArgs
{
	std::string config;
	std::optional<double> lifetime_override;
	std::string out;
};

int cmd_constants(const ConstantsArgs& a, std::ostream& out)
{
	PhysicalParams p = physics_from(a.config);
	if (a.lifetime_override)
	{
		p.lifetime_override_ps = *a.lifetime_override;
	}
	p.validate();
	const json j = {
	    {"gamma_per_ps", p.gamma_per_ps()},
	    {"lifetime_ps", p.lifetime_ps()},
	    {"sigma_doppler_kev", p.sigma_doppler_kev},
	    {"c_mm_per_ps", p.c_mm_per_ps},
	    {"hbar_kev_ps", p.hbar_kev_ps},
	};
	if (a.out.empty())
	{
		out << j.dump(2) << '\n';
		return kExitOk;
	}
	auto file = open_output(a.out);
	file << j.dump(2) << '\n';
	close_output(file, a.out);
	write_config_echo(a.out, "constants", {{"physics", to_json(p)}});
	return kExitOk;
}

struct SimulateArgs
{
	std::optional<std::uint64_t> events;
	std::optional<std::uint64_t> seed;
	std::optional<std::string> model;
	std::optional<unsigned> workers;
	std::optional<std::size_t> chunk_size;
	std::string config;
	std::string out;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out)
{
	RunConfig config = a.config.empty() ? RunConfig{} : load_run_config(a.config);
	if (a.events)
	{
		config.simulation.n_events = *a.events;
	}
	if (a.seed)
	{
		config.simulation.seed = *a.seed;
	}
	if (a.model)
	{
		config.simulation.model = mc::parse_emission_model(*a.model);
	}
	if (a.workers)
	{
		config.simulation.workers = *a.workers;
	}
	if (a.chunk_size)
	{
		config.simulation.chunk_size = *a.chunk_size;
	}
	if (!a.out.empty())
	{
		config.out_path = a.out;
	}
	config.simulation.validate();

	std::ofstream file;
	std::ostream* sink = &out;
	if (!config.out_path.empty() && config.out_path != "-")
	{
		file = open_output(config.out_path);
		sink = &file;
	}
	io::RecordCsvWriter writer(*sink);
	mc::run(config.simulation,
	        [&](std::span<const mc::AnnihilationEvent>, std::span<const mc::CoincidenceRecord> records) {
		        writer.write(records);
	        });
	if (file.is_open())
	{
		close_output(file, config.out_path);
		write_config_echo(config.out_path, "simulate", {{"config", to_json(config)}});
	}
	return kExitOk;
}

struct AnalyzeArgs
{
	std::string in;
	std::string in_spectrum;
	std::string column = "dtau_ps";
	double bin_width = 1.0;
	double range_lo = -1000.0;
	double range_hi = 1000.0;
	std::string fit = "all";
	std::string fit_window = "range";
	std::string out_spectrum;
	std::string out_fit;
};

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out)
{
	if (a.in.empty() == a.in_spectrum.empty())
	{
		throw ConfigError("analyze: give exactly one of --in or --in-spectrum");
	}
	if (a.fit_window != "range" && a.fit_window != "none")
	{
		throw ConfigError("analyze: --fit-window must be range or none");
	}
	std::vector<dist::ModelKind> kinds;
	if (a.fit == "all")
	{
		kinds = {dist::ModelKind::double_exponential, dist::ModelKind::lorentzian, dist::ModelKind::gaussian};
	}
	else if (a.fit != "none")
	{
		kinds = {dist::parse_model_kind(a.fit)};
	}

	analysis::TimingSpectrum spectrum;
	std::vector<analysis::FitResult> fits;
	if (!a.in.empty())
	{
		const bool detector_column = a.column == "dt_ps" || a.column == "t1_ps" || a.column == "t2_ps";
		const std::vector<double> samples = io::read_column_file(a.in, a.column, detector_column);
		spectrum = analysis::histogram(samples, a.bin_width, a.range_lo, a.range_hi);
		std::optional<analysis::FitWindow> window;
		if (a.fit_window == "range")
		{
			window = analysis::FitWindow{a.range_lo, a.range_hi};
		}
		for (auto kind : kinds)
		{
			fits.push_back(analysis::fit_model(kind, samples, window));
		}
	}
	else
	{
		spectrum = read_spectrum_csv(a.in_spectrum);
		for (auto kind : kinds)
		{
			fits.push_back(analysis::fit_binned(kind, spectrum));
		}
	}
	std::stable_sort(fits.begin(), fits.end(), [](const auto& x, const auto& y) {
		return x.log_likelihood > y.log_likelihood;
	});

	json fit_json = json::array();
	for (std::size_t i = 0; i < fits.size(); ++i)
	{
		fit_json.push_back(fit_to_json(fits[i], i + 1));
	}

	if (!a.out_spectrum.empty())
	{
		auto file = open_output(a.out_spectrum);
		write_spectrum_csv(file, spectrum);
		close_output(file, a.out_spectrum);
	}
	if (!a.out_fit.empty())
	{
		auto file = open_output(a.out_fit);
		file << fit_json.dump(2) << '\n';
		close_output(file, a.out_fit);
	}
	else
	{
		out << fit_json.dump(2) << '\n';
	}

	const std::string echo_beside = !a.out_fit.empty() ? a.out_fit : a.out_spectrum;
	if (!echo_beside.empty())
	{
		write_config_echo(echo_beside,
		                  "analyze",
		                  {{"analyze",
		                    {{"in", a.in},
		                     {"in_spectrum", a.in_spectrum},
		                     {"column", a.column},
		                     {"bin_width_ps", a.bin_width},
		                     {"range_lo_ps", a.range_lo},
		                     {"range_hi_ps", a.range_hi},
		                     {"fit", a.fit},
		                     {"fit_window", a.fit_window},
		                     {"out_spectrum", a.out_spectrum},
		                     {"out_fit", a.out_fit}}}});
	}
	return kExitOk;
}

struct PdfArgs
{
	std::string dist;
	double from = -1000.0;
	double to = 1000.0;
	std::size_t points = 201;
	std::optional<double> gamma;
	double dt = 500.0;
	double x1 = 0.0;
	double x2 = 0.0;
	std::optional<double> center;
	std::optional<double> width;
	std::optional<double> sigma;
	std::string config;
	std::string out;
};

int cmd_pdf(const PdfArgs& a, std::ostream& out)
{
	const PhysicalParams p = physics_from(a.config);
	if (a.points < 2 || !(a.to > a.from))
	{
		throw ConfigError("pdf: need --points >= 2 and --to > --from");
	}
	const double gamma_rate = a.gamma.value_or(p.gamma_per_ps());
	const double c = p.c_mm_per_ps;

	std::vector<std::string> columns{"x"};
	std::function<std::vector<double>(double)> row;
	const std::string& d = a.dist;
	if (d == "figure")
	{
		const double g = a.gamma.value_or(1.0);
		columns = {"x", "double_exponential", "lorentzian", "gaussian"};
		row = [g](double x) {
			return std::vector<double>{dist::figure_shape(dist::ModelKind::double_exponential, x, g),
			                           dist::figure_shape(dist::ModelKind::lorentzian, x, g),
			                           dist::figure_shape(dist::ModelKind::gaussian, x, g)};
		};
	}
	else if (d == "double_exponential" || d == "lorentzian" || d == "gaussian")
	{
		const auto kind = dist::parse_model_kind(d);
		columns.push_back("density");
		row = [kind, gamma_rate](double x) { return std::vector<double>{dist::model_shape(kind, x, gamma_rate)}; };
	}
	else if (d == "coincidence")
	{
		columns.push_back("density");
		row = [gamma_rate](double x) { return std::vector<double>{dist::coincidence_pdf(x, gamma_rate)}; };
	}
	else if (d == "lorentzian_line")
	{
		const double center = a.center.value_or(2.0 * p.m_e_kev);
		const double width = a.width.value_or(gamma_rate * p.hbar_kev_ps);
		columns.push_back("density");
		row = [center, width](double x) { return std::vector<double>{dist::lorentzian_line(x, center, width)}; };
	}
	else if (d == "relative_density")
	{
		columns.push_back("density");
		const double dt = a.dt;
		row = [=](double x) {
			return std::vector<double>{x > 0.0 ? dist::relative_density(x, dt, gamma_rate, c) : 0.0};
		};
	}
	else if (d == "pal_rate")
	{
		columns.push_back("rate");
		const double x1 = a.x1;
		row = [=](double x) { return std::vector<double>{dist::pal_rate(x, x1, gamma_rate, c)}; };
	}
	else if (d == "pal_marginal")
	{
		columns.push_back("rate");
		const double x1 = a.x1;
		row = [=](double x) { return std::vector<double>{dist::pal_marginal(x, x1, gamma_rate, c)}; };
	}
	else if (d == "conditional_second_photon")
	{
		columns.push_back("density");
		const double x2 = a.x2;
		row = [=](double x) {
			return std::vector<double>{dist::conditional_second_photon_density(x, x2, gamma_rate, c)};
		};
	}
	else if (d == "doppler")
	{
		const double sigma = a.sigma.value_or(p.sigma_doppler_kev);
		columns.push_back("density");
		row = [sigma](double x) { return std::vector<double>{dist::doppler_pdf({0.0, 0.0, x}, sigma)}; };
	}
	else
	{
		throw ConfigError("pdf: unknown distribution '" + d + "'");
	}

	std::ofstream file;
	std::ostream* sink = &out;
	if (!a.out.empty())
	{
		file = open_output(a.out);
		sink = &file;
	}
	for (std::size_t i = 0; i < columns.size(); ++i)
	{
		*sink << (i ? "," : "") << columns[i];
	}
	*sink << '\n';
	const double step = (a.to - a.from) / static_cast<double>(a.points - 1);
	for (std::size_t i = 0; i < a.points; ++i)
	{
		const double x = (i + 1 == a.points) ? a.to : a.from + step * static_cast<double>(i);
		*sink << io::format_double(x);
		for (double v : row(x))
		{
			*sink << ',' << io::format_double(v);
		}
		*sink << '\n';
	}
	if (file.is_open())
	{
		close_output(file, a.out);
		write_config_echo(a.out,
		                  "pdf",
		                  {{"physics", to_json(p)},
		                   {"pdf",
		                    {{"dist", a.dist},
		                     {"from", a.from},
		                     {"to", a.to},
		                     {"points", a.points},
		                     {"gamma", gamma_rate},
		                     {"dt_ps", a.dt},
		                     {"x1_mm", a.x1},
		                     {"x2_mm", a.x2}}}});
	}
	return kExitOk;
}

struct VerifyArgs
{
	std::string config;
	std::string out;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err)
{
	const PhysicalParams p = physics_from(a.config);
	const auto reports = oracles::run_all(p);
	json arr = json::array();
	bool ok = true;
	for (const auto& r : reports)
	{
		arr.push_back(report_to_json(r));
		if (!r.passed)
		{
			ok = false;
			err << "verify: " << r.id << " failed, relative error " << r.relative_error << " > target " << r.target
			    << '\n';
		}
	}
	if (a.out.empty())
	{
		out << arr.dump(2) << '\n';
	}
	else
	{
		auto file = open_output(a.out);
		file << arr.dump(2) << '\n';
		close_output(file, a.out);
		write_config_echo(a.out, "verify", {{"physics", to_json(p)}});
	}
	return ok ? kExitOk : kExitVerification;
}

} // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err)
{
	CLI::App app{"Positron annihilation photon timing: simulation, analysis and numerical checks", "pairtime"};
	app.require_subcommand(1);

	ConstantsArgs constants;
	auto* c = app.add_subcommand("constants", "Print derived physical constants as JSON");
	c->add_option("--config", constants.config, "Config file (INI or JSON)");
	c->add_option("--lifetime-override", constants.lifetime_override, "Material para-Ps lifetime in ps");
	c->add_option("--out", constants.out, "Write JSON here instead of stdout");

	SimulateArgs simulate;
	auto* s = app.add_subcommand("simulate", "Generate coincidence records as CSV");
	s->add_option("--events", simulate.events, "Number of events");
	s->add_option("--seed", simulate.seed, "Master seed");
	s->add_option("--model", simulate.model, "quantum | semiclassical");
	s->add_option("--workers", simulate.workers, "Worker threads (output does not depend on this)");
	s->add_option("--chunk-size", simulate.chunk_size, "Events per work unit");
	s->add_option("--config", simulate.config, "Config file (INI or JSON)");
	s->add_option("--out", simulate.out, "Records CSV path ('-' for stdout)");

	AnalyzeArgs analyze;
	auto* an = app.add_subcommand("analyze", "Histogram and fit timing differences");
	an->add_option("--in", analyze.in, "Records CSV");
	an->add_option("--in-spectrum", analyze.in_spectrum, "Spectrum CSV (binned least-squares fit)");
	an->add_option("--column", analyze.column, "Column to analyze")->check(CLI::IsMember({"dtau_ps", "dt_ps"}));
	an->add_option("--bin-width", analyze.bin_width, "Bin width in ps");
	an->add_option("--range-lo", analyze.range_lo, "Histogram lower edge in ps");
	an->add_option("--range-hi", analyze.range_hi, "Histogram upper edge in ps");
	an->add_option("--fit", analyze.fit, "all | none | double_exponential | lorentzian | gaussian");
	an->add_option("--fit-window", analyze.fit_window, "range: fit densities truncated to the histogram range; none");
	an->add_option("--out-spectrum", analyze.out_spectrum, "Spectrum CSV output");
	an->add_option("--out-fit", analyze.out_fit, "Fit JSON output (stdout if omitted)");

	PdfArgs pdf;
	auto* pd = app.add_subcommand("pdf", "Tabulate a closed-form distribution as CSV");
	pd->add_option("--dist", pdf.dist,
	               "figure | double_exponential | lorentzian | gaussian | coincidence | lorentzian_line | "
	               "relative_density | pal_rate | pal_marginal | conditional_second_photon | doppler")
	    ->required();
	pd->add_option("--from", pdf.from, "First abscissa");
	pd->add_option("--to", pdf.to, "Last abscissa");
	pd->add_option("--points", pdf.points, "Number of rows");
	pd->add_option("--gamma", pdf.gamma, "Rate/width parameter (default: decay rate in 1/ps)");
	pd->add_option("--dt", pdf.dt, "Time since injection in ps (relative_density)");
	pd->add_option("--x1", pdf.x1, "Detector distance in mm (pal_rate, pal_marginal)");
	pd->add_option("--x2", pdf.x2, "Second photon distance in mm (conditional_second_photon)");
	pd->add_option("--center", pdf.center, "Line center in keV (lorentzian_line)");
	pd->add_option("--width", pdf.width, "Line HWHM in keV (lorentzian_line)");
	pd->add_option("--sigma", pdf.sigma, "Doppler width in keV (doppler)");
	pd->add_option("--config", pdf.config, "Config file (INI or JSON)");
	pd->add_option("--out", pdf.out, "CSV output (stdout if omitted)");

	VerifyArgs verify;
	auto* v = app.add_subcommand("verify", "Run the numerical integral checks");
	v->add_option("--config", verify.config, "Config file (INI or JSON)");
	v->add_option("--out", verify.out, "JSON report output (stdout if omitted)");

	std::vector<std::string> storage(args.begin(), args.end());
	std::vector<char*> argv;
	for (auto& a : storage)
	{
		argv.push_back(a.data());
	}
	try
	{
		app.parse(static_cast<int>(argv.size()), argv.data());
	}
	catch (const CLI::CallForHelp&)
	{
		out << app.help();
		return kExitOk;
	}
	catch (const CLI::ParseError& e)
	{
		err << "error: " << e.what() << '\n';
		return kExitValidation;
	}

	try
	{
		if (c->parsed())
		{
			return cmd_constants(constants, out);
		}
		if (s->parsed())
		{
			return cmd_simulate(simulate, out);
		}
		if (an->parsed())
		{
			return cmd_analyze(analyze, out);
		}
		if (pd->parsed())
		{
			return cmd_pdf(pdf, out);
		}
		return cmd_verify(verify, out, err);
	}
	catch (const OracleFailure& e)
	{
		err << "verification failure: " << e.what() << '\n';
		return kExitVerification;
	}
	catch (const Error& e)
	{
		err << "error: " << e.what() << '\n';
		return kExitValidation;
	}
	catch (const std::exception& e)
	{
		err << "error: " << e.what() << '\n';
		return kExitValidation;
	}
}

int run(int argc, char** argv)
{
	std::vector<std::string> args(argv, argv + argc);
	return run(args, std::cout, std::cerr);
}

} // namespace pairtime::cli
