#include "pairtime/records_io.hpp"

#include "pairtime/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

namespace pairtime::io {

std::string format_double(double value)
{
	char buf[32];
	const auto res = std::to_chars(buf, buf + sizeof buf, value);
	return std::string(buf, res.ptr);
}

void write_record_header(std::ostream& out)
{
	out << kRecordHeader << '\n';
}

void write_records(std::ostream& out, std::span<const mc::CoincidenceRecord> records)
{
	std::string line;
	for (const auto& r : records)
	{
		line.clear();
		line += std::to_string(r.event_id);
		for (double v : {r.t0, r.tau1, r.tau2, r.t1, r.t2, r.dtau, r.dt, r.omega1, r.omega2, r.acol_mrad})
		{
			line += ',';
			line += format_double(v);
		}
		line += r.detected() ? ",1\n" : ",0\n";
		out << line;
	}
}

RecordCsvWriter::RecordCsvWriter(std::ostream& out) : m_out(out)
{
	write_record_header(m_out);
	if (!m_out)
	{
		throw IoError("failed to write record header");
	}
}

void RecordCsvWriter::write(std::span<const mc::CoincidenceRecord> records)
{
	write_records(m_out, records);
	if (!m_out)
	{
		throw IoError("failed to write records");
	}
}

namespace {

std::vector<std::string_view> split(std::string_view line)
{
	std::vector<std::string_view> cells;
	std::size_t start = 0;
	while (true)
	{
		const std::size_t comma = line.find(',', start);
		if (comma == std::string_view::npos)
		{
			cells.push_back(line.substr(start));
			return cells;
		}
		cells.push_back(line.substr(start, comma - start));
		start = comma + 1;
	}
}

double parse_cell(std::string_view cell, std::size_t line_no)
{
	double value = 0.0;
	const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
	if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size())
	{
		throw IoError("line " + std::to_string(line_no) + ": cannot parse '" + std::string(cell) + "'");
	}
	return value;
}

} // namespace

std::vector<double> read_column(std::istream& in, std::string_view column, bool skip_undetected)
{
	std::string line;
	if (!std::getline(in, line))
	{
		throw IoError("records file is empty");
	}
	if (!line.empty() && line.back() == '\r')
	{
		line.pop_back();
	}
	const auto header = split(line);
	std::size_t col = header.size();
	std::size_t detected_col = header.size();
	for (std::size_t i = 0; i < header.size(); ++i)
	{
		if (header[i] == column)
		{
			col = i;
		}
		if (header[i] == "detected")
		{
			detected_col = i;
		}
	}
	if (col == header.size())
	{
		throw IoError("column '" + std::string(column) + "' not found in header");
	}

	std::vector<double> values;
	std::size_t line_no = 1;
	while (std::getline(in, line))
	{
		++line_no;
		if (!line.empty() && line.back() == '\r')
		{
			line.pop_back();
		}
		if (line.empty())
		{
			continue;
		}
		const auto cells = split(line);
		if (cells.size() != header.size())
		{
			throw IoError("line " + std::to_string(line_no) + ": expected " +
			              std::to_string(header.size()) + " cells");
		}
		if (skip_undetected && detected_col < cells.size() && cells[detected_col] == "0")
		{
			continue;
		}
		const double v = parse_cell(cells[col], line_no);
		if (!std::isnan(v))
		{
			values.push_back(v);
		}
	}
	return values;
}

std::vector<double> read_column_file(const std::string& path, std::string_view column, bool skip_undetected)
{
	std::ifstream in(path);
	if (!in)
	{
		throw IoError("cannot open '" + path + "'");
	}
	return read_column(in, column, skip_undetected);
}

} // namespace pairtime::io
