#pragma once

#include "pairtime/montecarlo.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pairtime::io {

inline constexpr std::string_view kRecordHeader =
    "event_id,t0_ps,tau1_ps,tau2_ps,t1_ps,t2_ps,dtau_ps,dt_ps,omega1_kev,omega2_kev,acol_mrad,detected";

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double value);

void write_record_header(std::ostream& out);
void write_records(std::ostream& out, std::span<const mc::CoincidenceRecord> records);

/// Streaming CSV writer used as a run() sink. Throws IoError when the stream
/// goes bad.
class RecordCsvWriter
{
public:
	explicit RecordCsvWriter(std::ostream& out);
	void write(std::span<const mc::CoincidenceRecord> records);

private:
	std::ostream& m_out;
};

/// Reads one numeric column of a records CSV. Rows whose `detected` flag is 0
/// are skipped when skip_undetected is true; NaN cells are always skipped.
std::vector<double> read_column(std::istream& in, std::string_view column, bool skip_undetected);

std::vector<double> read_column_file(const std::string& path, std::string_view column, bool skip_undetected);

} // namespace pairtime::io
