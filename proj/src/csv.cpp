#include "opgt/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>

#include "opgt/error.hpp"

namespace opgt {
namespace {

constexpr char kTelemetryHeader[] = "t_j,lat,lon,alt,seq";
constexpr char kMeasurementsHeader[] =
    "t_i,m_ppm_m,status,signal_strength,lat,lon,alt";
constexpr char kTrackerHeader[] =
    "t,mode,pan_deg,tilt_deg,d_phi_deg,d_theta_deg,zoom";
constexpr char kTruthHeader[] = "t,east_m,north_m,up_m";
constexpr char kResultsHeader[] = "t_i,d_m,u_bar_ppm,plane_y_m,plane_z_m,status";
constexpr char kRejectsHeader[] =
    "t_i,m_ppm_m,status,signal_strength,lat,lon,alt,reason";

std::vector<std::string> splitLine(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string stripCr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

// days since 1970-01-01 for a civil date (Hinnant's algorithm)
long daysFromCivil(int y, int m, int d) {
  y -= m <= 2;
  const long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long>(doe) - 719468;
}

// strict subset of ISO-8601: YYYY-MM-DDThh:mm:ss[.fff...][Z]
double parseIso8601(const std::string& s, const std::string& context) {
  const auto fail = [&]() -> double {
    throw SchemaError(context + ": invalid ISO-8601 timestamp '" + s + "'");
  };
  if (s.size() < 19 || s[4] != '-' || s[7] != '-' || s[10] != 'T' || s[13] != ':' ||
      s[16] != ':') {
    return fail();
  }
  const auto num = [&](std::size_t pos, std::size_t len) {
    int value = 0;
    const auto* first = s.data() + pos;
    const auto [ptr, ec] = std::from_chars(first, first + len, value);
    if (ec != std::errc() || ptr != first + len) fail();
    return value;
  };
  const int year = num(0, 4), month = num(5, 2), day = num(8, 2);
  const int hour = num(11, 2), minute = num(14, 2), second = num(17, 2);
  double fraction = 0.0;
  std::size_t pos = 19;
  if (pos < s.size() && s[pos] == '.') {
    std::size_t end = pos + 1;
    while (end < s.size() && s[end] >= '0' && s[end] <= '9') ++end;
    if (end == pos + 1) fail();
    fraction = parse_double("0" + s.substr(pos, end - pos), context);
    pos = end;
  }
  if (pos < s.size()) {
    if (s[pos] != 'Z' || pos + 1 != s.size()) fail();
  }
  return static_cast<double>(daysFromCivil(year, month, day)) * 86400.0 +
         hour * 3600.0 + minute * 60.0 + second + fraction;
}

class Reader {
 public:
  Reader(std::istream& in, const char* expected_header, const char* file_kind)
      : in_(in), kind_(file_kind) {
    std::string header;
    if (!std::getline(in_, header)) {
      throw SchemaError(std::string(kind_) + ": missing header row");
    }
    header = stripCr(header);
    const std::vector<std::string> expected = splitLine(expected_header);
    const std::vector<std::string> got = splitLine(header);
    if (got.size() != expected.size()) {
      throw SchemaError(std::string(kind_) + ": header mismatch, expected '" +
                        expected_header + "', found '" + header + "'");
    }
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (got[i] == expected[i]) continue;
      // the time column may carry an _iso suffix to flag ISO-8601 values
      if (i == 0 && got[i] == expected[i] + "_iso") {
        iso_time_ = true;
        continue;
      }
      throw SchemaError(std::string(kind_) + ": header mismatch in column " +
                        std::to_string(i + 1) + ", expected '" + expected[i] +
                        "', found '" + got[i] + "'");
    }
    columns_ = expected.size();
  }

  bool next(std::vector<std::string>& fields) {
    std::string line;
    while (std::getline(in_, line)) {
      line = stripCr(line);
      if (line.empty()) continue;
      ++row_;
      fields = splitLine(line);
      if (fields.size() != columns_) {
        throw SchemaError(context() + ": expected " + std::to_string(columns_) +
                          " columns, found " + std::to_string(fields.size()));
      }
      return true;
    }
    return false;
  }

  double time(const std::string& field) const {
    return iso_time_ ? parseIso8601(field, context())
                     : parse_double(field, context() + " time column");
  }

  std::string context() const {
    return std::string(kind_) + " row " + std::to_string(row_);
  }

 private:
  std::istream& in_;
  const char* kind_;
  std::size_t columns_ = 0;
  bool iso_time_ = false;
  long row_ = 0;
};

long parseLong(const std::string& field, const std::string& context) {
  long value = 0;
  const auto* first = field.data();
  const auto [ptr, ec] = std::from_chars(first, first + field.size(), value);
  if (ec != std::errc() || ptr != first + field.size()) {
    throw SchemaError(context + ": invalid integer '" + field + "'");
  }
  return value;
}

TrackerMode modeFromName(const std::string& name, const std::string& context) {
  if (name == "VISUAL") return TrackerMode::Visual;
  if (name == "GNSS_FALLBACK") return TrackerMode::GnssFallback;
  if (name == "SEARCH") return TrackerMode::Search;
  throw SchemaError(context + ": unknown tracker mode '" + name + "'");
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

double parse_double(const std::string& field, const std::string& context) {
  double value = 0.0;
  const auto* first = field.data();
  const auto [ptr, ec] = std::from_chars(first, first + field.size(), value);
  if (ec != std::errc() || ptr != first + field.size()) {
    throw SchemaError(context + ": invalid number '" + field + "'");
  }
  return value;
}

void write_telemetry_csv(std::ostream& out, const std::vector<TelemetryRow>& rows) {
  out << kTelemetryHeader << '\n';
  for (const auto& r : rows) {
    out << format_double(r.t_s) << ',' << format_double(r.position.latitude_deg)
        << ',' << format_double(r.position.longitude_deg) << ','
        << format_double(r.position.altitude_m) << ',' << r.sequence << '\n';
  }
}

std::vector<TelemetryRow> read_telemetry_csv(std::istream& in) {
  Reader reader(in, kTelemetryHeader, "telemetry.csv");
  std::vector<TelemetryRow> rows;
  std::vector<std::string> f;
  while (reader.next(f)) {
    TelemetryRow r;
    r.t_s = reader.time(f[0]);
    r.position.latitude_deg = parse_double(f[1], reader.context() + " lat");
    r.position.longitude_deg = parse_double(f[2], reader.context() + " lon");
    r.position.altitude_m = parse_double(f[3], reader.context() + " alt");
    r.sequence = static_cast<std::uint32_t>(parseLong(f[4], reader.context() + " seq"));
    rows.push_back(r);
  }
  return rows;
}

void write_measurements_csv(std::ostream& out,
                            const std::vector<MeasurementRecord>& rows) {
  out << kMeasurementsHeader << '\n';
  for (const auto& r : rows) {
    out << format_double(r.t_s) << ',' << format_double(r.m_ppm_m) << ','
        << status_name(r.status) << ',' << format_double(r.signal_strength) << ','
        << format_double(r.tdlas_position.latitude_deg) << ','
        << format_double(r.tdlas_position.longitude_deg) << ','
        << format_double(r.tdlas_position.altitude_m) << '\n';
  }
}

std::vector<MeasurementRecord> read_measurements_csv(std::istream& in) {
  Reader reader(in, kMeasurementsHeader, "measurements.csv");
  std::vector<MeasurementRecord> rows;
  std::vector<std::string> f;
  while (reader.next(f)) {
    MeasurementRecord r;
    r.t_s = reader.time(f[0]);
    r.m_ppm_m = parse_double(f[1], reader.context() + " m_ppm_m");
    try {
      r.status = status_from_name(f[2]);
    } catch (const SchemaError&) {
      throw SchemaError(reader.context() + ": unknown status '" + f[2] + "'");
    }
    r.signal_strength = parse_double(f[3], reader.context() + " signal_strength");
    r.tdlas_position.latitude_deg = parse_double(f[4], reader.context() + " lat");
    r.tdlas_position.longitude_deg = parse_double(f[5], reader.context() + " lon");
    r.tdlas_position.altitude_m = parse_double(f[6], reader.context() + " alt");
    rows.push_back(r);
  }
  return rows;
}

void write_tracker_csv(std::ostream& out, const std::vector<TrackerRow>& rows) {
  out << kTrackerHeader << '\n';
  for (const auto& r : rows) {
    out << format_double(r.t_s) << ',' << tracker_mode_name(r.mode) << ','
        << format_double(r.pan_deg) << ',' << format_double(r.tilt_deg) << ','
        << format_double(r.d_phi_deg) << ',' << format_double(r.d_theta_deg) << ','
        << r.zoom << '\n';
  }
}

std::vector<TrackerRow> read_tracker_csv(std::istream& in) {
  Reader reader(in, kTrackerHeader, "tracker.csv");
  std::vector<TrackerRow> rows;
  std::vector<std::string> f;
  while (reader.next(f)) {
    TrackerRow r;
    r.t_s = reader.time(f[0]);
    r.mode = modeFromName(f[1], reader.context());
    r.pan_deg = parse_double(f[2], reader.context() + " pan_deg");
    r.tilt_deg = parse_double(f[3], reader.context() + " tilt_deg");
    r.d_phi_deg = parse_double(f[4], reader.context() + " d_phi_deg");
    r.d_theta_deg = parse_double(f[5], reader.context() + " d_theta_deg");
    r.zoom = static_cast<int>(parseLong(f[6], reader.context() + " zoom"));
    rows.push_back(r);
  }
  return rows;
}

void write_truth_csv(std::ostream& out, const std::vector<TruthRow>& rows) {
  out << kTruthHeader << '\n';
  for (const auto& r : rows) {
    out << format_double(r.t_s) << ',' << format_double(r.drone_enu.x()) << ','
        << format_double(r.drone_enu.y()) << ',' << format_double(r.drone_enu.z())
        << '\n';
  }
}

std::vector<TruthRow> read_truth_csv(std::istream& in) {
  Reader reader(in, kTruthHeader, "truth.csv");
  std::vector<TruthRow> rows;
  std::vector<std::string> f;
  while (reader.next(f)) {
    TruthRow r;
    r.t_s = reader.time(f[0]);
    r.drone_enu.x() = parse_double(f[1], reader.context() + " east_m");
    r.drone_enu.y() = parse_double(f[2], reader.context() + " north_m");
    r.drone_enu.z() = parse_double(f[3], reader.context() + " up_m");
    rows.push_back(r);
  }
  return rows;
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kResultsHeader << '\n';
  for (const auto& r : rows) {
    out << format_double(r.t_s) << ',' << format_double(r.d_m) << ','
        << format_double(r.u_bar_ppm) << ',' << format_double(r.plane_y_m) << ','
        << format_double(r.plane_z_m) << ',' << status_name(r.status) << '\n';
  }
}

std::vector<ResultRow> read_results_csv(std::istream& in) {
  Reader reader(in, kResultsHeader, "results.csv");
  std::vector<ResultRow> rows;
  std::vector<std::string> f;
  while (reader.next(f)) {
    ResultRow r;
    r.t_s = reader.time(f[0]);
    r.d_m = parse_double(f[1], reader.context() + " d_m");
    r.u_bar_ppm = parse_double(f[2], reader.context() + " u_bar_ppm");
    r.plane_y_m = parse_double(f[3], reader.context() + " plane_y_m");
    r.plane_z_m = parse_double(f[4], reader.context() + " plane_z_m");
    try {
      r.status = status_from_name(f[5]);
    } catch (const SchemaError&) {
      throw SchemaError(reader.context() + ": unknown status '" + f[5] + "'");
    }
    rows.push_back(r);
  }
  return rows;
}

void write_rejects_csv(std::ostream& out, const std::vector<RejectRow>& rows) {
  out << kRejectsHeader << '\n';
  for (const auto& r : rows) {
    const auto& m = r.record;
    out << format_double(m.t_s) << ',' << format_double(m.m_ppm_m) << ','
        << status_name(m.status) << ',' << format_double(m.signal_strength) << ','
        << format_double(m.tdlas_position.latitude_deg) << ','
        << format_double(m.tdlas_position.longitude_deg) << ','
        << format_double(m.tdlas_position.altitude_m) << ',' << r.reason << '\n';
  }
}

TelemetryLog telemetry_log_from_rows(const std::vector<TelemetryRow>& rows) {
  TelemetryLog log;
  log.samples.reserve(rows.size());
  for (const auto& r : rows) log.samples.push_back({r.t_s, r.position});
  return log;
}

}  // namespace opgt
