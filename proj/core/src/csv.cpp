#include "pidtf/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string_view>
#include <unordered_map>

#include "pidtf/errors.hpp"

namespace pidtf {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

bool parse_int64(std::string_view s, std::int64_t& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last && !s.empty();
}

bool parse_u32(std::string_view s, std::uint32_t& out) {
  std::int64_t v = 0;
  if (!parse_int64(s, v) || v < 0 || v > std::numeric_limits<std::uint32_t>::max()) return false;
  out = static_cast<std::uint32_t>(v);
  return true;
}

bool parse_double(std::string_view s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last && !s.empty();
}

bool parse_fixed_uint(std::string_view s, unsigned& out) {
  out = 0;
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    out = out * 10 + static_cast<unsigned>(c - '0');
  }
  return true;
}

// Days since 1970-01-01 for a proleptic Gregorian civil date.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? unsigned(-3) : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

// "YYYY-MM-DD" (or a plain integer day number) -> absolute day.
bool parse_day(std::string_view s, std::int64_t& day) {
  if (parse_int64(s, day)) return true;
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  unsigned y = 0, m = 0, d = 0;
  if (!parse_fixed_uint(s.substr(0, 4), y) || !parse_fixed_uint(s.substr(5, 2), m) ||
      !parse_fixed_uint(s.substr(8, 2), d)) {
    return false;
  }
  if (m < 1 || m > 12 || d < 1 || d > 31) return false;
  day = days_from_civil(y, m, d);
  return true;
}

// "HH:MM:SS" (or a plain integer) -> seconds since midnight.
bool parse_second_of_day(std::string_view s, std::uint32_t& sec) {
  std::int64_t v = 0;
  if (parse_int64(s, v)) {
    if (v < 0 || v >= 86400) return false;
    sec = static_cast<std::uint32_t>(v);
    return true;
  }
  if (s.size() != 8 || s[2] != ':' || s[5] != ':') return false;
  unsigned h = 0, m = 0, ss = 0;
  if (!parse_fixed_uint(s.substr(0, 2), h) || !parse_fixed_uint(s.substr(3, 2), m) ||
      !parse_fixed_uint(s.substr(6, 2), ss)) {
    return false;
  }
  if (h > 23 || m > 59 || ss > 59) return false;
  sec = h * 3600 + m * 60 + ss;
  return true;
}

// Combined timestamp: ISO-8601 datetime or integer epoch seconds (UTC).
bool parse_timestamp(std::string_view s, std::int64_t& day, std::uint32_t& sec) {
  if (std::int64_t epoch = 0; parse_int64(s, epoch)) {
    std::int64_t d = epoch / 86400;
    std::int64_t rem = epoch % 86400;
    if (rem < 0) {
      d -= 1;
      rem += 86400;
    }
    day = d;
    sec = static_cast<std::uint32_t>(rem);
    return true;
  }
  if (!s.empty() && (s.back() == 'Z' || s.back() == 'z')) s.remove_suffix(1);
  if (s.size() != 19 || (s[10] != 'T' && s[10] != ' ')) return false;
  return parse_day(s.substr(0, 10), day) && parse_second_of_day(s.substr(11), sec);
}

std::string civil_from_days(std::int64_t z) {
  // Inverse of days_from_civil.
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02u", static_cast<long long>(y + (m <= 2)), m, d);
  return buf;
}

std::string fmt_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct RawRow {
  std::int64_t day = 0;
  std::uint32_t sec = 0;
  std::string meter;
  double value = 0.0;
  std::size_t line = 0;
};

}  // namespace

void IngestSpec::validate() const {
  if (seconds_per_step == 0) throw InvalidArgument("seconds_per_step must be positive");
  std::vector<std::string_view> cols = {time_step_column, meter_column, value_column};
  if (!date_column.empty()) cols.push_back(date_column);
  for (std::size_t a = 0; a < cols.size(); ++a) {
    if (cols[a].empty()) throw InvalidArgument("column names must be nonempty");
    for (std::size_t b = a + 1; b < cols.size(); ++b) {
      if (cols[a] == cols[b]) {
        throw InvalidArgument("ingest columns must be distinct ('" + std::string(cols[a]) + "')");
      }
    }
  }
}

IngestResult ingest_csv(std::istream& in, const IngestSpec& spec) {
  spec.validate();

  std::string line;
  if (!std::getline(in, line)) throw EmptyTensor("input file is empty");
  const auto header = split_fields(line);

  const auto column_of = [&header](const std::string& name) {
    for (std::size_t n = 0; n < header.size(); ++n) {
      if (header[n] == name) return n;
    }
    throw UnknownColumn("column '" + name + "' not found in header");
  };

  const std::size_t time_col = column_of(spec.time_step_column);
  const std::size_t meter_col = column_of(spec.meter_column);
  const std::size_t value_col = column_of(spec.value_column);
  const bool separate_date = !spec.date_column.empty();
  const std::size_t date_col = separate_date ? column_of(spec.date_column) : 0;

  std::vector<RawRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    const std::size_t needed =
        std::max({time_col, meter_col, value_col, separate_date ? date_col : std::size_t{0}});
    if (fields.size() <= needed) {
      throw ParseError(line_no, "expected at least " + std::to_string(needed + 1) + " fields");
    }

    RawRow row;
    row.line = line_no;
    if (separate_date) {
      if (!parse_day(fields[date_col], row.day)) {
        throw ParseError(line_no, "bad date '" + std::string(fields[date_col]) + "'");
      }
      if (!parse_second_of_day(fields[time_col], row.sec)) {
        throw ParseError(line_no, "bad time of day '" + std::string(fields[time_col]) + "'");
      }
    } else if (!parse_timestamp(fields[time_col], row.day, row.sec)) {
      throw ParseError(line_no, "bad timestamp '" + std::string(fields[time_col]) + "'");
    }
    if (!parse_double(fields[value_col], row.value)) {
      throw ParseError(line_no, "bad value '" + std::string(fields[value_col]) + "'");
    }
    if (row.value < 0.0) {
      throw NegativeValue("row " + std::to_string(line_no) + ": negative reading " +
                          std::to_string(row.value));
    }
    row.meter = std::string(fields[meter_col]);
    if (row.meter.empty()) throw ParseError(line_no, "empty meter id");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw EmptyTensor("no data rows in input");

  std::int64_t origin_day = 0;
  if (spec.date_origin) {
    if (!parse_day(*spec.date_origin, origin_day)) {
      throw InvalidArgument("bad date_origin '" + *spec.date_origin + "'");
    }
  } else {
    origin_day = rows.front().day;
    for (const RawRow& row : rows) origin_day = std::min(origin_day, row.day);
  }

  // Dense meter indices in first-appearance order.
  std::unordered_map<std::string, std::uint32_t> meter_index;
  std::vector<std::string> meters;
  std::vector<Entry> entries;
  entries.reserve(rows.size());
  std::uint32_t max_k = 0;
  for (const RawRow& row : rows) {
    const std::int64_t day_offset = row.day - origin_day;
    if (day_offset < 0) {
      throw ParseError(row.line, "date precedes date_origin");
    }
    const auto [it, inserted] =
        meter_index.try_emplace(row.meter, static_cast<std::uint32_t>(meters.size()));
    if (inserted) meters.push_back(row.meter);

    Entry e;
    e.i = row.sec / spec.seconds_per_step;
    e.j = it->second;
    e.k = static_cast<std::uint32_t>(day_offset);
    e.value = row.value;
    max_k = std::max(max_k, e.k);
    entries.push_back(e);
  }

  Dims dims;
  dims.time_steps = (86400 + spec.seconds_per_step - 1) / spec.seconds_per_step;
  dims.meters = static_cast<std::uint32_t>(meters.size());
  dims.days = max_k + 1;

  return {SparseTensor::from_entries(dims, std::move(entries)), std::move(meters),
          civil_from_days(origin_day)};
}

IngestResult ingest_csv(const std::filesystem::path& path, const IngestSpec& spec) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
  return ingest_csv(in, spec);
}

void write_tensor_csv(const SparseTensor& tensor, std::ostream& out) {
  const Dims& d = tensor.dims();
  out << "# dims=" << d.time_steps << ',' << d.meters << ',' << d.days << '\n';
  out << "i,j,k,value\n";
  for (const Entry& e : tensor.entries()) {
    out << e.i << ',' << e.j << ',' << e.k << ',' << fmt_value(e.value) << '\n';
  }
}

void write_tensor_csv(const SparseTensor& tensor, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open '" + path.string() + "' for writing");
  write_tensor_csv(tensor, out);
}

SparseTensor read_tensor_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw EmptyTensor("tensor file is empty");
  const std::string_view first = trim(line);
  constexpr std::string_view kDimsPrefix = "# dims=";
  if (!first.starts_with(kDimsPrefix)) {
    throw ParseError(1, "expected '# dims=I,J,K' header");
  }
  const auto dim_fields = split_fields(first.substr(kDimsPrefix.size()));
  Dims dims;
  if (dim_fields.size() != 3 || !parse_u32(dim_fields[0], dims.time_steps) ||
      !parse_u32(dim_fields[1], dims.meters) || !parse_u32(dim_fields[2], dims.days)) {
    throw ParseError(1, "bad dims header");
  }

  if (!std::getline(in, line) || trim(line) != "i,j,k,value") {
    throw ParseError(2, "expected 'i,j,k,value' column header");
  }

  std::vector<Entry> entries;
  std::size_t line_no = 2;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    Entry e;
    if (fields.size() != 4 || !parse_u32(fields[0], e.i) || !parse_u32(fields[1], e.j) ||
        !parse_u32(fields[2], e.k) || !parse_double(fields[3], e.value)) {
      throw ParseError(line_no, "expected 'i,j,k,value'");
    }
    entries.push_back(e);
  }
  return SparseTensor::from_entries(dims, std::move(entries));
}

SparseTensor read_tensor_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
  return read_tensor_csv(in);
}

void write_meter_map_csv(std::span<const std::string> meters, std::ostream& out) {
  out << "j,meter_id\n";
  for (std::size_t j = 0; j < meters.size(); ++j) {
    out << j << ',' << meters[j] << '\n';
  }
}

std::vector<Cell> read_cells_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "i,j,k") {
    throw ParseError(1, "expected 'i,j,k' column header");
  }
  std::vector<Cell> cells;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    Cell c;
    if (fields.size() != 3 || !parse_u32(fields[0], c.i) || !parse_u32(fields[1], c.j) ||
        !parse_u32(fields[2], c.k)) {
      throw ParseError(line_no, "expected 'i,j,k'");
    }
    cells.push_back(c);
  }
  return cells;
}

std::vector<Cell> read_cells_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
  return read_cells_csv(in);
}

void write_imputed_csv(std::span<const ImputedCell> cells, std::ostream& out) {
  out << "i,j,k,value\n";
  for (const ImputedCell& c : cells) {
    out << c.i << ',' << c.j << ',' << c.k << ',' << fmt_value(c.value) << '\n';
  }
}

}  // namespace pidtf
