#include "wearauth/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "wearauth/error.hpp"

namespace wearauth {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else if (c != '\r') {
      current.push_back(c);
    }
  }
  fields.push_back(current);
  return fields;
}

double parse_double_field(const std::string& text, std::size_t line,
                          const std::string& column) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ParseError(line, "bad " + column + " value '" + text + "'");
  }
  return value;
}

long parse_int_field(const std::string& text, std::size_t line,
                     const std::string& column) {
  long value = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(line, "bad " + column + " value '" + text + "'");
  }
  return value;
}

}  // namespace

IngestResult ingest_csv(std::istream& source, const CsvSchema& schema) {
  std::string line;
  std::size_t line_no = 0;

  // Header (comment lines may precede it).
  std::vector<std::string> header;
  while (std::getline(source, line)) {
    ++line_no;
    if (!line.empty() && line[0] == '#') {
      continue;
    }
    header = split_fields(line);
    break;
  }
  if (header.empty()) {
    throw ParseError(line_no, "missing CSV header");
  }

  auto column_of = [&](const std::string& name) -> std::size_t {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw ParseError(line_no, "missing column '" + name + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t col_subject = column_of(schema.subject_id);
  const std::size_t col_time = column_of(schema.timestamp);
  const std::size_t col_hr = column_of(schema.heart_rate);
  const std::size_t col_cal = column_of(schema.calories);
  const std::size_t col_steps = column_of(schema.steps);
  const std::size_t col_met = column_of(schema.met);
  const std::size_t col_level = column_of(schema.activity_level);

  IngestResult result;
  std::map<std::string, std::vector<MinuteRecord>> by_subject;
  while (std::getline(source, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') {
      continue;
    }
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw ParseError(line_no, "expected " + std::to_string(header.size()) +
                                    " fields, got " +
                                    std::to_string(fields.size()));
    }

    MinuteRecord record;
    record.subject = fields[col_subject];
    if (record.subject.empty()) {
      throw ParseError(line_no, "empty subject id");
    }
    try {
      record.timestamp =
          parse_minute(fields[col_time], &result.truncated_timestamps);
    } catch (const DomainError& e) {
      throw ParseError(line_no, e.what());
    }
    if (const std::string& hr = fields[col_hr]; !hr.empty()) {
      const double value = parse_double_field(hr, line_no, "heart_rate");
      if (value <= 0) {
        throw ParseError(line_no, "heart_rate must be > 0, got '" + hr + "'");
      }
      record.heart_rate = value;
    }
    record.calories = parse_double_field(fields[col_cal], line_no, "calories");
    if (record.calories < 0) {
      throw ParseError(line_no, "calories must be >= 0");
    }
    const long steps = parse_int_field(fields[col_steps], line_no, "steps");
    if (steps < 0) {
      throw ParseError(line_no, "steps must be >= 0");
    }
    record.steps = static_cast<int>(steps);
    record.met = parse_double_field(fields[col_met], line_no, "met");
    if (record.met < 0) {
      throw ParseError(line_no, "met must be >= 0");
    }
    const long level = parse_int_field(fields[col_level], line_no,
                                       "activity_level");
    record.level = activity_level_from_code(static_cast<int>(level));

    by_subject[record.subject].push_back(std::move(record));
  }

  for (auto& [subject, records] : by_subject) {
    std::stable_sort(records.begin(), records.end(),
                     [](const MinuteRecord& a, const MinuteRecord& b) {
                       return a.timestamp < b.timestamp;
                     });
    for (std::size_t i = 1; i < records.size(); ++i) {
      if (records[i].timestamp == records[i - 1].timestamp) {
        throw ConflictError("duplicate timestamp " +
                            format_minute(records[i].timestamp) +
                            " for subject '" + subject + "'");
      }
    }
    result.streams.push_back(SubjectStream{subject, std::move(records)});
  }
  return result;
}

std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void write_cohort_csv(const std::vector<SubjectStream>& streams,
                      std::ostream& out) {
  out << "subject_id,timestamp,heart_rate,calories,steps,met,activity_level"
      << '\n';
  for (const SubjectStream& stream : streams) {
    for (const MinuteRecord& r : stream.records) {
      out << stream.subject << ',' << format_minute(r.timestamp) << ',';
      if (r.heart_rate) {
        out << format_double(*r.heart_rate);
      }
      out << ',' << format_double(r.calories) << ',' << r.steps << ','
          << format_double(r.met) << ',' << code(r.level) << '\n';
    }
  }
}

}  // namespace wearauth
