#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "wearauth/types.hpp"

namespace wearauth {

/// Maps the canonical column roles to header names. Defaults match the
/// cohort CSV schema; override when ingesting foreign exports.
struct CsvSchema {
  std::string subject_id = "subject_id";
  std::string timestamp = "timestamp";
  std::string heart_rate = "heart_rate";
  std::string calories = "calories";
  std::string steps = "steps";
  std::string met = "met";
  std::string activity_level = "activity_level";
};

struct IngestResult {
  std::vector<SubjectStream> streams;  // sorted by subject id
  std::size_t truncated_timestamps = 0;
};

/// Reads minute records from CSV text. The header row is required; columns
/// may appear in any order and extra columns are ignored. Lines starting
/// with '#' are skipped. An empty heart_rate field means the minute is an
/// invalid-wear candidate.
///
/// Throws ParseError (with line number) on malformed rows, ConflictError on
/// duplicate (subject, timestamp) pairs, DomainError on unknown activity
/// codes.
IngestResult ingest_csv(std::istream& source, const CsvSchema& schema = {});

/// Writes streams back out in the ingest schema, subjects and records in
/// canonical order. Doubles are rendered with shortest round-trip
/// precision, so ingest_csv(write_cohort_csv(x)) == x on retained fields.
void write_cohort_csv(const std::vector<SubjectStream>& streams,
                      std::ostream& out);

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double value);

}  // namespace wearauth
