#include <doctest.h>

#include <random>
#include <sstream>

#include "wearauth/csv.hpp"
#include "wearauth/error.hpp"
#include "wearauth/synth.hpp"

using namespace wearauth;

namespace {

const char* kHeader =
    "subject_id,timestamp,heart_rate,calories,steps,met,activity_level\n";

IngestResult ingest(const std::string& body) {
  std::istringstream in(std::string(kHeader) + body);
  return ingest_csv(in);
}

}  // namespace

TEST_SUITE("csv") {

TEST_CASE("a plain row maps fields directly") {
  const IngestResult result = ingest("s1,2016-01-04T10:00Z,72,1.4,0,1.2,0\n");
  REQUIRE(result.streams.size() == 1);
  const MinuteRecord& r = result.streams[0].records.at(0);
  CHECK(r.subject == "s1");
  CHECK(r.timestamp == parse_minute("2016-01-04T10:00Z"));
  CHECK(r.heart_rate == 72.0);
  CHECK(r.calories == 1.4);
  CHECK(r.steps == 0);
  CHECK(r.met == 1.2);
  CHECK(r.level == ActivityLevel::kSedentary);
}

TEST_CASE("empty heart rate field means absent") {
  const IngestResult result = ingest("s1,2016-01-04T10:00Z,,1.4,40,1.2,1\n");
  CHECK(!result.streams[0].records[0].heart_rate.has_value());
}

TEST_CASE("duplicate subject+timestamp is a conflict") {
  CHECK_THROWS_AS(ingest("s1,2016-01-04T10:00Z,72,1.4,0,1.2,0\n"
                         "s1,2016-01-04T10:00Z,75,1.5,0,1.3,0\n"),
                  ConflictError);
  // Same timestamp for different subjects is fine.
  CHECK_NOTHROW(ingest("s1,2016-01-04T10:00Z,72,1.4,0,1.2,0\n"
                       "s2,2016-01-04T10:00Z,75,1.5,0,1.3,0\n"));
}

TEST_CASE("malformed rows report their line number") {
  try {
    ingest("s1,2016-01-04T10:00Z,72,1.4,0,1.2,0\n"
           "s1,2016-01-04T10:01Z,72,oops,0,1.2,0\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);  // header is line 1
  }
}

TEST_CASE("unknown activity code is rejected") {
  CHECK_THROWS_AS(ingest("s1,2016-01-04T10:00Z,72,1.4,0,1.2,7\n"),
                  DomainError);
}

TEST_CASE("negative and non-integer steps are rejected") {
  CHECK_THROWS_AS(ingest("s1,2016-01-04T10:00Z,72,1.4,-3,1.2,0\n"),
                  ParseError);
  CHECK_THROWS_AS(ingest("s1,2016-01-04T10:00Z,72,1.4,2.5,1.2,0\n"),
                  ParseError);
}

TEST_CASE("zero heart rate is rejected, field must be empty instead") {
  CHECK_THROWS_AS(ingest("s1,2016-01-04T10:00Z,0,1.4,0,1.2,0\n"), ParseError);
}

TEST_CASE("rows arrive unsorted, streams come out sorted") {
  const IngestResult result =
      ingest("s2,2016-01-04T10:05Z,70,1.1,0,1.0,0\n"
             "s1,2016-01-04T10:01Z,72,1.4,0,1.2,0\n"
             "s1,2016-01-04T10:00Z,71,1.3,0,1.1,0\n");
  REQUIRE(result.streams.size() == 2);
  CHECK(result.streams[0].subject == "s1");
  CHECK(result.streams[0].records[0].timestamp <
        result.streams[0].records[1].timestamp);
}

TEST_CASE("second truncation is counted") {
  const IngestResult result =
      ingest("s1,2016-01-04T10:00:30Z,72,1.4,0,1.2,0\n");
  CHECK(result.truncated_timestamps == 1);
}

TEST_CASE("comment lines are skipped") {
  std::istringstream in("# manifest: abc\n" + std::string(kHeader) +
                        "s1,2016-01-04T10:00Z,72,1.4,0,1.2,0\n");
  CHECK(ingest_csv(in).streams.size() == 1);
}

TEST_CASE("header is required") {
  std::istringstream in("");
  CHECK_THROWS_AS(ingest_csv(in), ParseError);
}

TEST_CASE("a custom schema maps foreign column names") {
  std::istringstream in(
      "user,when,hr,kcal,extra,count,metabolic,level\n"
      "u9,2016-01-04T10:00Z,72,1.4,x,12,1.2,2\n");
  CsvSchema schema;
  schema.subject_id = "user";
  schema.timestamp = "when";
  schema.heart_rate = "hr";
  schema.calories = "kcal";
  schema.steps = "count";
  schema.met = "metabolic";
  schema.activity_level = "level";
  const IngestResult result = ingest_csv(in, schema);
  REQUIRE(result.streams.size() == 1);
  const MinuteRecord& r = result.streams[0].records[0];
  CHECK(r.subject == "u9");
  CHECK(r.steps == 12);
  CHECK(r.level == ActivityLevel::kFair);
}

TEST_CASE("a missing mapped column is reported") {
  std::istringstream in("user,when\nu9,2016-01-04T10:00Z\n");
  CsvSchema schema;
  schema.subject_id = "user";
  CHECK_THROWS_AS(ingest_csv(in, schema), ParseError);
}

TEST_CASE("garbage rows raise typed errors, never crashes") {
  std::mt19937_64 rng(515);
  const std::string charset =
      "abcdefgh0123456789,:.TZ+- \t\"'\\|;";
  for (int trial = 0; trial < 500; ++trial) {
    std::string body;
    const int lines = 1 + static_cast<int>(rng() % 4);
    for (int l = 0; l < lines; ++l) {
      const std::size_t len = rng() % 60;
      for (std::size_t i = 0; i < len; ++i) {
        body.push_back(charset[rng() % charset.size()]);
      }
      body.push_back('\n');
    }
    std::istringstream in(std::string(kHeader) + body);
    try {
      ingest_csv(in);
    } catch (const Error&) {
      // any typed error is acceptable
    }
  }
}

TEST_CASE("export then ingest preserves every retained field bit-exactly") {
  CohortConfig cfg;
  cfg.n_subjects = 3;
  cfg.days = 1;
  cfg.seed = 99;
  const auto streams = generate_cohort(cfg);

  std::ostringstream out;
  export_csv(streams, out);
  std::istringstream in(out.str());
  const IngestResult round = ingest_csv(in);

  REQUIRE(round.streams.size() == streams.size());
  for (std::size_t s = 0; s < streams.size(); ++s) {
    CHECK(round.streams[s].subject == streams[s].subject);
    REQUIRE(round.streams[s].records.size() == streams[s].records.size());
    for (std::size_t i = 0; i < streams[s].records.size(); ++i) {
      const MinuteRecord& a = streams[s].records[i];
      const MinuteRecord& b = round.streams[s].records[i];
      CHECK(a.timestamp == b.timestamp);
      CHECK(a.heart_rate == b.heart_rate);
      CHECK(a.calories == b.calories);
      CHECK(a.steps == b.steps);
      CHECK(a.met == b.met);
      CHECK(a.level == b.level);
    }
  }
}

}  // TEST_SUITE
