#include <doctest.h>

#include <random>
#include <set>

#include "wearauth/error.hpp"
#include "wearauth/windows.hpp"

using namespace wearauth;

namespace {

MinuteRecord record(Minute t, int level, bool worn = true) {
  MinuteRecord r;
  r.subject = "s1";
  r.timestamp = t;
  if (worn) {
    r.heart_rate = 70.0;
  }
  r.calories = 1.2;
  r.steps = level == 0 ? 0 : 40;
  r.met = 1.0 + level;
  r.level = activity_level_from_code(level);
  return r;
}

SubjectStream stream_of(std::vector<MinuteRecord> records) {
  return SubjectStream{"s1", std::move(records)};
}

}  // namespace

TEST_SUITE("windows") {

TEST_CASE("wear filter keeps only minutes with heart rate") {
  SubjectStream s = stream_of({record(0, 1), record(1, 1, false),
                               record(2, 1)});
  s.records[1].steps = 40;  // activity logged while off the wrist
  const SubjectStream filtered = filter_invalid_wear(s);
  REQUIRE(filtered.records.size() == 2);
  CHECK(filtered.records[0].timestamp == 0);
  CHECK(filtered.records[1].timestamp == 2);
}

TEST_CASE("wear filter is the identity on fully worn streams") {
  const SubjectStream s = stream_of({record(0, 0), record(1, 0)});
  CHECK(filter_invalid_wear(s).records.size() == 2);
}

TEST_CASE("wear filter is idempotent") {
  SubjectStream s = stream_of(
      {record(0, 1), record(1, 1, false), record(2, 1), record(3, 2, false)});
  const SubjectStream once = filter_invalid_wear(s);
  const SubjectStream twice = filter_invalid_wear(once);
  REQUIRE(once.records.size() == twice.records.size());
  for (std::size_t i = 0; i < once.records.size(); ++i) {
    CHECK(once.records[i].timestamp == twice.records[i].timestamp);
  }
}

TEST_CASE("12 consecutive minutes tile two windows, remainder dropped") {
  std::vector<MinuteRecord> records;
  for (Minute t = 1; t <= 12; ++t) {
    records.push_back(record(t, 1));
  }
  const auto windows = segment_windows(stream_of(std::move(records)));
  REQUIRE(windows.size() == 2);
  CHECK(windows[0].start == 1);
  CHECK(windows[1].start == 6);
}

TEST_CASE("windows anchor at the level change") {
  std::vector<MinuteRecord> records;
  for (Minute t = 1; t <= 3; ++t) {
    records.push_back(record(t, 0));
  }
  for (Minute t = 4; t <= 13; ++t) {
    records.push_back(record(t, 2));
  }
  const auto windows = segment_windows(stream_of(std::move(records)));
  REQUIRE(windows.size() == 2);
  CHECK(windows[0].start == 4);
  CHECK(windows[0].level == ActivityLevel::kFair);
  CHECK(windows[1].start == 9);
}

TEST_CASE("a missing minute splits the run") {
  std::vector<MinuteRecord> records;
  for (Minute t = 1; t <= 9; ++t) {
    if (t == 5) {
      continue;
    }
    records.push_back(record(t, 1));
  }
  CHECK(segment_windows(stream_of(std::move(records))).empty());
}

TEST_CASE("unfiltered streams are rejected") {
  const SubjectStream s = stream_of({record(0, 1, false)});
  CHECK_THROWS_AS(segment_windows(s), DomainError);
}

TEST_CASE("windows never overlap and span exactly five consecutive minutes") {
  std::mt19937_64 rng(7);
  std::vector<MinuteRecord> records;
  Minute t = 0;
  for (int run = 0; run < 60; ++run) {
    const int level = static_cast<int>(rng() % 4);
    const int length = 1 + static_cast<int>(rng() % 14);
    for (int i = 0; i < length; ++i) {
      records.push_back(record(t++, level));
    }
    if (rng() % 3 == 0) {
      t += 1 + static_cast<Minute>(rng() % 5);  // gap
    }
  }
  const auto windows = segment_windows(stream_of(std::move(records)));
  std::set<Minute> covered;
  for (const Window& w : windows) {
    for (std::size_t i = 0; i < kWindowMinutes; ++i) {
      CHECK(w.samples[i].timestamp == w.start + static_cast<Minute>(i));
      CHECK(w.samples[i].level == w.level);
      CHECK(w.samples[i].heart_rate.has_value());
      CHECK(covered.insert(w.samples[i].timestamp).second);
    }
  }
}

TEST_CASE("partition sends level 0 left, levels 1-3 right") {
  std::vector<MinuteRecord> sedentary;
  std::vector<MinuteRecord> high;
  for (Minute t = 0; t < 5; ++t) {
    sedentary.push_back(record(t, 0));
    high.push_back(record(100 + t, 3));
  }
  auto windows = segment_windows(stream_of(std::move(sedentary)));
  const auto more = segment_windows(stream_of(std::move(high)));
  windows.insert(windows.end(), more.begin(), more.end());

  const auto [sed, non] = partition_by_period(windows);
  CHECK(sed.size() == 1);
  CHECK(non.size() == 1);
  CHECK(sed[0].level == ActivityLevel::kSedentary);
  CHECK(non[0].level == ActivityLevel::kHigh);
  CHECK(sed.size() + non.size() == windows.size());
}

TEST_CASE("partition of nothing is two empty lists") {
  const auto [sed, non] = partition_by_period({});
  CHECK(sed.empty());
  CHECK(non.empty());
}

}  // TEST_SUITE
